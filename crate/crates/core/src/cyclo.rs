//! Exact sums of q-th roots of unity.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::seq::root_of_unity;

/// Σ_j counts[j]·ξ_q^j with integer multiplicities.
///
/// Zero testing is exact: the value vanishes iff the count polynomial is
/// divisible by the q-th cyclotomic polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloInt {
    q: u32,
    counts: Vec<i64>,
}

impl CycloInt {
    pub fn zero(q: u32) -> Self {
        assert!(q >= 1, "q must be positive");
        Self {
            q,
            counts: vec![0; q as usize],
        }
    }

    pub fn from_counts(q: u32, counts: Vec<i64>) -> Self {
        assert_eq!(counts.len(), q as usize, "counts must have length q");
        Self { q, counts }
    }

    /// The integer n as n·ξ^0.
    pub fn integer(q: u32, n: i64) -> Self {
        let mut z = Self::zero(q);
        z.counts[0] = n;
        z
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Adds `mult`·ξ^phase (phase taken mod q).
    #[inline]
    pub fn add_root(&mut self, phase: i64, mult: i64) {
        let j = phase.rem_euclid(self.q as i64) as usize;
        self.counts[j] += mult;
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.q, other.q, "alphabet mismatch");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "alphabet mismatch");
        Self {
            q: self.q,
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        let q = self.q as usize;
        let mut counts = vec![0; q];
        for (j, &c) in self.counts.iter().enumerate() {
            counts[(q - j) % q] += c;
        }
        Self { q: self.q, counts }
    }

    /// Multiplies by ξ^phase.
    pub fn rotate(&self, phase: i64) -> Self {
        let q = self.q as i64;
        let mut counts = vec![0; self.q as usize];
        for (j, &c) in self.counts.iter().enumerate() {
            counts[(j as i64 + phase).rem_euclid(q) as usize] += c;
        }
        Self { q: self.q, counts }
    }

    pub fn is_zero(&self) -> bool {
        if self.counts.iter().all(|&c| c == 0) {
            return true;
        }
        let phi = cyclotomic(self.q);
        let deg = phi.len() - 1;
        let mut rem: Vec<i128> = self.counts.iter().map(|&c| c as i128).collect();
        for top in (deg..rem.len()).rev() {
            let c = rem[top];
            if c != 0 {
                for (j, &p) in phi.iter().enumerate() {
                    rem[top - deg + j] -= c * p as i128;
                }
            }
        }
        rem[..deg].iter().all(|&c| c == 0)
    }

    /// Exact test for equality with the integer n.
    pub fn equals_integer(&self, n: i64) -> bool {
        self.sub(&Self::integer(self.q, n)).is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| root_of_unity(self.q, j as u32) * c as f64)
            .sum()
    }

    /// |z|² as an exact integer when q ∈ {2, 4}.
    pub fn norm_sq_exact(&self) -> Option<i64> {
        match self.q {
            2 => {
                let re = self.counts[0] - self.counts[1];
                Some(re * re)
            }
            4 => {
                let re = self.counts[0] - self.counts[2];
                let im = self.counts[1] - self.counts[3];
                Some(re * re + im * im)
            }
            _ => None,
        }
    }

    /// |z|, computed from the exact norm when available. Exactly zero values
    /// always report 0.
    pub fn magnitude(&self) -> f64 {
        if let Some(n) = self.norm_sq_exact() {
            return (n as f64).sqrt();
        }
        if self.is_zero() {
            return 0.0;
        }
        self.to_complex().norm()
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_complex();
        write!(f, "{:.6}{:+.6}i", z.re, z.im)
    }
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the n-th cyclotomic polynomial.
pub fn cyclotomic(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_div(&num, &cyclotomic(d));
    }
    let p = Arc::new(num);
    cache().lock().unwrap().insert(n, Arc::clone(&p));
    p
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division was not exact");
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic(1), vec![-1, 1]);
        assert_eq!(*cyclotomic(2), vec![1, 1]);
        assert_eq!(*cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(*cyclotomic(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of magnitude 2
        assert!(cyclotomic(105).contains(&-2));
    }

    #[test]
    fn zero_tests() {
        // 1 + ξ_6^2 + ξ_6^4 = 0
        let mut z = CycloInt::zero(6);
        z.add_root(0, 1);
        z.add_root(2, 1);
        z.add_root(4, 1);
        assert!(z.is_zero());
        z.add_root(1, 1);
        assert!(!z.is_zero());
        // ξ_4 + ξ_4^3 = 0 but 2 ≠ 0
        let w = CycloInt::from_counts(4, vec![0, 1, 0, 1]);
        assert!(w.is_zero());
        assert!(CycloInt::integer(4, 2).equals_integer(2));
        assert!(!CycloInt::integer(4, 2).is_zero());
    }

    #[test]
    fn conj_and_norm() {
        let z = CycloInt::from_counts(4, vec![3, 1, 0, 0]);
        assert_eq!(z.conj().counts(), &[3, 0, 0, 1]);
        assert_eq!(z.norm_sq_exact(), Some(10));
        assert!((z.magnitude() - 10f64.sqrt()).abs() < 1e-12);
        let t = CycloInt::from_counts(8, vec![0, 0, 1, 0, 0, 0, 0, 0]);
        assert!((t.to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
