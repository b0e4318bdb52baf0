//! Aperiodic and periodic correlation, evaluated exactly as [`CycloInt`]s.
//!
//! Shift convention: a non-negative shift `u` advances the first argument,
//! `rho(a, b; u) = Σ_k a[k+u]·conj(b[k])`.

use std::fmt::Write as _;

use crate::cyclo::CycloInt;
use crate::error::{Error, Result};
use crate::seq::{PhaseSequence, SequenceSet};

fn check_pair(a: &PhaseSequence, b: &PhaseSequence, u: isize) -> Result<()> {
    if a.q() != b.q() {
        return Err(Error::AlphabetMismatch(a.q(), b.q()));
    }
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let max = a.len() - 1;
    if u.unsigned_abs() > max {
        return Err(Error::ShiftOutOfRange { shift: u, max });
    }
    Ok(())
}

fn check_sets(a: &SequenceSet, b: &SequenceSet) -> Result<()> {
    if a.size() != b.size() {
        return Err(Error::ShapeMismatch(format!(
            "sets of size {} and {}",
            a.size(),
            b.size()
        )));
    }
    Ok(())
}

/// Unchecked aperiodic cross-correlation accumulated into `acc`.
#[inline]
fn accf_into(acc: &mut CycloInt, a: &[u32], b: &[u32], u: isize) {
    let l = a.len();
    if u >= 0 {
        let u = u as usize;
        for k in 0..l - u {
            acc.add_root(a[k + u] as i64 - b[k] as i64, 1);
        }
    } else {
        let u = u.unsigned_abs();
        for k in 0..l - u {
            acc.add_root(a[k] as i64 - b[k + u] as i64, 1);
        }
    }
}

/// Aperiodic cross-correlation ρ(s0, s1; u).
pub fn accf(s0: &PhaseSequence, s1: &PhaseSequence, u: isize) -> Result<CycloInt> {
    check_pair(s0, s1, u)?;
    let mut acc = CycloInt::zero(s0.q());
    accf_into(&mut acc, s0.phases(), s1.phases(), u);
    Ok(acc)
}

/// Aperiodic autocorrelation ρ(s; u).
pub fn aacf(s: &PhaseSequence, u: isize) -> Result<CycloInt> {
    accf(s, s, u)
}

/// Periodic cross-correlation φ(s0, s1; u) by direct cyclic summation.
pub fn pccf(s0: &PhaseSequence, s1: &PhaseSequence, u: isize) -> Result<CycloInt> {
    check_pair(s0, s1, u)?;
    let (a, b) = (s0.phases(), s1.phases());
    let l = a.len();
    let mut acc = CycloInt::zero(s0.q());
    if u >= 0 {
        let u = u as usize;
        for k in 0..l {
            acc.add_root(a[(k + u) % l] as i64 - b[k] as i64, 1);
        }
    } else {
        let u = u.unsigned_abs();
        for k in 0..l {
            acc.add_root(a[k] as i64 - b[(k + u) % l] as i64, 1);
        }
    }
    Ok(acc)
}

/// Periodic cross-correlation assembled from two aperiodic ones.
pub fn pccf_via_accf(s0: &PhaseSequence, s1: &PhaseSequence, u: isize) -> Result<CycloInt> {
    check_pair(s0, s1, u)?;
    let l = s0.len() as isize;
    match u {
        0 => accf(s0, s1, 0),
        u if u > 0 => {
            let mut v = accf(s0, s1, u)?;
            v.add_assign(&accf(s1, s0, l - u)?.conj());
            Ok(v)
        }
        u => {
            let mut v = accf(s1, s0, -u)?.conj();
            v.add_assign(&accf(s0, s1, l + u)?);
            Ok(v)
        }
    }
}

/// ρ(S0, S1; u) = Σ_n ρ(S0[n], S1[n]; u).
pub fn set_corr_sum(s0: &SequenceSet, s1: &SequenceSet, u: isize) -> Result<CycloInt> {
    check_sets(s0, s1)?;
    check_pair(s0.get(0), s1.get(0), u)?;
    let mut acc = CycloInt::zero(s0.q());
    for (a, b) in s0.members().iter().zip(s1.members()) {
        accf_into(&mut acc, a.phases(), b.phases(), u);
    }
    Ok(acc)
}

/// ρ̂(G0, G1; u) = Σ_n ρ(G0[n], G1[(n+1) mod N]; u).
pub fn cross_channel_sum(g0: &SequenceSet, g1: &SequenceSet, u: isize) -> Result<CycloInt> {
    check_sets(g0, g1)?;
    check_pair(g0.get(0), g1.get(0), u)?;
    let n = g0.size();
    let mut acc = CycloInt::zero(g0.q());
    for i in 0..n {
        accf_into(
            &mut acc,
            g0.get(i).phases(),
            g1.get((i + 1) % n).phases(),
            u,
        );
    }
    Ok(acc)
}

/// What to tabulate in a [`CorrelationProfile`].
#[derive(Clone, Copy, Debug)]
pub enum Pairing<'a> {
    Aperiodic(&'a PhaseSequence, &'a PhaseSequence),
    Periodic(&'a PhaseSequence, &'a PhaseSequence),
    SetSum(&'a SequenceSet, &'a SequenceSet),
    CrossChannel(&'a SequenceSet, &'a SequenceSet),
}

impl Pairing<'_> {
    fn len(&self) -> usize {
        match self {
            Pairing::Aperiodic(a, _) | Pairing::Periodic(a, _) => a.len(),
            Pairing::SetSum(a, _) | Pairing::CrossChannel(a, _) => a.seq_len(),
        }
    }

    /// Default shift range: −L+1..=L−1 for aperiodic pairings, 0..=L−1 for periodic.
    pub fn full_range(&self) -> (isize, isize) {
        let l = self.len() as isize;
        match self {
            Pairing::Periodic(..) => (0, l - 1),
            _ => (-(l - 1), l - 1),
        }
    }

    pub fn eval(&self, u: isize) -> Result<CycloInt> {
        match *self {
            Pairing::Aperiodic(a, b) => accf(a, b, u),
            Pairing::Periodic(a, b) => pccf(a, b, u),
            Pairing::SetSum(a, b) => set_corr_sum(a, b, u),
            Pairing::CrossChannel(a, b) => cross_channel_sum(a, b, u),
        }
    }
}

/// Correlation values over a contiguous shift range.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationProfile {
    first_shift: isize,
    values: Vec<CycloInt>,
}

impl CorrelationProfile {
    pub fn shifts(&self) -> impl Iterator<Item = isize> + '_ {
        (0..self.values.len()).map(move |i| self.first_shift + i as isize)
    }

    pub fn values(&self) -> &[CycloInt] {
        &self.values
    }

    pub fn at(&self, u: isize) -> Option<&CycloInt> {
        let i = u.checked_sub(self.first_shift)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i))
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(CycloInt::magnitude).collect()
    }

    /// Exact |value|² per shift (q ∈ {2, 4} only).
    pub fn norms_sq(&self) -> Option<Vec<i64>> {
        self.values.iter().map(CycloInt::norm_sq_exact).collect()
    }

    /// Shifts that carry a non-zero value.
    pub fn support(&self) -> Vec<isize> {
        self.shifts()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(u, _)| u)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,abs,is_zero\n");
        for (u, v) in self.shifts().zip(&self.values) {
            let _ = writeln!(out, "{u},{},{}", format_magnitude(v), v.is_zero());
        }
        out
    }
}

/// Prints integers exactly when the exact norm is a perfect square.
pub fn format_magnitude(v: &CycloInt) -> String {
    if let Some(n) = v.norm_sq_exact() {
        let r = (n as f64).sqrt().round() as i64;
        if r * r == n {
            return r.to_string();
        }
    }
    format!("{:.9}", v.magnitude())
}

pub fn profile(pairing: Pairing<'_>) -> Result<CorrelationProfile> {
    let (lo, hi) = pairing.full_range();
    profile_range(pairing, lo, hi)
}

pub fn profile_range(pairing: Pairing<'_>, lo: isize, hi: isize) -> Result<CorrelationProfile> {
    if lo > hi {
        return Err(Error::Config(format!("empty shift range {lo}..={hi}")));
    }
    let values = (lo..=hi)
        .map(|u| pairing.eval(u))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationProfile {
        first_shift: lo,
        values,
    })
}
