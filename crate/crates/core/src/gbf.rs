//! Generalized Boolean functions and the constructions built on them.
//!
//! Variables are 1-based: `x_1 … x_m`. The integer `i = Σ i_k 2^(k-1)` maps
//! to the assignment `x_k = i_k`, so `x_1` is the least significant bit.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{check_alphabet, Family, PhaseSequence};

/// Largest supported number of variables (sequence length 2^20).
pub const MAX_VARIABLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub vars: Vec<usize>,
    pub coeff: u32,
}

/// f: Z_2^m → Z_q as a list of monomials with coefficients in Z_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gbf {
    m: usize,
    q: u32,
    terms: Vec<Term>,
}

impl Gbf {
    pub fn new(m: usize, q: u32) -> Result<Self> {
        check_alphabet(q)?;
        if m > MAX_VARIABLES {
            return Err(Error::Config(format!("m={m} exceeds the cap of {MAX_VARIABLES}")));
        }
        Ok(Self { m, q, terms: Vec::new() })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Adds `coeff · Π x_v`. Like monomials are merged (x² = x), zero
    /// coefficients dropped; an empty `vars` is the constant term.
    pub fn add_term(&mut self, vars: &[usize], coeff: i64) -> Result<()> {
        if let Some(&bad) = vars.iter().find(|&&v| v == 0 || v > self.m) {
            return Err(Error::InvalidPartition(format!(
                "variable x{bad} outside x1..x{}",
                self.m
            )));
        }
        let key: BTreeSet<usize> = vars.iter().copied().collect();
        let add = coeff.rem_euclid(self.q as i64) as u32;
        if let Some(t) = self
            .terms
            .iter_mut()
            .find(|t| t.vars.iter().copied().collect::<BTreeSet<_>>() == key)
        {
            t.coeff = (t.coeff + add) % self.q;
        } else {
            let mut seen = BTreeSet::new();
            let vars = vars.iter().copied().filter(|v| seen.insert(*v)).collect();
            self.terms.push(Term { vars, coeff: add });
        }
        self.terms.retain(|t| t.coeff != 0);
        Ok(())
    }

    pub fn evaluate(&self, i: usize) -> Result<u32> {
        if i >> self.m != 0 {
            return Err(Error::ShiftOutOfRange {
                shift: i as isize,
                max: (1usize << self.m) - 1,
            });
        }
        Ok(self.eval_unchecked(i))
    }

    fn eval_unchecked(&self, i: usize) -> u32 {
        let mut acc = 0u64;
        for t in &self.terms {
            if t.vars.iter().all(|&v| (i >> (v - 1)) & 1 == 1) {
                acc += t.coeff as u64;
            }
        }
        (acc % self.q as u64) as u32
    }

    /// The length-2^m phase sequence (f(0), f(1), …).
    pub fn sequence(&self) -> PhaseSequence {
        let phases = (0..1usize << self.m).map(|i| self.eval_unchecked(i)).collect();
        PhaseSequence::new(self.q, phases).expect("alphabet checked at construction")
    }
}

impl fmt::Display for Gbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (j, t) in self.terms.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            if t.coeff != 1 || t.vars.is_empty() {
                write!(f, "{}", t.coeff)?;
            }
            for v in &t.vars {
                write!(f, "x{v}")?;
            }
        }
        Ok(())
    }
}

pub fn evaluate_gbf(f: &Gbf, i: usize) -> Result<u32> {
    f.evaluate(i)
}

pub fn gbf_sequence(f: &Gbf) -> PhaseSequence {
    f.sequence()
}

/// Ordered partition of {1..m} into paths: `blocks[α] = (π_α(1), …, π_α(m_α))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl PartitionSpec {
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if m == 0 || m > MAX_VARIABLES {
            return Err(Error::InvalidPartition(format!("m={m} outside 1..={MAX_VARIABLES}")));
        }
        if blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        let mut seen = vec![false; m + 1];
        for &x in blocks.iter().flatten() {
            if x == 0 || x > m {
                return Err(Error::InvalidPartition(format!("index {x} outside 1..={m}")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPartition(format!("index {x} used twice")));
            }
        }
        if let Some(missing) = (1..=m).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!("index {missing} not covered")));
        }
        Ok(Self { m, blocks })
    }

    /// Builds the paths from unordered parts `U_α` and tuples `π_α`.
    pub fn from_parts(m: usize, parts: &[Vec<usize>], pi: &[Vec<usize>]) -> Result<Self> {
        if parts.len() != pi.len() {
            return Err(Error::InvalidPartition(format!(
                "{} parts but {} bijections",
                parts.len(),
                pi.len()
            )));
        }
        for (a, (u, p)) in parts.iter().zip(pi).enumerate() {
            let u: BTreeSet<_> = u.iter().collect();
            let image: BTreeSet<_> = p.iter().collect();
            if u != image || p.len() != image.len() {
                return Err(Error::InvalidPartition(format!(
                    "pi_{} is not a bijection onto U_{}",
                    a + 1,
                    a + 1
                )));
            }
        }
        Self::new(m, pi.to_vec())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// π_α(1) for 1-based α.
    pub fn first(&self, alpha: usize) -> usize {
        self.blocks[alpha - 1][0]
    }

    /// π_α(m_α) for 1-based α.
    pub fn last(&self, alpha: usize) -> usize {
        *self.blocks[alpha - 1].last().unwrap()
    }

    /// Checks `v ≤ k` and, when v < k, π_{v+γ}(1) = m−γ+1 for γ = 1..k−v.
    pub fn check_theorem3(&self, v: usize) -> Result<()> {
        let k = self.k();
        if v > k {
            return Err(Error::Constraint(format!("v={v} exceeds k={k}")));
        }
        for gamma in 1..=k - v {
            let want = self.m - gamma + 1;
            if self.first(v + gamma) != want {
                return Err(Error::Constraint(format!(
                    "pi_{}(1) must be {want}, got {}",
                    v + gamma,
                    self.first(v + gamma)
                )));
            }
        }
        Ok(())
    }
}

fn check_eta(m: usize, eta: &[u32]) -> Result<()> {
    if eta.len() != m + 1 {
        return Err(Error::Config(format!(
            "eta must have m+1 = {} entries (eta_0..eta_m), got {}",
            m + 1,
            eta.len()
        )));
    }
    Ok(())
}

/// Quadratic path form plus the affine part `Σ η_i x_i + η_0`.
pub fn build_theorem3_f(p: &PartitionSpec, q: u32, eta: &[u32]) -> Result<Gbf> {
    check_eta(p.m, eta)?;
    let mut f = Gbf::new(p.m, q)?;
    let half = (q / 2) as i64;
    for block in &p.blocks {
        for w in block.windows(2) {
            f.add_term(&[w[0], w[1]], half)?;
        }
    }
    for (i, &e) in eta.iter().enumerate().skip(1) {
        f.add_term(&[i], e as i64)?;
    }
    f.add_term(&[], eta[0] as i64)?;
    Ok(f)
}

fn bit(x: usize, k: usize) -> u32 {
    ((x >> k) & 1) as u32
}

/// 2^k sets of 2^v sequences of length 2^m; an E-CZCS of width 2^(π_1(1)−1)
/// whenever v ≥ 1.
///
/// Bits of the set index p and the member index n are read LSB first,
/// `p = Σ p_α 2^(α−1)`, so `n_{v−α+1}` pairs the most significant bit of n
/// with the first path.
pub fn theorem3_construct(p: &PartitionSpec, q: u32, v: usize, eta: &[u32]) -> Result<Family> {
    p.check_theorem3(v)?;
    let f = build_theorem3_f(p, q, eta)?;
    let base = f.sequence();
    let k = p.k();
    let half = q / 2;
    let mut sets = Vec::with_capacity(1 << k);
    for set_idx in 0..1usize << k {
        let mut members = Vec::with_capacity(1 << v);
        for n in 0..1usize << v {
            let phases = base
                .phases()
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    let mut extra = 0;
                    for alpha in 1..=v {
                        extra += bit(n, v - alpha) * bit(i, p.first(alpha) - 1);
                    }
                    for alpha in 1..=k {
                        extra += bit(set_idx, alpha - 1) * bit(i, p.last(alpha) - 1);
                    }
                    (b + half * extra) % q
                })
                .collect();
            members.push(PhaseSequence::new(q, phases)?);
        }
        sets.push(members);
    }
    Family::from_members(sets)
}

/// Complete complementary code with 2^k sets (indexed by ν) of 2^k members
/// (indexed by κ), each of length 2^m.
pub fn lemma2_ccc(p: &PartitionSpec, q: u32, eta: &[u32]) -> Result<Family> {
    let f = build_theorem3_f(p, q, eta)?;
    let base = f.sequence();
    let k = p.k();
    let half = q / 2;
    let sets = (0..1usize << k)
        .map(|nu| {
            (0..1usize << k)
                .map(|kappa| {
                    let phases = base
                        .phases()
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| {
                            let extra: u32 = (1..=k)
                                .map(|a| {
                                    bit(kappa, a - 1) * bit(i, p.first(a) - 1)
                                        + bit(nu, a - 1) * bit(i, p.last(a) - 1)
                                })
                                .sum();
                            (b + half * extra) % q
                        })
                        .collect();
                    PhaseSequence::new(q, phases)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Family::from_members(sets)
}

/// Canonical partition with π_1(1) = m−k+v, giving Z = 2^(m−k+v−1).
///
/// Layout: path 1 is (m−k+v, v, v+1, …, m−k+v−1); paths 2..v are the
/// singletons 1..v−1; paths v+1..k are the singletons m, m−1, ….
pub fn optimal_theorem3_params(m: usize, k: usize, v: usize) -> Result<PartitionSpec> {
    if k == 0 || k > m {
        return Err(Error::Constraint(format!("need 1 ≤ k ≤ m, got k={k}, m={m}")));
    }
    if v == 0 || v > k {
        return Err(Error::Constraint(format!("need 1 ≤ v ≤ k, got v={v}, k={k}")));
    }
    let head = m - k + v;
    let mut blocks = vec![std::iter::once(head).chain(v..head).collect::<Vec<_>>()];
    blocks.extend((1..v).map(|x| vec![x]));
    blocks.extend((1..=k - v).map(|gamma| vec![m - gamma + 1]));
    let p = PartitionSpec::new(m, blocks)?;
    p.check_theorem3(v)?;
    Ok(p)
}

/// Uniformly shuffled partition of {1..m} into k paths that satisfies the
/// trailing-path rule for `v` (paths v+1..k start at m, m−1, …).
pub fn sample_partition(m: usize, k: usize, v: usize, rng: &mut impl Rng) -> Result<PartitionSpec> {
    if k == 0 || k > m || v > k {
        return Err(Error::Constraint(format!("need 1 ≤ k ≤ m and v ≤ k, got m={m}, k={k}, v={v}")));
    }
    let heads: Vec<usize> = (1..=k - v).map(|g| m - g + 1).collect();
    let mut rest: Vec<usize> = (1..=m - (k - v)).collect();
    rest.shuffle(rng);
    // the first v paths need at least one element each
    let free = rest.len() - v;
    let mut sizes = vec![0usize; k];
    for _ in 0..free {
        sizes[rng.random_range(0..k)] += 1;
    }
    let mut it = rest.into_iter();
    let mut blocks = Vec::with_capacity(k);
    for (a, &extra) in sizes.iter().enumerate() {
        let mut block = if a < v { vec![it.next().unwrap()] } else { vec![heads[a - v]] };
        block.extend(it.by_ref().take(extra));
        blocks.push(block);
    }
    let p = PartitionSpec::new(m, blocks)?;
    p.check_theorem3(v)?;
    Ok(p)
}

/// Every ordered partition of {1..m} into k paths (all bijections included).
pub fn all_partitions(m: usize, k: usize) -> Vec<PartitionSpec> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (1..=m).collect();
    permutations(&mut perm, 0, &mut |p| {
        // choose k−1 cut points among the m−1 gaps
        for cuts in combinations(m - 1, k.saturating_sub(1)) {
            let mut blocks = Vec::with_capacity(k);
            let mut start = 0;
            for &c in cuts.iter().chain(std::iter::once(&(m - 1))) {
                blocks.push(p[start..=c].to_vec());
                start = c + 1;
            }
            out.push(PartitionSpec { m, blocks });
        }
    });
    out
}

fn permutations(v: &mut Vec<usize>, i: usize, visit: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        visit(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v, i + 1, visit);
        v.swap(i, j);
    }
}

/// All r-subsets of {0..n−1} in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < r - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// JSON construction spec: `{m, q, k, v, U, pi, eta}`. `eta` lists
/// η_0..η_m and defaults to all zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub m: usize,
    pub q: u32,
    pub k: usize,
    #[serde(default)]
    pub v: usize,
    #[serde(rename = "U")]
    pub parts: Vec<Vec<usize>>,
    pub pi: Vec<Vec<usize>>,
    #[serde(default)]
    pub eta: Vec<u32>,
}

impl ConstructionSpec {
    pub fn partition(&self) -> Result<PartitionSpec> {
        let p = PartitionSpec::from_parts(self.m, &self.parts, &self.pi)?;
        if p.k() != self.k {
            return Err(Error::InvalidPartition(format!(
                "k={} but {} parts given",
                self.k,
                p.k()
            )));
        }
        Ok(p)
    }

    pub fn eta(&self) -> Vec<u32> {
        if self.eta.is_empty() {
            vec![0; self.m + 1]
        } else {
            self.eta.clone()
        }
    }

    pub fn theorem3(&self) -> Result<Family> {
        theorem3_construct(&self.partition()?, self.q, self.v, &self.eta())
    }

    pub fn lemma2(&self) -> Result<Family> {
        lemma2_ccc(&self.partition()?, self.q, &self.eta())
    }

    /// Zone width 2^(π_1(1)−1) promised by the construction.
    pub fn zone_width(&self) -> Result<usize> {
        Ok(1 << (self.partition()?.first(1) - 1))
    }
}

pub const PRESETS: &[&str] = &["example3", "table5"];

/// Named construction specs.
///
/// `example3`: m=5, k=2, v=1, π_1=(4,1,2), π_2=(5,3), η=0.
/// `table5`: the same paths with η_2 = η_5 = 1, which is the affine offset
/// under which the construction yields the published (4,2,32,8) table.
pub fn preset(name: &str) -> Result<ConstructionSpec> {
    let base = ConstructionSpec {
        m: 5,
        q: 2,
        k: 2,
        v: 1,
        parts: vec![vec![1, 2, 4], vec![3, 5]],
        pi: vec![vec![4, 1, 2], vec![5, 3]],
        eta: vec![0; 6],
    };
    match name {
        "example3" => Ok(base),
        "table5" => Ok(ConstructionSpec {
            eta: vec![0, 0, 1, 0, 0, 1],
            ..base
        }),
        other => Err(Error::Unknown(other.to_string())),
    }
}
