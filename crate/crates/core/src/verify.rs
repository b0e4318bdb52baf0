//! Classifiers for complementary-set families and ZCZ sequence sets.
//!
//! Every checker reports all violations it finds, not only the first one.
//! Windows (with L the sequence length and Z the zone width):
//! front `T1 = {1..Z}`, tail `T2 = {L-Z..L-1}`, all non-zero shifts `T = {1..L-1}`.

use serde::Serialize;

use crate::correlation::{cross_channel_sum, pccf, set_corr_sum};
use crate::cyclo::CycloInt;
use crate::error::{Error, Result};
use crate::seq::{Family, PhaseSequence, SequenceSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    ZczAuto,
    ZczCross,
    ZccsPeak,
    ZccsAuto,
    ZccsCross,
    CccSize,
    SzccsAuto,
    SzccsCross,
    C1Auto,
    C1Cross,
    C2,
    /// Training-matrix row energy differs between rows.
    Energy,
    /// Column activity differs from the number of RF chains.
    Sparsity,
    /// Periodic autocorrelation sidelobe of one antenna (ISI).
    Isi,
    /// Cross-correlation between antennas of the same block.
    IaiSameBlock,
    /// Cross-correlation with the antenna block directly before.
    IaiAdjacentBlock,
    /// Cross-correlation between the first and the last block.
    IaiWrap,
    /// Any other antenna pair.
    IaiOther,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub check: CheckId,
    /// Set (or sequence / antenna) indices involved, in argument order.
    pub indices: (usize, usize),
    pub shift: isize,
    pub magnitude: f64,
}

impl Violation {
    pub(crate) fn new(check: CheckId, indices: (usize, usize), shift: isize, value: &CycloInt) -> Self {
        Self {
            check,
            indices,
            shift,
            magnitude: value.magnitude(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn merge(mut self, other: Verdict) -> Self {
        self.violations.extend(other.violations);
        Self::from_violations(self.violations)
    }

    pub fn first(&self, check: CheckId) -> Option<&Violation> {
        self.violations.iter().find(|v| v.check == check)
    }
}

/// Shape of a family together with a zone width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub z: usize,
    pub q: u32,
}

impl FamilyParams {
    pub fn of(family: &Family, z: usize) -> Result<Self> {
        let l = family.seq_len();
        if z > l {
            return Err(Error::ZoneTooWide { z, l });
        }
        Ok(Self {
            m: family.num_sets(),
            n: family.set_size(),
            l,
            z,
            q: family.q(),
        })
    }

    pub fn in_front(&self, s: usize) -> bool {
        (1..=self.z).contains(&s)
    }

    pub fn in_tail(&self, s: usize) -> bool {
        s + self.z >= self.l && s < self.l
    }

    /// |u| ∈ (T1 ∪ T2) ∩ T
    pub fn in_auto_window(&self, s: usize) -> bool {
        s >= 1 && s < self.l && (self.in_front(s) || self.in_tail(s))
    }

    /// |u| ∈ T1 ∪ T2 ∪ {0}, restricted to realizable shifts.
    pub fn in_cross_window(&self, s: usize) -> bool {
        s < self.l && (s == 0 || self.in_front(s) || self.in_tail(s))
    }
}

fn both_signs(s: usize) -> impl Iterator<Item = isize> {
    let s = s as isize;
    std::iter::once(s).chain((s != 0).then_some(-s))
}

/// Periodic ZCZ sequence set check.
pub fn check_zcz_set(set: &SequenceSet, z: usize) -> Result<Verdict> {
    let l = set.seq_len();
    if z > l {
        return Err(Error::ZoneTooWide { z, l });
    }
    let zmax = z.min(l - 1);
    let mut violations = Vec::new();
    for (i, a) in set.members().iter().enumerate() {
        for (j, b) in set.members().iter().enumerate() {
            let start = usize::from(i == j);
            for s in start..=zmax {
                for u in both_signs(s) {
                    let v = pccf(a, b, u)?;
                    if !v.is_zero() {
                        let id = if i == j { CheckId::ZczAuto } else { CheckId::ZczCross };
                        violations.push(Violation::new(id, (i, j), u, &v));
                    }
                }
            }
        }
    }
    Ok(Verdict::from_violations(violations))
}

/// Tang–Fan–Matsufuji width bound for an (N, L, Z)-ZCZ set: ⌊L/N⌋−1, or
/// ⌊L/(2N)⌋ for binary sets. The binary value is only conjectured, see
/// [`zcz_bound_is_conjectured`].
pub fn tang_fan_matsufuji_bound(n: usize, l: usize, q: u32) -> i64 {
    if q == 2 {
        (l / (2 * n)) as i64
    } else {
        (l / n) as i64 - 1
    }
}

pub fn zcz_bound_is_conjectured(q: u32) -> bool {
    q == 2
}

/// Z-complementary code set: peak NL, same-set zero for 0<|u|<Z, cross zero for |u|<Z.
pub fn check_zccs(family: &Family, z: usize) -> Result<Verdict> {
    let p = FamilyParams::of(family, z)?;
    let peak = (p.n * p.l) as i64;
    let mut violations = Vec::new();
    for (a, ga) in family.sets().iter().enumerate() {
        for (b, gb) in family.sets().iter().enumerate() {
            for s in 0..z.min(p.l) {
                for u in both_signs(s) {
                    let v = set_corr_sum(ga, gb, u)?;
                    let (ok, id) = match (a == b, s) {
                        (true, 0) => (v.equals_integer(peak), CheckId::ZccsPeak),
                        (true, _) => (v.is_zero(), CheckId::ZccsAuto),
                        (false, _) => (v.is_zero(), CheckId::ZccsCross),
                    };
                    if !ok {
                        violations.push(Violation::new(id, (a, b), u, &v));
                    }
                }
            }
        }
    }
    Ok(Verdict::from_violations(violations))
}

/// Mutually orthogonal complementary set: a ZCCS with Z = L.
pub fn check_mocs(family: &Family) -> Result<Verdict> {
    check_zccs(family, family.seq_len())
}

/// Complete complementary code: an MOCS with M = N.
pub fn check_ccc(family: &Family) -> Result<Verdict> {
    let mut verdict = check_mocs(family)?;
    if family.num_sets() != family.set_size() {
        verdict.violations.push(Violation {
            check: CheckId::CccSize,
            indices: (family.num_sets(), family.set_size()),
            shift: 0,
            magnitude: 0.0,
        });
        verdict.passed = false;
    }
    Ok(verdict)
}

fn check_symmetric_zones(
    family: &Family,
    p: &FamilyParams,
    ids: (CheckId, CheckId),
) -> Result<Vec<Violation>> {
    let mut violations = Vec::new();
    for (a, ga) in family.sets().iter().enumerate() {
        for (b, gb) in family.sets().iter().enumerate() {
            for s in 0..p.l {
                let (inside, id) = if a == b {
                    (p.in_auto_window(s), ids.0)
                } else {
                    (p.in_cross_window(s), ids.1)
                };
                if !inside {
                    continue;
                }
                for u in both_signs(s) {
                    let v = set_corr_sum(ga, gb, u)?;
                    if !v.is_zero() {
                        violations.push(Violation::new(id, (a, b), u, &v));
                    }
                }
            }
        }
    }
    Ok(violations)
}

/// Symmetrical ZCCS: front and tail zones for set sums.
pub fn check_szccs(family: &Family, z: usize) -> Result<Verdict> {
    let p = FamilyParams::of(family, z)?;
    Ok(Verdict::from_violations(check_symmetric_zones(
        family,
        &p,
        (CheckId::SzccsAuto, CheckId::SzccsCross),
    )?))
}

/// Enhanced cross Z-complementary set: conditions C1 and C2.
///
/// C2 is enforced for every ordered pair of sets (including a set with
/// itself) and for both signs of the shift, since ρ̂ is not symmetric.
pub fn check_eczcs(family: &Family, z: usize) -> Result<Verdict> {
    let p = FamilyParams::of(family, z)?;
    let mut violations = check_symmetric_zones(family, &p, (CheckId::C1Auto, CheckId::C1Cross))?;
    for (a, ga) in family.sets().iter().enumerate() {
        for (b, gb) in family.sets().iter().enumerate() {
            for s in (0..p.l).filter(|&s| p.in_tail(s)) {
                for u in both_signs(s) {
                    let v = cross_channel_sum(ga, gb, u)?;
                    if !v.is_zero() {
                        violations.push(Violation::new(CheckId::C2, (a, b), u, &v));
                    }
                }
            }
        }
    }
    Ok(Verdict::from_violations(violations))
}

/// Largest Z for which [`check_eczcs`] passes, or `None` if even Z = 0 fails.
///
/// Evaluates every correlation once and then sweeps the nested windows.
pub fn measure_zcz_width(family: &Family) -> Option<usize> {
    let l = family.seq_len();
    let sets = family.sets();
    let mut auto_zero = vec![true; l];
    let mut cross_zero = vec![true; l];
    let mut hat_zero = vec![true; l];
    for (a, ga) in sets.iter().enumerate() {
        for (b, gb) in sets.iter().enumerate() {
            for s in 0..l {
                for u in both_signs(s) {
                    if a == b && s > 0 && auto_zero[s] {
                        auto_zero[s] = set_corr_sum(ga, gb, u).unwrap().is_zero();
                    }
                    if a != b && cross_zero[s] {
                        cross_zero[s] = set_corr_sum(ga, gb, u).unwrap().is_zero();
                    }
                    if hat_zero[s] {
                        hat_zero[s] = cross_channel_sum(ga, gb, u).unwrap().is_zero();
                    }
                }
            }
        }
    }
    let passes = |z: usize| {
        let p = FamilyParams {
            m: sets.len(),
            n: family.set_size(),
            l,
            z,
            q: family.q(),
        };
        (0..l).all(|s| {
            (!p.in_auto_window(s) || auto_zero[s])
                && (!p.in_cross_window(s) || cross_zero[s])
                && (!p.in_tail(s) || hat_zero[s])
        })
    };
    (0..=l).take_while(|&z| passes(z)).last()
}

/// Width bound for an (M, N, L, Z)-E-CZCS: ⌊NL/M⌋−1, or ⌊NL/(2M)⌋ for binary.
pub fn eczcs_bound(m: usize, n: usize, l: usize, q: u32) -> i64 {
    if q == 2 {
        ((n * l) / (2 * m)) as i64
    } else {
        ((n * l) / m) as i64 - 1
    }
}

/// Optimal means the bound is met with equality (no flooring) and the family
/// actually is an E-CZCS of width Z.
pub fn is_optimal(family: &Family, z: usize) -> Result<bool> {
    let (m, nl) = (family.num_sets(), family.set_size() * family.seq_len());
    let meets = if family.q() == 2 {
        nl % (2 * m) == 0 && z == nl / (2 * m)
    } else {
        nl % m == 0 && nl / m >= 1 && z == nl / m - 1
    };
    Ok(meets && check_eczcs(family, z)?.passed)
}

/// Concatenates the members of each set: d_m = g_0^m ‖ g_1^m ‖ … ‖ g_{N−1}^m.
pub fn flatten_to_zcz(family: &Family) -> SequenceSet {
    let members = family
        .sets()
        .iter()
        .map(|set| {
            let phases: Vec<u32> = set
                .members()
                .iter()
                .flat_map(|s| s.phases().iter().copied())
                .collect();
            PhaseSequence::new(family.q(), phases).expect("members share q")
        })
        .collect();
    SequenceSet::new(members).expect("sets share shape")
}
