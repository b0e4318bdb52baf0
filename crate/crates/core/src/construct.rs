//! Pairing construction of E-CZCS from ZCCS / MOCS / CCC seeds, and the
//! built-in seed library.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gbf::{lemma2_ccc, PartitionSpec};
use crate::seq::{Family, PhaseSequence};
use crate::verify::{check_ccc, check_eczcs, check_mocs, check_zccs, Verdict};

/// Environment variable pointing at a directory that replaces the embedded
/// fixture files.
pub const FIXTURES_ENV: &str = "ECZCS_FIXTURES";

const EMBEDDED: &[(&str, &str, &str)] = &[
    ("table3", "table3.txt", include_str!("../fixtures/table3.txt")),
    ("table4", "table4.txt", include_str!("../fixtures/table4.txt")),
    ("table5", "table5.txt", include_str!("../fixtures/table5.txt")),
];

pub fn fixture_ids() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(id, _, _)| *id)
}

/// Raw text of a fixture, read from `$ECZCS_FIXTURES/<file>` when the
/// variable is set, otherwise the copy compiled into the library.
pub fn fixture_text(id: &str) -> Result<String> {
    let (_, file, text) = EMBEDDED
        .iter()
        .find(|(name, _, _)| *name == id)
        .ok_or_else(|| Error::Unknown(id.to_string()))?;
    match std::env::var_os(FIXTURES_ENV) {
        Some(dir) => Ok(std::fs::read_to_string(PathBuf::from(dir).join(file))?),
        None => Ok(text.to_string()),
    }
}

/// Binary fixture parsed into a family.
pub fn fixture(id: &str) -> Result<Family> {
    Family::parse_text(&fixture_text(id)?, 2)
}

/// Reads a family from a JSON (`{q, M, N, L, sets}`) or text file.
/// `q` applies to the text format only.
pub fn read_family(path: &Path, q: u32) -> Result<Family> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        Family::parse_text(&text, q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum SeedClass {
    Zccs { z: usize },
    Mocs,
    Ccc,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedLibraryEntry {
    pub id: String,
    pub family: Family,
    pub class: SeedClass,
    pub note: String,
}

impl SeedLibraryEntry {
    /// Declared (M, N, L, Z); Z = L for MOCS and CCC seeds.
    pub fn params(&self) -> (usize, usize, usize, usize) {
        let f = &self.family;
        let z = match self.class {
            SeedClass::Zccs { z } => z,
            SeedClass::Mocs | SeedClass::Ccc => f.seq_len(),
        };
        (f.num_sets(), f.set_size(), f.seq_len(), z)
    }

    pub fn verify(&self) -> Result<Verdict> {
        match self.class {
            SeedClass::Zccs { z } => check_zccs(&self.family, z),
            SeedClass::Mocs => check_mocs(&self.family),
            SeedClass::Ccc => check_ccc(&self.family),
        }
    }
}

/// Golay pair of length 2^j by repeated (a‖b, a‖−b) doubling from (+, +).
pub fn golay_pair(j: u32) -> (PhaseSequence, PhaseSequence) {
    let mut a = PhaseSequence::new(2, vec![0]).unwrap();
    let mut b = a.clone();
    for _ in 0..j {
        let na = a.concat(&b).unwrap();
        b = a.concat(&b.negate()).unwrap();
        a = na;
    }
    (a, b)
}

/// Two-set CCC {(a, b), (rev b, −rev a)} from a binary Golay pair.
pub fn golay_ccc(a: &PhaseSequence, b: &PhaseSequence) -> Result<Family> {
    let rev = |s: &PhaseSequence| {
        let mut p = s.phases().to_vec();
        p.reverse();
        PhaseSequence::new(s.q(), p)
    };
    Family::from_members(vec![
        vec![a.clone(), b.clone()],
        vec![rev(b)?, rev(a)?.negate()],
    ])
}

fn ccc_entry(m: usize, k: usize) -> Result<SeedLibraryEntry> {
    // one long path followed by singletons
    let mut blocks = vec![(1..=m - k + 1).collect::<Vec<_>>()];
    blocks.extend((m - k + 2..=m).map(|x| vec![x]));
    let family = lemma2_ccc(&PartitionSpec::new(m, blocks)?, 2, &vec![0; m + 1])?;
    Ok(SeedLibraryEntry {
        id: format!("ccc-{}x{}", 1 << k, 1 << m),
        family,
        class: SeedClass::Ccc,
        note: format!("binary ({}, {}) CCC from quadratic Boolean functions", 1 << k, 1 << m),
    })
}

/// Every built-in seed, re-verified against its declared class.
pub fn seed_catalog() -> Result<Vec<SeedLibraryEntry>> {
    let mut entries = vec![SeedLibraryEntry {
        id: "table3".into(),
        family: fixture("table3")?,
        class: SeedClass::Zccs { z: 10 },
        note: "binary (2,2,12,10)-ZCCS".into(),
    }];
    for (m, k) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)] {
        entries.push(ccc_entry(m, k)?);
    }
    for j in 1..=4 {
        let (a, b) = golay_pair(j);
        entries.push(SeedLibraryEntry {
            id: format!("golay-ccc-{}", 1 << j),
            family: golay_ccc(&a, &b)?,
            class: SeedClass::Ccc,
            note: format!("(2, {}) CCC from a doubled Golay pair", 1 << j),
        });
    }
    let a = PhaseSequence::parse_binary("++-+-+--++")?;
    let b = PhaseSequence::parse_binary("++-+++++--")?;
    entries.push(SeedLibraryEntry {
        id: "golay-ccc-10".into(),
        family: golay_ccc(&a, &b)?,
        class: SeedClass::Ccc,
        note: "(2, 10) CCC from the length-10 Golay pair".into(),
    });
    for e in &entries {
        let verdict = e.verify()?;
        if !verdict.passed {
            return Err(Error::SeedRejected(format!(
                "catalog entry {} fails its declared class",
                e.id
            )));
        }
    }
    Ok(entries)
}

/// Catalog entries whose id contains `filter` (all entries for "").
pub fn find_seeds(filter: &str) -> Result<Vec<SeedLibraryEntry>> {
    Ok(seed_catalog()?
        .into_iter()
        .filter(|e| e.id.contains(filter))
        .collect())
}

pub fn seed(id: &str) -> Result<SeedLibraryEntry> {
    seed_catalog()?
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Unknown(id.to_string()))
}

/// Largest Z in 1..=L for which the family is a ZCCS, if any.
pub fn zccs_width(family: &Family) -> Result<Option<usize>> {
    for z in (1..=family.seq_len()).rev() {
        if check_zccs(family, z)?.passed {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// The raw pairing map: g_n = s_{2n} ‖ s_{2n+1} and
/// g_{N/2+n} = s_{2n} ‖ (−s_{2n+1}) for n < N/2, applied set by set.
pub fn theorem2_pairing(seed: &Family) -> Result<Family> {
    let n = seed.set_size();
    if !n.is_multiple_of(2) {
        return Err(Error::Constraint(format!(
            "pairing construction needs an even set size, got N={n}"
        )));
    }
    let sets = seed
        .sets()
        .iter()
        .map(|set| {
            let s = set.members();
            let plus = (0..n / 2).map(|i| s[2 * i].concat(&s[2 * i + 1]));
            let minus = (0..n / 2).map(|i| s[2 * i].concat(&s[2 * i + 1].negate()));
            plus.chain(minus).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Family::from_members(sets)
}

/// Interleaving map: g_n = s_{2n} ⧢ s_{2n+1} and g_{N/2+n} = s_{2n} ⧢ (−s_{2n+1}).
///
/// Keeps the ZCCS property with a wider zone (10 → 20 for `table3`) but has
/// no cross-channel tail zone, which makes it a useful contrast to
/// [`theorem2_pairing`].
pub fn interleave_pairing(seed: &Family) -> Result<Family> {
    let n = seed.set_size();
    if !n.is_multiple_of(2) {
        return Err(Error::Constraint(format!(
            "interleaving needs an even set size, got N={n}"
        )));
    }
    let weave = |a: &PhaseSequence, b: &PhaseSequence| {
        let phases = a.phases().iter().zip(b.phases()).flat_map(|(&x, &y)| [x, y]).collect();
        PhaseSequence::new(a.q(), phases)
    };
    let sets = seed
        .sets()
        .iter()
        .map(|set| {
            let s = set.members();
            let plus = (0..n / 2).map(|i| weave(&s[2 * i], &s[2 * i + 1]));
            let minus = (0..n / 2).map(|i| weave(&s[2 * i], &s[2 * i + 1].negate()));
            plus.chain(minus).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Family::from_members(sets)
}

#[derive(Clone, Debug, Serialize)]
pub struct Constructed {
    pub family: Family,
    /// Zone width the construction promises.
    pub z: usize,
    /// Verdict of the seed against its declared width.
    pub seed_verdict: Verdict,
    /// Verdict of the output at `z`.
    pub verdict: Verdict,
}

/// Builds an (M, N, 2L, Z)-E-CZCS from an (M, N, L, Z+1)-ZCCS seed, or an
/// (M, N, 2L, L)-E-CZCS when `seed_z == L` (MOCS seed).
///
/// The seed is checked first; a failing seed is refused unless `force`.
pub fn theorem2_construct(seed: &Family, seed_z: usize, force: bool) -> Result<Constructed> {
    let l = seed.seq_len();
    if seed_z == 0 || seed_z > l {
        return Err(Error::Constraint(format!(
            "seed width must be in 1..={l}, got {seed_z}"
        )));
    }
    let seed_verdict = check_zccs(seed, seed_z)?;
    if !seed_verdict.passed && !force {
        return Err(Error::SeedRejected(format!(
            "seed is not a ZCCS of width {seed_z} ({} violations)",
            seed_verdict.violations.len()
        )));
    }
    let family = theorem2_pairing(seed)?;
    let z = if seed_z == l { l } else { seed_z - 1 };
    let verdict = check_eczcs(&family, z)?;
    Ok(Constructed {
        family,
        z,
        seed_verdict,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::is_optimal;

    #[test]
    fn table3_to_table4() {
        let out = theorem2_construct(&fixture("table3").unwrap(), 10, false).unwrap();
        assert_eq!(out.z, 9);
        assert!(out.verdict.passed);
        assert_eq!(out.family.to_text(), fixture("table4").unwrap().to_text());
    }

    #[test]
    fn ccc_seed_is_optimal() {
        let e = seed("ccc-2x4").unwrap();
        assert_eq!(e.params(), (2, 2, 4, 4));
        let out = theorem2_construct(&e.family, 4, false).unwrap();
        assert_eq!((out.family.seq_len(), out.z), (8, 4));
        assert!(out.verdict.passed);
        assert!(is_optimal(&out.family, 4).unwrap());
    }

    #[test]
    fn degenerate_length_one_seed() {
        let plus = PhaseSequence::new(2, vec![0]).unwrap();
        let seed = Family::from_members(vec![vec![plus.clone(), plus]]).unwrap();
        let out = theorem2_construct(&seed, 1, false).unwrap();
        assert_eq!(out.family.set(0).get(0).to_string(), "++");
        assert_eq!(out.family.set(0).get(1).to_string(), "+-");
        assert!(out.verdict.passed);
    }

    #[test]
    fn odd_and_unverified_seeds() {
        let s = PhaseSequence::parse_binary("++-").unwrap();
        let odd = Family::from_members(vec![vec![s]]).unwrap();
        assert!(matches!(theorem2_construct(&odd, 1, false), Err(Error::Constraint(_))));
        let t3 = fixture("table3").unwrap();
        assert!(matches!(theorem2_construct(&t3, 11, false), Err(Error::SeedRejected(_))));
        let forced = theorem2_construct(&t3, 11, true).unwrap();
        assert!(!forced.seed_verdict.passed);
    }

    #[test]
    fn catalog_contents() {
        let all = find_seeds("").unwrap();
        assert!(all.iter().any(|e| e.id == "table3"));
        assert!(all.iter().any(|e| e.params() == (2, 2, 4, 4) && e.class == SeedClass::Ccc));
        assert_eq!(find_seeds("golay").unwrap().len(), 5);
        assert!(matches!(seed("missing"), Err(Error::Unknown(_))));
    }

    #[test]
    fn interleaving_doubles_zccs_width_without_c2() {
        let f = interleave_pairing(&fixture("table3").unwrap()).unwrap();
        assert_eq!(zccs_width(&f).unwrap(), Some(20));
        assert_eq!(crate::verify::measure_zcz_width(&f), Some(1));
    }

    #[test]
    fn measured_zccs_width() {
        assert_eq!(zccs_width(&fixture("table3").unwrap()).unwrap(), Some(10));
    }
}
