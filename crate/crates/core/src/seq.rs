//! Phase sequences, sequence sets and families.
//!
//! A sequence over the q-th roots of unity is stored by its exponents in Z_q;
//! complex values only appear when [`PhaseSequence::modulate`] is called.
//! Binary sequences use the `+`/`-` text convention (`+` is phase 0).

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floating-point image of a root of unity.
pub type ComplexSample = Complex64;

/// The value ξ_q^phase, exact on the axes.
pub fn root_of_unity(q: u32, phase: u32) -> Complex64 {
    let p = phase % q;
    if (4 * p).is_multiple_of(q) {
        match 4 * p / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        let (s, c) = (2.0 * PI * p as f64 / q as f64).sin_cos();
        Complex64::new(c, s)
    }
}

pub(crate) fn check_alphabet(q: u32) -> Result<()> {
    if q < 2 || !q.is_multiple_of(2) {
        return Err(Error::InvalidAlphabet(q));
    }
    Ok(())
}

/// A unimodular sequence of length L over Z_q (q even).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseSequence {
    q: u32,
    phases: Vec<u32>,
}

impl PhaseSequence {
    pub fn new(q: u32, phases: Vec<u32>) -> Result<Self> {
        check_alphabet(q)?;
        if phases.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(&p) = phases.iter().find(|&&p| p >= q) {
            return Err(Error::PhaseOutOfRange {
                phase: p as i64,
                q,
            });
        }
        Ok(Self { q, phases })
    }

    /// Builds a sequence from arbitrary integers, reducing them mod q.
    pub fn from_residues(q: u32, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        check_alphabet(q)?;
        let phases = values
            .into_iter()
            .map(|v| v.rem_euclid(q as i64) as u32)
            .collect();
        Self::new(q, phases)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[u32] {
        &self.phases
    }

    pub fn modulate(&self) -> Vec<ComplexSample> {
        self.phases
            .iter()
            .map(|&p| root_of_unity(self.q, p))
            .collect()
    }

    /// Phase-shifts every element by q/2, i.e. multiplies the sequence by -1.
    pub fn negate(&self) -> Self {
        let half = self.q / 2;
        Self {
            q: self.q,
            phases: self.phases.iter().map(|&p| (p + half) % self.q).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::AlphabetMismatch(self.q, other.q));
        }
        let mut phases = self.phases.clone();
        phases.extend_from_slice(&other.phases);
        Ok(Self { q: self.q, phases })
    }

    /// Cyclic shift to the right by `k` positions.
    pub fn rotate_right(&self, k: usize) -> Self {
        let mut phases = self.phases.clone();
        let len = phases.len();
        phases.rotate_right(k % len);
        Self { q: self.q, phases }
    }

    /// Parses `+`/`-` text (q=2). The Unicode minus sign is accepted too.
    pub fn parse_binary(text: &str) -> Result<Self> {
        let phases = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .enumerate()
            .map(|(position, glyph)| match glyph {
                '+' => Ok(0),
                '-' | '\u{2212}' => Ok(1),
                _ => Err(Error::IllegalGlyph { glyph, position }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(2, phases)
    }

    /// Parses comma-separated phases in Z_q.
    pub fn parse_phases(text: &str, q: u32) -> Result<Self> {
        check_alphabet(q)?;
        let phases = text
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                let v: i64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("not an integer phase: {tok:?}")))?;
                if v < 0 || v >= q as i64 {
                    return Err(Error::PhaseOutOfRange { phase: v, q });
                }
                Ok(v as u32)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, phases)
    }

    /// Parses either notation: `+`/`-` for q=2, comma-separated integers otherwise.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        if q == 2 && !text.contains(',') {
            Self::parse_binary(text)
        } else {
            Self::parse_phases(text, q)
        }
    }
}

impl fmt::Display for PhaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 2 {
            for &p in &self.phases {
                f.write_str(if p == 0 { "+" } else { "-" })?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.phases.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// N sequences sharing length and alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSet {
    members: Vec<PhaseSequence>,
}

impl SequenceSet {
    pub fn new(members: Vec<PhaseSequence>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a sequence set needs at least one member".into()))?;
        for s in &members[1..] {
            if s.q() != first.q() {
                return Err(Error::AlphabetMismatch(first.q(), s.q()));
            }
            if s.len() != first.len() {
                return Err(Error::LengthMismatch(first.len(), s.len()));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[PhaseSequence] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn seq_len(&self) -> usize {
        self.members[0].len()
    }

    pub fn q(&self) -> u32 {
        self.members[0].q()
    }

    pub fn get(&self, n: usize) -> &PhaseSequence {
        &self.members[n]
    }
}

/// M sequence sets of identical shape (N, L, q).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct Family {
    sets: Vec<SequenceSet>,
}

impl Family {
    pub fn new(sets: Vec<SequenceSet>) -> Result<Self> {
        let first = sets
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a family needs at least one set".into()))?;
        for s in &sets[1..] {
            if s.q() != first.q() {
                return Err(Error::AlphabetMismatch(first.q(), s.q()));
            }
            if s.size() != first.size() || s.seq_len() != first.seq_len() {
                return Err(Error::ShapeMismatch(format!(
                    "set of shape (N={}, L={}) in a family of shape (N={}, L={})",
                    s.size(),
                    s.seq_len(),
                    first.size(),
                    first.seq_len()
                )));
            }
        }
        Ok(Self { sets })
    }

    /// Convenience constructor from nested member vectors.
    pub fn from_members(sets: Vec<Vec<PhaseSequence>>) -> Result<Self> {
        Self::new(
            sets.into_iter()
                .map(SequenceSet::new)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn sets(&self) -> &[SequenceSet] {
        &self.sets
    }

    pub fn set(&self, m: usize) -> &SequenceSet {
        &self.sets[m]
    }

    /// Number of sets M.
    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Members per set N.
    pub fn set_size(&self) -> usize {
        self.sets[0].size()
    }

    /// Sequence length L.
    pub fn seq_len(&self) -> usize {
        self.sets[0].seq_len()
    }

    pub fn q(&self) -> u32 {
        self.sets[0].q()
    }

    /// Parses the text fixture format: one sequence per line, sets separated
    /// by blank lines, `#` starts a comment line.
    pub fn parse_text(text: &str, q: u32) -> Result<Self> {
        let mut sets = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                if !current.is_empty() {
                    sets.push(std::mem::take(&mut current));
                }
                continue;
            }
            current.push(PhaseSequence::parse(line, q)?);
        }
        if !current.is_empty() {
            sets.push(current);
        }
        Self::from_members(sets)
    }

    pub fn to_text(&self) -> String {
        let blocks: Vec<String> = self
            .sets
            .iter()
            .map(|set| {
                set.members()
                    .iter()
                    .map(|s| format!("{s}\n"))
                    .collect::<String>()
            })
            .collect();
        blocks.join("\n")
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    q: u32,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    sets: Vec<Vec<Vec<u32>>>,
}

impl TryFrom<FamilyJson> for Family {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        let fam = Family::from_members(
            j.sets
                .into_iter()
                .map(|set| {
                    set.into_iter()
                        .map(|p| PhaseSequence::new(j.q, p))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        if (fam.num_sets(), fam.set_size(), fam.seq_len()) != (j.m, j.n, j.l) {
            return Err(Error::ShapeMismatch(format!(
                "declared (M,N,L)=({},{},{}) but sets have ({},{},{})",
                j.m,
                j.n,
                j.l,
                fam.num_sets(),
                fam.set_size(),
                fam.seq_len()
            )));
        }
        Ok(fam)
    }
}

impl From<Family> for FamilyJson {
    fn from(f: Family) -> Self {
        FamilyJson {
            q: f.q(),
            m: f.num_sets(),
            n: f.set_size(),
            l: f.seq_len(),
            sets: f
                .sets
                .iter()
                .map(|s| s.members().iter().map(|p| p.phases().to_vec()).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn modulate_binary() {
        let s = PhaseSequence::new(2, vec![0, 1, 0]).unwrap();
        assert_eq!(s.modulate(), vec![c(1., 0.), c(-1., 0.), c(1., 0.)]);
    }

    #[test]
    fn modulate_quaternary_gbf_example() {
        let s = PhaseSequence::new(4, [0, 0, 2, 3].repeat(4)).unwrap();
        let expect = [c(1., 0.), c(1., 0.), c(-1., 0.), c(0., -1.)].repeat(4);
        assert_eq!(s.modulate(), expect);
        let ones = PhaseSequence::new(4, vec![0; 4]).unwrap();
        assert!(ones.modulate().iter().all(|z| *z == c(1., 0.)));
    }

    #[test]
    fn negate_cases() {
        let b = PhaseSequence::new(2, vec![0, 1, 1]).unwrap();
        assert_eq!(b.negate().phases(), &[1, 0, 0]);
        let q = PhaseSequence::new(4, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(q.negate().phases(), &[2, 3, 0, 1]);
        let s = PhaseSequence::new(4, vec![0, 3]).unwrap();
        assert_eq!(s.negate().negate(), s);
    }

    #[test]
    fn concat_and_empty() {
        let a = PhaseSequence::new(2, vec![0, 1]).unwrap();
        let b = PhaseSequence::new(2, vec![1, 0]).unwrap();
        assert_eq!(a.concat(&b).unwrap().phases(), &[0, 1, 1, 0]);
        assert!(matches!(
            PhaseSequence::new(2, vec![]),
            Err(Error::EmptySequence)
        ));
        let c4 = PhaseSequence::new(4, vec![0]).unwrap();
        assert!(matches!(a.concat(&c4), Err(Error::AlphabetMismatch(2, 4))));
    }

    #[test]
    fn rejects_odd_alphabet_and_bad_phase() {
        assert!(matches!(
            PhaseSequence::new(3, vec![0]),
            Err(Error::InvalidAlphabet(3))
        ));
        assert!(matches!(
            PhaseSequence::new(4, vec![4]),
            Err(Error::PhaseOutOfRange { .. })
        ));
        assert!(matches!(
            PhaseSequence::parse("0,5", 4),
            Err(Error::PhaseOutOfRange { phase: 5, q: 4 })
        ));
        assert!(matches!(
            PhaseSequence::parse_binary("++x"),
            Err(Error::IllegalGlyph { glyph: 'x', position: 2 })
        ));
    }

    #[test]
    fn parse_and_format() {
        let s = PhaseSequence::parse_binary("++\u{2212}+").unwrap();
        assert_eq!(s.phases(), &[0, 0, 1, 0]);
        assert_eq!(s.to_string(), "++-+");
        let t = PhaseSequence::parse("0,3,2", 4).unwrap();
        assert_eq!(t.phases(), &[0, 3, 2]);
        assert_eq!(t.to_string(), "0,3,2");
        assert_eq!(PhaseSequence::parse_binary("++++--+-+-++").unwrap().len(), 12);
    }

    #[test]
    fn family_json_shape_checked() {
        let bad = r#"{"q":2,"M":1,"N":1,"L":3,"sets":[[[0,1]]]}"#;
        assert!(serde_json::from_str::<Family>(bad).is_err());
        let good = r#"{"q":2,"M":1,"N":2,"L":2,"sets":[[[0,1],[1,1]]]}"#;
        let f: Family = serde_json::from_str(good).unwrap();
        assert_eq!((f.num_sets(), f.set_size(), f.seq_len()), (1, 2, 2));
    }

    fn arb_seq() -> impl Strategy<Value = PhaseSequence> {
        (1u32..5, 1usize..40).prop_flat_map(|(h, l)| {
            let q = 2 * h;
            proptest::collection::vec(0..q, l).prop_map(move |p| PhaseSequence::new(q, p).unwrap())
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(s in arb_seq()) {
            let back = PhaseSequence::parse(&s.to_string(), s.q()).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_string(), s.to_string());
        }

        #[test]
        fn unit_magnitude_and_concat(a in arb_seq(), b in arb_seq()) {
            prop_assert!(a.modulate().iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
            if a.q() == b.q() {
                let mut joined = a.modulate();
                joined.extend(b.modulate());
                prop_assert_eq!(a.concat(&b).unwrap().modulate(), joined);
            }
            let neg: Vec<_> = a.negate().modulate();
            for (x, y) in neg.iter().zip(a.modulate()) {
                prop_assert!((x + y).norm() < 1e-12);
            }
        }
    }
}
