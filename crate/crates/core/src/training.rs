//! GSM training matrices built from E-CZCS families.
//!
//! With `Nt` transmit antennas and `Na` RF chains the antennas are split into
//! `V = ⌈Nt/Na⌉` blocks of `Na`. Antenna `r = v·Na + a` (block `v`, slot `a`)
//! transmits the members of set `a`, one per segment of `V·L` symbols, placed
//! at offset `v·L` inside the segment. Rows beyond `Nt` are dropped.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloInt;
use crate::error::{Error, Result};
use crate::gbf::combinations;
use crate::seq::{root_of_unity, Family};
use crate::verify::{CheckId, Verdict, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsmConfig {
    pub nt: usize,
    pub na: usize,
    /// Constellation size; only BPSK (2) is supported by the bit mapper.
    #[serde(default = "bpsk")]
    pub order: usize,
}

fn bpsk() -> usize {
    2
}

impl GsmConfig {
    pub fn new(nt: usize, na: usize) -> Result<Self> {
        if na == 0 || na > nt {
            return Err(Error::Training(format!("need 1 ≤ Na ≤ Nt, got Nt={nt}, Na={na}")));
        }
        Ok(Self { nt, na, order: 2 })
    }

    /// Number of antenna blocks V = ⌈Nt/Na⌉.
    pub fn blocks(&self) -> usize {
        self.nt.div_ceil(self.na)
    }

    pub fn block_of(&self, antenna: usize) -> usize {
        antenna / self.na
    }

    /// Number of activation patterns C(Nt, Na).
    pub fn patterns(&self) -> u128 {
        let (n, k) = (self.nt as u128, self.na as u128);
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    }

    /// ⌊log₂ C(Nt, Na)⌋ bits select the activation pattern.
    pub fn pattern_bits(&self) -> usize {
        (127 - self.patterns().leading_zeros()) as usize
    }
}

/// One training-matrix entry: silent, or a q-ary phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    Phase(u32),
}

impl Entry {
    pub fn is_zero(self) -> bool {
        self == Entry::Zero
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub source: String,
    #[serde(rename = "Nt")]
    pub nt: usize,
    #[serde(rename = "Na")]
    pub na: usize,
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "E")]
    pub energy: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingMatrix {
    q: u32,
    rows: Vec<Vec<Entry>>,
    meta: TrainingMeta,
}

#[derive(Serialize, Deserialize)]
struct TrainingJson {
    #[serde(flatten)]
    meta: TrainingMeta,
    q: u32,
    /// Phase per entry, `null` for silent entries.
    rows: Vec<Vec<Option<u32>>>,
}

impl TrainingMatrix {
    pub fn from_rows(q: u32, rows: Vec<Vec<Entry>>, meta: TrainingMeta) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || width == 0 {
            return Err(Error::Training("empty training matrix".into()));
        }
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Training("rows have different lengths".into()));
        }
        Ok(Self { q, rows, meta })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> &[Vec<Entry>] {
        &self.rows
    }

    pub fn meta(&self) -> &TrainingMeta {
        &self.meta
    }

    pub fn nt(&self) -> usize {
        self.rows.len()
    }

    /// Training length L′.
    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn energy(&self) -> usize {
        self.meta.energy
    }

    pub fn set_entry(&mut self, row: usize, col: usize, e: Entry) {
        self.rows[row][col] = e;
    }

    /// Number of active antennas in each column.
    pub fn column_activity(&self) -> Vec<usize> {
        (0..self.len())
            .map(|c| self.rows.iter().filter(|r| !r[c].is_zero()).count())
            .collect()
    }

    pub fn row_complex(&self, r: usize) -> Vec<Complex64> {
        self.rows[r]
            .iter()
            .map(|e| match *e {
                Entry::Zero => Complex64::new(0.0, 0.0),
                Entry::Phase(p) => root_of_unity(self.q, p),
            })
            .collect()
    }

    /// Periodic correlation Σ_k x_i[k+u]·conj(x_j[k]) over the zero-extended alphabet.
    pub fn pccf(&self, i: usize, j: usize, u: isize) -> CycloInt {
        let (a, b) = (&self.rows[i], &self.rows[j]);
        let len = a.len();
        let shift = u.rem_euclid(len as isize) as usize;
        let mut acc = CycloInt::zero(self.q);
        for (k, eb) in b.iter().enumerate() {
            if let (Entry::Phase(pa), Entry::Phase(pb)) = (a[(k + shift) % len], *eb) {
                acc.add_root(pa as i64 - pb as i64, 1);
            }
        }
        acc
    }

    pub fn to_csv(&self) -> String {
        let cell = |e: &Entry| match *e {
            Entry::Zero => "0".to_string(),
            Entry::Phase(p) if self.q == 2 => if p == 0 { "1" } else { "-1" }.to_string(),
            Entry::Phase(p) => {
                let z = root_of_unity(self.q, p);
                format!("{}{:+}i", z.re, z.im)
            }
        };
        self.rows
            .iter()
            .map(|r| r.iter().map(cell).collect::<Vec<_>>().join(",") + "\n")
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| match *e {
                        Entry::Zero => None,
                        Entry::Phase(p) => Some(p),
                    })
                    .collect()
            })
            .collect();
        Ok(serde_json::to_string_pretty(&TrainingJson {
            meta: self.meta.clone(),
            q: self.q,
            rows,
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: TrainingJson = serde_json::from_str(text)?;
        let rows = j
            .rows
            .into_iter()
            .map(|r| r.into_iter().map(|p| p.map_or(Entry::Zero, Entry::Phase)).collect())
            .collect();
        Self::from_rows(j.q, rows, j.meta)
    }
}

/// Lays out set `a` of `family` on antennas `a, a+Na, a+2Na, …` as
/// described in the module docs. `source` names the family in the metadata.
pub fn build_training_matrix(family: &Family, cfg: &GsmConfig, source: &str) -> Result<TrainingMatrix> {
    GsmConfig::new(cfg.nt, cfg.na)?;
    if family.num_sets() < cfg.na {
        return Err(Error::Training(format!(
            "family has M={} sets but Na={} RF chains",
            family.num_sets(),
            cfg.na
        )));
    }
    let (n, l, vb) = (family.set_size(), family.seq_len(), cfg.blocks());
    let width = n * vb * l;
    let rows = (0..cfg.nt)
        .map(|r| {
            let (v, a) = (r / cfg.na, r % cfg.na);
            let mut row = vec![Entry::Zero; width];
            for (seg, g) in family.set(a).members().iter().enumerate() {
                let start = seg * vb * l + v * l;
                for (k, &p) in g.phases().iter().enumerate() {
                    row[start + k] = Entry::Phase(p);
                }
            }
            row
        })
        .collect();
    let meta = TrainingMeta {
        source: source.to_string(),
        nt: cfg.nt,
        na: cfg.na,
        v: vb,
        n,
        l,
        energy: n * l,
    };
    TrainingMatrix::from_rows(family.q(), rows, meta)
}

/// Which interference mechanism a correlation pair corresponds to.
pub fn classify_pair(cfg: &GsmConfig, i: usize, j: usize) -> CheckId {
    let (bi, bj) = (cfg.block_of(i), cfg.block_of(j));
    let last = cfg.blocks() - 1;
    if i == j {
        CheckId::Isi
    } else if bi == bj {
        CheckId::IaiSameBlock
    } else if last > 0 && bi == 0 && bj == last {
        CheckId::IaiWrap
    } else if bi == bj + 1 {
        CheckId::IaiAdjacentBlock
    } else {
        CheckId::IaiOther
    }
}

/// Checks the conditions for the minimum LS error at delay spread λ:
/// φ(x_i,x_i;0) = E, φ(x_i,x_i;u) = 0 for 1 ≤ u ≤ λ, φ(x_i,x_j;u) = 0 for
/// i ≠ j and 0 ≤ u ≤ λ; plus column activity.
///
/// Every column must carry exactly Na active antennas when Na divides Nt.
/// When rows were truncated, the last block is short and its columns carry
/// fewer (but at least one).
pub fn check_design_criterion(psi: &TrainingMatrix, lambda: usize) -> Verdict {
    let meta = psi.meta();
    let cfg = GsmConfig {
        nt: psi.nt(),
        na: meta.na.max(1),
        order: 2,
    };
    let mut violations = Vec::new();
    let exact = cfg.nt.is_multiple_of(cfg.na);
    for (c, &active) in psi.column_activity().iter().enumerate() {
        let ok = if exact { active == cfg.na } else { (1..=cfg.na).contains(&active) };
        if !ok {
            violations.push(Violation {
                check: CheckId::Sparsity,
                indices: (c, active),
                shift: 0,
                magnitude: active as f64,
            });
        }
    }
    let energy = meta.energy as i64;
    for i in 0..psi.nt() {
        for j in 0..psi.nt() {
            for u in 0..=lambda.min(psi.len() - 1) {
                let v = psi.pccf(i, j, u as isize);
                let (ok, id) = if i == j && u == 0 {
                    (v.equals_integer(energy), CheckId::Energy)
                } else {
                    (v.is_zero(), classify_pair(&cfg, i, j))
                };
                if !ok {
                    violations.push(Violation::new(id, (i, j), u as isize, &v));
                }
            }
        }
    }
    Verdict::from_violations(violations)
}

/// LS model matrix X = [X_1 … X_Nt] (L′ × Nt(λ+1)), X_p[t][c] = x_p[(t−c) mod L′].
pub fn build_ls_model_matrix(psi: &TrainingMatrix, lambda: usize) -> Result<DMatrix<Complex64>> {
    let len = psi.len();
    if lambda + 1 > len {
        return Err(Error::Training(format!(
            "delay spread λ={lambda} needs λ+1 ≤ L′={len}"
        )));
    }
    let taps = lambda + 1;
    let rows: Vec<Vec<Complex64>> = (0..psi.nt()).map(|p| psi.row_complex(p)).collect();
    Ok(DMatrix::from_fn(len, psi.nt() * taps, |t, col| {
        let (p, c) = (col / taps, col % taps);
        rows[p][(t + len - c) % len]
    }))
}

/// XᴴX in exact arithmetic: entry ((p,c),(p′,c′)) equals φ(x_p′, x_p; c−c′).
pub fn normal_matrix_exact(psi: &TrainingMatrix, lambda: usize) -> Vec<Vec<CycloInt>> {
    let taps = lambda + 1;
    let dim = psi.nt() * taps;
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|s| {
                    let (p, c) = (r / taps, r % taps);
                    let (pp, cc) = (s / taps, s % taps);
                    psi.pccf(pp, p, c as isize - cc as isize)
                })
                .collect()
        })
        .collect()
}

/// True when XᴴX = E·I exactly.
pub fn normal_matrix_is_scaled_identity(psi: &TrainingMatrix, lambda: usize) -> bool {
    let e = psi.energy() as i64;
    normal_matrix_exact(psi, lambda)
        .iter()
        .enumerate()
        .all(|(r, row)| {
            row.iter()
                .enumerate()
                .all(|(s, v)| if r == s { v.equals_integer(e) } else { v.is_zero() })
        })
}

/// Activation patterns, indexed by the integer value of the pattern bits
/// (most significant bit first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActivationTable {
    pub bits: usize,
    pub patterns: Vec<Vec<bool>>,
}

impl ActivationTable {
    pub fn active(&self, index: usize) -> Vec<usize> {
        self.patterns[index]
            .iter()
            .enumerate()
            .filter_map(|(i, &on)| on.then_some(i))
            .collect()
    }
}

/// 2^⌊log₂ C(Nt,Na)⌋ patterns: the lexicographically first combinations,
/// except (4,2) which uses {1,2}, {2,3}, {1,4}, {3,4}.
pub fn activation_table(cfg: &GsmConfig) -> ActivationTable {
    let bits = cfg.pattern_bits();
    let pattern = |on: &[usize]| {
        let mut p = vec![false; cfg.nt];
        for &i in on {
            p[i] = true;
        }
        p
    };
    let patterns = if (cfg.nt, cfg.na) == (4, 2) {
        [[0, 1], [1, 2], [0, 3], [2, 3]].iter().map(|c| pattern(c)).collect()
    } else {
        combinations(cfg.nt, cfg.na)
            .into_iter()
            .take(1 << bits)
            .map(|c| pattern(&c))
            .collect()
    };
    ActivationTable { bits, patterns }
}

/// Parses a string of '0'/'1' characters, ignoring whitespace.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            glyph => Err(Error::IllegalGlyph { glyph, position: i }),
        })
        .collect()
}

/// Maps bits to GSM symbols (BPSK: 0 → +1, 1 → −1). Each symbol takes the
/// pattern bits followed by one bit per active antenna. Returns an
/// Nt × T matrix with entries in {−1, 0, +1}.
pub fn map_bits_to_gsm_block(bits: &[bool], cfg: &GsmConfig) -> Result<Vec<Vec<i8>>> {
    if cfg.order != 2 {
        return Err(Error::Config(format!(
            "only BPSK is supported, got a constellation of size {}",
            cfg.order
        )));
    }
    let table = activation_table(cfg);
    let per_symbol = table.bits + cfg.na;
    if !bits.len().is_multiple_of(per_symbol) {
        return Err(Error::BitLength {
            len: bits.len(),
            per_symbol,
        });
    }
    let symbols = bits.len() / per_symbol;
    let mut block = vec![vec![0i8; symbols]; cfg.nt];
    for (t, chunk) in bits.chunks(per_symbol).enumerate() {
        let (sel, data) = chunk.split_at(table.bits);
        let index = sel.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        for (antenna, &b) in table.active(index).iter().zip(data) {
            block[*antenna][t] = if b { -1 } else { 1 };
        }
    }
    Ok(block)
}
