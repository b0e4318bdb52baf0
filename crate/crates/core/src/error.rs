use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size q={0} must be even and at least 2")]
    InvalidAlphabet(u32),
    #[error("alphabet mismatch: q={0} vs q={1}")]
    AlphabetMismatch(u32, u32),
    #[error("length mismatch: L={0} vs L={1}")]
    LengthMismatch(usize, usize),
    #[error("sequences must have length at least 1")]
    EmptySequence,
    #[error("phase {phase} is outside Z_{q}")]
    PhaseOutOfRange { phase: i64, q: u32 },
    #[error("illegal glyph {glyph:?} at position {position}")]
    IllegalGlyph { glyph: char, position: usize },
    #[error("shift {shift} outside -{max}..={max}")]
    ShiftOutOfRange { shift: isize, max: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("zone width Z={z} exceeds sequence length L={l}")]
    ZoneTooWide { z: usize, l: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("construction constraint violated: {0}")]
    Constraint(String),
    #[error("seed rejected: {0}")]
    SeedRejected(String),
    #[error("training matrix: {0}")]
    Training(String),
    #[error("bit string of length {len} is not a multiple of {per_symbol} bits per symbol")]
    BitLength { len: usize, per_symbol: usize },
    #[error("normal matrix of training matrix `{matrix}` is rank deficient")]
    RankDeficient { matrix: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
