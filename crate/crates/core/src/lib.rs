//! Enhanced cross Z-complementary sets (E-CZCS) and their use as training
//! sequences for generalized spatial modulation (GSM) channel estimation.
//!
//! Correlations are computed exactly over cyclotomic integers, so every
//! "is zero" decision is free of floating-point tolerance.

pub mod cli;
pub mod construct;
pub mod correlation;
pub mod cyclo;
pub mod error;
pub mod gbf;
pub mod manifest;
pub mod seq;
pub mod sim;
pub mod training;
pub mod verify;

pub use correlation::{
    aacf, accf, cross_channel_sum, pccf, pccf_via_accf, profile, set_corr_sum, CorrelationProfile, Pairing,
};
pub use cyclo::CycloInt;
pub use error::{Error, Result};
pub use seq::{ComplexSample, Family, PhaseSequence, SequenceSet};
pub use verify::{CheckId, FamilyParams, Verdict, Violation};
