//! Quasi-complementary code sets built from multivariate functions over
//! `Z_p`, with exact and floating-point correlation checking.

pub mod analysis;
pub mod cli;
pub mod construction;
pub mod correlation;
pub mod cyclotomic;
pub mod error;
pub mod io;
pub mod poly;
pub mod seqgen;
pub mod verify;

pub use construction::{build_ccc, build_qccs, canonical_seed, CodeFamily, SeedSpec};
pub use correlation::{Arithmetic, Code};
pub use error::{Error, Result};
pub use poly::{Params, Polynomial, Restriction};
pub use seqgen::{sequence_of, PhaseSequence};
