//! Local structure at `p`: a truncated `GL2(Q_p)` matrix monoid, congruence
//! levels, mock Shimura sets, Hecke correspondences and exhaustive checks of
//! the coset lemmas and degeneracy identities.

pub mod hecke;
pub mod level;
pub mod matrix;
pub mod ordinary;
pub mod space;
pub mod verify;

pub use hecke::{hida_reps, zero_to_z_reps, HeckeOp, SparseMat};
pub use level::{Coupling, Level, TripleLevel};
pub use matrix::{Mat, Monoid, TruncatedMatrix};
pub use ordinary::{projector_by_factorial, DenseMat, OrdinaryProjector};
pub use space::{order24_generators, CosetSpace, Mock, MockConfig, TripleKey, TripleSpace, Walk};
pub use verify::{
    coset_equal, verify_coset_reps, verify_hida_kernel, verify_klz, verify_u_intersection, CosetRepsReport,
    HidaKernelReport, KlzReport, UIntersectionReport, U_TWIST,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlocalError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precision exhausted: need {need} digits, have {have}")]
    Precision { need: u32, have: u32 },
    #[error("determinant valuation {valuation} exceeds budget {budget}")]
    Budget { valuation: u32, budget: u32 },
    #[error("enumeration of {size} elements exceeds the limit {limit}")]
    SizeBudget { size: usize, limit: usize },
    #[error("matrix is not divisible by p")]
    NotDivisible,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("no idempotent after {iterations} iterations")]
    NoStabilization { iterations: u64 },
}
