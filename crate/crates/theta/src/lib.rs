//! Theta elements on mock Shimura-set towers: Hsieh's `Δ_n`, the twisted
//! diagonal pushforward `Θ_{U_(n)}`, norm relations, the eigenform tower
//! `Θ_n(f,g)` with its three-term relation, and the signed pipeline.

pub mod eigen;
pub mod elements;
pub mod fg;
pub mod signed;
pub mod vector;

pub use eigen::{EigenProvenance, MockEigenData, Spectrum};
pub use elements::{
    compare_hsieh, delta_hsieh, diagonal_pushforward, orbit_weight, project, theta_loeffler, triple_up, twists, verify_norm_relation,
    CompareReport, NormReport, TwistOrder,
};
pub use fg::{FgContext, FgThreeTermReport};
pub use signed::{
    group_basis, iwasawa_for, pair_with_weights, regular_weights, signed_theta, space_tower, three_term_levels,
    unit_root, unit_root_stabilization, weight_exponent, SignedThetaReport, UnitRootReport, WeightSystem,
};
pub use vector::ThetaVector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error(transparent)]
    Plocal(#[from] plocal::PlocalError),
    #[error(transparent)]
    Qsys(#[from] qsys::QsysError),
    #[error(transparent)]
    Iw(#[from] iwalg::IwError),
    #[error(transparent)]
    Padic(#[from] padic::PadicError),
    #[error("invalid level: {0}")]
    Level(String),
    #[error("eigen data: {0}")]
    Eigen(String),
    #[error("ordinarity failure: {0}")]
    Ordinarity(String),
}
