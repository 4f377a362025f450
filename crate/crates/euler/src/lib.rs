//! Tame Euler factor `𝒫_q` in the group algebra of `<Fr_𝔮, Fr_𝔮̄>`, the
//! polynomial `P_𝔮(X) = det(1 - Fr_𝔮 X | V^c)` and the congruence between them
//! modulo `q - 1`.

pub mod algebra;
pub mod hecke;

pub use algebra::{reduce_rational, AlgebraElement, Elt, FrobeniusAlgebra};
pub use hecke::{
    p_q_poly, script_p, script_p_scalar, tame_congruence, CongruenceReport, EigenModel, HeckeDatum,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("group: {0}")]
    Group(String),
    #[error("Hecke datum: {0}")]
    Datum(String),
    #[error("reduction: {0}")]
    Reduction(String),
}
