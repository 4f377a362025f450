//! Exact p-adic arithmetic with per-value absolute precision.
//!
//! A [`PadicScalar`] is `p^shift * unit + O(p^(shift + rel))`. Negative shifts
//! are allowed so that division by `p` is exact and only costs precision.
//! [`QuadScalar`] extends this to `Z_p[alpha]` where
//! `alpha^2 = a_p * alpha - chi(p) * p`.

mod quad;
mod scalar;

pub use quad::{hecke_roots, QuadField, QuadScalar};
pub use scalar::{PadicScalar, Valuation};

use thiserror::Error;

/// Default working precision in digits.
pub const DEFAULT_DIGITS: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("p must be odd")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1 digit")]
    ZeroPrecision,
    #[error("precision {digits} exceeds the 62-bit limit for p = {p}")]
    PrecisionTooLarge { p: u64, digits: u32 },
    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,
    #[error("ordinary regime: v(a_p) = 0, the Hecke roots require v(a_p) > 0")]
    Ordinary,
    #[error("chi(p) must be a p-adic unit")]
    NonUnitCharacter,
    #[error("root valuation {0} lies outside (0, 1)")]
    RootValuation(String),
}

/// Prime and working precision shared by all downstream computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PadicContext {
    pub p: u64,
    pub digits: u32,
}

/// Largest relative precision whose residues fit comfortably in 62 bits.
pub fn max_digits(p: u64) -> u32 {
    let mut k = 0u32;
    let mut q: u128 = 1;
    while q * (p as u128) < (1u128 << 62) {
        q *= p as u128;
        k += 1;
    }
    k
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates `(p, digits)` and builds a context.
pub fn make_context(p: u64, digits: u32) -> Result<PadicContext, PadicError> {
    if p == 2 {
        return Err(PadicError::EvenPrime);
    }
    if !is_prime(p) {
        return Err(PadicError::NotPrime(p));
    }
    if digits == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    if digits > max_digits(p) {
        return Err(PadicError::PrecisionTooLarge { p, digits });
    }
    Ok(PadicContext { p, digits })
}

impl PadicContext {
    /// Integer `x` known mod `p^digits`.
    pub fn int(&self, x: i64) -> PadicScalar {
        PadicScalar::from_int(self.p, x, self.digits as i32)
    }

    pub fn zero(&self) -> PadicScalar {
        self.int(0)
    }

    pub fn one(&self) -> PadicScalar {
        self.int(1)
    }

    /// `p^k` for any integer `k`, with relative precision `digits`.
    pub fn p_pow(&self, k: i32) -> PadicScalar {
        PadicScalar::from_parts(self.p, k, 1, self.digits)
    }

    /// `p^digits`, the residue modulus.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.digits)
    }
}
