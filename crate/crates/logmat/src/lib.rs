//! The constant matrices `A`, `Q`, the family `C_n` over the Iwasawa algebra,
//! the logarithmic matrix as a stabilized truncation, growth-order
//! certificates and the column parity structure when `a_p = 0`.

use iwalg::{IwError, Iwasawa, IwasawaPoly};
use num_rational::Rational64;
use padic::{hecke_roots, PadicError, QuadField, QuadScalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Iw(#[from] IwError),
    #[error("no stabilization mod omega_{m} up to n = {budget}")]
    NoStabilization { m: u32, budget: u32 },
    #[error("parity structure requires a_p = 0")]
    NonzeroAp,
    #[error("level must be at least 1")]
    ZeroLevel,
}

pub type ScalarMat = [[QuadScalar; 2]; 2];
pub type PolyMat = [[IwasawaPoly; 2]; 2];

/// `A`, `Q`, the Hecke roots and the `C_n` for one choice of `(a_p, chi(p))`.
#[derive(Debug, Clone)]
pub struct SignedMatrixFamily {
    pub iw: Iwasawa,
    pub alpha: QuadScalar,
    pub beta: QuadScalar,
    pub a: ScalarMat,
    pub q: ScalarMat,
}

/// `M_log` reduced mod `omega_m`, with the `n` at which it stabilized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogMatrixTruncation {
    pub m: u32,
    pub entries: PolyMat,
    pub witness: u32,
    /// Smallest absolute precision among the entry coefficients.
    pub precision: i32,
}

/// Outcome of `||p^floor(lambda (n-1)) f_n|| <= bound` over the levels of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub lambda: Rational64,
    /// Required lower bound on `v(f_n) + floor(lambda (n-1))`.
    pub floor_valuation: Rational64,
    /// `(n, min valuation of f mod omega_{n-1})`, `None` for zero.
    pub levels: Vec<(u32, Option<Rational64>)>,
    pub first_failure: Option<u32>,
    pub pass: bool,
}

/// Which `Phi_j` divide each column of `M_log mod omega_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub m: u32,
    pub column_divisors: [Vec<u32>; 2],
    pub columns_nonzero: [bool; 2],
    pub complementary: bool,
}

impl SignedMatrixFamily {
    /// Builds the family; `iw.field` carries `(a_p, chi(p))`.
    pub fn new(iw: Iwasawa) -> Result<Self, LogError> {
        let f = iw.field;
        let (_, alpha, beta) = hecke_roots(f.ctx, f.a_p, f.chi_p)?;
        let chip = f.embed(f.chi_p_times_p());
        let inv = f.inv(&chip)?;
        let a = [[f.zero(), f.neg(&inv)], [f.one(), f.mul(&f.embed(f.a_p), &inv)]];
        let q = [[alpha, f.neg(&beta)], [f.neg(&chip), chip]];
        Ok(SignedMatrixFamily { iw, alpha, beta, a, q })
    }

    pub fn field(&self) -> &QuadField {
        &self.iw.field
    }

    /// `C_n = [[a_p, 1], [-chi(p) Phi_n, 0]]`.
    pub fn c_matrix(&self, n: u32) -> Result<PolyMat, LogError> {
        let f = self.field();
        let phi = self.iw.phi(n)?;
        Ok([
            [self.iw.constant(f.embed(f.a_p)), self.iw.constant(f.one())],
            [self.iw.scale(&phi, &f.neg(&f.embed(f.chi_p))), self.iw.constant(f.zero())],
        ])
    }

    /// Adjugate `C'_n = [[0, -1], [chi(p) Phi_n, a_p]]`.
    pub fn c_adjugate(&self, n: u32) -> Result<PolyMat, LogError> {
        Ok(adjugate(&self.iw, &self.c_matrix(n)?))
    }

    /// `C_n C_{n-1} ... C_1`, exact (identity for `n = 0`).
    pub fn c_product(&self, n: u32) -> Result<PolyMat, LogError> {
        let mut acc = identity(&self.iw);
        for i in 1..=n {
            acc = mat_mul(&self.iw, &self.c_matrix(i)?, &acc, None)?;
        }
        Ok(acc)
    }

    /// `C_{hi} ... C_{lo}` reduced mod `omega_k`.
    pub fn c_product_mod(&self, lo: u32, hi: u32, k: u32) -> Result<PolyMat, LogError> {
        let mut acc = identity(&self.iw);
        for i in lo..=hi {
            acc = mat_mul(&self.iw, &self.c_matrix(i)?, &acc, Some(k))?;
        }
        reduce_mat(&self.iw, &acc, k)
    }

    /// `(alpha - beta) A^(n+1) C_n ... C_1 mod omega_m`.
    pub fn mlog_term(&self, m: u32, n: u32) -> Result<PolyMat, LogError> {
        let f = self.field();
        let c = self.c_product_mod(1, n, m)?;
        let mut an = scalar_identity(f);
        for _ in 0..=n {
            an = scalar_mul(f, &an, &self.a);
        }
        let ab = f.sub(&self.alpha, &self.beta);
        let s = scalar_scale(f, &an, &ab);
        Ok(scalar_times_poly(&self.iw, &s, &c))
    }

    /// Stabilized truncation of `M_log` mod `omega_m`, trying `n = m, m+1, ...`
    /// up to `budget` until two consecutive terms agree.
    pub fn mlog(&self, m: u32, budget: u32) -> Result<LogMatrixTruncation, LogError> {
        if m == 0 {
            return Err(LogError::ZeroLevel);
        }
        let mut prev = self.mlog_term(m, m)?;
        for n in m..budget {
            let next = self.mlog_term(m, n + 1)?;
            if mat_eq(&self.iw, &prev, &next) {
                let precision = mat_precision(&prev);
                return Ok(LogMatrixTruncation { m, entries: prev, witness: n, precision });
            }
            prev = next;
        }
        Err(LogError::NoStabilization { m, budget })
    }

    /// `Q^{-1}`.
    pub fn q_inverse(&self) -> Result<ScalarMat, LogError> {
        scalar_inverse(self.field(), &self.q)
    }

    /// `Q^{-1} A Q`.
    pub fn diagonalized_a(&self) -> Result<ScalarMat, LogError> {
        let f = self.field();
        Ok(scalar_mul(f, &scalar_mul(f, &self.q_inverse()?, &self.a), &self.q))
    }

    /// Column parity report for `a_p = 0`.
    pub fn parity_structure(&self, m: u32, budget: u32) -> Result<ParityReport, LogError> {
        let f = self.field();
        if !f.a_p.is_zero() {
            return Err(LogError::NonzeroAp);
        }
        let ml = self.mlog(m, budget)?;
        let mut column_divisors: [Vec<u32>; 2] = [vec![], vec![]];
        let mut columns_nonzero = [false, false];
        for col in 0..2 {
            let entries = [&ml.entries[0][col], &ml.entries[1][col]];
            columns_nonzero[col] = entries.iter().any(|e| !e.is_zero());
            for j in 1..=m {
                let phi = self.iw.phi(j)?;
                let divides = entries.iter().all(|e| {
                    let plain = IwasawaPoly { coeffs: e.coeffs.clone(), trunc: None };
                    self.iw.divmod_monic(&plain, &phi).1.is_zero()
                });
                if divides {
                    column_divisors[col].push(j);
                }
            }
        }
        let parity = |v: &Vec<u32>| -> Option<u32> {
            let first = v.first()? % 2;
            v.iter().all(|j| j % 2 == first).then_some(first)
        };
        let all: Vec<u32> = (1..=m).collect();
        let mut union: Vec<u32> = column_divisors.concat();
        union.sort();
        let complementary = union == all
            && match (parity(&column_divisors[0]), parity(&column_divisors[1])) {
                (Some(a), Some(b)) => a != b,
                (Some(_), None) => column_divisors[1].is_empty(),
                (None, Some(_)) => column_divisors[0].is_empty(),
                (None, None) => false,
            };
        Ok(ParityReport { m, column_divisors, columns_nonzero, complementary })
    }
}

/// `||p^floor(lambda (n-1)) (f mod omega_{n-1})|| <= p^(-floor_valuation)` for
/// every level `n` of `f`. The floor follows the `p^(-floor(lambda n))` weight
/// of the order-`lambda` norm, shifted by one so level `n` pairs with `n - 1`.
pub fn growth_order_certificate_with_bound(
    iw: &Iwasawa,
    f: &IwasawaPoly,
    lambda: Rational64,
    floor_valuation: Rational64,
) -> Result<GrowthCertificate, LogError> {
    let top = f.level().unwrap_or(iw.max_level() + 1);
    let mut levels = vec![];
    let mut first_failure = None;
    for n in 1..=top {
        let fn_ = iw.project(f, n)?;
        let v = iw.min_valuation(&fn_)?;
        let shift = (lambda * Rational64::from_integer(n as i64 - 1)).floor();
        if let Some(v) = v {
            if v + shift < floor_valuation && first_failure.is_none() {
                first_failure = Some(n);
            }
        }
        levels.push((n, v));
    }
    Ok(GrowthCertificate { lambda, floor_valuation, levels, pass: first_failure.is_none(), first_failure })
}

/// The unit-ball case `||p^floor(lambda (n-1)) f_n|| <= 1`.
pub fn growth_order_certificate(iw: &Iwasawa, f: &IwasawaPoly, lambda: Rational64) -> Result<GrowthCertificate, LogError> {
    growth_order_certificate_with_bound(iw, f, lambda, Rational64::from_integer(0))
}

pub fn identity(iw: &Iwasawa) -> PolyMat {
    let f = iw.field;
    [[iw.constant(f.one()), iw.constant(f.zero())], [iw.constant(f.zero()), iw.constant(f.one())]]
}

pub fn adjugate(iw: &Iwasawa, m: &PolyMat) -> PolyMat {
    [[m[1][1].clone(), iw.neg(&m[0][1])], [iw.neg(&m[1][0]), m[0][0].clone()]]
}

pub fn determinant(iw: &Iwasawa, m: &PolyMat) -> IwasawaPoly {
    iw.sub(&iw.mul(&m[0][0], &m[1][1]), &iw.mul(&m[0][1], &m[1][0]))
}

/// Product, reduced mod `omega_k` when given.
pub fn mat_mul(iw: &Iwasawa, x: &PolyMat, y: &PolyMat, k: Option<u32>) -> Result<PolyMat, LogError> {
    let entry = |i: usize, j: usize| -> Result<IwasawaPoly, LogError> {
        let s = iw.add(&iw.mul_plain(&x[i][0], &y[0][j]), &iw.mul_plain(&x[i][1], &y[1][j]));
        Ok(match k {
            Some(k) => iw.reduce(&s, k)?,
            None => s,
        })
    };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

pub fn mat_vec(iw: &Iwasawa, x: &PolyMat, v: &[IwasawaPoly; 2], k: Option<u32>) -> Result<[IwasawaPoly; 2], LogError> {
    let row = |i: usize| -> Result<IwasawaPoly, LogError> {
        let s = iw.add(&iw.mul_plain(&x[i][0], &v[0]), &iw.mul_plain(&x[i][1], &v[1]));
        Ok(match k {
            Some(k) => iw.reduce(&s, k)?,
            None => s,
        })
    };
    Ok([row(0)?, row(1)?])
}

pub fn reduce_mat(iw: &Iwasawa, x: &PolyMat, k: u32) -> Result<PolyMat, LogError> {
    let r = |e: &IwasawaPoly| iw.reduce(&IwasawaPoly { coeffs: e.coeffs.clone(), trunc: None }, k);
    Ok([[r(&x[0][0])?, r(&x[0][1])?], [r(&x[1][0])?, r(&x[1][1])?]])
}

pub fn mat_eq(iw: &Iwasawa, x: &PolyMat, y: &PolyMat) -> bool {
    (0..2).all(|i| (0..2).all(|j| iw.eq_to_precision(&x[i][j], &y[i][j])))
}

fn mat_precision(x: &PolyMat) -> i32 {
    x.iter().flatten().flat_map(|e| e.coeffs.iter()).map(|c| c.precision()).min().unwrap_or(i32::MAX)
}

pub fn scalar_identity(f: &QuadField) -> ScalarMat {
    [[f.one(), f.zero()], [f.zero(), f.one()]]
}

pub fn scalar_mul(f: &QuadField, x: &ScalarMat, y: &ScalarMat) -> ScalarMat {
    let e = |i: usize, j: usize| f.add(&f.mul(&x[i][0], &y[0][j]), &f.mul(&x[i][1], &y[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn scalar_scale(f: &QuadField, x: &ScalarMat, s: &QuadScalar) -> ScalarMat {
    [[f.mul(&x[0][0], s), f.mul(&x[0][1], s)], [f.mul(&x[1][0], s), f.mul(&x[1][1], s)]]
}

pub fn scalar_det(f: &QuadField, x: &ScalarMat) -> QuadScalar {
    f.sub(&f.mul(&x[0][0], &x[1][1]), &f.mul(&x[0][1], &x[1][0]))
}

pub fn scalar_inverse(f: &QuadField, x: &ScalarMat) -> Result<ScalarMat, LogError> {
    let d = f.inv(&scalar_det(f, x))?;
    let adj = [[x[1][1], f.neg(&x[0][1])], [f.neg(&x[1][0]), x[0][0]]];
    Ok(scalar_scale(f, &adj, &d))
}

pub fn scalar_pow(f: &QuadField, x: &ScalarMat, e: u32) -> ScalarMat {
    let mut acc = scalar_identity(f);
    for _ in 0..e {
        acc = scalar_mul(f, &acc, x);
    }
    acc
}

pub fn scalar_times_poly(iw: &Iwasawa, s: &ScalarMat, x: &PolyMat) -> PolyMat {
    let e = |i: usize, j: usize| iw.add(&iw.scale(&x[0][j], &s[i][0]), &iw.scale(&x[1][j], &s[i][1]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `||p^(lambda (n-1)) f_n|| <= p^(-floor_valuation)` with the real exponent
/// `lambda (n-1)`, the form used for compatible sequences of finite-level
/// distributions. A fixed bound across all levels certifies `O(log^lambda)`.
pub fn growth_certificate_exact(
    iw: &Iwasawa,
    f: &IwasawaPoly,
    lambda: Rational64,
    floor_valuation: Rational64,
) -> Result<GrowthCertificate, LogError> {
    let top = f.level().unwrap_or(iw.max_level() + 1);
    let mut levels = vec![];
    let mut first_failure = None;
    for n in 1..=top {
        let v = iw.min_valuation(&iw.project(f, n)?)?;
        let shift = lambda * Rational64::from_integer(n as i64 - 1);
        if let Some(v) = v {
            if v + shift < floor_valuation && first_failure.is_none() {
                first_failure = Some(n);
            }
        }
        levels.push((n, v));
    }
    Ok(GrowthCertificate { lambda, floor_valuation, levels, pass: first_failure.is_none(), first_failure })
}
