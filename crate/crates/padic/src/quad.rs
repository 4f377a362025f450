use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{PadicContext, PadicError, PadicScalar, Valuation};

/// The ring `Z_p[alpha]` with `alpha^2 = a_p * alpha - chi(p) * p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    pub ctx: PadicContext,
    pub a_p: PadicScalar,
    pub chi_p: PadicScalar,
}

/// `a + b * alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadScalar {
    pub a: PadicScalar,
    pub b: PadicScalar,
}

impl QuadField {
    pub fn new(ctx: PadicContext, a_p: PadicScalar, chi_p: PadicScalar) -> Result<Self, PadicError> {
        if chi_p.valuation() != Valuation::Exact(Rational64::from_integer(0)) {
            return Err(PadicError::NonUnitCharacter);
        }
        Ok(QuadField { ctx, a_p, chi_p })
    }

    /// Field for integer Hecke data.
    pub fn from_ints(ctx: PadicContext, a_p: i64, chi_p: i64) -> Result<Self, PadicError> {
        Self::new(ctx, ctx.int(a_p), ctx.int(chi_p))
    }

    /// `chi(p) * p`.
    pub fn chi_p_times_p(&self) -> PadicScalar {
        self.chi_p.shift_by(1)
    }

    pub fn embed(&self, x: PadicScalar) -> QuadScalar {
        QuadScalar { a: x, b: self.ctx.zero() }
    }

    pub fn int(&self, x: i64) -> QuadScalar {
        QuadScalar { a: self.ctx.int(x), b: self.ctx.zero() }
    }

    pub fn zero(&self) -> QuadScalar {
        self.int(0)
    }

    pub fn one(&self) -> QuadScalar {
        self.int(1)
    }

    pub fn alpha(&self) -> QuadScalar {
        QuadScalar { a: self.ctx.zero(), b: self.ctx.one() }
    }

    pub fn beta(&self) -> QuadScalar {
        QuadScalar { a: self.a_p, b: self.ctx.int(-1) }
    }

    pub fn add(&self, x: &QuadScalar, y: &QuadScalar) -> QuadScalar {
        QuadScalar { a: x.a.add(&y.a), b: x.b.add(&y.b) }
    }

    pub fn sub(&self, x: &QuadScalar, y: &QuadScalar) -> QuadScalar {
        QuadScalar { a: x.a.sub(&y.a), b: x.b.sub(&y.b) }
    }

    pub fn neg(&self, x: &QuadScalar) -> QuadScalar {
        QuadScalar { a: x.a.neg(), b: x.b.neg() }
    }

    pub fn mul(&self, x: &QuadScalar, y: &QuadScalar) -> QuadScalar {
        let ac = x.a.mul(&y.a);
        let bd = x.b.mul(&y.b);
        let cross = x.a.mul(&y.b).add(&x.b.mul(&y.a));
        QuadScalar {
            a: ac.sub(&bd.mul(&self.chi_p_times_p())),
            b: cross.add(&bd.mul(&self.a_p)),
        }
    }

    pub fn scale(&self, x: &QuadScalar, s: &PadicScalar) -> QuadScalar {
        QuadScalar { a: x.a.mul(s), b: x.b.mul(s) }
    }

    pub fn mul_int(&self, x: &QuadScalar, k: i64) -> QuadScalar {
        QuadScalar { a: x.a.mul_int(k), b: x.b.mul_int(k) }
    }

    /// `x * conj(x)` where `conj(alpha) = beta`.
    pub fn norm(&self, x: &QuadScalar) -> PadicScalar {
        let aa = x.a.mul(&x.a);
        let ab = x.a.mul(&x.b).mul(&self.a_p);
        let bb = x.b.mul(&x.b).mul(&self.chi_p_times_p());
        aa.add(&ab).add(&bb)
    }

    /// Conjugate `a + b * beta = (a + b a_p) - b alpha`.
    pub fn conj(&self, x: &QuadScalar) -> QuadScalar {
        QuadScalar { a: x.a.add(&x.b.mul(&self.a_p)), b: x.b.neg() }
    }

    pub fn inv(&self, x: &QuadScalar) -> Result<QuadScalar, PadicError> {
        let n = self.norm(x);
        let ni = n.inv()?;
        Ok(self.scale(&self.conj(x), &ni))
    }

    pub fn div(&self, x: &QuadScalar, y: &QuadScalar) -> Result<QuadScalar, PadicError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &QuadScalar, e: u32) -> QuadScalar {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Half the valuation of the norm.
    pub fn valuation(&self, x: &QuadScalar) -> Valuation {
        match self.norm(x).valuation() {
            Valuation::Exact(v) => Valuation::Exact(v / 2),
            Valuation::ZeroToPrecision(_) => Valuation::ZeroToPrecision(self.lower_valuation(x)),
        }
    }

    /// Lower bound for the valuation from the component precisions.
    pub fn lower_valuation(&self, x: &QuadScalar) -> Rational64 {
        let va = Rational64::from_integer(x.a.val_or_prec() as i64);
        let vb = Rational64::from_integer(x.b.val_or_prec() as i64) + self.alpha_valuation();
        va.min(vb)
    }

    /// Valuation of `alpha` in the non-ordinary regime, where the Hecke
    /// polynomial is Eisenstein.
    pub fn alpha_valuation(&self) -> Rational64 {
        Rational64::new(1, 2)
    }

    pub fn eq_to_precision(&self, x: &QuadScalar, y: &QuadScalar) -> bool {
        self.sub(x, y).is_zero()
    }
}

impl QuadScalar {
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Minimum absolute precision of the two components.
    pub fn precision(&self) -> i32 {
        self.a.precision().min(self.b.precision())
    }

    /// Rational value when `b = 0` and `a` is integral.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*alpha", self.a, self.b)
    }
}

/// Roots `alpha, beta` of `X^2 - a_p X + chi(p) p` with `alpha + beta = a_p`,
/// `alpha * beta = chi(p) p`, after checking `0 < v(alpha), v(beta) < 1`.
pub fn hecke_roots(
    ctx: PadicContext,
    a_p: PadicScalar,
    chi_p: PadicScalar,
) -> Result<(QuadField, QuadScalar, QuadScalar), PadicError> {
    if a_p.valuation() == Valuation::Exact(Rational64::from_integer(0)) {
        return Err(PadicError::Ordinary);
    }
    let field = QuadField::new(ctx, a_p, chi_p)?;
    let (alpha, beta) = (field.alpha(), field.beta());
    for r in [alpha, beta] {
        let v = field.valuation(&r);
        let ok = matches!(v, Valuation::Exact(x) if x > Rational64::from_integer(0) && x < Rational64::from_integer(1));
        if !ok {
            return Err(PadicError::RootValuation(format!("{v:?}")));
        }
    }
    Ok((field, alpha, beta))
}
