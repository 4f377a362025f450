//! Hecke data at a split prime `q = 𝔮𝔮̄`, the element `𝒫_q` and `P_𝔮(X)`.

use crate::algebra::{AlgebraElement, Elt, FrobeniusAlgebra};
use crate::EulerError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Hecke parameters of `f` and `g` at `q` and the values `φ_0(𝔮)`, `φ_0(𝔮̄)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeDatum {
    pub q: u64,
    pub a_f: BigRational,
    pub a_g: BigRational,
    pub chi_f: BigRational,
    pub chi_g: BigRational,
    pub phi_q: BigRational,
    pub phi_qbar: BigRational,
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

impl HeckeDatum {
    pub fn new(
        q: u64,
        a_f: BigRational,
        a_g: BigRational,
        chi_f: BigRational,
        chi_g: BigRational,
        phi_q: BigRational,
        phi_qbar: BigRational,
    ) -> Result<Self, EulerError> {
        if !is_prime(q) {
            return Err(EulerError::Datum(format!("q = {q} is not prime")));
        }
        for (name, v) in [("chi_f", &chi_f), ("chi_g", &chi_g), ("phi_q", &phi_q), ("phi_qbar", &phi_qbar)] {
            if v.is_zero() {
                return Err(EulerError::Datum(format!("{name} must be a unit")));
            }
        }
        Ok(Self { q, a_f, a_g, chi_f, chi_g, phi_q, phi_qbar })
    }

    pub fn from_ints(q: u64, a_f: i64, a_g: i64, chi_f: i64, chi_g: i64, phi_q: i64, phi_qbar: i64) -> Result<Self, EulerError> {
        Self::new(q, rat(a_f), rat(a_g), rat(chi_f), rat(chi_g), rat(phi_q), rat(phi_qbar))
    }

    /// `q ≠ p` and every unit is a `p`-adic unit.
    pub fn check_prime(&self, p: u64) -> Result<(), EulerError> {
        if self.q == p {
            return Err(EulerError::Datum(format!("q must differ from p = {p}")));
        }
        let pb = BigInt::from(p);
        let unit = |v: &BigRational| !v.numer().is_multiple_of(&pb) && !v.denom().is_multiple_of(&pb);
        if ![&self.chi_f, &self.chi_g, &self.phi_q, &self.phi_qbar].into_iter().all(unit) {
            return Err(EulerError::Datum(format!("characters must be {p}-adic units")));
        }
        Ok(())
    }

    /// `φ_0(𝔮) φ_0(𝔮̄) χ_f(q) χ_g(q) = 1`.
    pub fn self_dual(&self) -> bool {
        (&self.phi_q * &self.phi_qbar * &self.chi_f * &self.chi_g).is_one()
    }

    /// The same datum with `𝔮` and `𝔮̄` exchanged.
    pub fn conjugate(&self) -> Self {
        Self { phi_q: self.phi_qbar.clone(), phi_qbar: self.phi_q.clone(), ..self.clone() }
    }

    fn qr(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.q))
    }
}

/// One `Fr`-block `qχ_fχ_g (φ Fr/q)^2 - a_f a_g (φ Fr/q)`.
fn frobenius_block(d: &HeckeDatum, alg: &FrobeniusAlgebra, phi: &BigRational, fr: Elt) -> AlgebraElement {
    let q = d.qr();
    let x = alg.monomial(fr, phi / &q);
    let quad = alg.scale(&alg.mul(&x, &x), &(&q * &d.chi_f * &d.chi_g));
    let lin = alg.scale(&x, &(&d.a_f * &d.a_g));
    alg.sub(&quad, &lin)
}

/// `𝒫_q = χ_g(q)^{-1} { qχ_fχ_g(φ_0(𝔮)Fr_𝔮/q)^2 - a_q(f)a_q(g)(φ_0(𝔮)Fr_𝔮/q)
/// + χ_f^{-1}a_q(f)^2/q + χ_g^{-1}a_q(g)^2 - (q^2+1)/q
/// - a_q(f)a_q(g)(φ_0(𝔮̄)Fr_𝔮̄/q) + qχ_fχ_g(φ_0(𝔮̄)Fr_𝔮̄/q)^2 }`.
pub fn script_p(d: &HeckeDatum, alg: &FrobeniusAlgebra) -> AlgebraElement {
    let inner = alg.add(
        &alg.add(&frobenius_block(d, alg, &d.phi_q, (1, 0)), &alg.scalar(constant_term(d))),
        &frobenius_block(d, alg, &d.phi_qbar, (0, 1)),
    );
    alg.scale(&inner, &d.chi_g.recip())
}

/// `χ_f^{-1}a_q(f)^2/q + χ_g^{-1}a_q(g)^2 - (q^2+1)/q`.
fn constant_term(d: &HeckeDatum) -> BigRational {
    let q = d.qr();
    &d.a_f * &d.a_f / (&d.chi_f * &q) + &d.a_g * &d.a_g / &d.chi_g - (&q * &q + BigRational::one()) / &q
}

/// `𝒫_q` with `Fr_𝔮, Fr_𝔮̄ ↦ 1`, by direct substitution.
pub fn script_p_scalar(d: &HeckeDatum) -> BigRational {
    let q = d.qr();
    let block = |phi: &BigRational| {
        let x = phi / &q;
        &q * &d.chi_f * &d.chi_g * &x * &x - &d.a_f * &d.a_g * &x
    };
    (block(&d.phi_q) + constant_term(d) + block(&d.phi_qbar)) / &d.chi_g
}

/// Eigenvalues of `Fr_𝔮` on `V^c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenModel {
    /// `φ_0(𝔮) α_i β_j` with `α_i`, `β_j` the roots of `X^2 - a_q X + χ(q) q` for `f`, `g`.
    Tensor,
    /// Four explicit eigenvalues, given as `"n"` or `"n/d"`.
    Explicit([String; 4]),
}

fn parse_rational(s: &str) -> Result<BigRational, EulerError> {
    let bad = || EulerError::Datum(format!("cannot parse eigenvalue {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Coefficients `c_0, ..., c_4` of `P_𝔮(X) = Π (1 - λ_i X)`.
pub fn p_q_poly(d: &HeckeDatum, model: &EigenModel) -> Result<Vec<BigRational>, EulerError> {
    match model {
        EigenModel::Tensor => {
            let q = d.qr();
            let (af, ag, cf, cg, ph) = (&d.a_f, &d.a_g, &d.chi_f, &d.chi_g, &d.phi_q);
            // Elementary symmetric functions of α_i β_j from those of α and β.
            let e1 = af * ag;
            let e2 = &q * (af * af * cg + ag * ag * cf - rat(2) * cf * cg * &q);
            let e3 = af * ag * cf * cg * &q * &q;
            let e4 = cf * cf * cg * cg * &q * &q * &q * &q;
            let e = [BigRational::one(), e1, e2, e3, e4];
            Ok(e.into_iter()
                .enumerate()
                .map(|(k, ek)| {
                    let s = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                    s * ek * ph.pow(k as i32)
                })
                .collect())
        }
        EigenModel::Explicit(ls) => {
            let mut c = vec![BigRational::one()];
            for l in ls {
                let l = parse_rational(l)?;
                let mut next = c.clone();
                next.push(BigRational::zero());
                for (k, ck) in c.iter().enumerate() {
                    next[k + 1] -= &l * ck;
                }
                c = next;
            }
            Ok(c)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub q: u64,
    /// `q - 1`.
    pub modulus: u64,
    /// `𝒫_q - χ_f(q)(φ_0(𝔮̄)Fr_𝔮̄)^2 P_𝔮(Fr_𝔮) ≡ 0 mod (q - 1)`.
    pub pass: bool,
    /// The difference vanishes in `Q[G]`.
    pub exact: bool,
    /// Nonzero residues of the difference as `(i, j, residue)`.
    pub difference: Vec<(u32, u32, String)>,
    pub frobenius_product_trivial: bool,
    pub self_dual: bool,
    /// `q ≡ 1 mod p^M`, so `(q - 1)` is zero in `Z/p^M`.
    pub p_adic_ideal_vanishes: Option<bool>,
    pub model: EigenModel,
    /// The model has been checked against a symbolic expansion under the
    /// conditions `frobenius_product_trivial` and `self_dual`.
    pub model_verified: bool,
}

/// Checks `𝒫_q ≡ χ_f(q)(φ_0(𝔮̄)Fr_𝔮̄)^2 P_𝔮(Fr_𝔮)` with integer reduction of
/// coefficients modulo `q - 1`. `padic = (p, M)` adds the `p`-adic caveat.
pub fn tame_congruence(
    d: &HeckeDatum,
    alg: &FrobeniusAlgebra,
    model: &EigenModel,
    padic: Option<(u64, u32)>,
) -> Result<CongruenceReport, EulerError> {
    let lhs = script_p(d, alg);
    let poly = p_q_poly(d, model)?;
    let v = alg.monomial((0, 1), d.phi_qbar.clone());
    let rhs = alg.scale(&alg.mul(&alg.mul(&v, &v), &alg.eval_poly(&poly, (1, 0))), &d.chi_f);
    let diff = alg.sub(&lhs, &rhs);
    let m = BigInt::from(d.q - 1);
    let residues = alg.reduce_mod(&diff, &m)?;
    let p_adic_ideal_vanishes = padic.map(|(p, digits)| {
        let pm = BigInt::from(p).pow(digits);
        (BigInt::from(d.q) - BigInt::one()).is_multiple_of(&pm)
    });
    let frobenius_product_trivial = alg.frobenius_product_trivial();
    let self_dual = d.self_dual();
    Ok(CongruenceReport {
        q: d.q,
        modulus: d.q - 1,
        pass: residues.is_empty(),
        exact: diff.is_zero(),
        difference: residues.into_iter().map(|((i, j), r)| (i, j, r.to_string())).collect(),
        frobenius_product_trivial,
        self_dual,
        p_adic_ideal_vanishes,
        model_verified: *model == EigenModel::Tensor && frobenius_product_trivial && self_dual,
        model: model.clone(),
    })
}
