//! Group algebra `Q[G]` of a finite abelian group generated by `Fr_𝔮` and `Fr_𝔮̄`.

use crate::EulerError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Exponents `(i, j)` of `Fr_𝔮^i Fr_𝔮̄^j`.
pub type Elt = (u32, u32);

/// `Z/o_1 × Z/o_2`, optionally modulo `Fr_𝔮 Fr_𝔮̄ = σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusAlgebra {
    pub order_q: u32,
    pub order_qbar: u32,
    /// `σ` with `Fr_𝔮 Fr_𝔮̄ = σ`.
    pub relation: Option<Elt>,
    canon: Vec<Elt>,
}

/// Element of `Q[G]` keyed by canonical group elements; zero terms are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    pub terms: BTreeMap<Elt, BigRational>,
}

impl AlgebraElement {
    pub fn coefficient(&self, g: Elt) -> BigRational {
        self.terms.get(&g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Image under `Fr ↦ 1`.
    pub fn augmentation(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// Every denominator is prime to `p`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.terms.values().all(|c| !c.denom().is_multiple_of(&p))
    }
}

fn insert(terms: &mut BTreeMap<Elt, BigRational>, g: Elt, c: BigRational) {
    let e = terms.entry(g).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        terms.remove(&g);
    }
}

impl FrobeniusAlgebra {
    pub fn new(order_q: u32, order_qbar: u32, relation: Option<Elt>) -> Result<Self, EulerError> {
        if order_q == 0 || order_qbar == 0 {
            return Err(EulerError::Group("generator orders must be positive".into()));
        }
        if let Some((s, t)) = relation {
            if s >= order_q || t >= order_qbar {
                return Err(EulerError::Group(format!("relation element ({s}, {t}) out of range")));
            }
        }
        let (o1, o2) = (order_q as i64, order_qbar as i64);
        // Subgroup generated by Fr_𝔮 Fr_𝔮̄ σ^{-1}.
        let mut sub = vec![(0u32, 0u32)];
        if let Some((s, t)) = relation {
            let h = ((1 - s as i64).rem_euclid(o1) as u32, (1 - t as i64).rem_euclid(o2) as u32);
            let mut x = h;
            while x != (0, 0) {
                sub.push(x);
                x = ((x.0 + h.0) % order_q, (x.1 + h.1) % order_qbar);
            }
        }
        let mut canon = vec![(0, 0); (order_q * order_qbar) as usize];
        for i in 0..order_q {
            for j in 0..order_qbar {
                let best = sub.iter().map(|&(a, b)| ((i + a) % order_q, (j + b) % order_qbar)).min().expect("nonempty");
                canon[(i * order_qbar + j) as usize] = best;
            }
        }
        Ok(Self { order_q, order_qbar, relation, canon })
    }

    /// Canonical form of `Fr_𝔮^i Fr_𝔮̄^j` for arbitrary integer exponents.
    pub fn elt(&self, i: i64, j: i64) -> Elt {
        let i = i.rem_euclid(self.order_q as i64) as u32;
        let j = j.rem_euclid(self.order_qbar as i64) as u32;
        self.canon[(i * self.order_qbar + j) as usize]
    }

    pub fn group_mul(&self, a: Elt, b: Elt) -> Elt {
        self.elt(a.0 as i64 + b.0 as i64, a.1 as i64 + b.1 as i64)
    }

    /// `Fr_𝔮 Fr_𝔮̄ = 1` in the group.
    pub fn frobenius_product_trivial(&self) -> bool {
        self.elt(1, 1) == self.elt(0, 0)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::default()
    }

    pub fn monomial(&self, g: Elt, c: BigRational) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        insert(&mut terms, self.elt(g.0 as i64, g.1 as i64), c);
        AlgebraElement { terms }
    }

    pub fn scalar(&self, c: BigRational) -> AlgebraElement {
        self.monomial((0, 0), c)
    }

    pub fn one(&self) -> AlgebraElement {
        self.scalar(BigRational::one())
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut terms = x.terms.clone();
        for (g, c) in &y.terms {
            insert(&mut terms, *g, c.clone());
        }
        AlgebraElement { terms }
    }

    pub fn scale(&self, x: &AlgebraElement, s: &BigRational) -> AlgebraElement {
        if s.is_zero() {
            return self.zero();
        }
        AlgebraElement { terms: x.terms.iter().map(|(g, c)| (*g, c * s)).collect() }
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.add(x, &self.scale(y, &-BigRational::one()))
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        for (g, a) in &x.terms {
            for (h, b) in &y.terms {
                insert(&mut terms, self.group_mul(*g, *h), a * b);
            }
        }
        AlgebraElement { terms }
    }

    /// `Σ_k c_k g^k`.
    pub fn eval_poly(&self, coeffs: &[BigRational], g: Elt) -> AlgebraElement {
        let mut out = self.zero();
        for (k, c) in coeffs.iter().enumerate() {
            let k = k as i64;
            out = self.add(&out, &self.monomial(self.elt(g.0 as i64 * k, g.1 as i64 * k), c.clone()));
        }
        out
    }

    /// Coefficients reduced into `Z/m`; nonzero residues only. Every denominator
    /// must be prime to `m`.
    pub fn reduce_mod(&self, x: &AlgebraElement, m: &BigInt) -> Result<BTreeMap<Elt, BigInt>, EulerError> {
        let mut out = BTreeMap::new();
        for (g, c) in &x.terms {
            let r = reduce_rational(c, m)?;
            if !r.is_zero() {
                out.insert(*g, r);
            }
        }
        Ok(out)
    }
}

/// `n / d mod m` for `gcd(d, m) = 1`.
pub fn reduce_rational(c: &BigRational, m: &BigInt) -> Result<BigInt, EulerError> {
    if m.is_one() {
        return Ok(BigInt::zero());
    }
    let d = c.denom().mod_floor(m);
    let e = d.extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(EulerError::Reduction(format!("denominator {} is not invertible modulo {m}", c.denom())));
    }
    Ok((c.numer() * e.x).mod_floor(m))
}
