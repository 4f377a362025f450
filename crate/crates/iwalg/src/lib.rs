//! Truncated Iwasawa algebra `O[[X]] / omega_N` and the group rings
//! `Lambda_n = O[X] / omega_{n-1}`, with `gamma` corresponding to `1 + X`.
//!
//! Level `n` always means the modulus `omega_{n-1}`.

use num_rational::Rational64;
use padic::{max_digits, PadicScalar, QuadField, QuadScalar, Valuation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IwError {
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("truncation level {have} is below the required {need}")]
    InsufficientTruncation { have: u32, need: u32 },
    #[error("exact division left a nonzero remainder (first nonzero coefficient at degree {degree})")]
    NonzeroRemainder { degree: usize },
    #[error("sup-norm indeterminate at current precision")]
    Indeterminate,
    #[error("level {0} exceeds the precomputed range")]
    LevelTooHigh(u32),
    #[error("trace target level {target} is below source level {source_level}")]
    TraceDown { source_level: u32, target: u32 },
}

/// A polynomial in `X`, reduced mod `omega_trunc` when `trunc` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IwasawaPoly {
    pub coeffs: Vec<QuadScalar>,
    pub trunc: Option<u32>,
}

impl IwasawaPoly {
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Group-ring level `n` when reduced mod `omega_{n-1}`.
    pub fn level(&self) -> Option<u32> {
        self.trunc.map(|t| t + 1)
    }
}

/// Exact integer with full relative precision.
fn exact_int(p: u64, x: u64) -> PadicScalar {
    debug_assert!(x > 0);
    let (mut v, mut u) = (0i32, x);
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    PadicScalar::from_parts(p, v, u, max_digits(p))
}

/// Binomial coefficients `C(n, i)` for `i = 0..=n`, each known mod `p^digits`.
fn binomials(p: u64, n: u64, digits: u32) -> Vec<PadicScalar> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = exact_int(p, 1);
    out.push(c.truncate(digits as i32));
    for i in 1..=n {
        c = c.mul(&exact_int(p, n - i + 1)).div(&exact_int(p, i)).expect("nonzero");
        out.push(c.truncate(digits as i32));
    }
    out
}

/// Arithmetic in `O[X]` and its quotients, with cached `omega_k` and `Phi_k`.
#[derive(Debug, Clone)]
pub struct Iwasawa {
    pub field: QuadField,
    omega: Vec<Vec<QuadScalar>>,
    phi: Vec<Vec<QuadScalar>>,
}

impl Iwasawa {
    /// Precomputes `omega_k` for `k <= max_level` and `Phi_k` for `1 <= k <= max_level`.
    pub fn new(field: QuadField, max_level: u32) -> Self {
        let p = field.ctx.p;
        let digits = field.ctx.digits;
        let mut omega = Vec::new();
        let mut phi = vec![vec![]];
        for k in 0..=max_level {
            let n = p.pow(k);
            let mut c: Vec<QuadScalar> = binomials(p, n, digits).into_iter().map(|x| field.embed(x)).collect();
            c[0] = field.zero();
            omega.push(c);
            if k >= 1 {
                let step = p.pow(k - 1);
                let mut s = vec![field.zero(); ((p - 1) * step + 1) as usize];
                for j in 0..p {
                    for (i, b) in binomials(p, j * step, digits).into_iter().enumerate() {
                        s[i] = field.add(&s[i], &field.embed(b));
                    }
                }
                phi.push(s);
            }
        }
        Iwasawa { field, omega, phi }
    }

    pub fn max_level(&self) -> u32 {
        self.omega.len() as u32 - 1
    }

    /// Dimension of `Lambda_n` over `O`.
    pub fn rank(&self, n: u32) -> usize {
        self.field.ctx.p.pow(n - 1) as usize
    }

    /// `omega_n = (1 + X)^(p^n) - 1`.
    pub fn omega(&self, n: u32) -> Result<IwasawaPoly, IwError> {
        let c = self.omega.get(n as usize).ok_or(IwError::LevelTooHigh(n))?;
        Ok(IwasawaPoly { coeffs: c.clone(), trunc: None })
    }

    /// `Phi_n = sum_{j < p} (1 + X)^(j p^(n-1))`.
    pub fn phi(&self, n: u32) -> Result<IwasawaPoly, IwError> {
        if n == 0 {
            return Err(IwError::ZeroLevel);
        }
        let c = self.phi.get(n as usize).ok_or(IwError::LevelTooHigh(n))?;
        Ok(IwasawaPoly { coeffs: c.clone(), trunc: None })
    }

    /// `prod_{i=lo}^{hi} Phi_i` as a plain polynomial (`1` when empty).
    pub fn phi_product(&self, lo: u32, hi: u32) -> Result<IwasawaPoly, IwError> {
        let mut acc = self.constant(self.field.one());
        for i in lo..=hi {
            if i == 0 {
                continue;
            }
            acc = self.mul_plain(&acc, &self.phi(i)?);
        }
        Ok(acc)
    }

    pub fn constant(&self, c: QuadScalar) -> IwasawaPoly {
        IwasawaPoly { coeffs: vec![c], trunc: None }
    }

    pub fn zero_at(&self, n: u32) -> IwasawaPoly {
        IwasawaPoly { coeffs: vec![self.field.zero(); self.rank(n)], trunc: Some(n - 1) }
    }

    /// Plain polynomial from integer coefficients.
    pub fn from_ints(&self, c: &[i64]) -> IwasawaPoly {
        IwasawaPoly { coeffs: c.iter().map(|&x| self.field.int(x)).collect(), trunc: None }
    }

    /// Element of `Lambda_n` from coefficients (reduced on entry).
    pub fn element(&self, n: u32, coeffs: Vec<QuadScalar>) -> Result<IwasawaPoly, IwError> {
        self.reduce(&IwasawaPoly { coeffs, trunc: None }, n - 1)
    }

    pub fn add(&self, f: &IwasawaPoly, g: &IwasawaPoly) -> IwasawaPoly {
        let n = f.coeffs.len().max(g.coeffs.len());
        let z = self.field.zero();
        let coeffs = (0..n)
            .map(|i| self.field.add(f.coeffs.get(i).unwrap_or(&z), g.coeffs.get(i).unwrap_or(&z)))
            .collect();
        IwasawaPoly { coeffs, trunc: meet(f.trunc, g.trunc) }
    }

    pub fn neg(&self, f: &IwasawaPoly) -> IwasawaPoly {
        IwasawaPoly { coeffs: f.coeffs.iter().map(|c| self.field.neg(c)).collect(), trunc: f.trunc }
    }

    pub fn sub(&self, f: &IwasawaPoly, g: &IwasawaPoly) -> IwasawaPoly {
        self.add(f, &self.neg(g))
    }

    pub fn scale(&self, f: &IwasawaPoly, s: &QuadScalar) -> IwasawaPoly {
        IwasawaPoly { coeffs: f.coeffs.iter().map(|c| self.field.mul(c, s)).collect(), trunc: f.trunc }
    }

    /// Product without reduction.
    pub fn mul_plain(&self, f: &IwasawaPoly, g: &IwasawaPoly) -> IwasawaPoly {
        if f.coeffs.is_empty() || g.coeffs.is_empty() {
            return IwasawaPoly { coeffs: vec![], trunc: None };
        }
        let mut out = vec![self.field.zero(); f.coeffs.len() + g.coeffs.len() - 1];
        for (i, a) in f.coeffs.iter().enumerate() {
            if a.is_zero() && a.precision() >= self.field.ctx.digits as i32 {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
            }
        }
        IwasawaPoly { coeffs: out, trunc: None }
    }

    /// Product, reduced to the coarser truncation of the factors.
    pub fn mul(&self, f: &IwasawaPoly, g: &IwasawaPoly) -> IwasawaPoly {
        let prod = self.mul_plain(f, g);
        match meet(f.trunc, g.trunc) {
            Some(k) => self.reduce(&prod, k).expect("truncation in range"),
            None => prod,
        }
    }

    /// Quotient and remainder on division by a monic polynomial.
    pub fn divmod_monic(&self, f: &IwasawaPoly, g: &IwasawaPoly) -> (IwasawaPoly, IwasawaPoly) {
        let dg = g.coeffs.len() - 1;
        let mut r = f.coeffs.clone();
        if r.len() <= dg {
            r.resize(dg.max(1), self.field.zero());
            return (self.constant(self.field.zero()), IwasawaPoly { coeffs: r, trunc: None });
        }
        let mut q = vec![self.field.zero(); r.len() - dg];
        for i in (dg..r.len()).rev() {
            let c = r[i];
            q[i - dg] = c;
            if c.is_zero() && c.precision() >= self.field.ctx.digits as i32 {
                continue;
            }
            for (j, gj) in g.coeffs.iter().enumerate().take(dg) {
                let t = self.field.mul(&c, gj);
                r[i - dg + j] = self.field.sub(&r[i - dg + j], &t);
            }
            r[i] = self.field.sub(&r[i], &c);
        }
        r.truncate(dg.max(1));
        if dg == 0 {
            r = vec![self.field.zero()];
        }
        (IwasawaPoly { coeffs: q, trunc: None }, IwasawaPoly { coeffs: r, trunc: None })
    }

    /// Division by a monic polynomial that must leave no remainder.
    pub fn exact_div(&self, f: &IwasawaPoly, g: &IwasawaPoly) -> Result<IwasawaPoly, IwError> {
        let (q, r) = self.divmod_monic(f, g);
        if let Some(degree) = r.coeffs.iter().position(|c| !c.is_zero()) {
            return Err(IwError::NonzeroRemainder { degree });
        }
        Ok(q)
    }

    /// Reduction mod `omega_k`, padded to exactly `p^k` coefficients.
    pub fn reduce(&self, f: &IwasawaPoly, k: u32) -> Result<IwasawaPoly, IwError> {
        if let Some(t) = f.trunc {
            if t < k {
                return Err(IwError::InsufficientTruncation { have: t, need: k });
            }
        }
        let w = self.omega(k)?;
        let (_, mut r) = self.divmod_monic(f, &w);
        r.coeffs.resize(self.field.ctx.p.pow(k) as usize, self.field.zero());
        r.trunc = Some(k);
        Ok(r)
    }

    /// `pr`: the image of `f` in `Lambda_n`, i.e. `f mod omega_{n-1}`.
    pub fn project(&self, f: &IwasawaPoly, n: u32) -> Result<IwasawaPoly, IwError> {
        if n == 0 {
            return Err(IwError::ZeroLevel);
        }
        self.reduce(f, n - 1)
    }

    /// `Tr_n^{n2}`: multiplication of a lift by `omega_{n2-1} / omega_{n-1}`.
    pub fn trace(&self, f: &IwasawaPoly, n: u32, n2: u32) -> Result<IwasawaPoly, IwError> {
        if n == 0 {
            return Err(IwError::ZeroLevel);
        }
        if n2 < n {
            return Err(IwError::TraceDown { source_level: n, target: n2 });
        }
        let lift = IwasawaPoly { coeffs: f.coeffs.clone(), trunc: None };
        let ratio = self.phi_product(n, n2 - 1)?;
        self.reduce(&self.mul_plain(&lift, &ratio), n2 - 1)
    }

    /// Smallest coefficient valuation, or `None` when every coefficient is
    /// zero to precision.
    pub fn min_valuation(&self, f: &IwasawaPoly) -> Result<Option<Rational64>, IwError> {
        let mut exact: Option<Rational64> = None;
        let mut zero_floor: Option<Rational64> = None;
        for c in &f.coeffs {
            match self.field.valuation(c) {
                Valuation::Exact(v) => exact = Some(exact.map_or(v, |e| e.min(v))),
                Valuation::ZeroToPrecision(v) => zero_floor = Some(zero_floor.map_or(v, |e| e.min(v))),
            }
        }
        match (exact, zero_floor) {
            (None, _) => Ok(None),
            (Some(e), Some(z)) if z < e => Err(IwError::Indeterminate),
            (Some(e), _) => Ok(Some(e)),
        }
    }

    /// `max |c|_p = p^(-min v(c))`, `0` for the zero element.
    pub fn sup_norm(&self, f: &IwasawaPoly) -> Result<f64, IwError> {
        Ok(match self.min_valuation(f)? {
            None => 0.0,
            Some(v) => (self.field.ctx.p as f64).powf(-(*v.numer() as f64) / (*v.denom() as f64)),
        })
    }

    /// Equality of two elements to the available precision.
    pub fn eq_to_precision(&self, f: &IwasawaPoly, g: &IwasawaPoly) -> bool {
        self.sub(f, g).is_zero()
    }
}

fn meet(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}
