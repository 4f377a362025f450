//! 2x2 integral matrices with entries known modulo a power of `p`.

use crate::PlocalError;
use serde::{Deserialize, Serialize};

/// Row-major `[a, b, c, d]` for `(a b; c d)`.
pub type Mat = [i64; 4];

pub const IDENTITY: Mat = [1, 0, 0, 1];

pub fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn mat_mul_mod(x: &Mat, y: &Mat, q: i64) -> Mat {
    let m = |a: i64, b: i64, c: i64, d: i64| {
        ((a as i128 * b as i128 + c as i128 * d as i128).rem_euclid(q as i128)) as i64
    };
    [
        m(x[0], y[0], x[1], y[2]),
        m(x[0], y[1], x[1], y[3]),
        m(x[2], y[0], x[3], y[2]),
        m(x[2], y[1], x[3], y[3]),
    ]
}

pub fn reduce(x: &Mat, q: i64) -> Mat {
    [x[0].rem_euclid(q), x[1].rem_euclid(q), x[2].rem_euclid(q), x[3].rem_euclid(q)]
}

pub fn adj(x: &Mat) -> Mat {
    [x[3], -x[1], -x[2], x[0]]
}

pub fn det(x: &Mat) -> i128 {
    x[0] as i128 * x[3] as i128 - x[1] as i128 * x[2] as i128
}

pub fn diag(a: i64, d: i64) -> Mat {
    [a, 0, 0, d]
}

pub fn pow_mod(mut b: i64, mut e: u64, q: i64) -> i64 {
    let mut r = 1i64 % q;
    b = b.rem_euclid(q);
    while e > 0 {
        if e & 1 == 1 {
            r = (r as i128 * b as i128 % q as i128) as i64;
        }
        b = (b as i128 * b as i128 % q as i128) as i64;
        e >>= 1;
    }
    r
}

/// Inverse of a unit modulo `q`.
pub fn inv_mod(a: i64, q: i64) -> Option<i64> {
    let (mut r0, mut r1) = (q as i128, a.rem_euclid(q) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(q as i128) as i64)
}

/// Inverse of a matrix with unit determinant modulo `q`.
pub fn inv_mat_mod(x: &Mat, q: i64) -> Option<Mat> {
    let d = (det(x).rem_euclid(q as i128)) as i64;
    let di = inv_mod(d, q)?;
    let a = adj(x);
    Some(reduce(&[a[0] * di % q, a[1] * di % q, a[2] * di % q, a[3] * di % q], q))
}

/// Valuation of `x` modulo `p^prec`; `None` when `x ≡ 0`.
pub fn valuation(x: i128, p: i64, prec: u32) -> Option<u32> {
    let q = (p as i128).pow(prec);
    let mut x = x.rem_euclid(q);
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p as i128 == 0 {
        x /= p as i128;
        v += 1;
    }
    Some(v)
}

/// Smallest generator of `(Z/p^k)^x` for every `k`.
pub fn primitive_root(p: i64) -> i64 {
    let order_mod_p = |g: i64| (1..p).find(|&e| pow_mod(g, e as u64, p) == 1).unwrap_or(p);
    (2..p * p)
        .find(|&g| g % p != 0 && order_mod_p(g) == p - 1 && pow_mod(g, (p - 1) as u64, p * p) != 1)
        .expect("odd prime has a primitive root")
}

/// A matrix whose entries are known modulo `p^prec`, stored in `[0, p^prec)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedMatrix {
    pub m: Mat,
    pub prec: u32,
}

/// The monoid of integral matrices with nonzero determinant, truncated at `p^M`,
/// with a budget `V` on determinant valuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monoid {
    pub p: i64,
    pub m: u32,
    pub budget: u32,
}

impl Monoid {
    pub fn new(p: i64, m: u32, budget: u32) -> Result<Self, PlocalError> {
        if p < 3 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(PlocalError::Config(format!("p = {p} is not an odd prime")));
        }
        if m == 0 || (p as f64).powi(2 * m as i32) > 9.0e18 {
            return Err(PlocalError::Config(format!("precision M = {m} out of range for p = {p}")));
        }
        Ok(Self { p, m, budget })
    }

    pub fn modulus(&self, k: u32) -> i64 {
        self.p.pow(k)
    }

    pub fn exact(&self, m: Mat) -> TruncatedMatrix {
        TruncatedMatrix { m: reduce(&m, self.modulus(self.m)), prec: self.m }
    }

    pub fn mul(&self, x: &TruncatedMatrix, y: &TruncatedMatrix) -> TruncatedMatrix {
        let prec = x.prec.min(y.prec);
        TruncatedMatrix { m: mat_mul_mod(&x.m, &y.m, self.modulus(prec)), prec }
    }

    pub fn det(&self, x: &TruncatedMatrix) -> i64 {
        det(&x.m).rem_euclid(self.modulus(x.prec) as i128) as i64
    }

    /// `None` when the determinant vanishes at the stored precision.
    pub fn det_valuation(&self, x: &TruncatedMatrix) -> Option<u32> {
        valuation(det(&x.m), self.p, x.prec)
    }

    /// `prec - v(det)`, negative when the determinant is invisible.
    pub fn effective_precision(&self, x: &TruncatedMatrix) -> i64 {
        match self.det_valuation(x) {
            Some(v) => x.prec as i64 - v as i64,
            None => -1,
        }
    }

    pub fn checked(&self, x: &TruncatedMatrix) -> Result<u32, PlocalError> {
        let v = self
            .det_valuation(x)
            .ok_or(PlocalError::Precision { need: 1, have: 0 })?;
        if v > self.budget {
            return Err(PlocalError::Budget { valuation: v, budget: self.budget });
        }
        Ok(v)
    }

    pub fn divisible_by_p(&self, x: &TruncatedMatrix) -> bool {
        x.m.iter().all(|e| e % self.p == 0)
    }

    pub fn div_p(&self, x: &TruncatedMatrix) -> Result<TruncatedMatrix, PlocalError> {
        if x.prec == 0 {
            return Err(PlocalError::Precision { need: 1, have: 0 });
        }
        if !self.divisible_by_p(x) {
            return Err(PlocalError::NotDivisible);
        }
        let m = x.m.map(|e| e / self.p);
        Ok(TruncatedMatrix { m: reduce(&m, self.modulus(x.prec - 1)), prec: x.prec - 1 })
    }

    /// Entries modulo `p^k`.
    pub fn residue(&self, x: &TruncatedMatrix, k: u32) -> Result<Mat, PlocalError> {
        if x.prec < k {
            return Err(PlocalError::Precision { need: k, have: x.prec });
        }
        Ok(reduce(&x.m, self.modulus(k)))
    }
}
