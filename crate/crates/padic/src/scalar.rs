use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{max_digits, PadicError};

/// Valuation of a precision-tracked value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Exact(Rational64),
    /// The value is zero modulo the given power of `p`.
    ZeroToPrecision(Rational64),
}

impl Valuation {
    pub fn exact(self) -> Option<Rational64> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::ZeroToPrecision(_) => None,
        }
    }

    /// Lower bound for the valuation (the precision for indeterminate zeros).
    pub fn lower_bound(self) -> Rational64 {
        match self {
            Valuation::Exact(v) | Valuation::ZeroToPrecision(v) => v,
        }
    }
}

/// `p^shift * unit + O(p^(shift + rel))` with `p` not dividing `unit`, or a
/// zero known to absolute precision `shift` (then `rel == 0`, `unit == 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicScalar {
    p: u64,
    shift: i32,
    rel: u32,
    unit: u64,
}

fn pow(p: u64, k: u32) -> u64 {
    p.pow(k)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(m as i128) as u64
}

impl PadicScalar {
    /// Builds and normalizes `p^shift * residue` known to relative precision `rel`.
    pub fn from_parts(p: u64, shift: i32, residue: u64, rel: u32) -> Self {
        let rel = rel.min(max_digits(p));
        let m = pow(p, rel);
        Self::normalize(p, shift, residue % m, rel)
    }

    /// Integer `x` known mod `p^abs_prec`.
    pub fn from_int(p: u64, x: i64, abs_prec: i32) -> Self {
        if abs_prec <= 0 {
            return Self::zero_to(p, abs_prec);
        }
        let rel = (abs_prec as u32).min(max_digits(p));
        let m = pow(p, rel) as i128;
        let r = (x as i128).rem_euclid(m) as u64;
        Self::normalize(p, 0, r, rel)
    }

    /// Zero known modulo `p^abs_prec`.
    pub fn zero_to(p: u64, abs_prec: i32) -> Self {
        PadicScalar { p, shift: abs_prec, rel: 0, unit: 0 }
    }

    fn normalize(p: u64, mut shift: i32, mut unit: u64, mut rel: u32) -> Self {
        if unit == 0 {
            return Self::zero_to(p, shift + rel as i32);
        }
        while unit.is_multiple_of(p) {
            unit /= p;
            shift += 1;
            rel -= 1;
        }
        PadicScalar { p, shift, rel, unit }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is known modulo `p^precision`.
    pub fn precision(&self) -> i32 {
        self.shift + self.rel as i32
    }

    /// Relative precision (digits after the leading one).
    pub fn relative_precision(&self) -> u32 {
        self.rel
    }

    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::ZeroToPrecision(Rational64::from_integer(self.shift as i64))
        } else {
            Valuation::Exact(Rational64::from_integer(self.shift as i64))
        }
    }

    /// Integer valuation, or the precision for indeterminate zeros.
    pub fn val_or_prec(&self) -> i32 {
        self.shift
    }

    /// Unit part and shift: `self = p^shift * unit`.
    pub fn parts(&self) -> (i32, u64, u32) {
        (self.shift, self.unit, self.rel)
    }

    /// Residue in `[0, p^k)` when the value is integral and known mod `p^k`.
    pub fn residue_mod(&self, k: u32) -> Option<u64> {
        if self.is_zero() {
            return if self.shift >= k as i32 { Some(0) } else { None };
        }
        if self.shift < 0 || self.precision() < k as i32 {
            return None;
        }
        if self.shift >= k as i32 {
            return Some(0);
        }
        let m = pow(self.p, k) as u128;
        Some(((self.unit as u128 * pow(self.p, self.shift as u32) as u128) % m) as u64)
    }

    /// Signed representative in `(-p^k/2, p^k/2]`.
    pub fn signed_residue(&self, k: u32) -> Option<i64> {
        let r = self.residue_mod(k)? as i64;
        let m = pow(self.p, k) as i64;
        Some(if r > m / 2 { r - m } else { r })
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        let m = pow(self.p, self.rel);
        PadicScalar { unit: m - self.unit, ..*self }
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let prec = self.precision().min(o.precision());
        let lo = self.shift.min(o.shift);
        if prec <= lo {
            return Self::zero_to(self.p, prec);
        }
        let k = (prec - lo) as u32;
        let m = pow(self.p, k) as u128;
        let lift = |x: &Self| -> u128 {
            if x.is_zero() || x.shift >= prec {
                0
            } else {
                (x.unit as u128 % m) * pow(self.p, (x.shift - lo) as u32) as u128 % m
            }
        };
        let s = (lift(self) + lift(o)) % m;
        Self::normalize(self.p, lo, s as u64, k)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        if self.is_zero() || o.is_zero() {
            let prec = (self.shift + o.precision()).min(o.shift + self.precision());
            return Self::zero_to(self.p, prec);
        }
        let rel = self.rel.min(o.rel);
        let m = pow(self.p, rel) as u128;
        let u = (self.unit as u128 % m) * (o.unit as u128 % m) % m;
        Self::normalize(self.p, self.shift + o.shift, u as u64, rel)
    }

    /// Multiplicative inverse; relative precision is preserved, so absolute
    /// precision drops by twice the valuation.
    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let m = pow(self.p, self.rel);
        let u = if self.rel == 0 { 0 } else { mod_inverse(self.unit % m, m) };
        Ok(PadicScalar { p: self.p, shift: -self.shift, rel: self.rel, unit: u })
    }

    pub fn div(&self, o: &Self) -> Result<Self, PadicError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Multiplication by `p^k`, exact.
    pub fn shift_by(&self, k: i32) -> Self {
        PadicScalar { shift: self.shift + k, ..*self }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(self.p, k, self.precision().max(0) + 64))
    }

    /// Caps the absolute precision at `prec`.
    pub fn truncate(&self, prec: i32) -> Self {
        if prec >= self.precision() {
            return *self;
        }
        if self.is_zero() || prec <= self.shift {
            return Self::zero_to(self.p, prec);
        }
        let rel = (prec - self.shift) as u32;
        Self::normalize(self.p, self.shift, self.unit % pow(self.p, rel), rel)
    }

    /// Equality up to the smaller of the two precisions.
    pub fn eq_to_precision(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_parts(self.p, 0, 1, max_digits(self.p));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.p, self.shift)
        } else {
            write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, self.shift, self.p, self.precision())
        }
    }
}
