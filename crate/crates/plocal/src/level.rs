//! Level subgroups of `GL2(Z_p)` and of its cube, as congruence patterns.

use crate::matrix::{det, diag, primitive_root, Mat};
use serde::{Deserialize, Serialize};

/// A congruence subgroup of `GL2(Z_p)` described modulo `p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    /// `GL2(Z_p)`.
    Full,
    /// `U_n`: `(a *; 0 a)`.
    U(u32),
    /// `U_{Z,n}`: `(a 0; 0 a)`.
    Z(u32),
    /// `U_{0,n}`: `(* *; 0 *)`.
    Zero(u32),
    /// `U_{1,n}`: `(* *; 0 1)`.
    One(u32),
    /// `U^{1,1}_n`: `(1 *; 0 1)`.
    OneOne(u32),
    /// `(a 0; * a)`, one factor of the lower-triangular triple level.
    Lower(u32),
    /// `(* 0; * 1)`.
    LowerOne(u32),
    /// `(1 0; * 1)`.
    LowerOneOne(u32),
    /// `U_{n-1} ∩ U_{0,n}`: `c ≡ 0 mod p^n`, `a ≡ d mod p^(n-1)`.
    Hida(u32),
}

impl Level {
    /// Exponent `n` of the modulus the pattern is read at.
    pub fn n(&self) -> u32 {
        match *self {
            Level::Full => 0,
            Level::U(n)
            | Level::Z(n)
            | Level::Zero(n)
            | Level::One(n)
            | Level::OneOne(n)
            | Level::Lower(n)
            | Level::LowerOne(n)
            | Level::LowerOneOne(n)
            | Level::Hida(n) => n,
        }
    }

    /// Pattern test for a matrix already reduced modulo `p^n`.
    pub fn contains(&self, p: i64, k: &Mat) -> bool {
        let n = self.n();
        let q = p.pow(n);
        let z = |x: i64| x.rem_euclid(q) == 0;
        let unit = n == 0 || det(k).rem_euclid(p as i128) != 0;
        let [a, b, c, d] = *k;
        unit && match *self {
            Level::Full => true,
            Level::U(_) => z(c) && z(a - d),
            Level::Z(_) => z(b) && z(c) && z(a - d),
            Level::Zero(_) => z(c),
            Level::One(_) => z(c) && z(d - 1),
            Level::OneOne(_) => z(c) && z(a - 1) && z(d - 1),
            Level::Lower(_) => z(b) && z(a - d),
            Level::LowerOne(_) => z(b) && z(d - 1),
            Level::LowerOneOne(_) => z(b) && z(a - 1) && z(d - 1),
            Level::Hida(n) => z(c) && (a - d).rem_euclid(p.pow(n.saturating_sub(1))) == 0,
        }
    }

    /// Integral unit-determinant matrices whose images generate the level modulo `p^n`.
    pub fn generators(&self, p: i64) -> Vec<Mat> {
        let g = primitive_root(p);
        let up = [1, 1, 0, 1];
        let lo = [1, 0, 1, 1];
        match *self {
            Level::Full => vec![up, lo, diag(g, 1), diag(1, g)],
            Level::U(_) => vec![up, diag(g, g)],
            Level::Z(_) => vec![diag(g, g)],
            Level::Zero(_) => vec![up, diag(g, 1), diag(1, g)],
            Level::One(_) => vec![up, diag(g, 1)],
            Level::OneOne(_) => vec![up],
            Level::Lower(_) => vec![lo, diag(g, g)],
            Level::LowerOne(_) => vec![lo, diag(g, 1)],
            Level::LowerOneOne(_) => vec![lo],
            Level::Hida(n) if n >= 2 => vec![up, diag(g, g), diag(1, 1 + p.pow(n - 1))],
            Level::Hida(_) => vec![up, diag(g, 1), diag(1, g)],
        }
    }

    /// The same family one step down (`Full` at `n = 0`).
    pub fn at(&self, n: u32) -> Level {
        if n == 0 {
            return Level::Full;
        }
        match *self {
            Level::Full => Level::Full,
            Level::U(_) => Level::U(n),
            Level::Z(_) => Level::Z(n),
            Level::Zero(_) => Level::Zero(n),
            Level::One(_) => Level::One(n),
            Level::OneOne(_) => Level::OneOne(n),
            Level::Lower(_) => Level::Lower(n),
            Level::LowerOne(_) => Level::LowerOne(n),
            Level::LowerOneOne(_) => Level::LowerOneOne(n),
            Level::Hida(_) => Level::Hida(n),
        }
    }
}

/// How the components of a triple level are tied together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coupling {
    /// Direct product.
    None,
    /// A common scalar `a·I` in every component.
    Scalar,
    /// A common `diag(1, a0)` on the right of every component.
    Corner,
}

/// Levels inside `GL2(Z_p)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TripleLevel {
    /// `U_{Z,(n)}`: `(a_i *; 0 a_0)` with a common `a_0`.
    Z(u32),
    /// `U_(n)`: `(a *; 0 a)` with a common `a`.
    U(u32),
    /// `U^(n)`: `(a 0; * a)` with a common `a`.
    Upper(u32),
    /// `U^Z_(n)`: `(a_i 0; * a_0)` with a common `a_0`.
    ZLower(u32),
    /// `U_n^3`.
    Spl(u32),
    /// `U_{1,n}^3`.
    One(u32),
}

impl TripleLevel {
    pub fn n(&self) -> u32 {
        match *self {
            TripleLevel::Z(n)
            | TripleLevel::U(n)
            | TripleLevel::Upper(n)
            | TripleLevel::ZLower(n)
            | TripleLevel::Spl(n)
            | TripleLevel::One(n) => n,
        }
    }

    /// Component level and coupling: the triple level is `component^3` extended by the coupling torus.
    pub fn structure(&self) -> (Level, Coupling) {
        match *self {
            TripleLevel::Z(n) => (Level::One(n), Coupling::Corner),
            TripleLevel::U(n) => (Level::OneOne(n), Coupling::Scalar),
            TripleLevel::Upper(n) => (Level::LowerOneOne(n), Coupling::Scalar),
            TripleLevel::ZLower(n) => (Level::LowerOne(n), Coupling::Corner),
            TripleLevel::Spl(n) => (Level::U(n), Coupling::None),
            TripleLevel::One(n) => (Level::One(n), Coupling::None),
        }
    }

    pub fn at(&self, n: u32) -> TripleLevel {
        match *self {
            TripleLevel::Z(_) => TripleLevel::Z(n),
            TripleLevel::U(_) => TripleLevel::U(n),
            TripleLevel::Upper(_) => TripleLevel::Upper(n),
            TripleLevel::ZLower(_) => TripleLevel::ZLower(n),
            TripleLevel::Spl(_) => TripleLevel::Spl(n),
            TripleLevel::One(_) => TripleLevel::One(n),
        }
    }

    /// Pattern test for a triple of matrices reduced modulo `p^n`.
    pub fn contains(&self, p: i64, k: &[Mat; 3]) -> bool {
        let q = p.pow(self.n());
        let z = |x: i64| x.rem_euclid(q) == 0;
        if !k.iter().all(|m| det(m).rem_euclid(p as i128) != 0) {
            return false;
        }
        let (a0, d0) = (k[0][0], k[0][3]);
        match *self {
            TripleLevel::Z(_) => k.iter().all(|m| z(m[2]) && z(m[3] - d0)),
            TripleLevel::U(_) => k.iter().all(|m| z(m[2]) && z(m[0] - a0) && z(m[3] - a0)),
            TripleLevel::Upper(_) => k.iter().all(|m| z(m[1]) && z(m[0] - a0) && z(m[3] - a0)),
            TripleLevel::ZLower(_) => k.iter().all(|m| z(m[1]) && z(m[3] - d0)),
            TripleLevel::Spl(n) => k.iter().all(|m| Level::U(n).contains(p, m)),
            TripleLevel::One(n) => k.iter().all(|m| Level::One(n).contains(p, m)),
        }
    }
}
