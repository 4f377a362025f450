//! Hecke correspondences on mock spaces as exact integer matrices.

use crate::matrix::{diag, Mat, IDENTITY};
use crate::space::{CosetSpace, Mock};
use crate::PlocalError;
use serde::{Deserialize, Serialize};

/// Sparse integer matrix stored by columns; entries sorted by row and merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

fn merge(mut col: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    col.sort_unstable();
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for (r, c) in col {
        match out.last_mut() {
            Some((lr, lc)) if *lr == r => *lc += c,
            _ => out.push((r, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

impl SparseMat {
    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        Self { rows, cols: cols.into_iter().map(merge).collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, cols: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// `self · v` modulo `q` (`q = 0` for exact arithmetic).
    pub fn apply(&self, v: &[i64], q: i64) -> Vec<i64> {
        let mut out = vec![0i128; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j] == 0 {
                continue;
            }
            for &(r, c) in col {
                out[r] += c as i128 * v[j] as i128;
            }
        }
        finish(out, q)
    }

    /// `selfᵀ · v` modulo `q`.
    pub fn apply_t(&self, v: &[i64], q: i64) -> Vec<i64> {
        let out = self
            .cols
            .iter()
            .map(|col| col.iter().map(|&(r, c)| c as i128 * v[r] as i128).sum())
            .collect();
        finish(out, q)
    }

    /// `self ∘ rhs`, exact.
    pub fn compose(&self, rhs: &SparseMat) -> SparseMat {
        let cols = rhs
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .flat_map(|&(k, c)| self.cols[k].iter().map(move |&(r, d)| (r, c * d)))
                    .collect()
            })
            .collect();
        SparseMat::from_columns(self.rows, cols)
    }

    pub fn add(&self, rhs: &SparseMat) -> SparseMat {
        self.combine(rhs, 1)
    }

    pub fn sub(&self, rhs: &SparseMat) -> SparseMat {
        self.combine(rhs, -1)
    }

    pub fn scale(&self, s: i64) -> SparseMat {
        let cols = self.cols.iter().map(|c| c.iter().map(|&(r, x)| (r, x * s)).collect()).collect();
        SparseMat::from_columns(self.rows, cols)
    }

    fn combine(&self, rhs: &SparseMat, sign: i64) -> SparseMat {
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&(r, x)| (r, sign * x))).collect())
            .collect();
        SparseMat::from_columns(self.rows, cols)
    }

    pub fn column_sums(&self) -> Vec<i64> {
        self.cols.iter().map(|c| c.iter().map(|&(_, x)| x).sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Dense row-major copy reduced modulo `q`.
    pub fn to_dense(&self, q: i64) -> Vec<i64> {
        let n = self.ncols();
        let mut d = vec![0i64; self.rows * n];
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, c) in col {
                d[r * n + j] = c.rem_euclid(q);
            }
        }
        d
    }
}

fn finish(v: Vec<i128>, q: i64) -> Vec<i64> {
    v.into_iter()
        .map(|x| if q == 0 { x as i64 } else { x.rem_euclid(q as i128) as i64 })
        .collect()
}

/// Hecke operators at `p` and degeneracy maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeckeOp {
    /// `[x] -> Σ_j [x (p j; 0 1)]`.
    UpPrime,
    /// `U_p'` plus `[x diag(1, p)]`, on `GL2(Z_p)`-level spaces.
    TpPrime,
    /// `[x] -> [x s_p^{-1}]`.
    Sp,
    /// `[x] -> [x s_p]`.
    SpInv,
    /// `[x] -> [x diag(1, a)]`.
    Diamond(i64),
    /// `[x] -> [x]` to a coarser level.
    Pi1,
    /// `[x] -> [x diag(1/p, 1)]` to a coarser level.
    Pi2,
}

impl HeckeOp {
    /// Right translates and the extra power of `p·I` applied to each.
    pub fn translates(&self, p: i64) -> (Vec<Mat>, i32) {
        let up: Vec<Mat> = (0..p).map(|j| [p, j, 0, 1]).collect();
        match *self {
            HeckeOp::UpPrime => (up, 0),
            HeckeOp::TpPrime => (up.into_iter().chain([diag(1, p)]).collect(), 0),
            HeckeOp::Sp => (vec![IDENTITY], -1),
            HeckeOp::SpInv => (vec![IDENTITY], 1),
            HeckeOp::Diamond(a) => (vec![diag(1, a)], 0),
            HeckeOp::Pi1 => (vec![IDENTITY], 0),
            HeckeOp::Pi2 => (vec![diag(1, p)], -1),
        }
    }
}

/// `γ_{z,b} = (z b; 0 1)`, `z ∈ (Z/p^n)^×`, `b ∈ Z/p^n`.
pub fn zero_to_z_reps(p: i64, n: u32) -> Vec<Mat> {
    let q = p.pow(n);
    (0..q)
        .flat_map(|z| (0..q).map(move |b| (z, b)))
        .filter(|(z, _)| z % p != 0)
        .map(|(z, b)| [z, b, 0, 1])
        .collect()
}

/// `γ_a = diag(1, a)`, `a = 1 + p^(n-1) t`, `t ∈ Z/p`.
pub fn hida_reps(p: i64, n: u32) -> Vec<Mat> {
    (0..p).map(|t| diag(1, 1 + p.pow(n.saturating_sub(1)) * t)).collect()
}

impl Mock {
    /// `[x] -> Σ_r [x r]` from `src` to `dst`, each term shifted by `p^shift`.
    pub fn correspondence(
        &self,
        src: &CosetSpace,
        dst: &CosetSpace,
        right: &[Mat],
        shift: i32,
    ) -> Result<SparseMat, PlocalError> {
        let mut cols = Vec::with_capacity(src.len());
        for x in 0..src.len() {
            let (rep, hh) = src.rep(x);
            let col = right
                .iter()
                .map(|r| Ok((self.translate(dst, &rep, hh, r, shift)?, 1)))
                .collect::<Result<Vec<_>, PlocalError>>()?;
            cols.push(col);
        }
        Ok(SparseMat::from_columns(dst.len(), cols))
    }

    pub fn operator(&self, op: HeckeOp, src: &CosetSpace, dst: &CosetSpace) -> Result<SparseMat, PlocalError> {
        match op {
            HeckeOp::Pi1 | HeckeOp::Pi2 => {}
            _ if src.level != dst.level => {
                return Err(PlocalError::LevelMismatch(format!("{op:?} maps {:?} to itself", src.level)))
            }
            HeckeOp::TpPrime if src.level != crate::Level::Full => {
                return Err(PlocalError::LevelMismatch("T_p' acts on GL2(Z_p)-level spaces".into()))
            }
            _ => {}
        }
        let (right, shift) = op.translates(self.p());
        self.correspondence(src, dst, &right, shift)
    }

    /// Checks that `[x] -> Σ_r [x r]` does not depend on the representative of `x`.
    pub fn check_well_defined(
        &self,
        src: &CosetSpace,
        dst: &CosetSpace,
        right: &[Mat],
        shift: i32,
    ) -> Result<(), PlocalError> {
        let canonical = self.correspondence(src, dst, right, shift)?;
        let alternatives: Vec<(Mat, bool)> = self
            .gamma
            .iter()
            .map(|g| (*g, true))
            .chain(src.level.generators(self.p()).into_iter().map(|u| (u, false)))
            .collect();
        for x in 0..src.len() {
            let (rep, hh) = src.rep(x);
            for (m, left) in &alternatives {
                let alt = if *left { crate::matrix::mat_mul(m, &rep) } else { crate::matrix::mat_mul(&rep, m) };
                let col = right
                    .iter()
                    .map(|r| Ok((self.translate(dst, &alt, hh, r, shift)?, 1)))
                    .collect::<Result<Vec<_>, PlocalError>>()?;
                if merge(col) != canonical.cols[x] {
                    return Err(PlocalError::Config(format!(
                        "correspondence is not well defined on {:?}: class {x} moved by {m:?}",
                        src.level
                    )));
                }
            }
        }
        Ok(())
    }
}
