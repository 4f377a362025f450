//! Ordinary projectors of Hecke operators modulo `p^M`.

use crate::hecke::SparseMat;
use crate::matrix::inv_mod;
use crate::PlocalError;
use serde::{Deserialize, Serialize};

/// Square matrix modulo `q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseMat {
    pub n: usize,
    pub q: i64,
    pub data: Vec<i64>,
}

impl DenseMat {
    pub fn identity(n: usize, q: i64) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1 % q;
        }
        Self { n, q, data }
    }

    pub fn from_sparse(a: &SparseMat, q: i64) -> Self {
        Self { n: a.rows, q, data: a.to_dense(q) }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, rhs: &DenseMat) -> DenseMat {
        let n = self.n;
        let q = self.q as u128;
        let mut out = vec![0i64; n * n];
        let mut acc = vec![0u128; n];
        for i in 0..n {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..n {
                let a = self.data[i * n + k] as u128;
                if a == 0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (x, &b) in acc.iter_mut().zip(row) {
                    *x += a * b as u128;
                }
            }
            for j in 0..n {
                out[i * n + j] = (acc[j] % q) as i64;
            }
        }
        DenseMat { n, q: self.q, data: out }
    }

    pub fn pow(&self, mut e: u64) -> DenseMat {
        let mut base = self.clone();
        let mut r = DenseMat::identity(self.n, self.q);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| {
                let s: i128 = (0..self.n).map(|j| self.data[i * self.n + j] as i128 * v[j] as i128).sum();
                s.rem_euclid(self.q as i128) as i64
            })
            .collect()
    }
}

/// `e = lim A^{k!}`, computed literally by `X <- X^k` until `X^2 = X`.
pub fn projector_by_factorial(a: &DenseMat, max_k: u64) -> Result<DenseMat, PlocalError> {
    let mut x = a.clone();
    for k in 2..=max_k {
        x = x.pow(k);
        if x.mul(&x) == x {
            return Ok(x);
        }
    }
    Err(PlocalError::NoStabilization { iterations: max_k })
}

/// Rank of a row list modulo a prime.
pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    pivots_mod_p(rows, p).len()
}

/// Pivot columns, in order, of row reduction modulo `p`.
fn pivots_mod_p(rows: &[Vec<i64>], p: i64) -> Vec<usize> {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, pr);
        let inv = inv_mod(m[row][col], p).expect("nonzero residue mod p");
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && other[col] != 0 {
                let f = other[col];
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Inverse modulo `p^M` of a square matrix that is invertible modulo `p`.
fn invert(a: &[Vec<i64>], p: i64, q: i64) -> Result<Vec<Vec<i64>>, PlocalError> {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            row.extend((0..n).map(|j| (i == j) as i128));
            row
        })
        .collect();
    let qq = q as i128;
    for col in 0..n {
        let pr = (col..n)
            .find(|&r| m[r][col].rem_euclid(p as i128) != 0)
            .ok_or(PlocalError::NotInvertible)?;
        m.swap(col, pr);
        let inv = inv_mod((m[col][col].rem_euclid(qq)) as i64, q).ok_or(PlocalError::NotInvertible)? as i128;
        for x in m[col].iter_mut() {
            *x = (*x * inv).rem_euclid(qq);
        }
        let pivot_row = m[col].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != col && other[col] != 0 {
                let f = other[col];
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(qq);
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].iter().map(|&x| x as i64).collect()).collect())
}

fn small_mul(a: &[Vec<i64>], b: &[Vec<i64>], q: i64) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let s: i128 = row.iter().zip(b).map(|(&x, r)| x as i128 * r[j] as i128).sum();
                    s.rem_euclid(q as i128) as i64
                })
                .collect()
        })
        .collect()
}

fn small_identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

fn small_pow(a: &[Vec<i64>], mut e: u64, q: i64) -> Vec<Vec<i64>> {
    let mut base = a.to_vec();
    let mut r = small_identity(a.len());
    while e > 0 {
        if e & 1 == 1 {
            r = small_mul(&r, &base, q);
        }
        e >>= 1;
        if e > 0 {
            base = small_mul(&base, &base, q);
        }
    }
    r
}

/// The ordinary idempotent of `A` in factored form `e = P·G`, where the
/// columns of `P` span the part on which `A` is invertible and `G·P = 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrdinaryProjector {
    pub dim: usize,
    pub rank: usize,
    pub q: i64,
    /// `dim x rank`, row-major.
    basis: Vec<Vec<i64>>,
    /// `rank x dim`.
    coords: Vec<Vec<i64>>,
    /// `A` on the ordinary part in the basis `P`.
    action: Vec<Vec<i64>>,
    action_inv: Vec<Vec<i64>>,
    /// Multiplier `s` with `A^{s·m}` killing the nilpotent part.
    pub fitting_index: usize,
}

impl OrdinaryProjector {
    /// Fitting decomposition of `A` modulo `p^m`: `B = A^K` kills the
    /// topologically nilpotent part once `K ≥ ν·m`, `ν` the Fitting index mod `p`.
    pub fn new(a: &SparseMat, p: i64, m: u32) -> Result<Self, PlocalError> {
        let d = a.rows;
        let q = p.pow(m);
        let mut b = DenseMat::identity(d, q);
        let mut done = 0u64;
        let mut s = 1usize;
        while s <= d.max(1) {
            let k = s as u64 * m as u64;
            for _ in done..k {
                b = sparse_times_dense(a, &b);
            }
            done = k;
            if let Ok(proj) = Self::attempt(a, &b, k, p, q, s) {
                return Ok(proj);
            }
            s *= 2;
        }
        Err(PlocalError::NoStabilization { iterations: done })
    }

    fn attempt(a: &SparseMat, b: &DenseMat, k: u64, p: i64, q: i64, s: usize) -> Result<Self, PlocalError> {
        let d = a.rows;
        let brows = rows_of(b);
        let cols = pivots_mod_p(&brows, p);
        let rank = cols.len();
        let basis: Vec<Vec<i64>> = (0..d).map(|i| cols.iter().map(|&j| b.get(i, j)).collect()).collect();
        let basis_t: Vec<Vec<i64>> = cols.iter().map(|&j| (0..d).map(|i| b.get(i, j)).collect()).collect();
        let rows = pivots_mod_p(&basis_t, p);
        let pr: Vec<Vec<i64>> = rows.iter().map(|&i| basis[i].clone()).collect();
        let pr_inv = invert(&pr, p, q)?;
        let ap_cols: Vec<Vec<i64>> = basis_t.iter().map(|c| a.apply(c, q)).collect();
        let ap_r: Vec<Vec<i64>> = rows.iter().map(|&i| ap_cols.iter().map(|c| c[i]).collect()).collect();
        let action = small_mul(&pr_inv, &ap_r, q);
        // The span of P must be A-stable: A·P = P·M_A.
        let pm = small_mul(&basis, &action, q);
        if (0..d).any(|i| (0..rank).any(|j| pm[i][j] != ap_cols[j][i])) {
            return Err(PlocalError::NoStabilization { iterations: k });
        }
        let action_inv = invert(&action, p, q)?;
        let mb_inv = small_pow(&action_inv, k, q);
        let b_rows: Vec<Vec<i64>> = rows.iter().map(|&i| brows[i].clone()).collect();
        let coords = small_mul(&small_mul(&mb_inv, &pr_inv, q), &b_rows, q);
        let proj = Self { dim: d, rank, q, basis, coords, action, action_inv, fitting_index: s };
        proj.validate(a)?;
        Ok(proj)
    }

    fn validate(&self, a: &SparseMat) -> Result<(), PlocalError> {
        let q = self.q;
        let gp = small_mul(&self.coords, &self.basis, q);
        if gp != small_identity(self.rank) {
            return Err(PlocalError::NoStabilization { iterations: self.fitting_index as u64 });
        }
        // G·A = M_A·G makes e commute with A.
        let ga: Vec<Vec<i64>> = self.coords.iter().map(|row| a.apply_t(row, q)).collect();
        if ga != small_mul(&self.action, &self.coords, q) {
            return Err(PlocalError::NoStabilization { iterations: self.fitting_index as u64 });
        }
        Ok(())
    }

    fn coords_of(&self, v: &[i64]) -> Vec<i64> {
        self.coords
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(v).map(|(&x, &y)| x as i128 * y as i128).sum();
                s.rem_euclid(self.q as i128) as i64
            })
            .collect()
    }

    fn coords_to_vec(&self, c: &[i64]) -> Vec<i64> {
        self.basis
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(c).map(|(&x, &y)| x as i128 * y as i128).sum();
                s.rem_euclid(self.q as i128) as i64
            })
            .collect()
    }

    fn act(m: &[Vec<i64>], c: &[i64], q: i64) -> Vec<i64> {
        m.iter()
            .map(|row| {
                let s: i128 = row.iter().zip(c).map(|(&x, &y)| x as i128 * y as i128).sum();
                s.rem_euclid(q as i128) as i64
            })
            .collect()
    }

    fn act_t(m: &[Vec<i64>], c: &[i64], q: i64) -> Vec<i64> {
        let n = m.first().map_or(0, |r| r.len());
        (0..n)
            .map(|j| {
                let s: i128 = m.iter().zip(c).map(|(row, &y)| row[j] as i128 * y as i128).sum();
                s.rem_euclid(q as i128) as i64
            })
            .collect()
    }

    /// `A^{-k} e v`.
    pub fn apply_inverse_power(&self, v: &[i64], k: u32) -> Vec<i64> {
        let mut c = self.coords_of(v);
        for _ in 0..k {
            c = Self::act(&self.action_inv, &c, self.q);
        }
        self.coords_to_vec(&c)
    }

    /// `e v`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.apply_inverse_power(v, 0)
    }

    /// `(A^{-k} e)ᵀ v`.
    pub fn apply_inverse_power_t(&self, v: &[i64], k: u32) -> Vec<i64> {
        let mut c = Self::act_t(&self.basis, v, self.q);
        for _ in 0..k {
            c = Self::act_t(&self.action_inv, &c, self.q);
        }
        Self::act_t(&self.coords, &c, self.q)
    }

    /// The idempotent as a dense matrix.
    pub fn dense(&self) -> DenseMat {
        let mut data = vec![0i64; self.dim * self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let s: i128 = (0..self.rank).map(|t| self.basis[i][t] as i128 * self.coords[t][j] as i128).sum();
                data[i * self.dim + j] = s.rem_euclid(self.q as i128) as i64;
            }
        }
        DenseMat { n: self.dim, q: self.q, data }
    }
}

fn rows_of(x: &DenseMat) -> Vec<Vec<i64>> {
    x.data.chunks(x.n.max(1)).map(|r| r.to_vec()).collect()
}

/// `A · X` for sparse `A`.
fn sparse_times_dense(a: &SparseMat, x: &DenseMat) -> DenseMat {
    let n = x.n;
    let q = x.q as i128;
    let mut out = vec![0i128; n * n];
    for (k, col) in a.cols.iter().enumerate() {
        let row = &x.data[k * n..(k + 1) * n];
        for &(r, c) in col {
            let dst = &mut out[r * n..(r + 1) * n];
            for (o, &y) in dst.iter_mut().zip(row) {
                *o += c as i128 * y as i128;
            }
        }
    }
    DenseMat { n, q: x.q, data: out.into_iter().map(|v| v.rem_euclid(q) as i64).collect() }
}
