//! Eigen data `(f, g)` on the mock spaces: `f` a `U_p'`-ordinary eigenfunction
//! at level `U_1`, `g` a `T_p'`- and `S_p`-eigenfunction at level `GL2(Z_p)`.

#![allow(clippy::needless_range_loop)]

use crate::ThetaError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use plocal::verify::checked_up;
use plocal::{HeckeOp, Level, Mock, OrdinaryProjector, SparseMat};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenProvenance {
    Space,
    Injected,
}

/// Integer `(T_p', S_p)` eigenvalue pairs of the space of functions on `S_{U_0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    /// `(a_p, χ(p), multiplicity)`.
    pub pairs: Vec<(i64, i64, usize)>,
    /// Dimension of the space.
    pub dim: usize,
    /// Some eigenvalue `a_p` is divisible by `p`.
    pub non_ordinary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockEigenData {
    pub p: i64,
    pub m: u32,
    /// Function on `S_{U_1}`.
    pub f_vec: Vec<i64>,
    /// Its `U_p'` eigenvalue.
    pub f_eigenvalue: i64,
    /// Function on `S_{U_0}`.
    pub g_vec: Vec<i64>,
    pub a_p: i64,
    pub chi_p: i64,
    pub provenance: EigenProvenance,
    pub spectrum: Option<Spectrum>,
}

/// `A^T - λ` stacked over several operators, as exact rows.
fn shifted_transpose(ops: &[(&SparseMat, i64)]) -> Vec<Vec<i64>> {
    let mut rows = vec![];
    for (a, lambda) in ops {
        let n = a.ncols();
        for (j, col) in a.cols.iter().enumerate() {
            let mut row = vec![0i64; n];
            for &(r, c) in col {
                row[r] += c;
            }
            row[j] -= lambda;
            rows.push(row);
        }
    }
    rows
}

/// Primitive integer basis of the rational kernel of `rows`.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, pr);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..ncols {
                    let d = &f * &m[row][j];
                    m[i][j] = &m[i][j] - d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = vec![];
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        basis.push(ints.iter().map(|x| (x / &g).to_i64().expect("small kernel vector")).collect());
    }
    basis
}

fn reduce_vec(v: &[i64], q: i64) -> Vec<i64> {
    v.iter().map(|x| x.rem_euclid(q)).collect()
}

struct Operators {
    tp: SparseMat,
    sp: SparseMat,
    up1: SparseMat,
}

fn operators(mock: &Mock) -> Result<Operators, ThetaError> {
    let full = mock.space(Level::Full)?;
    let tp = mock.operator(HeckeOp::TpPrime, &full, &full)?;
    let sp = mock.operator(HeckeOp::Sp, &full, &full)?;
    let up1 = checked_up(mock, Level::U(1))?;
    Ok(Operators { tp, sp, up1 })
}

impl MockEigenData {
    /// Integer eigenpairs of `(T_p'ᵀ, S_pᵀ)` with `|a_p| ≤ p + 1` and `χ(p) = ±1`.
    pub fn spectrum(mock: &Mock) -> Result<Spectrum, ThetaError> {
        let ops = operators(mock)?;
        let p = mock.p();
        let dim = ops.tp.ncols();
        let mut pairs = vec![];
        for a in -(p + 1)..=(p + 1) {
            for chi in [1, -1] {
                let k = integer_kernel(&shifted_transpose(&[(&ops.tp, a), (&ops.sp, chi)]), dim);
                if !k.is_empty() {
                    pairs.push((a, chi, k.len()));
                }
            }
        }
        let non_ordinary = pairs.iter().any(|&(a, _, _)| a % p == 0);
        Ok(Spectrum { pairs, dim, non_ordinary })
    }

    /// Eigen data read off the space. With `want = Some((a_p, χ))` that pair is
    /// required; otherwise a non-ordinary pair is preferred, then the largest `a_p`.
    pub fn from_space(mock: &Mock, want: Option<(i64, i64)>) -> Result<Self, ThetaError> {
        let ops = operators(mock)?;
        let spectrum = Self::spectrum(mock)?;
        let p = mock.p();
        let (a_p, chi_p) = match want {
            Some(w) => {
                if !spectrum.pairs.iter().any(|&(a, c, _)| (a, c) == w) {
                    return Err(ThetaError::Eigen(format!(
                        "no eigenfunction with (a_p, chi(p)) = {w:?}; spectrum {:?}",
                        spectrum.pairs
                    )));
                }
                w
            }
            None => spectrum
                .pairs
                .iter()
                .map(|&(a, c, _)| (a, c))
                .min_by_key(|&(a, c)| (a % p != 0, -a, -c))
                .ok_or_else(|| ThetaError::Eigen("no integer eigenvalues".into()))?,
        };
        let g_vec = integer_kernel(&shifted_transpose(&[(&ops.tp, a_p), (&ops.sp, chi_p)]), ops.tp.ncols())
            .into_iter()
            .next()
            .expect("pair taken from the spectrum");
        let dim1 = ops.up1.ncols();
        let mut candidates: Vec<i64> = (-p..=p).filter(|l| l % p != 0).collect();
        candidates.sort_by_key(|&l| (l.abs(), -l));
        let (f_eigenvalue, f_vec) = candidates
            .iter()
            .find_map(|&l| integer_kernel(&shifted_transpose(&[(&ops.up1, l)]), dim1).into_iter().next().map(|v| (l, v)))
            .ok_or_else(|| ThetaError::Ordinarity("U_p' has no integer unit eigenvalue at level U_1".into()))?;
        let data = Self {
            p,
            m: mock.mono.m,
            f_vec,
            f_eigenvalue,
            g_vec,
            a_p,
            chi_p,
            provenance: EigenProvenance::Space,
            spectrum: Some(spectrum),
        };
        data.validate(mock)?;
        Ok(data)
    }

    /// Externally supplied eigen data, checked modulo `p^M`.
    pub fn injected(
        mock: &Mock,
        f_vec: Vec<i64>,
        f_eigenvalue: i64,
        g_vec: Vec<i64>,
        a_p: i64,
        chi_p: i64,
    ) -> Result<Self, ThetaError> {
        let data = Self {
            p: mock.p(),
            m: mock.mono.m,
            f_vec,
            f_eigenvalue,
            g_vec,
            a_p,
            chi_p,
            provenance: EigenProvenance::Injected,
            spectrum: None,
        };
        data.validate(mock)?;
        Ok(data)
    }

    /// `f = g = 0` with the given Hecke parameters.
    pub fn zero(mock: &Mock, a_p: i64, chi_p: i64) -> Result<Self, ThetaError> {
        let d0 = mock.space(Level::Full)?.len();
        let d1 = mock.space(Level::U(1))?.len();
        Self::injected(mock, vec![0; d1], 1, vec![0; d0], a_p, chi_p)
    }

    pub fn modulus(&self) -> i64 {
        self.p.pow(self.m)
    }

    /// Eigen-equations modulo `p^M` and survival of `f` under `e_{U_p'}ᵀ`.
    pub fn validate(&self, mock: &Mock) -> Result<(), ThetaError> {
        let ops = operators(mock)?;
        let q = self.modulus();
        if self.f_vec.len() != ops.up1.ncols() || self.g_vec.len() != ops.tp.ncols() {
            return Err(ThetaError::Eigen("eigenvector lengths do not match the spaces".into()));
        }
        if self.f_eigenvalue % self.p == 0 {
            return Err(ThetaError::Ordinarity(format!("U_p' eigenvalue {} is not a unit", self.f_eigenvalue)));
        }
        let f = reduce_vec(&self.f_vec, q);
        let g = reduce_vec(&self.g_vec, q);
        let scaled = |v: &[i64], s: i64| reduce_vec(&v.iter().map(|x| x * s).collect::<Vec<_>>(), q);
        if ops.up1.apply_t(&f, q) != scaled(&f, self.f_eigenvalue) {
            return Err(ThetaError::Eigen("f is not a U_p' eigenfunction".into()));
        }
        if ops.tp.apply_t(&g, q) != scaled(&g, self.a_p) {
            return Err(ThetaError::Eigen("g is not a T_p' eigenfunction".into()));
        }
        if ops.sp.apply_t(&g, q) != scaled(&g, self.chi_p) {
            return Err(ThetaError::Eigen("g is not an S_p eigenfunction".into()));
        }
        let e = OrdinaryProjector::new(&ops.up1, self.p, self.m)?;
        if e.apply_inverse_power_t(&f, 0) != f {
            return Err(ThetaError::Ordinarity("f does not survive the ordinary projector".into()));
        }
        Ok(())
    }

    pub fn is_ordinary(&self) -> bool {
        self.a_p % self.p != 0
    }
}
