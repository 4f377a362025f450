//! Gaussian elimination over `O = Z_p[alpha]` with full pivoting on the
//! smallest valuation, so the reduced matrix stays integral.

#![allow(clippy::needless_range_loop)]

use num_rational::Rational64;
use padic::{QuadField, QuadScalar, Valuation};

/// Row-reduction of a fixed matrix, reusable for many right-hand sides.
#[derive(Debug, Clone)]
pub struct Elimination {
    field: QuadField,
    rows: usize,
    cols: usize,
    /// `(row position after reduction, column)` of each pivot.
    pivots: Vec<usize>,
    /// `transform * original = reduced`.
    transform: Vec<Vec<QuadScalar>>,
    reduced: Vec<Vec<QuadScalar>>,
}

fn val(f: &QuadField, x: &QuadScalar) -> Option<Rational64> {
    match f.valuation(x) {
        Valuation::Exact(v) => Some(v),
        Valuation::ZeroToPrecision(_) => None,
    }
}

impl Elimination {
    pub fn new(field: QuadField, matrix: Vec<Vec<QuadScalar>>, cols: usize) -> Self {
        let rows = matrix.len();
        let mut a = matrix;
        let mut t: Vec<Vec<QuadScalar>> = (0..rows)
            .map(|i| (0..rows).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        let mut pivots = vec![];
        let mut used_col = vec![false; cols];
        for r in 0..rows {
            let mut best: Option<(Rational64, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(r) {
                for (j, x) in row.iter().enumerate() {
                    if used_col[j] {
                        continue;
                    }
                    if let Some(v) = val(&field, x) {
                        if best.is_none_or(|b| v < b.0) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            a.swap(r, pi);
            t.swap(r, pi);
            let inv = field.inv(&a[r][pj]).expect("pivot is nonzero");
            for x in a[r].iter_mut() {
                *x = field.mul(x, &inv);
            }
            for x in t[r].iter_mut() {
                *x = field.mul(x, &inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let c = a[i][pj];
                if c.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let d = field.mul(&c, &a[r][j]);
                    a[i][j] = field.sub(&a[i][j], &d);
                }
                for j in 0..rows {
                    let d = field.mul(&c, &t[r][j]);
                    t[i][j] = field.sub(&t[i][j], &d);
                }
            }
            used_col[pj] = true;
            pivots.push(pj);
        }
        Elimination { field, rows, cols, pivots, transform: t, reduced: a }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solution with all free variables set to zero, or the first
    /// inconsistent row of the reduced system.
    pub fn solve(&self, b: &[QuadScalar]) -> Result<Vec<QuadScalar>, usize> {
        let f = &self.field;
        let tb: Vec<QuadScalar> = self
            .transform
            .iter()
            .map(|row| row.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y))))
            .collect();
        for (i, x) in tb.iter().enumerate().skip(self.rank()) {
            if !x.is_zero() {
                return Err(i);
            }
        }
        let mut sol = vec![f.zero(); self.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            sol[c] = tb[i];
        }
        Ok(sol)
    }

    /// A basis of the kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<QuadScalar>> {
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (i, &c) in self.pivots.iter().enumerate() {
                    v[c] = f.neg(&self.reduced[i][free]);
                }
                v
            })
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
}
