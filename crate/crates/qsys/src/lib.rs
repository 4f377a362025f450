//! Three-term towers over free `Lambda_n`-modules: synthesis from a signed
//! pair, exact verification, signed decomposition, stabilization at a Hecke
//! root, distribution certificates and the level-wise matrix bridge.

mod linalg;

pub use linalg::Elimination;

use iwalg::{IwError, Iwasawa, IwasawaPoly};
use logmat::{adjugate, scalar_mul, scalar_pow, LogError, PolyMat, ScalarMat, SignedMatrixFamily};
use num_rational::Rational64;
use padic::{PadicError, QuadScalar};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsysError {
    #[error(transparent)]
    Log(#[from] LogError),
    #[error(transparent)]
    Iw(#[from] IwError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("tower needs at least {need} levels, has {have}")]
    TooShort { need: u32, have: u32 },
    #[error("rank mismatch: expected {expected}, got {got}")]
    Rank { expected: usize, got: usize },
    #[error("adjugate image at level {level} (component {component}) is not divisible by the Phi-product")]
    Divisibility { level: u32, component: usize },
    #[error("no signed pair reproduces level {level} (component {component})")]
    Inconsistent { level: u32, component: usize },
}

/// `kappa_n` for `n = 1..=N`; `levels[n-1][i]` lies in `Lambda_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QSystemTower {
    pub rank: usize,
    pub levels: Vec<Vec<IwasawaPoly>>,
}

impl QSystemTower {
    pub fn top(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn kappa(&self, n: u32) -> &[IwasawaPoly] {
        &self.levels[n as usize - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Root {
    Alpha,
    Beta,
}

/// `z_{n,xi}` for `n = 2..=N`; `levels[n-2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizedTower {
    pub root: Root,
    pub xi: QuadScalar,
    pub levels: Vec<Vec<IwasawaPoly>>,
    /// First level `n >= 3` with `pr z_n != z_{n-1}`.
    pub first_incompatible: Option<u32>,
}

impl StabilizedTower {
    pub fn z(&self, n: u32) -> &[IwasawaPoly] {
        &self.levels[n as usize - 2]
    }

    pub fn top(&self) -> u32 {
        self.levels.len() as u32 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeTermReport {
    pub pass: bool,
    pub first_failure: Option<u32>,
}

/// A kernel element of the tower map that survives reduction mod `omega_{N-2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ambiguity {
    /// Dimension over `O` of the kernel's image mod `omega_{N-2}`.
    pub dimension: usize,
    pub witness: [IwasawaPoly; 2],
    /// The kernel element mod `omega_{N-1}` reducing to `witness`.
    pub lift: [IwasawaPoly; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `kappa_sharp`, `kappa_flat` mod `omega_{N-2}`.
    pub sharp: Vec<IwasawaPoly>,
    pub flat: Vec<IwasawaPoly>,
    /// The solution mod `omega_{N-1}` from which they were reduced.
    pub sharp_full: Vec<IwasawaPoly>,
    pub flat_full: Vec<IwasawaPoly>,
    /// Levels whose adjugate image was certified divisible.
    pub certified_levels: Vec<u32>,
    /// `None` when the pair is unique mod `omega_{N-2}`.
    pub ambiguity: Option<Ambiguity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub n: u32,
    /// `min v(z_n) + lambda (n-1)`, `None` for zero.
    pub scaled_valuation: Option<Rational64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionCertificate {
    pub lambda: Rational64,
    /// Certified bound `p^(-bound_valuation)`, here `|xi|^-2`.
    pub bound_valuation: Rational64,
    /// Smallest scaled valuation over all levels (`None` for the zero tower).
    pub observed_valuation: Option<Rational64>,
    pub levels: Vec<LevelCheck>,
    /// `(level, component, coefficient index)` of the first violation of (a).
    pub failure: Option<(u32, usize, usize)>,
    pub compatible: bool,
    pub top: Vec<IwasawaPoly>,
    pub pass: bool,
}

impl DistributionCertificate {
    /// Observed norm bound as a real number.
    pub fn observed_bound(&self, p: u64) -> f64 {
        match self.observed_valuation {
            None => 0.0,
            Some(v) => (p as f64).powf(-(*v.numer() as f64) / (*v.denom() as f64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub pass: bool,
    pub first_failure: Option<u32>,
    pub levels_checked: Vec<u32>,
}

/// Tower machinery for one signed family and a top level `N`.
#[derive(Debug)]
pub struct QSystem {
    pub fam: SignedMatrixFamily,
    pub top: u32,
    /// `C_{n-1} ... C_1 mod omega_{n-1}` at index `n - 1`.
    products: Vec<PolyMat>,
    solver: OnceLock<Elimination>,
}

impl QSystem {
    pub fn new(fam: SignedMatrixFamily, top: u32) -> Result<Self, QsysError> {
        if top < 1 {
            return Err(QsysError::TooShort { need: 1, have: top });
        }
        let mut products = vec![];
        for n in 1..=top {
            products.push(fam.c_product_mod(1, n - 1, n - 1)?);
        }
        Ok(QSystem { fam, top, products, solver: OnceLock::new() })
    }

    pub fn iw(&self) -> &Iwasawa {
        &self.fam.iw
    }

    /// `Theta_n [x; y] = C_{n-1} ... C_1 [pr x; pr y] mod omega_{n-1}`.
    pub fn theta_map(&self, n: u32, x: &IwasawaPoly, y: &IwasawaPoly) -> Result<[IwasawaPoly; 2], QsysError> {
        let iw = self.iw();
        let v = [iw.project(x, n)?, iw.project(y, n)?];
        Ok(logmat::mat_vec(iw, &self.products[n as usize - 1], &v, Some(n - 1))?)
    }

    /// Builds `kappa_n` as the first row of `Theta_n [sharp; flat]`.
    pub fn synth_tower(&self, sharp: &[IwasawaPoly], flat: &[IwasawaPoly]) -> Result<QSystemTower, QsysError> {
        if sharp.len() != flat.len() {
            return Err(QsysError::Rank { expected: sharp.len(), got: flat.len() });
        }
        let mut levels = vec![];
        for n in 1..=self.top {
            let mut row = vec![];
            for (x, y) in sharp.iter().zip(flat) {
                let [k, _] = self.theta_map(n, x, y)?;
                row.push(k);
            }
            levels.push(row);
        }
        Ok(QSystemTower { rank: sharp.len(), levels })
    }

    /// `pr kappa_n = a_p kappa_{n-1} - chi(p) Tr kappa_{n-2}` for `3 <= n <= N`.
    pub fn verify_three_term(&self, t: &QSystemTower) -> Result<ThreeTermReport, QsysError> {
        let iw = self.iw();
        let f = iw.field;
        let ap = f.embed(f.a_p);
        let chi = f.embed(f.chi_p);
        for n in 3..=t.top() {
            for i in 0..t.rank {
                let lhs = iw.project(&t.kappa(n)[i], n - 1)?;
                let tr = iw.trace(&t.kappa(n - 2)[i], n - 2, n - 1)?;
                let rhs = iw.sub(&iw.scale(&t.kappa(n - 1)[i], &ap), &iw.scale(&tr, &chi));
                if !iw.eq_to_precision(&lhs, &rhs) {
                    return Ok(ThreeTermReport { pass: false, first_failure: Some(n) });
                }
            }
        }
        Ok(ThreeTermReport { pass: true, first_failure: None })
    }

    /// `[kappa_n; -chi(p) Tr kappa_{n-1}]` at level `n >= 2`.
    fn paired(&self, t: &QSystemTower, n: u32, i: usize) -> Result<[IwasawaPoly; 2], QsysError> {
        let iw = self.iw();
        let chi = iw.field.embed(iw.field.chi_p);
        let tr = iw.trace(&t.kappa(n - 1)[i], n - 1, n)?;
        Ok([t.kappa(n)[i].clone(), iw.neg(&iw.scale(&tr, &chi))])
    }

    fn unknowns(&self) -> usize {
        2 * self.iw().rank(self.top)
    }

    /// Matrix of `v -> (first row of Theta_n v)_{n <= N}` on coefficient vectors.
    fn stacked_matrix(&self) -> Result<Vec<Vec<QuadScalar>>, QsysError> {
        let iw = self.iw();
        let f = iw.field;
        let d = iw.rank(self.top);
        let mut rows: Vec<Vec<QuadScalar>> = vec![];
        for n in 1..=self.top {
            let dn = iw.rank(n);
            let mut block = vec![vec![f.zero(); 2 * d]; dn];
            let omega = iw.omega(n - 1)?;
            for c in 0..2 {
                let mut cur = self.products[n as usize - 1][0][c].coeffs.clone();
                cur.resize(dn, f.zero());
                for i in 0..d {
                    for (k, x) in cur.iter().enumerate() {
                        block[k][c * d + i] = *x;
                    }
                    let top = cur[dn - 1];
                    cur.rotate_right(1);
                    cur[0] = f.zero();
                    for (k, w) in omega.coeffs.iter().enumerate().take(dn) {
                        cur[k] = f.sub(&cur[k], &f.mul(&top, w));
                    }
                }
            }
            rows.extend(block);
        }
        Ok(rows)
    }

    fn solver(&self) -> Result<&Elimination, QsysError> {
        if let Some(s) = self.solver.get() {
            return Ok(s);
        }
        let m = self.stacked_matrix()?;
        let e = Elimination::new(self.iw().field, m, self.unknowns());
        Ok(self.solver.get_or_init(|| e))
    }

    fn split(&self, v: &[QuadScalar]) -> Result<[IwasawaPoly; 2], QsysError> {
        let iw = self.iw();
        let d = iw.rank(self.top);
        Ok([iw.element(self.top, v[..d].to_vec())?, iw.element(self.top, v[d..].to_vec())?])
    }

    /// Signed pair reproducing the tower. The adjugate images are certified
    /// to lie in the image of the trace from level 1, the pair is solved
    /// against every level at once and re-synthesized as a check.
    pub fn decompose(&self, t: &QSystemTower) -> Result<Decomposition, QsysError> {
        if t.top() != self.top {
            return Err(QsysError::TooShort { need: self.top, have: t.top() });
        }
        let iw = self.iw();
        let mut certified_levels = vec![];
        for n in 2..=self.top {
            let adj = adjugate(iw, &self.products[n as usize - 1]);
            let phis = iw.phi_product(1, n - 1)?;
            for i in 0..t.rank {
                let w = self.paired(t, n, i)?;
                let y = logmat::mat_vec(iw, &adj, &w, Some(n - 1))?;
                for e in &y {
                    let plain = IwasawaPoly { coeffs: e.coeffs.clone(), trunc: None };
                    if iw.exact_div(&plain, &phis).is_err() {
                        return Err(QsysError::Divisibility { level: n, component: i });
                    }
                }
            }
            certified_levels.push(n);
        }
        let solver = self.solver()?;
        let mut sharp_full = vec![];
        let mut flat_full = vec![];
        for i in 0..t.rank {
            let b: Vec<QuadScalar> = (1..=self.top).flat_map(|n| t.kappa(n)[i].coeffs.clone()).collect();
            let sol = solver.solve(&b).map_err(|row| QsysError::Inconsistent { level: self.level_of_row(row), component: i })?;
            let [x, y] = self.split(&sol)?;
            sharp_full.push(x);
            flat_full.push(y);
        }
        let again = self.synth_tower(&sharp_full, &flat_full)?;
        for n in 1..=self.top {
            for i in 0..t.rank {
                if !iw.eq_to_precision(&again.kappa(n)[i], &t.kappa(n)[i]) {
                    return Err(QsysError::Inconsistent { level: n, component: i });
                }
            }
        }
        let target = self.top.saturating_sub(1).max(1);
        let sharp = sharp_full.iter().map(|x| iw.project(x, target)).collect::<Result<_, _>>()?;
        let flat = flat_full.iter().map(|x| iw.project(x, target)).collect::<Result<_, _>>()?;
        Ok(Decomposition { sharp, flat, sharp_full, flat_full, certified_levels, ambiguity: self.ambiguity()? })
    }

    pub fn decompose_sharp_flat(&self, t: &QSystemTower) -> Result<(Vec<IwasawaPoly>, Vec<IwasawaPoly>), QsysError> {
        let d = self.decompose(t)?;
        Ok((d.sharp, d.flat))
    }

    fn level_of_row(&self, row: usize) -> u32 {
        let mut acc = 0;
        for n in 1..=self.top {
            acc += self.iw().rank(n);
            if row < acc {
                return n;
            }
        }
        self.top
    }

    /// Kernel of the tower map reduced mod `omega_{N-2}`.
    pub fn ambiguity(&self) -> Result<Option<Ambiguity>, QsysError> {
        let iw = self.iw();
        let target = self.top.saturating_sub(1).max(1);
        let mut projected = vec![];
        let mut first = None;
        for v in self.solver()?.kernel_basis() {
            let [x, y] = self.split(&v)?;
            let (px, py) = (iw.project(&x, target)?, iw.project(&y, target)?);
            if (!px.is_zero() || !py.is_zero()) && first.is_none() {
                first = Some(([px.clone(), py.clone()], [x, y]));
            }
            projected.push(px.coeffs.into_iter().chain(py.coeffs).collect::<Vec<_>>());
        }
        let Some((witness, lift)) = first else { return Ok(None) };
        let cols = projected[0].len();
        let transposed: Vec<Vec<QuadScalar>> = (0..cols).map(|j| projected.iter().map(|r| r[j]).collect()).collect();
        let dimension = Elimination::new(iw.field, transposed, projected.len()).rank();
        Ok(Some(Ambiguity { dimension, witness, lift }))
    }

    pub fn root(&self, r: Root) -> QuadScalar {
        match r {
            Root::Alpha => self.fam.alpha,
            Root::Beta => self.fam.beta,
        }
    }

    /// `z_{n,xi} = xi^-n (kappa_n - (chi(p)/xi) Tr kappa_{n-1})` for `n >= 2`.
    pub fn stabilize(&self, t: &QSystemTower, root: Root) -> Result<StabilizedTower, QsysError> {
        if t.top() < 2 {
            return Err(QsysError::TooShort { need: 2, have: t.top() });
        }
        let iw = self.iw();
        let f = iw.field;
        let xi = self.root(root);
        let xi_inv = f.inv(&xi)?;
        let c = f.mul(&f.embed(f.chi_p), &xi_inv);
        let mut levels = vec![];
        for n in 2..=t.top() {
            let s = f.pow(&xi_inv, n);
            let mut row = vec![];
            for i in 0..t.rank {
                let tr = iw.trace(&t.kappa(n - 1)[i], n - 1, n)?;
                let inner = iw.sub(&t.kappa(n)[i], &iw.scale(&tr, &c));
                row.push(iw.scale(&inner, &s));
            }
            levels.push(row);
        }
        let mut first_incompatible = None;
        for n in 3..=t.top() {
            let ok = (0..t.rank).all(|i| {
                let hi = &levels[n as usize - 2][i];
                let lo = &levels[n as usize - 3][i];
                iw.project(hi, n - 1).map(|h| iw.eq_to_precision(&h, lo)).unwrap_or(false)
            });
            if !ok {
                first_incompatible = Some(n);
                break;
            }
        }
        Ok(StabilizedTower { root, xi, levels, first_incompatible })
    }

    /// Conditions (a) `||p^(lambda (n-1)) z_n|| <= |xi|^-2` and (b)
    /// compatibility on the finite tower.
    pub fn assemble_distribution(&self, s: &StabilizedTower, lambda: Rational64) -> Result<DistributionCertificate, QsysError> {
        let iw = self.iw();
        let bound_valuation = -lambda * 2;
        let mut levels = vec![];
        let mut failure = None;
        let mut observed: Option<Rational64> = None;
        for n in 2..=s.top() {
            let shift = lambda * Rational64::from_integer(n as i64 - 1);
            let mut level_min: Option<Rational64> = None;
            for (i, z) in s.z(n).iter().enumerate() {
                if let Some(v) = iw.min_valuation(z)? {
                    let sv = v + shift;
                    level_min = Some(level_min.map_or(sv, |m| m.min(sv)));
                    if sv < bound_valuation && failure.is_none() {
                        let idx = z
                            .coeffs
                            .iter()
                            .position(|c| iw.field.valuation(c).exact() == Some(v))
                            .unwrap_or(0);
                        failure = Some((n, i, idx));
                    }
                }
            }
            if let Some(m) = level_min {
                observed = Some(observed.map_or(m, |o| o.min(m)));
            }
            levels.push(LevelCheck { n, scaled_valuation: level_min, pass: level_min.is_none_or(|m| m >= bound_valuation) });
        }
        let compatible = s.first_incompatible.is_none();
        Ok(DistributionCertificate {
            lambda,
            bound_valuation,
            observed_valuation: observed,
            levels,
            pass: failure.is_none() && compatible,
            failure,
            compatible,
            top: s.z(s.top()).to_vec(),
        })
    }

    /// `A^-1 = [[a_p, 1], [-chi(p) p, 0]]`, integral.
    pub fn a_inverse(&self) -> ScalarMat {
        let f = self.iw().field;
        [[f.embed(f.a_p), f.one()], [f.neg(&f.embed(f.chi_p_times_p())), f.zero()]]
    }

    /// `A^-n Q [z_{n,alpha}; z_{n,beta}] = (alpha - beta) Theta_n [sharp; flat]`
    /// at every level `2 <= n <= N`.
    pub fn matrix_bridge_check(
        &self,
        s_alpha: &StabilizedTower,
        s_beta: &StabilizedTower,
        sharp: &[IwasawaPoly],
        flat: &[IwasawaPoly],
    ) -> Result<BridgeReport, QsysError> {
        let iw = self.iw();
        let f = iw.field;
        let ab = f.sub(&self.fam.alpha, &self.fam.beta);
        let top = s_alpha.top().min(s_beta.top()).min(self.top);
        let mut levels_checked = vec![];
        for n in 2..=top {
            let m = scalar_mul(&f, &scalar_pow(&f, &self.a_inverse(), n), &self.fam.q);
            for i in 0..sharp.len() {
                let (za, zb) = (&s_alpha.z(n)[i], &s_beta.z(n)[i]);
                let lhs0 = iw.add(&iw.scale(za, &m[0][0]), &iw.scale(zb, &m[0][1]));
                let lhs1 = iw.add(&iw.scale(za, &m[1][0]), &iw.scale(zb, &m[1][1]));
                let [r0, r1] = self.theta_map(n, &sharp[i], &flat[i])?;
                let ok = iw.eq_to_precision(&lhs0, &iw.scale(&r0, &ab)) && iw.eq_to_precision(&lhs1, &iw.scale(&r1, &ab));
                if !ok {
                    return Ok(BridgeReport { pass: false, first_failure: Some(n), levels_checked });
                }
            }
            levels_checked.push(n);
        }
        Ok(BridgeReport { pass: true, first_failure: None, levels_checked })
    }
}
