//! `Θ_n(f,g) ∈ O[S_{U_n}]^ord`, the restriction `res_{n-1}^n` and the
//! three-term relation.

use crate::eigen::MockEigenData;
use crate::elements::{orbit_weight, twists, TwistOrder};
use crate::ThetaError;
use plocal::matrix::mat_mul;
use plocal::verify::checked_up;
use plocal::{hida_reps, CosetSpace, HeckeOp, Level, Mock, OrdinaryProjector, SparseMat};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

struct LevelData {
    space: CosetSpace,
    proj: OrdinaryProjector,
}

struct HidaData {
    proj: OrdinaryProjector,
    /// `π: S_{U_{n-1} ∩ U_{0,n}} -> S_{U_{n-1}}`.
    down: SparseMat,
    /// A preimage under `π` of each class of `S_{U_{n-1}}`.
    lift: Vec<usize>,
    /// `ν_n[x] = Σ_a [x γ_a]`.
    nu: SparseMat,
}

/// Cached spaces and projectors for one set of eigen data.
pub struct FgContext<'a> {
    pub mock: &'a Mock,
    pub eigen: MockEigenData,
    q: i64,
    levels: Mutex<HashMap<u32, Arc<LevelData>>>,
    hida: Mutex<HashMap<u32, Arc<HidaData>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgThreeTermReport {
    pub n: u32,
    pub a_p: i64,
    pub chi_p: i64,
    /// `pr Θ_{n+1} = a_p Θ_n - χ(p) res Θ_{n-1}` modulo `p^M`.
    pub pass: bool,
    /// `pr Θ_{n+1} = a_p Θ_n - χ(p) Θ~_n`.
    pub tilde_relation: bool,
    /// `Θ~_n = res Θ_{n-1}`.
    pub tilde_equals_res: bool,
    /// `pr Θ~_{n+1} = p Θ_n`.
    pub tilde_norm: bool,
    /// `<1,1,d> Θ~_n = Θ~_n` for `d ≡ 1 mod p^{n-1}`.
    pub diamond_invariant: bool,
    /// `π(e_V(lift y)) = y` for `y = Θ_{n-1}`.
    pub lift_consistent: bool,
    /// `pr Θ_{n+1} ≠ 0`.
    pub nonzero: bool,
}

impl FgThreeTermReport {
    pub fn all_pass(&self) -> bool {
        self.pass && self.tilde_relation && self.tilde_equals_res && self.tilde_norm && self.diamond_invariant && self.lift_consistent
    }
}

fn reduce_vec(v: &[i64], q: i64) -> Vec<i64> {
    v.iter().map(|x| x.rem_euclid(q)).collect()
}

fn combine(a: &[i64], sa: i64, b: &[i64], sb: i64, q: i64) -> Vec<i64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as i128 * sa as i128 + y as i128 * sb as i128).rem_euclid(q as i128)) as i64)
        .collect()
}

impl<'a> FgContext<'a> {
    pub fn new(mock: &'a Mock, eigen: MockEigenData) -> Result<Self, ThetaError> {
        eigen.validate(mock)?;
        let q = eigen.modulus();
        Ok(Self { mock, eigen, q, levels: Mutex::new(HashMap::new()), hida: Mutex::new(HashMap::new()) })
    }

    pub fn modulus(&self) -> i64 {
        self.q
    }

    fn level(&self, n: u32) -> Result<Arc<LevelData>, ThetaError> {
        if let Some(d) = self.levels.lock().expect("level cache").get(&n) {
            return Ok(d.clone());
        }
        let space = self.mock.space(Level::U(n))?;
        let up = checked_up(self.mock, Level::U(n))?;
        let proj = OrdinaryProjector::new(&up, self.mock.p(), self.eigen.m)?;
        let d = Arc::new(LevelData { space, proj });
        self.levels.lock().expect("level cache").insert(n, d.clone());
        Ok(d)
    }

    fn hida(&self, n: u32) -> Result<Arc<HidaData>, ThetaError> {
        if let Some(d) = self.hida.lock().expect("hida cache").get(&n) {
            return Ok(d.clone());
        }
        let mock = self.mock;
        let v = mock.space(Level::Hida(n))?;
        let coarse = self.level(n - 1)?;
        let fine = self.level(n)?;
        let up = checked_up(mock, Level::Hida(n))?;
        let proj = OrdinaryProjector::new(&up, mock.p(), self.eigen.m)?;
        let down = mock.operator(HeckeOp::Pi1, &v, &coarse.space)?;
        let mut lift = vec![usize::MAX; coarse.space.len()];
        for (x, col) in down.cols.iter().enumerate() {
            let (c, _) = col[0];
            if lift[c] == usize::MAX {
                lift[c] = x;
            }
        }
        if lift.contains(&usize::MAX) {
            return Err(ThetaError::Level(format!("projection to level U_{} is not surjective", n - 1)));
        }
        let nu = mock.correspondence(&v, &fine.space, &hida_reps(mock.p(), n), 0)?;
        let d = Arc::new(HidaData { proj, down, lift, nu });
        self.hida.lock().expect("hida cache").insert(n, d.clone());
        Ok(d)
    }

    /// `(U_p'^{-n} e) Σ_{x ∈ S_{Z,n}} w(x) φ([x t_1]) ψ([x t_2]) [x t_3]`, with `ψ` read at `slot2`.
    fn assemble(&self, n: u32, phi: &[i64], slot2: &CosetSpace, psi: &[i64]) -> Result<Vec<i64>, ThetaError> {
        let mock = self.mock;
        let q = self.q;
        let ld = self.level(n)?;
        let source = mock.space(Level::Z(n))?;
        let t = twists(mock.p(), n, TwistOrder::Pullback);
        let terms: Vec<(usize, i64)> = (0..source.len())
            .into_par_iter()
            .map(|x| {
                let (k, hh) = source.rep(x);
                let g = |i: usize| mock.mono.exact(mat_mul(&k, &t[i]));
                let c1 = mock.class_of(&ld.space, &g(0), hh)?;
                let c2 = mock.class_of(slot2, &g(1), hh)?;
                let c3 = mock.class_of(&ld.space, &g(2), hh)?;
                let w = orbit_weight(&source, x) as i128;
                Ok((c3, ((w * phi[c1] as i128 * psi[c2] as i128).rem_euclid(q as i128)) as i64))
            })
            .collect::<Result<_, ThetaError>>()?;
        let mut w = vec![0i64; ld.space.len()];
        for (c, v) in terms {
            w[c] = (w[c] + v) % q;
        }
        Ok(ld.proj.apply_inverse_power(&w, n))
    }

    /// `φ = (U_p'^{-n} e)ᵀ pr_1^{n,ᵀ} f` on `S_{U_n}`.
    fn first_slot(&self, n: u32) -> Result<Vec<i64>, ThetaError> {
        let ld = self.level(n)?;
        let l1 = self.level(1)?;
        let pr = self.mock.operator(HeckeOp::Pi1, &ld.space, &l1.space)?;
        let f = reduce_vec(&self.eigen.f_vec, self.q);
        Ok(ld.proj.apply_inverse_power_t(&pr.apply_t(&f, self.q), n))
    }

    /// `Θ_n(f,g)`.
    pub fn theta(&self, n: u32) -> Result<Vec<i64>, ThetaError> {
        if n == 0 {
            return Err(ThetaError::Level("Θ_n(f,g) needs n >= 1".into()));
        }
        let full = self.mock.space(Level::Full)?;
        let g = reduce_vec(&self.eigen.g_vec, self.q);
        self.assemble(n, &self.first_slot(n)?, &full, &g)
    }

    /// `Θ~_n(f,g)`: the second slot at level `U_1`, pushed to `GL2(Z_p)` by `π_2`.
    pub fn theta_tilde(&self, n: u32) -> Result<Vec<i64>, ThetaError> {
        if n == 0 {
            return Err(ThetaError::Level("Θ~_n(f,g) needs n >= 1".into()));
        }
        let full = self.mock.space(Level::Full)?;
        let l1 = self.level(1)?;
        let pi2 = self.mock.operator(HeckeOp::Pi2, &l1.space, &full)?;
        let psi = pi2.apply_t(&reduce_vec(&self.eigen.g_vec, self.q), self.q);
        self.assemble(n, &self.first_slot(n)?, &l1.space, &psi)
    }

    /// `Θ_1, ..., Θ_top`.
    pub fn tower(&self, top: u32) -> Result<Vec<Vec<i64>>, ThetaError> {
        (1..=top).map(|n| self.theta(n)).collect()
    }

    /// Natural projection `O[S_{U_{n+1}}] -> O[S_{U_n}]`.
    pub fn pr(&self, n: u32, v: &[i64]) -> Result<Vec<i64>, ThetaError> {
        let hi = self.level(n + 1)?;
        let lo = self.level(n)?;
        Ok(self.mock.operator(HeckeOp::Pi1, &hi.space, &lo.space)?.apply(v, self.q))
    }

    /// `res_{n-1}^n y = ν_n(e_V(lift y))` and whether `π(e_V(lift y)) = y`.
    pub fn res(&self, n: u32, y: &[i64]) -> Result<(Vec<i64>, bool), ThetaError> {
        if n < 2 {
            return Err(ThetaError::Level("res needs n >= 2".into()));
        }
        let h = self.hida(n)?;
        let mut w = vec![0i64; h.down.ncols()];
        for (c, &x) in h.lift.iter().enumerate() {
            w[x] = y[c].rem_euclid(self.q);
        }
        let z = h.proj.apply(&w);
        let consistent = h.down.apply(&z, self.q) == reduce_vec(y, self.q);
        Ok((h.nu.apply(&z, self.q), consistent))
    }

    /// Diamond operator `<d>` on `O[S_{U_n}]`.
    pub fn diamond(&self, n: u32, d: i64, v: &[i64]) -> Result<Vec<i64>, ThetaError> {
        let ld = self.level(n)?;
        Ok(self.mock.operator(HeckeOp::Diamond(d), &ld.space, &ld.space)?.apply(v, self.q))
    }

    pub fn verify_three_term(&self, n: u32) -> Result<FgThreeTermReport, ThetaError> {
        if n < 2 {
            return Err(ThetaError::Level("the three-term relation needs n >= 2".into()));
        }
        let q = self.q;
        let p = self.mock.p();
        let (a_p, chi_p) = (self.eigen.a_p, self.eigen.chi_p);
        let lower = self.theta(n - 1)?;
        let mid = self.theta(n)?;
        let upper = self.theta(n + 1)?;
        let lhs = self.pr(n, &upper)?;
        let (res, lift_consistent) = self.res(n, &lower)?;
        let tilde = self.theta_tilde(n)?;
        let tilde_up = self.theta_tilde(n + 1)?;
        let mut diamond_invariant = true;
        for t in 0..p {
            let d = 1 + p.pow(n - 1) * t;
            diamond_invariant &= self.diamond(n, d, &tilde)? == tilde;
        }
        Ok(FgThreeTermReport {
            n,
            a_p,
            chi_p,
            pass: lhs == combine(&mid, a_p, &res, -chi_p, q),
            tilde_relation: lhs == combine(&mid, a_p, &tilde, -chi_p, q),
            tilde_equals_res: tilde == res,
            tilde_norm: self.pr(n, &tilde_up)? == combine(&mid, p, &mid, 0, q),
            diamond_invariant,
            lift_consistent,
            nonzero: lhs.iter().any(|&x| x != 0),
        })
    }
}
