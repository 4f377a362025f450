//! `Δ_n`, `Θ_{U_(n)}`, the natural projections and the triple `U_p'`.

use crate::vector::ThetaVector;
use crate::ThetaError;
use plocal::matrix::{diag, mat_mul, reduce};
use plocal::{CosetSpace, Level, Mat, Mock, TripleKey, TripleLevel};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Order of the three twist matrices of the diagonal embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistOrder {
    /// `ι(x)·u·ι(η_p^n)`: `(p^n 0; 0 1), (p^n 1; 0 1), (0 1; -p^n 0)`.
    Pullback,
    /// `(p^n 1; 0 1), (p^n 0; 0 1), (0 1; -p^n 0)`.
    Remark,
}

/// `τ_{p^n} = (0 1; -p^n 0)`.
fn tau(q: i64) -> Mat {
    [0, 1, -q, 0]
}

pub fn twists(p: i64, n: u32, order: TwistOrder) -> [Mat; 3] {
    let q = p.pow(n);
    let (a, b) = ([q, 0, 0, 1], [q, 1, 0, 1]);
    match order {
        TwistOrder::Pullback => [a, b, tau(q)],
        TwistOrder::Remark => [b, a, tau(q)],
    }
}

fn check_n(n: u32) -> Result<(), ThetaError> {
    if n == 0 {
        return Err(ThetaError::Level("theta elements need n >= 1".into()));
    }
    Ok(())
}

/// Number of points of `GL2(Z/p^n)/U` in the class `x`; the fundamental
/// vector of a quotient by a group with stabilizers counts each class this often.
pub fn orbit_weight(space: &CosetSpace, x: usize) -> i64 {
    space.table.points(x % space.classes()) as i64
}

/// `Σ_x w(x) Σ_{terms of x} [term]` over the classes of `base`.
fn collect(
    mock: &Mock,
    target: TripleLevel,
    base: &CosetSpace,
    per_class: impl Fn(usize) -> Result<Vec<([Mat; 3], u32)>, ThetaError> + Sync,
) -> Result<ThetaVector, ThetaError> {
    let space = mock.triple_space(target)?;
    let keys: Vec<Vec<(TripleKey, i64)>> = (0..base.len())
        .into_par_iter()
        .map(|x| {
            let w = orbit_weight(base, x);
            per_class(x)?
                .into_iter()
                .map(|(comps, hh)| Ok((mock.triple_class(&space, &comps.map(|m| mock.mono.exact(m)), [hh; 3])?, w)))
                .collect::<Result<Vec<_>, ThetaError>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(ThetaVector::from_terms(target, keys.into_iter().flatten()))
}

/// `Δ_n = Σ_{[g] ∈ S_0(p^n)} w(g) Σ_{b, z} [(g(p^n b; 0 1), g(p^n b+z; 0 1), g τ_{p^n} diag(1, z))]`.
pub fn delta_hsieh(mock: &Mock, n: u32) -> Result<ThetaVector, ThetaError> {
    check_n(n)?;
    let p = mock.p();
    let q = p.pow(n);
    let base = mock.space(Level::Zero(n))?;
    let t = tau(q);
    let per_class = |x: usize| {
        let (g, hh) = base.rep(x);
        let gt = mat_mul(&g, &t);
        let mut out = Vec::with_capacity((q * q) as usize);
        for b in 0..q {
            for z in (1..q).filter(|z| z % p != 0) {
                let comps = [mat_mul(&g, &[q, b, 0, 1]), mat_mul(&g, &[q, b + z, 0, 1]), mat_mul(&gt, &diag(1, z))];
                out.push((comps, hh));
            }
        }
        Ok(out)
    };
    collect(mock, TripleLevel::Z(n), &base, per_class)
}

/// `Σ_{x ∈ S} w(x) [(x t_1, x t_2, x t_3)]` at `target`.
pub fn diagonal_pushforward(
    mock: &Mock,
    source: &CosetSpace,
    t: &[Mat; 3],
    target: TripleLevel,
) -> Result<ThetaVector, ThetaError> {
    let per_class = |x: usize| {
        let (k, hh) = source.rep(x);
        Ok(vec![(t.map(|ti| mat_mul(&k, &ti)), hh)])
    };
    collect(mock, target, source, per_class)
}

/// `Θ_{U_(n)} = ι(η_p^n)_* ι^u_*(1_{S_n})` with `S_n` of level `U_{Z,n}`.
pub fn theta_loeffler(mock: &Mock, n: u32, order: TwistOrder) -> Result<ThetaVector, ThetaError> {
    check_n(n)?;
    let source = mock.space(Level::Z(n))?;
    diagonal_pushforward(mock, &source, &twists(mock.p(), n, order), TripleLevel::U(n))
}

/// Natural projection to a coarser triple level.
pub fn project(mock: &Mock, v: &ThetaVector, target: TripleLevel) -> Result<ThetaVector, ThetaError> {
    if target.n() > v.level.n() {
        return Err(ThetaError::Level(format!("cannot project {:?} to {target:?}", v.level)));
    }
    let src = mock.triple_space(v.level)?;
    let dst = mock.triple_space(target)?;
    let q = mock.mono.modulus(target.n());
    let terms = v.terms().iter().map(|(key, c)| {
        let reps = src.rep(key);
        let ks = reps.map(|(k, _)| reduce(&k, q));
        let hh = reps.map(|(_, h)| h);
        (dst.canonical(&ks, hh), *c)
    });
    Ok(ThetaVector::from_terms(target, terms.collect::<Vec<_>>()))
}

/// `U_p'` on a triple space: `[x] -> Σ_{j ∈ (Z/p)^3} [x ((p j_1; 0 1), (p j_2; 0 1), (p j_3; 0 1))]`.
pub fn triple_up(mock: &Mock, v: &ThetaVector) -> Result<ThetaVector, ThetaError> {
    let p = mock.p();
    let space = mock.triple_space(v.level)?;
    let per_term: Vec<Vec<(TripleKey, i64)>> = v
        .terms()
        .par_iter()
        .map(|(key, c)| {
            let reps = space.rep(key);
            let hh = reps.map(|(_, h)| h);
            let mut out = Vec::with_capacity((p * p * p) as usize);
            for j0 in 0..p {
                for j1 in 0..p {
                    for j2 in 0..p {
                        let js = [j0, j1, j2];
                        let comps = [0, 1, 2].map(|i| mock.mono.exact(mat_mul(&reps[i].0, &[p, js[i], 0, 1])));
                        out.push((mock.triple_class(&space, &comps, hh)?, *c));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_, ThetaError>>()?;
    Ok(ThetaVector::from_terms(v.level, per_term.into_iter().flatten()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormReport {
    pub n: u32,
    /// `Nm(Δ_{n+1}) = U_p' Δ_n`.
    pub hsieh: bool,
    /// `Nm(Θ_{U_(n+1)}) = U_p' Θ_{U_(n)}`.
    pub loeffler: bool,
    pub support_n: usize,
    pub support_next: usize,
    pub mass_n: i64,
    pub mass_next: i64,
}

impl NormReport {
    pub fn pass(&self) -> bool {
        self.hsieh && self.loeffler
    }
}

pub fn verify_norm_relation(mock: &Mock, n: u32) -> Result<NormReport, ThetaError> {
    check_n(n)?;
    let d0 = delta_hsieh(mock, n)?;
    let d1 = delta_hsieh(mock, n + 1)?;
    let hsieh = project(mock, &d1, TripleLevel::Z(n))? == triple_up(mock, &d0)?;
    let t0 = theta_loeffler(mock, n, TwistOrder::Pullback)?;
    let t1 = theta_loeffler(mock, n + 1, TwistOrder::Pullback)?;
    let loeffler = project(mock, &t1, TripleLevel::U(n))? == triple_up(mock, &t0)?;
    Ok(NormReport {
        n,
        hsieh,
        loeffler,
        support_n: d0.support(),
        support_next: d1.support(),
        mass_n: d0.mass(),
        mass_next: d1.mass(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub n: u32,
    /// `pr_Z Θ_{U_(n)} = Δ_n` with the pullback twist order.
    pub pass: bool,
    /// The same with the first two twists exchanged.
    pub remark_order_pass: bool,
    /// `Δ_n = ι(η_p^n)_* ι^u_{Z,*}(1_{S_n})` computed directly at `U_{Z,(n)}`.
    pub rewriting_pass: bool,
    /// Number of summands of `Δ_n` and the size of its support.
    pub summands: i64,
    pub support: usize,
}

pub fn compare_hsieh(mock: &Mock, n: u32) -> Result<CompareReport, ThetaError> {
    check_n(n)?;
    let delta = delta_hsieh(mock, n)?;
    let pr = |order| -> Result<ThetaVector, ThetaError> {
        project(mock, &theta_loeffler(mock, n, order)?, TripleLevel::Z(n))
    };
    let source = mock.space(Level::Z(n))?;
    let direct = diagonal_pushforward(mock, &source, &twists(mock.p(), n, TwistOrder::Pullback), TripleLevel::Z(n))?;
    Ok(CompareReport {
        n,
        pass: pr(TwistOrder::Pullback)? == delta,
        remark_order_pass: pr(TwistOrder::Remark)? == delta,
        rewriting_pass: direct == delta,
        summands: delta.mass(),
        support: delta.support(),
    })
}
