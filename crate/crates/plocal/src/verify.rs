//! Exhaustive checks of the local coset lemmas and degeneracy identities.

use crate::hecke::{hida_reps, zero_to_z_reps, HeckeOp, SparseMat};
use crate::level::{Level, TripleLevel};
use crate::matrix::{adj, det, inv_mat_mod, inv_mod, mat_mul, mat_mul_mod, reduce, Mat, Monoid, TruncatedMatrix};
use crate::ordinary::{projector_by_factorial, rank_mod_p, DenseMat};
use crate::space::Mock;
use crate::PlocalError;
use serde::{Deserialize, Serialize};

/// All elements of `GL2(Z/q)` satisfying `pred`.
pub fn enumerate_gl2(p: i64, n: u32, pred: impl Fn(&Mat) -> bool) -> Vec<Mat> {
    let q = p.pow(n);
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = [a, b, c, d];
                    if det(&m).rem_euclid(p as i128) != 0 && pred(&m) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlzReport {
    pub level: Level,
    pub source_size: usize,
    pub target_size: usize,
    /// `π_2* ∘ U_p' = p·π_1*`.
    pub first: bool,
    /// `π_1* ∘ U_p' = T_p' ∘ π_1* − S_p^{-1} ∘ π_2*`.
    pub second: bool,
}

impl KlzReport {
    pub fn pass(&self) -> bool {
        self.first && self.second
    }
}

/// Both degeneracy identities from `level` (at `n = 1`) down to `GL2(Z_p)`-level.
pub fn verify_klz(mock: &Mock, level: Level) -> Result<KlzReport, PlocalError> {
    let src = mock.space(level)?;
    let dst = mock.space(Level::Full)?;
    let p = mock.p();
    for (op, s, d) in [
        (HeckeOp::UpPrime, &src, &src),
        (HeckeOp::Pi1, &src, &dst),
        (HeckeOp::Pi2, &src, &dst),
        (HeckeOp::TpPrime, &dst, &dst),
        (HeckeOp::SpInv, &dst, &dst),
    ] {
        let (right, shift) = op.translates(p);
        mock.check_well_defined(s, d, &right, shift)?;
    }
    let up = mock.operator(HeckeOp::UpPrime, &src, &src)?;
    let pi1 = mock.operator(HeckeOp::Pi1, &src, &dst)?;
    let pi2 = mock.operator(HeckeOp::Pi2, &src, &dst)?;
    let tp = mock.operator(HeckeOp::TpPrime, &dst, &dst)?;
    let spi = mock.operator(HeckeOp::SpInv, &dst, &dst)?;
    let first = pi2.compose(&up) == pi1.scale(p);
    let second = pi1.compose(&up) == tp.compose(&pi1).sub(&spi.compose(&pi2));
    Ok(KlzReport { level, source_size: src.len(), target_size: dst.len(), first, second })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRepsReport {
    pub n: u32,
    pub reps: usize,
    pub index: usize,
    pub expected: usize,
    /// Every element of `U_{0,n}` lies in exactly one `γ_{z,b} U_{Z,n}`.
    pub partition: bool,
    pub hida_reps: usize,
    pub hida_index: usize,
    /// Same for `γ_a` in `(U_{n-1} ∩ U_{0,n}) / U_n`; vacuous at `n = 1`.
    pub hida_partition: bool,
}

impl CosetRepsReport {
    pub fn pass(&self) -> bool {
        self.partition && self.reps == self.index && self.index == self.expected && self.hida_partition
    }
}

fn partitions(p: i64, n: u32, reps: &[Mat], big: &[Mat], small: Level) -> bool {
    let q = p.pow(n);
    let invs: Option<Vec<Mat>> = reps.iter().map(|g| inv_mat_mod(g, q)).collect();
    let Some(invs) = invs else { return false };
    big.iter().all(|g| {
        invs.iter()
            .filter(|gi| small.contains(p, &mat_mul_mod(gi, g, q)))
            .count()
            == 1
    })
}

pub fn verify_coset_reps(p: i64, n: u32) -> CosetRepsReport {
    let u0 = enumerate_gl2(p, n, |m| Level::Zero(n).contains(p, m));
    let uz = enumerate_gl2(p, n, |m| Level::Z(n).contains(p, m));
    let reps = zero_to_z_reps(p, n);
    let in_u0 = reps.iter().all(|g| Level::Zero(n).contains(p, &reduce(g, p.pow(n))));
    let partition = in_u0 && partitions(p, n, &reps, &u0, Level::Z(n));
    let expected = (p.pow(2 * n - 1) * (p - 1)) as usize;
    let (hida_reps_n, hida_index, hida_partition) = if n >= 2 {
        let v = enumerate_gl2(p, n, |m| Level::Hida(n).contains(p, m));
        let un = enumerate_gl2(p, n, |m| Level::U(n).contains(p, m));
        let hr = hida_reps(p, n);
        let ok = hr.iter().all(|g| Level::Hida(n).contains(p, &reduce(g, p.pow(n))))
            && partitions(p, n, &hr, &v, Level::U(n));
        (hr.len(), v.len() / un.len(), ok && hr.len() == v.len() / un.len())
    } else {
        (0, 0, true)
    };
    CosetRepsReport {
        n,
        reps: reps.len(),
        index: u0.len() / uz.len(),
        expected,
        partition,
        hida_reps: hida_reps_n,
        hida_index,
        hida_partition,
    }
}

/// `u = (1, (1 1; 0 1), (0 1; -1 0))`.
pub const U_TWIST: [Mat; 3] = [[1, 0, 0, 1], [1, 1, 0, 1], [0, 1, -1, 0]];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UIntersectionReport {
    pub n: u32,
    pub elements: usize,
    pub members: usize,
    /// `ι(g) ∈ u U^(n) u^{-1} ⟺ g ∈ U_{Z,n}`.
    pub pass: bool,
    /// The same with `u` and `u^{-1}` exchanged.
    pub conjugate_pass: bool,
}

pub fn verify_u_intersection(p: i64, n: u32) -> UIntersectionReport {
    let q = p.pow(n);
    let uinv: Vec<Mat> = U_TWIST.iter().map(|u| inv_mat_mod(u, q).expect("unimodular")).collect();
    let all = enumerate_gl2(p, n, |_| true);
    let lower = TripleLevel::Upper(n);
    let conj = |g: &Mat, a: &[Mat], b: &[Mat]| -> [Mat; 3] {
        [0, 1, 2].map(|i| mat_mul_mod(&mat_mul_mod(&a[i], g, q), &b[i], q))
    };
    let mut pass = true;
    let mut conjugate_pass = true;
    let mut members = 0;
    for g in &all {
        let rhs = Level::Z(n).contains(p, g);
        members += rhs as usize;
        pass &= lower.contains(p, &conj(g, &uinv, &U_TWIST)) == rhs;
        conjugate_pass &= lower.contains(p, &conj(g, &U_TWIST, &uinv)) == rhs;
    }
    UIntersectionReport { n, elements: all.len(), members, pass, conjugate_pass }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HidaKernelReport {
    pub n: u32,
    pub source_size: usize,
    pub target_size: usize,
    pub generators: usize,
    /// Rank modulo `p` of the generators.
    pub span_rank: usize,
    /// `U_p'` kills every generator.
    pub annihilated: bool,
    /// Every generator maps to zero.
    pub in_kernel: bool,
    /// `lim (U_p')^{k!}` on the source stabilizes to an idempotent.
    pub idempotent: bool,
}

impl HidaKernelReport {
    pub fn pass(&self) -> bool {
        self.annihilated
            && self.in_kernel
            && self.idempotent
            && self.span_rank == self.source_size - self.target_size
    }
}

/// `U_p'` annihilates `ker(Z[S_{U_{n-1} ∩ U_{0,n}}] -> Z[S_{U_{n-1}}])`.
pub fn verify_hida_kernel(mock: &Mock, n: u32) -> Result<HidaKernelReport, PlocalError> {
    if n < 2 {
        return Err(PlocalError::LevelMismatch("the kernel check needs n >= 2".into()));
    }
    let p = mock.p();
    let src = mock.space(Level::Hida(n))?;
    let dst = mock.space(Level::U(n - 1))?;
    let (right, shift) = HeckeOp::UpPrime.translates(p);
    mock.check_well_defined(&src, &src, &right, shift)?;
    let up = mock.operator(HeckeOp::UpPrime, &src, &src)?;
    let pi = mock.operator(HeckeOp::Pi1, &src, &dst)?;
    let coarse = enumerate_gl2(p, n, |m| Level::U(n - 1).contains(p, m));
    let mut gens: Vec<Vec<i64>> = Vec::new();
    let mut annihilated = true;
    let mut in_kernel = true;
    for x in 0..src.len() {
        let (rep, hh) = src.rep(x);
        for g in &coarse {
            let y = src.lookup(&mat_mul(&rep, g), hh);
            if y == x {
                continue;
            }
            let mut v = vec![0i64; src.len()];
            v[y] += 1;
            v[x] -= 1;
            annihilated &= up.apply(&v, 0).iter().all(|&c| c == 0);
            in_kernel &= pi.apply(&v, 0).iter().all(|&c| c == 0);
            gens.push(v);
        }
    }
    gens.sort();
    gens.dedup();
    let span_rank = rank_mod_p(&gens, p);
    let q = mock.mono.modulus(mock.mono.m);
    let idempotent = projector_by_factorial(&DenseMat::from_sparse(&up, q), 40).is_ok();
    Ok(HidaKernelReport {
        n,
        source_size: src.len(),
        target_size: dst.len(),
        generators: gens.len(),
        span_rank,
        annihilated,
        in_kernel,
        idempotent,
    })
}

/// Local double-coset test: `y ∈ Γ x U` with `Γ` a finite list of matrices.
pub fn coset_equal(
    mono: &Monoid,
    x: &TruncatedMatrix,
    y: &TruncatedMatrix,
    level: Level,
    gamma: &[Mat],
) -> Result<bool, PlocalError> {
    let n = level.n();
    let p = mono.p;
    let v = mono.checked(x)?;
    let prec = x.prec.min(y.prec);
    if (prec as i64) - (v as i64) < n as i64 {
        return Err(PlocalError::Precision { need: n + v, have: prec });
    }
    if mono.det_valuation(y) != Some(v) {
        return Ok(false);
    }
    let qv = p.pow(v);
    let qn = p.pow(n);
    let work = p.pow(n + v);
    let unit = (det(&x.m) / qv as i128).rem_euclid(qn as i128) as i64;
    let unit_inv = inv_mod(unit, qn).ok_or(PlocalError::NotInvertible)?;
    let identity = [crate::matrix::IDENTITY];
    let gamma = if gamma.is_empty() { &identity[..] } else { gamma };
    for g in gamma {
        let w = mat_mul_mod(&mat_mul_mod(&adj(&x.m), g, work), &y.m, work);
        if w.iter().any(|e| e % qv != 0) {
            continue;
        }
        let u = reduce(&w.map(|e| (e / qv) * unit_inv), qn);
        if level.contains(p, &u) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `U_p'` on a space, with its well-definedness checked first.
pub fn checked_up(mock: &Mock, level: Level) -> Result<SparseMat, PlocalError> {
    let s = mock.space(level)?;
    let (right, shift) = HeckeOp::UpPrime.translates(mock.p());
    mock.check_well_defined(&s, &s, &right, shift)?;
    mock.operator(HeckeOp::UpPrime, &s, &s)
}
