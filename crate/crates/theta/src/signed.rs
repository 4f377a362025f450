//! Weight pairings into `Λ_n`, unit-root stabilization and the signed
//! pipeline through `qsys`.

use crate::fg::FgContext;
use crate::ThetaError;
use iwalg::{Iwasawa, IwasawaPoly};
use num_rational::Rational64;
use padic::{QuadField, QuadScalar};
use plocal::matrix::{det, inv_mod, pow_mod};
use plocal::{Level, Mat, Mock};
use qsys::{BridgeReport, DistributionCertificate, QSystem, QSystemTower, Root};
use serde::{Deserialize, Serialize};

/// Group-like weight functions `h_n: S_{U_n} -> O^× · Γ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightSystem {
    /// `h_n([k], i) = ε^i <det(k) / a^2>`, `a` the unit entry of the first
    /// column of `k`, `i` the away index and `ε^h = 1` a unit character.
    Determinant { away_character: i64 },
    /// `h_n = 0`.
    Zero,
}

/// Exponent `i` with `(1+p)^i ≡ <det(k)/a^2> mod p^n`, `<·>` the projection to `1 + pZ_p`.
pub fn weight_exponent(p: i64, n: u32, k: &Mat) -> u64 {
    let q = p.pow(n);
    let a = if k[0] % p != 0 { k[0] } else { k[2] };
    let a_inv = inv_mod(a.rem_euclid(q), q).expect("first column is primitive");
    let delta = (det(k).rem_euclid(q as i128) as i64 * pow_mod(a_inv, 2, q)).rem_euclid(q);
    let order = p.pow(n - 1) as u64;
    let teich = pow_mod(delta, order, q);
    let one_unit = delta * inv_mod(teich, q).expect("unit") % q;
    let mut acc = 1 % q;
    for i in 0..order {
        if acc == one_unit {
            return i;
        }
        acc = acc * (1 + p) % q;
    }
    unreachable!("1 + p generates (1 + pZ)/(1 + p^n Z)")
}

/// `Σ_i c_i (1+X)^{e_i}` in `Λ_n`.
fn pair(iw: &Iwasawa, n: u32, terms: impl Iterator<Item = (u64, QuadScalar)>) -> Result<IwasawaPoly, ThetaError> {
    let f = iw.field;
    let d = iw.rank(n);
    let mut group = vec![f.zero(); d];
    for (e, c) in terms {
        let i = e as usize % d;
        group[i] = f.add(&group[i], &c);
    }
    from_group_basis(iw, n, &group)
}

fn binomial_row(i: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for k in 1..=i {
        row.push(row[k - 1] * (i - k + 1) as i64 / k as i64);
    }
    row
}

/// `Σ_i g_i (1+X)^i` in the `X`-basis.
fn from_group_basis(iw: &Iwasawa, n: u32, group: &[QuadScalar]) -> Result<IwasawaPoly, ThetaError> {
    let f = iw.field;
    let mut coeffs = vec![f.zero(); group.len()];
    for (i, g) in group.iter().enumerate() {
        for (k, b) in binomial_row(i).into_iter().enumerate() {
            coeffs[k] = f.add(&coeffs[k], &f.mul_int(g, b));
        }
    }
    Ok(iw.element(n, coeffs)?)
}

/// Coefficients of an element of `Λ_n` in the basis `(1+X)^i`, `i < p^{n-1}`.
pub fn group_basis(iw: &Iwasawa, n: u32, x: &IwasawaPoly) -> Result<Vec<QuadScalar>, ThetaError> {
    let f = iw.field;
    let x = iw.project(x, n)?;
    let mut group = vec![f.zero(); x.coeffs.len()];
    for (k, a) in x.coeffs.iter().enumerate() {
        for (i, b) in binomial_row(k).into_iter().enumerate() {
            let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
            group[i] = f.add(&group[i], &f.mul_int(a, sign * b));
        }
    }
    Ok(group)
}

/// Exponents of the regular weight system on `Γ_n` itself.
pub fn regular_weights(iw: &Iwasawa, n: u32) -> Vec<u64> {
    (0..iw.rank(n) as u64).collect()
}

/// `Σ_x v(x) h_n(x)` for a vector on `S_{U_n}`.
pub fn pair_with_weights(
    iw: &Iwasawa,
    mock: &Mock,
    weights: WeightSystem,
    n: u32,
    v: &[i64],
) -> Result<IwasawaPoly, ThetaError> {
    let f = iw.field;
    let eps = match weights {
        WeightSystem::Zero => return Ok(iw.zero_at(n)),
        WeightSystem::Determinant { away_character } => away_character,
    };
    let space = mock.space(Level::U(n))?;
    let p = mock.p();
    let q = p.pow(mock.mono.m);
    if pow_mod(eps.rem_euclid(q), space.h as u64, q) != 1 % q {
        return Err(ThetaError::Level(format!("away character {eps} does not have order dividing h = {}", space.h)));
    }
    let terms = v.iter().enumerate().map(|(x, &c)| {
        let (k, hh) = space.rep(x);
        let c = c as i128 * pow_mod(eps.rem_euclid(q), hh as u64, q) as i128 % q as i128;
        (weight_exponent(p, n, &k), f.int(c as i64))
    });
    pair(iw, n, terms)
}

/// The rank-one `Λ`-tower `κ_n = Σ_x Θ_n(f,g)(x) h_n(x)` for `n = 1..=top`.
pub fn space_tower(ctx: &FgContext, iw: &Iwasawa, weights: WeightSystem, top: u32) -> Result<QSystemTower, ThetaError> {
    let levels = ctx
        .tower(top)?
        .iter()
        .enumerate()
        .map(|(i, v)| Ok(vec![pair_with_weights(iw, ctx.mock, weights, i as u32 + 1, v)?]))
        .collect::<Result<_, ThetaError>>()?;
    Ok(QSystemTower { rank: 1, levels })
}

/// `pr κ_n = a_p κ_{n-1} - χ(p) Tr κ_{n-2}` for `3 <= n <= top`, any `a_p`.
pub fn three_term_levels(iw: &Iwasawa, t: &QSystemTower) -> Result<Vec<(u32, bool)>, ThetaError> {
    let f = iw.field;
    let mut out = vec![];
    for n in 3..=t.top() {
        let mut ok = true;
        for i in 0..t.rank {
            let lhs = iw.project(&t.kappa(n)[i], n - 1)?;
            let tr = iw.trace(&t.kappa(n - 2)[i], n - 2, n - 1)?;
            let rhs = iw.sub(&iw.scale(&t.kappa(n - 1)[i], &f.embed(f.a_p)), &iw.scale(&tr, &f.embed(f.chi_p)));
            ok &= iw.eq_to_precision(&lhs, &rhs);
        }
        out.push((n, ok));
    }
    Ok(out)
}

/// The unit root of `X^2 - a_p X + χ(p) p` modulo `p^m`, by Hensel lifting from `a_p`.
pub fn unit_root(p: i64, a_p: i64, chi_p: i64, m: u32) -> Result<i64, ThetaError> {
    if a_p % p == 0 {
        return Err(ThetaError::Ordinarity(format!("a_p = {a_p} is not a unit")));
    }
    let q = p.pow(m) as i128;
    let (a, c) = (a_p as i128, (chi_p * p) as i128);
    let mut x = a.rem_euclid(q);
    for _ in 0..=m {
        let fx = (x * x - a * x + c).rem_euclid(q);
        let dfx = (2 * x - a).rem_euclid(q);
        let inv = inv_mod(dfx as i64, q as i64).ok_or_else(|| ThetaError::Ordinarity("double root mod p".into()))?;
        x = (x - fx * inv as i128).rem_euclid(q);
    }
    Ok(x as i64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootReport {
    pub xi: i64,
    /// `z_{n,ξ}` for `n = 2..=top`.
    pub levels: Vec<IwasawaPoly>,
    /// `pr z_{n+1} = z_n`.
    pub compatible: bool,
    /// Every `z_n` is integral (order-zero growth).
    pub bounded: bool,
    /// Three-term relation of the input tower, by level.
    pub three_term: Vec<(u32, bool)>,
}

/// `z_{n,ξ} = ξ^{-n}(κ_n - (χ(p)/ξ) Tr κ_{n-1})` at the unit root, rank-one tower.
pub fn unit_root_stabilization(iw: &Iwasawa, t: &QSystemTower, a_p: i64, chi_p: i64) -> Result<UnitRootReport, ThetaError> {
    let f = iw.field;
    let p = f.ctx.p as i64;
    let xi = unit_root(p, a_p, chi_p, f.ctx.digits)?;
    let xi_inv = f.inv(&f.int(xi))?;
    let c = f.mul(&f.int(chi_p), &xi_inv);
    let mut levels = vec![];
    for n in 2..=t.top() {
        let tr = iw.trace(&t.kappa(n - 1)[0], n - 1, n)?;
        let inner = iw.sub(&t.kappa(n)[0], &iw.scale(&tr, &c));
        levels.push(iw.scale(&inner, &f.pow(&xi_inv, n)));
    }
    let mut compatible = true;
    for n in 3..=t.top() {
        let hi = iw.project(&levels[n as usize - 2], n - 1)?;
        compatible &= iw.eq_to_precision(&hi, &levels[n as usize - 3]);
    }
    let bounded = levels
        .iter()
        .map(|z| iw.min_valuation(z))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|v| v.is_none_or(|v| v >= Rational64::from_integer(0)));
    Ok(UnitRootReport { xi, levels, compatible, bounded, three_term: three_term_levels(iw, t)? })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedThetaReport {
    pub top: u32,
    pub three_term: bool,
    pub sharp: Vec<IwasawaPoly>,
    pub flat: Vec<IwasawaPoly>,
    /// `O`-dimension of the ambiguity of `(Θ♯, Θ♭)` mod `ω_{N-2}`; `None` when unique.
    pub ambiguity_dimension: Option<usize>,
    /// The supplied seeds are recovered mod `ω_{N-2}`.
    pub recovers_seeds: Option<bool>,
    pub lambda: [Rational64; 2],
    pub certificates: [DistributionCertificate; 2],
    pub bridge: BridgeReport,
}

impl SignedThetaReport {
    pub fn unique(&self) -> bool {
        self.ambiguity_dimension.is_none()
    }
}

/// Signed components, stabilizations at both roots, growth certificates at
/// `λ = ord_p(ξ)` and the matrix bridge for a non-ordinary tower.
pub fn signed_theta(
    q: &QSystem,
    t: &QSystemTower,
    seeds: Option<(&[IwasawaPoly], &[IwasawaPoly])>,
) -> Result<SignedThetaReport, ThetaError> {
    let iw = q.iw();
    let three_term = q.verify_three_term(t)?.pass;
    let d = q.decompose(t)?;
    let recovers_seeds = seeds.map(|(s, fl)| {
        let target = q.top.saturating_sub(1).max(1);
        let same = |a: &[IwasawaPoly], b: &[IwasawaPoly]| {
            a.iter().zip(b).all(|(x, y)| iw.project(y, target).map(|y| iw.eq_to_precision(x, &y)).unwrap_or(false))
        };
        same(&d.sharp, s) && same(&d.flat, fl)
    });
    let sa = q.stabilize(t, Root::Alpha)?;
    let sb = q.stabilize(t, Root::Beta)?;
    let lam = |r: Root| iw.field.lower_valuation(&q.root(r));
    let lambda = [lam(Root::Alpha), lam(Root::Beta)];
    let certificates = [q.assemble_distribution(&sa, lambda[0])?, q.assemble_distribution(&sb, lambda[1])?];
    let bridge = q.matrix_bridge_check(&sa, &sb, &d.sharp_full, &d.flat_full)?;
    Ok(SignedThetaReport {
        top: q.top,
        three_term,
        ambiguity_dimension: d.ambiguity.as_ref().map(|a| a.dimension),
        sharp: d.sharp,
        flat: d.flat,
        recovers_seeds,
        lambda,
        certificates,
        bridge,
    })
}

/// Field and Iwasawa algebra for integer Hecke data at precision `m`.
pub fn iwasawa_for(p: i64, m: u32, a_p: i64, chi_p: i64, max_level: u32) -> Result<Iwasawa, ThetaError> {
    let ctx = padic::make_context(p as u64, m)?;
    Ok(Iwasawa::new(QuadField::from_ints(ctx, a_p, chi_p)?, max_level))
}
