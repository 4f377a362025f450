#![allow(clippy::needless_range_loop)]

use iwalg::IwasawaPoly;
use logmat::SignedMatrixFamily;
use plocal::matrix::{mat_mul, reduce};
use plocal::verify::enumerate_gl2;
use plocal::*;
use proptest::prelude::*;
use qsys::QSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use theta::*;

fn trivial(h: u32) -> Mock {
    Mock::new(&MockConfig::trivial(3, h)).unwrap()
}

fn order24(h: u32) -> Mock {
    Mock::new(&MockConfig::order24(3, h)).unwrap()
}

fn mocks() -> Vec<(&'static str, Mock)> {
    vec![("trivial h=1", trivial(1)), ("trivial h=2", trivial(2)), ("order-24 h=1", order24(1)), ("order-24 h=2", order24(2))]
}

/// `Δ_n` summed over every matrix of `GL2(Z/p^n)` and divided by `|U_0 mod p^n|`.
fn delta_brute_force(mock: &Mock, n: u32) -> ThetaVector {
    let p = mock.p();
    let q = p.pow(n);
    let space = mock.triple_space(TripleLevel::Z(n)).unwrap();
    let unit = enumerate_gl2(p, n, |m| Level::Zero(n).contains(p, m)).len() as i64;
    let mut acc: BTreeMap<TripleKey, i64> = BTreeMap::new();
    for g in enumerate_gl2(p, n, |_| true) {
        for hh in 0..mock.h {
            for b in 0..q {
                for z in (1..q).filter(|z| z % p != 0) {
                    let comps = [
                        mat_mul(&g, &[q, b, 0, 1]),
                        mat_mul(&g, &[q, b + z, 0, 1]),
                        mat_mul(&mat_mul(&g, &[0, 1, -q, 0]), &[1, 0, 0, z]),
                    ];
                    let key = mock.triple_class(&space, &comps.map(|m| mock.mono.exact(m)), [hh; 3]).unwrap();
                    *acc.entry(key).or_default() += 1;
                }
            }
        }
    }
    let terms: Vec<_> = acc
        .into_iter()
        .map(|(k, c)| {
            assert_eq!(c % unit, 0);
            (k, c / unit)
        })
        .collect();
    ThetaVector::from_terms(TripleLevel::Z(n), terms)
}

#[test]
fn twist_matrices() {
    assert_eq!(twists(3, 1, TwistOrder::Remark), [[3, 1, 0, 1], [3, 0, 0, 1], [0, 1, -3, 0]]);
    assert_eq!(twists(3, 1, TwistOrder::Pullback), [[3, 0, 0, 1], [3, 1, 0, 1], [0, 1, -3, 0]]);
    assert_eq!(twists(3, 2, TwistOrder::Pullback)[2], [0, 1, -9, 0]);
}

#[test]
fn degenerate_level_rejected() {
    let mock = trivial(1);
    assert!(matches!(delta_hsieh(&mock, 0), Err(ThetaError::Level(_))));
    assert!(matches!(theta_loeffler(&mock, 0, TwistOrder::Pullback), Err(ThetaError::Level(_))));
    assert!(matches!(verify_norm_relation(&mock, 0), Err(ThetaError::Level(_))));
    let ctx = FgContext::new(&mock, MockEigenData::from_space(&mock, None).unwrap()).unwrap();
    assert!(ctx.theta(0).is_err());
    assert!(ctx.verify_three_term(1).is_err());
}

#[test]
fn delta_example_term_and_mass() {
    let mock = trivial(1);
    let delta = delta_hsieh(&mock, 1).unwrap();
    let space = mock.triple_space(TripleLevel::Z(1)).unwrap();
    let term = [[3, 0, 0, 1], [3, 1, 0, 1], [0, 1, -3, 0]].map(|m| mock.mono.exact(m));
    let key = mock.triple_class(&space, &term, [0; 3]).unwrap();
    assert!(delta.coefficient(&key) >= 1);
    // Six (b, z) per base class and |S_0(3)| = 4.
    assert_eq!(mock.space(Level::Zero(1)).unwrap().len(), 4);
    assert_eq!(delta.mass(), 24);
    assert_eq!(delta.max_coefficient(), 1);
}

#[test]
fn delta_matches_brute_force() {
    for (name, mock) in [("trivial", trivial(1)), ("order-24", order24(1)), ("order-24 h=2", order24(2))] {
        assert_eq!(delta_hsieh(&mock, 1).unwrap(), delta_brute_force(&mock, 1), "{name}");
    }
    let mock = trivial(1);
    assert_eq!(delta_hsieh(&mock, 2).unwrap(), delta_brute_force(&mock, 2));
}

#[test]
fn orbit_weights_count_cosets() {
    for (name, mock) in mocks() {
        for level in [Level::Zero(1), Level::Z(1), Level::Z(2), Level::U(2)] {
            let space = mock.space(level).unwrap();
            let p = mock.p();
            let n = level.n();
            let all = enumerate_gl2(p, n, |_| true).len() as i64;
            let unit = enumerate_gl2(p, n, |m| level.contains(p, m)).len() as i64;
            let total: i64 = (0..space.len()).map(|x| orbit_weight(&space, x)).sum();
            assert_eq!(total, mock.h as i64 * all / unit, "{name} {level:?}");
        }
    }
}

#[test]
fn compare_and_norm_relations() {
    for (name, mock) in mocks() {
        let c = compare_hsieh(&mock, 1).unwrap();
        assert!(c.pass && c.rewriting_pass, "{name}: {c:?}");
        let r = verify_norm_relation(&mock, 1).unwrap();
        assert!(r.pass(), "{name}: {r:?}");
        // Mass of Δ_n is h p^n φ(p^n) |GL2(Z/p^n) / U_0|.
        assert_eq!(r.mass_n, mock.h as i64 * 3 * 2 * 4, "{name}");
        assert_eq!(r.mass_next, mock.h as i64 * 9 * 6 * 12, "{name}");
    }
}

#[test]
fn twist_order_matters_without_collapse() {
    let c = compare_hsieh(&trivial(1), 1).unwrap();
    assert!(c.pass);
    assert!(!c.remark_order_pass);
    // No coefficient collisions for trivial Γ.
    assert_eq!(c.support as i64, c.summands);
}

#[test]
fn large_gamma_collapses_to_singletons() {
    for h in [1, 2] {
        let mock = order24(h);
        for n in [1, 2] {
            assert_eq!(delta_hsieh(&mock, n).unwrap().support(), h as usize);
            let theta = theta_loeffler(&mock, n, TwistOrder::Pullback).unwrap();
            assert_eq!(project(&mock, &theta, TripleLevel::Z(n)).unwrap().support(), h as usize);
        }
    }
}

#[test]
fn triple_up_is_linear() {
    let mock = trivial(1);
    let a = delta_hsieh(&mock, 1).unwrap();
    let b = project(&mock, &theta_loeffler(&mock, 1, TwistOrder::Remark).unwrap(), TripleLevel::Z(1)).unwrap();
    let lhs = triple_up(&mock, &a.scale(2).add(&b.scale(-3))).unwrap();
    let rhs = triple_up(&mock, &a).unwrap().scale(2).add(&triple_up(&mock, &b).unwrap().scale(-3));
    assert_eq!(lhs, rhs);
    assert!(triple_up(&mock, &ThetaVector::zero(TripleLevel::Z(1))).unwrap().is_zero());
}

#[test]
fn spectrum_of_the_mock_spaces() {
    let s = MockEigenData::spectrum(&trivial(1)).unwrap();
    assert_eq!(s.pairs, vec![(4, 1, 1)]);
    assert!(!s.non_ordinary);
    let s = MockEigenData::spectrum(&trivial(2)).unwrap();
    assert_eq!(s.pairs, vec![(0, -1, 1), (4, 1, 1)]);
    assert!(s.non_ordinary);
}

#[test]
fn three_term_relation_with_space_eigen_data() {
    let mock = trivial(1);
    let e = MockEigenData::from_space(&mock, None).unwrap();
    assert_eq!((e.a_p, e.chi_p, e.provenance), (4, 1, EigenProvenance::Space));
    let r = FgContext::new(&mock, e).unwrap().verify_three_term(2).unwrap();
    assert!(r.all_pass() && r.nonzero, "{r:?}");
    let mock = trivial(2);
    for want in [(0, -1), (4, 1)] {
        let e = MockEigenData::from_space(&mock, Some(want)).unwrap();
        let r = FgContext::new(&mock, e).unwrap().verify_three_term(2).unwrap();
        assert!(r.all_pass() && r.nonzero, "{want:?}: {r:?}");
    }
}

#[test]
fn injected_non_ordinary_pair_absent_at_h1() {
    let mock = trivial(1);
    match MockEigenData::from_space(&mock, Some((0, 1))) {
        Err(ThetaError::Eigen(msg)) => assert!(msg.contains("(4, 1, 1)"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let base = MockEigenData::from_space(&mock, None).unwrap();
    let bad = MockEigenData::injected(&mock, base.f_vec.clone(), base.f_eigenvalue, base.g_vec.clone(), 0, 1);
    assert!(matches!(bad, Err(ThetaError::Eigen(_))));
}

#[test]
fn zero_eigen_data_passes_trivially() {
    let mock = trivial(1);
    let ctx = FgContext::new(&mock, MockEigenData::zero(&mock, 0, 1).unwrap()).unwrap();
    assert!(ctx.theta(2).unwrap().iter().all(|&x| x == 0));
    let r = ctx.verify_three_term(2).unwrap();
    assert!(r.all_pass() && !r.nonzero);
}

#[test]
fn theta_fg_is_bilinear() {
    let mock = trivial(2);
    let e = MockEigenData::from_space(&mock, Some((0, -1))).unwrap();
    let q = e.modulus();
    let base = FgContext::new(&mock, e.clone()).unwrap().theta(2).unwrap();
    let scaled = |v: &[i64], s: i64| v.iter().map(|x| (x * s).rem_euclid(q)).collect::<Vec<_>>();
    let g5 = MockEigenData::injected(&mock, e.f_vec.clone(), e.f_eigenvalue, scaled(&e.g_vec, 5), 0, -1).unwrap();
    assert_eq!(FgContext::new(&mock, g5).unwrap().theta(2).unwrap(), scaled(&base, 5));
    let f7 = MockEigenData::injected(&mock, scaled(&e.f_vec, 7), e.f_eigenvalue, e.g_vec.clone(), 0, -1).unwrap();
    assert_eq!(FgContext::new(&mock, f7).unwrap().theta(2).unwrap(), scaled(&base, 7));
    let g0 = MockEigenData::injected(&mock, e.f_vec.clone(), e.f_eigenvalue, vec![0; e.g_vec.len()], 0, -1).unwrap();
    assert!(FgContext::new(&mock, g0).unwrap().theta(2).unwrap().iter().all(|&x| x == 0));
}

#[test]
fn unit_root_solves_the_hecke_polynomial() {
    let q = 3i64.pow(12);
    let xi = unit_root(3, 4, 1, 12).unwrap();
    assert_eq!(((xi as i128 * xi as i128 - 4 * xi as i128 + 3) % q as i128), 0);
    assert_ne!(xi % 3, 0);
    assert!(matches!(unit_root(3, 3, 1, 12), Err(ThetaError::Ordinarity(_))));
}

/// `κ_1, κ_2` random and `κ_n` the lift of `a_p κ_{n-1} - χ(p) Tr κ_{n-2}`.
fn ordinary_tower(iw: &iwalg::Iwasawa, top: u32, rng: &mut ChaCha8Rng) -> qsys::QSystemTower {
    let f = iw.field;
    let mut levels: Vec<Vec<IwasawaPoly>> = vec![];
    for n in 1..=top {
        let k = if n <= 2 {
            let c: Vec<i64> = (0..iw.rank(n)).map(|_| rng.gen_range(-20..=20)).collect();
            iw.element(n, c.iter().map(|&x| f.int(x)).collect()).unwrap()
        } else {
            let tr = iw.trace(&levels[n as usize - 3][0], n - 2, n - 1).unwrap();
            let rhs = iw.sub(&iw.scale(&levels[n as usize - 2][0], &f.embed(f.a_p)), &iw.scale(&tr, &f.embed(f.chi_p)));
            let mut c = rhs.coeffs.clone();
            c.resize(iw.rank(n), f.zero());
            iw.element(n, c).unwrap()
        };
        levels.push(vec![k]);
    }
    qsys::QSystemTower { rank: 1, levels }
}

#[test]
fn unit_root_stabilization_of_ordinary_towers() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (ap, chi) in [(4, 1), (1, 1), (2, -1)] {
        let iw = iwasawa_for(3, 12, ap, chi, 5).unwrap();
        let t = ordinary_tower(&iw, 5, &mut rng);
        let r = unit_root_stabilization(&iw, &t, ap, chi).unwrap();
        assert!(r.compatible && r.bounded, "a_p={ap}");
        assert!(r.three_term.iter().all(|&(_, ok)| ok));
        assert!(r.levels.iter().any(|z| !z.is_zero()));
        let mut bad = t.clone();
        let c = &mut bad.levels[3][0].coeffs[0];
        *c = iw.field.add(c, &iw.field.int(1));
        assert!(!unit_root_stabilization(&iw, &bad, ap, chi).unwrap().compatible);
    }
}

#[test]
fn space_tower_with_constant_g_pairs_to_zero() {
    // The only integer eigenpair at h = 1 has g constant and every unit-eigenvalue
    // f sums to zero, so determinant weights see nothing.
    let mock = trivial(1);
    let ctx = FgContext::new(&mock, MockEigenData::from_space(&mock, None).unwrap()).unwrap();
    let iw = iwasawa_for(3, mock.mono.m, 4, 1, 3).unwrap();
    let t = space_tower(&ctx, &iw, WeightSystem::Determinant { away_character: 1 }, 3).unwrap();
    assert!(t.levels.iter().flatten().all(IwasawaPoly::is_zero));
    let r = unit_root_stabilization(&iw, &t, 4, 1).unwrap();
    assert!(r.compatible && r.bounded);
}

#[test]
fn signed_pipeline_on_the_space_tower() {
    let mock = trivial(2);
    let ctx = FgContext::new(&mock, MockEigenData::from_space(&mock, Some((0, -1))).unwrap()).unwrap();
    let iw = iwasawa_for(3, mock.mono.m, 0, -1, 3).unwrap();
    let q = QSystem::new(SignedMatrixFamily::new(iw.clone()).unwrap(), 3).unwrap();
    let weights = WeightSystem::Determinant { away_character: -1 };
    let t = space_tower(&ctx, &iw, weights, 3).unwrap();
    assert!(three_term_levels(&iw, &t).unwrap().iter().all(|&(_, ok)| ok));
    assert!(!t.kappa(3)[0].is_zero());
    // g is odd under the away shift, so the trivial character pairs to zero.
    let even = space_tower(&ctx, &iw, WeightSystem::Determinant { away_character: 1 }, 3).unwrap();
    assert!(even.levels.iter().flatten().all(IwasawaPoly::is_zero));
    assert!(matches!(
        pair_with_weights(&iw, &mock, WeightSystem::Determinant { away_character: 2 }, 1, &ctx.theta(1).unwrap()),
        Err(ThetaError::Level(_))
    ));
    let r = signed_theta(&q, &t, None).unwrap();
    assert!(r.three_term && r.bridge.pass, "{:?}", r.bridge);
    assert!(r.certificates.iter().all(|c| c.pass));
    let zero = space_tower(&ctx, &iw, WeightSystem::Zero, 3).unwrap();
    assert!(zero.levels.iter().flatten().all(IwasawaPoly::is_zero));
    let r = signed_theta(&q, &zero, None).unwrap();
    assert!(r.sharp.iter().chain(&r.flat).all(IwasawaPoly::is_zero));
}

#[test]
fn signed_pipeline_on_synthetic_towers() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ap in [0, 3] {
        let iw = iwasawa_for(3, 12, ap, 1, 6).unwrap();
        let q = QSystem::new(SignedMatrixFamily::new(iw.clone()).unwrap(), 5).unwrap();
        let d = iw.rank(5);
        let mut seed = || iw.from_ints(&(0..d).map(|_| rng.gen_range(-20..=20)).collect::<Vec<_>>());
        let (s, f) = (vec![seed()], vec![seed()]);
        let t = q.synth_tower(&s, &f).unwrap();
        let r = signed_theta(&q, &t, Some((&s, &f))).unwrap();
        assert!(r.three_term && r.bridge.pass);
        assert!(r.certificates.iter().all(|c| c.pass));
        assert_eq!(r.lambda, [num_rational::Rational64::new(1, 2); 2]);
        // Finite towers leave a kernel mod ω_{N-2}, so the components are not unique.
        assert_eq!(r.ambiguity_dimension, Some(26));
        assert!(!r.unique());
    }
}

#[test]
fn pairing_reads_group_coordinates() {
    let mock = trivial(1);
    let iw = iwasawa_for(3, 12, 4, 1, 3).unwrap();
    let space = mock.space(Level::U(2)).unwrap();
    for x in 0..space.len() {
        let mut v = vec![0; space.len()];
        v[x] = 1;
        let e = weight_exponent(3, 2, &space.rep(x).0) as usize;
        let g = group_basis(&iw, 2, &pair_with_weights(&iw, &mock, WeightSystem::Determinant { away_character: 1 }, 2, &v).unwrap()).unwrap();
        for (i, c) in g.iter().enumerate() {
            assert!(iw.field.eq_to_precision(c, &iw.field.int((i == e) as i64)));
        }
    }
    assert_eq!(regular_weights(&iw, 3), (0..9).collect::<Vec<u64>>());
}

fn unit_matrix(n: u32) -> impl Strategy<Value = Mat> {
    let q = 3i64.pow(n);
    prop::array::uniform4(0..q).prop_filter("unit determinant", |m| plocal::matrix::det(m).rem_euclid(3) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_exponent_is_right_invariant_and_level_compatible(
        k in unit_matrix(4),
        x in (1i64..81).prop_filter("unit", |x| x % 3 != 0),
        y in 0i64..81,
    ) {
        let n = 4;
        let q = 81;
        let e = weight_exponent(3, n, &k);
        prop_assert_eq!(weight_exponent(3, n, &reduce(&mat_mul(&k, &[x, y, 0, x]), q)), e);
        for lo in 2..n {
            let e_lo = weight_exponent(3, lo, &reduce(&k, 3i64.pow(lo)));
            prop_assert_eq!(e % 3u64.pow(lo - 1), e_lo);
        }
    }

    #[test]
    fn group_basis_inverts_the_binomial_expansion(coeffs in prop::collection::vec(-30i64..30, 9)) {
        let iw = iwasawa_for(3, 12, 0, 1, 3).unwrap();
        let f = iw.field;
        // Σ g_i (1+X)^i expanded directly.
        let mut x_basis = [0i64; 9];
        for (i, g) in coeffs.iter().enumerate() {
            let mut b = 1i64;
            for k in 0..=i {
                x_basis[k] += g * b;
                b = b * (i - k) as i64 / (k + 1) as i64;
            }
        }
        let elt = iw.element(3, x_basis.iter().map(|&c| f.int(c)).collect()).unwrap();
        let g = group_basis(&iw, 3, &elt).unwrap();
        prop_assert_eq!(g.len(), coeffs.len());
        for (a, &c) in g.iter().zip(&coeffs) {
            prop_assert!(f.eq_to_precision(a, &f.int(c)));
        }
    }
}
