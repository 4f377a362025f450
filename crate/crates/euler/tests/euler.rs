use euler::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn free(order: u32) -> FrobeniusAlgebra {
    FrobeniusAlgebra::new(order, order, None).unwrap()
}

/// `Fr_𝔮 Fr_𝔮̄ = 1` in a cyclic group of the given order.
fn anticyclotomic(order: u32) -> FrobeniusAlgebra {
    FrobeniusAlgebra::new(order, order, Some((0, 0))).unwrap()
}

#[test]
fn script_p_with_vanishing_hecke_eigenvalues() {
    let q = 7;
    let d = HeckeDatum::from_ints(q, 0, 0, 1, 1, 1, 1).unwrap();
    let alg = free(5);
    let want = alg.add(
        &alg.add(&alg.monomial((2, 0), r(1, 7)), &alg.monomial((0, 2), r(1, 7))),
        &alg.scalar(r(-50, 7)),
    );
    assert_eq!(script_p(&d, &alg), want);
}

#[test]
fn script_p_matches_the_display_term_by_term() {
    // (q, a_f, a_g, chi_f, chi_g, phi, phibar) with the display expanded by hand.
    for (q, af, ag, cf, cg, ph, pb) in [(5u64, 3i64, -2i64, 1i64, -1i64, 1i64, -1i64), (11, 4, 7, -1, -1, -1, 1), (2, 1, 1, 1, 1, 1, 1)] {
        let d = HeckeDatum::from_ints(q, af, ag, cf, cg, ph, pb).unwrap();
        let alg = free(7);
        let x = script_p(&d, &alg);
        let qi = q as i64;
        assert_eq!(x.coefficient((2, 0)), r(cf * ph * ph, qi));
        assert_eq!(x.coefficient((0, 2)), r(cf * pb * pb, qi));
        assert_eq!(x.coefficient((1, 0)), r(-af * ag * ph, qi * cg));
        assert_eq!(x.coefficient((0, 1)), r(-af * ag * pb, qi * cg));
        let constant = r(af * af, cf * qi) + r(ag * ag, cg) - r(qi * qi + 1, qi);
        assert_eq!(x.coefficient((0, 0)), constant / r(cg, 1));
        assert_eq!(x.terms.len(), 5);
    }
}

#[test]
fn script_p_conjugation_swaps_the_frobenius_terms() {
    let d = HeckeDatum::from_ints(13, 2, 5, -1, 1, 1, -1).unwrap();
    let alg = free(6);
    let x = script_p(&d, &alg);
    let y = script_p(&d.conjugate(), &alg);
    for (&(i, j), c) in &x.terms {
        assert_eq!(&y.coefficient((j, i)), c);
    }
    assert_eq!(x.terms.len(), y.terms.len());
}

#[test]
fn script_p_is_p_integral() {
    let d = HeckeDatum::from_ints(7, 3, 4, 1, -1, -1, 1).unwrap();
    let x = script_p(&d, &free(4));
    assert!(x.is_p_integral(3) && x.is_p_integral(5));
    assert!(!x.is_p_integral(7));
    assert!(d.check_prime(3).is_ok());
    assert!(d.check_prime(7).is_err());
}

#[test]
fn invalid_data_rejected() {
    assert!(HeckeDatum::from_ints(9, 0, 0, 1, 1, 1, 1).is_err());
    assert!(HeckeDatum::from_ints(7, 0, 0, 0, 1, 1, 1).is_err());
    assert!(FrobeniusAlgebra::new(0, 3, None).is_err());
    assert!(FrobeniusAlgebra::new(3, 3, Some((3, 0))).is_err());
}

#[test]
fn relation_quotient() {
    let alg = anticyclotomic(5);
    assert!(alg.frobenius_product_trivial());
    assert_eq!(alg.elt(0, 1), alg.elt(-1, 0));
    assert_eq!(alg.elt(2, 2), alg.elt(0, 0));
    assert!(!free(5).frobenius_product_trivial());
    // Fr_𝔮 Fr_𝔮̄ = Fr_𝔮^2 forces Fr_𝔮̄ = Fr_𝔮.
    let alg = FrobeniusAlgebra::new(4, 4, Some((2, 0))).unwrap();
    assert_eq!(alg.elt(0, 1), alg.elt(1, 0));
}

#[test]
fn p_q_poly_examples() {
    let d = HeckeDatum::from_ints(7, 1, 1, 1, 1, 1, 1).unwrap();
    let zeros = EigenModel::Explicit(["0".into(), "0".into(), "0".into(), "0".into()]);
    assert_eq!(p_q_poly(&d, &zeros).unwrap(), vec![BigRational::one(), r(0, 1), r(0, 1), r(0, 1), r(0, 1)]);
    let ones = EigenModel::Explicit(["1".into(), "1".into(), "1".into(), "1".into()]);
    assert_eq!(p_q_poly(&d, &ones).unwrap(), [1, -4, 6, -4, 1].map(|c| r(c, 1)).to_vec());
    let mixed = EigenModel::Explicit(["2".into(), "-1/3".into(), "5".into(), "1/2".into()]);
    let c = p_q_poly(&d, &mixed).unwrap();
    let l = [r(2, 1), r(-1, 3), r(5, 1), r(1, 2)];
    let e1: BigRational = l.iter().sum();
    let e4 = l.iter().fold(BigRational::one(), |a, b| a * b);
    assert_eq!(c[1], -e1);
    assert_eq!(c[4], e4);
    let bad = EigenModel::Explicit(["x".into(), "1".into(), "1".into(), "1/0".into()]);
    assert!(p_q_poly(&d, &bad).is_err());
}

/// `X^2 - a X + χ q` with integer roots `(r, χq/r)`.
fn split(chi_q: i64, root: i64) -> (i64, [i64; 2]) {
    let other = chi_q / root;
    (root + other, [root, other])
}

#[test]
fn tensor_model_matches_explicit_roots() {
    for (q, cf, cg, rf, rg, ph) in [(7u64, 1i64, 1i64, 1i64, 7i64, 1i64), (7, -1, 1, -1, 7, -1), (13, 1, -1, 13, -13, 1), (5, -1, -1, 5, 1, -1)] {
        let (af, alphas) = split(cf * q as i64, rf);
        let (ag, betas) = split(cg * q as i64, rg);
        let d = HeckeDatum::from_ints(q, af, ag, cf, cg, ph, 1).unwrap();
        let mut c = vec![BigRational::one()];
        for a in alphas {
            for b in betas {
                let l = r(ph * a * b, 1);
                let mut next = c.clone();
                next.push(BigRational::zero());
                for (k, ck) in c.iter().enumerate() {
                    next[k + 1] -= &l * ck;
                }
                c = next;
            }
        }
        assert_eq!(p_q_poly(&d, &EigenModel::Tensor).unwrap(), c, "q={q}");
    }
}

#[test]
fn tame_congruence_for_a_split_prime() {
    let d = HeckeDatum::from_ints(7, 2, -3, 1, -1, 1, -1).unwrap();
    assert!(d.self_dual());
    let rep = tame_congruence(&d, &anticyclotomic(6), &EigenModel::Tensor, Some((3, 12))).unwrap();
    assert!(rep.pass && rep.model_verified, "{rep:?}");
    assert!(!rep.exact);
    assert_eq!(rep.p_adic_ideal_vanishes, Some(false));
}

#[test]
fn tame_congruence_detects_perturbation() {
    let d = HeckeDatum::from_ints(7, 3, -3, 1, -1, 1, -1).unwrap();
    let good = tame_congruence(&d, &anticyclotomic(6), &EigenModel::Tensor, None).unwrap();
    assert!(good.pass);
    // a_q(f) perturbed in P_𝔮 only.
    let bad = HeckeDatum::from_ints(7, 4, -3, 1, -1, 1, -1).unwrap();
    let poly = p_q_poly(&bad, &EigenModel::Tensor).unwrap();
    let alg = anticyclotomic(6);
    let lhs = script_p(&d, &alg);
    let v = alg.monomial((0, 1), d.phi_qbar.clone());
    let rhs = alg.scale(&alg.mul(&alg.mul(&v, &v), &alg.eval_poly(&poly, (1, 0))), &d.chi_f);
    assert!(!alg.reduce_mod(&alg.sub(&lhs, &rhs), &BigInt::from(6)).unwrap().is_empty());
}

#[test]
fn tame_congruence_fails_without_its_hypotheses() {
    let d = HeckeDatum::from_ints(11, 2, 5, 1, 1, 1, 1).unwrap();
    let rep = tame_congruence(&d, &free(10), &EigenModel::Tensor, None).unwrap();
    assert!(!rep.pass && !rep.model_verified && !rep.frobenius_product_trivial);
    assert!(!rep.difference.is_empty());
    let d = HeckeDatum::from_ints(11, 1, 2, 1, 1, 1, -1).unwrap();
    let rep = tame_congruence(&d, &anticyclotomic(10), &EigenModel::Tensor, None).unwrap();
    assert!(!rep.self_dual && !rep.pass);
}

#[test]
fn degenerate_modulus_is_reported() {
    // q = 19: q - 1 = 2·9 vanishes modulo 3^2.
    let d = HeckeDatum::from_ints(19, 1, 1, 1, 1, 1, 1).unwrap();
    let rep = tame_congruence(&d, &anticyclotomic(3), &EigenModel::Tensor, Some((3, 2))).unwrap();
    assert_eq!(rep.p_adic_ideal_vanishes, Some(true));
    assert!(rep.pass);
    // q = 2: everything is zero modulo 1.
    let d = HeckeDatum::from_ints(2, 1, 0, 1, 1, 1, 1).unwrap();
    let rep = tame_congruence(&d, &free(3), &EigenModel::Tensor, None).unwrap();
    assert!(rep.pass && rep.difference.is_empty());
}

#[test]
fn reduction_needs_invertible_denominators() {
    assert_eq!(reduce_rational(&r(3, 5), &BigInt::from(7)).unwrap(), BigInt::from(2));
    assert!(reduce_rational(&r(1, 2), &BigInt::from(6)).is_err());
}

proptest! {
    #[test]
    fn specialization_at_trivial_frobenius(
        q in prop::sample::select(vec![2u64, 5, 7, 11, 13]),
        af in -20i64..20, ag in -20i64..20,
        signs in prop::array::uniform4(prop::bool::ANY),
        order in 1u32..6,
    ) {
        let s = |b: bool| if b { 1 } else { -1 };
        let d = HeckeDatum::from_ints(q, af, ag, s(signs[0]), s(signs[1]), s(signs[2]), s(signs[3])).unwrap();
        let x = script_p(&d, &free(order));
        prop_assert_eq!(x.augmentation(), script_p_scalar(&d));
    }

    #[test]
    fn tensor_congruence_holds_for_self_dual_data(
        q in prop::sample::select(vec![5u64, 7, 11, 13, 17, 29]),
        af in -30i64..30, ag in -30i64..30,
        cf in prop::sample::select(vec![1i64, -1]),
        cg in prop::sample::select(vec![1i64, -1]),
        ph in prop::sample::select(vec![1i64, -1]),
        order in 1u32..8,
    ) {
        let pb = ph * cf * cg;
        let d = HeckeDatum::from_ints(q, af, ag, cf, cg, ph, pb).unwrap();
        let rep = tame_congruence(&d, &anticyclotomic(order), &EigenModel::Tensor, None).unwrap();
        prop_assert!(rep.pass && rep.model_verified, "{:?}", rep);
    }

    #[test]
    fn algebra_is_associative(
        a in prop::collection::vec((0u32..4, 0u32..4, -5i64..5), 0..5),
        b in prop::collection::vec((0u32..4, 0u32..4, -5i64..5), 0..5),
        c in prop::collection::vec((0u32..4, 0u32..4, -5i64..5), 0..5),
        rel in prop::option::of((0u32..4, 0u32..4)),
    ) {
        let alg = FrobeniusAlgebra::new(4, 4, rel).unwrap();
        let build = |v: &[(u32, u32, i64)]| v.iter().fold(alg.zero(), |acc, &(i, j, k)| alg.add(&acc, &alg.monomial((i, j), r(k, 1))));
        let (x, y, z) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(alg.mul(&alg.mul(&x, &y), &z), alg.mul(&x, &alg.mul(&y, &z)));
        prop_assert_eq!(alg.mul(&x, &y), alg.mul(&y, &x));
    }
}
