#![allow(clippy::needless_range_loop)]

use iwalg::{Iwasawa, IwasawaPoly};
use logmat::*;
use num_rational::Rational64;
use padic::{make_context, QuadField, QuadScalar};
use proptest::prelude::*;

fn family(ap: i64, chi: i64) -> SignedMatrixFamily {
    let ctx = make_context(3, 12).unwrap();
    SignedMatrixFamily::new(Iwasawa::new(QuadField::from_ints(ctx, ap, chi).unwrap(), 6)).unwrap()
}

fn poly_is(iw: &Iwasawa, f: &IwasawaPoly, want: &IwasawaPoly) -> bool {
    iw.eq_to_precision(f, want)
}

#[test]
fn c_product_level_one() {
    let fam = family(0, 1);
    let iw = &fam.iw;
    let c = fam.c_product(1).unwrap();
    assert!(poly_is(iw, &c[0][0], &iw.from_ints(&[0])));
    assert!(poly_is(iw, &c[0][1], &iw.from_ints(&[1])));
    assert!(poly_is(iw, &c[1][0], &iw.from_ints(&[-3, -3, -1])));
    assert!(poly_is(iw, &c[1][1], &iw.from_ints(&[0])));
}

#[test]
fn c_product_determinant_and_adjugate() {
    for (ap, chi) in [(0, 1), (3, 2), (6, 1)] {
        let fam = family(ap, chi);
        let iw = &fam.iw;
        let f = iw.field;
        for n in 1..=4u32 {
            let det = determinant(iw, &fam.c_product(n).unwrap());
            let want = iw.scale(&iw.phi_product(1, n).unwrap(), &f.pow(&f.int(chi), n));
            assert!(poly_is(iw, &det, &want));
            let adj = fam.c_adjugate(n).unwrap();
            assert!(poly_is(iw, &adj[0][0], &iw.from_ints(&[0])));
            assert!(poly_is(iw, &adj[0][1], &iw.from_ints(&[-1])));
            assert!(poly_is(iw, &adj[1][0], &iw.scale(&iw.phi(n).unwrap(), &f.int(chi))));
            assert!(poly_is(iw, &adj[1][1], &iw.from_ints(&[ap])));
            let prod = mat_mul(iw, &fam.c_matrix(n).unwrap(), &adj, None).unwrap();
            let dn = determinant(iw, &fam.c_matrix(n).unwrap());
            assert!(poly_is(iw, &prod[0][0], &dn) && poly_is(iw, &prod[1][1], &dn));
            assert!(prod[0][1].is_zero() && prod[1][0].is_zero());
        }
    }
}

#[test]
fn mlog_level_one_hand_value() {
    // A = [[0, -1/3], [1, 0]], A^2 = -1/3, C_1 = [[0, 1], [-3, 0]] mod X,
    // alpha - beta = 2 alpha.
    let fam = family(0, 1);
    let f = fam.iw.field;
    let ml = fam.mlog(1, 10).unwrap();
    assert_eq!(ml.witness, 1);
    let two_alpha = f.mul_int(&f.alpha(), 2);
    let third = f.inv(&f.int(3)).unwrap();
    let want = [[f.zero(), f.neg(&f.mul(&two_alpha, &third))], [two_alpha, f.zero()]];
    let at_zero = reduce_mat(&fam.iw, &ml.entries, 0).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(at_zero[i][j].coeffs.len(), 1);
            assert!(f.eq_to_precision(&at_zero[i][j].coeffs[0], &want[i][j]), "{i}{j}");
        }
    }
}

#[test]
fn q_diagonalizes_a() {
    for (ap, chi) in [(0, 1), (3, 1), (0, 2), (9, 4)] {
        let fam = family(ap, chi);
        let f = fam.iw.field;
        let d = fam.diagonalized_a().unwrap();
        assert!(f.eq_to_precision(&d[0][0], &f.inv(&fam.alpha).unwrap()));
        assert!(f.eq_to_precision(&d[1][1], &f.inv(&fam.beta).unwrap()));
        assert!(d[0][1].is_zero() && d[1][0].is_zero());
    }
}

#[test]
fn mlog_stabilization_contract() {
    let fam = family(3, 2);
    for m in 1..=4 {
        let ml = fam.mlog(m, 12).unwrap();
        let again = fam.mlog_term(m, ml.witness + 1).unwrap();
        assert!(mat_eq(&fam.iw, &ml.entries, &again));
        assert!(ml.precision >= 12 - 2 * (ml.witness as i32 + 1));
    }
}

#[test]
fn mlog_levels_are_compatible() {
    for (ap, chi) in [(0, 1), (3, 2)] {
        let fam = family(ap, chi);
        for m in 2..=4 {
            let hi = fam.mlog(m, 12).unwrap();
            let lo = fam.mlog(m - 1, 12).unwrap();
            assert!(mat_eq(&fam.iw, &reduce_mat(&fam.iw, &hi.entries, m - 1).unwrap(), &lo.entries));
        }
    }
}

#[test]
fn mlog_determinant() {
    let fam = family(3, 2);
    let iw = &fam.iw;
    let f = iw.field;
    for m in 1..=3 {
        let ml = fam.mlog(m, 12).unwrap();
        let n = ml.witness;
        let det = determinant(iw, &ml.entries);
        let ab = f.sub(&fam.alpha, &fam.beta);
        let det_a = scalar_det(&f, &fam.a);
        let c = f.mul(&f.mul(&ab, &ab), &f.pow(&det_a, n + 1));
        let c = f.mul(&c, &f.pow(&f.int(2), n));
        let want = iw.reduce(&iw.scale(&iw.phi_product(1, n).unwrap(), &c), m).unwrap();
        assert!(iw.eq_to_precision(&det, &want));
    }
}

#[test]
fn growth_certificate_examples() {
    let fam = family(0, 1);
    let iw = &fam.iw;
    let one = iw.reduce(&iw.from_ints(&[1]), 3).unwrap();
    assert!(growth_order_certificate(iw, &one, Rational64::new(1, 2)).unwrap().pass);
    assert!(growth_order_certificate(iw, &one, Rational64::from_integer(0)).unwrap().pass);
}

/// Brute-force scan of `p^-1 Phi_1 ... Phi_k`: level `n` passes iff its minimal
/// coefficient valuation plus `floor(lambda (n-1))` is nonnegative.
#[test]
fn growth_certificate_matches_valuation_scan() {
    let fam = family(0, 1);
    let iw = &fam.iw;
    let f = iw.field;
    let third = f.inv(&f.int(3)).unwrap();
    for k in 1..=3u32 {
        let g = iw.reduce(&iw.scale(&iw.phi_product(1, k).unwrap(), &third), 3).unwrap();
        for lam in [Rational64::from_integer(0), Rational64::new(1, 2), Rational64::new(2, 3)] {
            let cert = growth_order_certificate(iw, &g, lam).unwrap();
            let mut oracle = None;
            for n in 1..=4u32 {
                let r = iw.project(&g, n).unwrap();
                let v = r
                    .coeffs
                    .iter()
                    .filter(|c| !c.is_zero())
                    .map(|c| c.a.val_or_prec() as i64)
                    .min();
                let shift = (lam * Rational64::from_integer(n as i64 - 1)).floor().to_integer();
                if let Some(v) = v {
                    if v + shift < 0 && oracle.is_none() {
                        oracle = Some(n);
                    }
                }
            }
            assert_eq!(cert.first_failure, oracle, "k={k} lambda={lam}");
        }
    }
}

#[test]
fn q_inverse_mlog_has_log_half_growth() {
    for (ap, chi) in [(0, 1), (3, 1), (0, 2)] {
        let fam = family(ap, chi);
        let iw = &fam.iw;
        let f = iw.field;
        let ml = fam.mlog(4, 12).unwrap();
        let qm = scalar_times_poly(iw, &fam.q_inverse().unwrap(), &ml.entries);
        let lam = f.valuation(&fam.alpha).exact().unwrap();
        let bound = -lam * 2;
        for col in 0..2 {
            for row in 0..2 {
                let ok = growth_certificate_exact(iw, &qm[row][col], lam, bound).unwrap();
                assert!(ok.pass, "row {row} col {col}");
                let flat = growth_certificate_exact(iw, &qm[row][col], Rational64::from_integer(0), bound).unwrap();
                assert!(!flat.pass, "lambda = 0 must fail");
            }
        }
    }
}

#[test]
fn parity_columns() {
    for chi in [1, 2] {
        let fam = family(0, chi);
        let r2 = fam.parity_structure(2, 12).unwrap();
        assert!(r2.complementary);
        assert_eq!(r2.columns_nonzero, [true, true]);
        let r1 = fam.parity_structure(1, 12).unwrap();
        assert_eq!(r1.column_divisors.concat(), vec![1]);
        let r4 = fam.parity_structure(4, 12).unwrap();
        assert!(r4.complementary);
    }
    assert_eq!(family(3, 1).parity_structure(2, 12).unwrap_err(), LogError::NonzeroAp);
}

#[test]
fn ordinary_family_rejected() {
    let ctx = make_context(3, 12).unwrap();
    let iw = Iwasawa::new(QuadField::from_ints(ctx, 1, 1).unwrap(), 2);
    assert!(SignedMatrixFamily::new(iw).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn a_inverse_is_integral(ap in -4i64..4, chi in 1i64..8) {
        prop_assume!(chi % 3 != 0);
        let fam = family(3 * ap, chi);
        let f = fam.iw.field;
        let ai = scalar_inverse(&f, &fam.a).unwrap();
        let want: [[QuadScalar; 2]; 2] = [[f.int(3 * ap), f.int(1)], [f.int(-3 * chi), f.int(0)]];
        for i in 0..2 { for j in 0..2 {
            prop_assert!(f.eq_to_precision(&ai[i][j], &want[i][j]));
        }}
    }
}
