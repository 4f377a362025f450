use iwalg::*;
use num_bigint::BigInt;
use padic::{make_context, QuadField, QuadScalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(p: u64, level: u32) -> Iwasawa {
    let ctx = make_context(p, 12.min(padic::max_digits(p))).unwrap();
    Iwasawa::new(QuadField::from_ints(ctx, 0, 1).unwrap(), level)
}

fn big_binomial(n: u64, k: u64) -> BigInt {
    let mut c = BigInt::from(1);
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Coefficients of `(1+X)^e` as big integers.
fn big_power(e: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(1)];
    for k in 1..=e {
        let next = &out[k as usize - 1] * BigInt::from(e - k + 1) / BigInt::from(k);
        out.push(next);
    }
    debug_assert!(e < 4 || out[3] == big_binomial(e, 3));
    out
}

fn matches_big(iw: &Iwasawa, f: &IwasawaPoly, oracle: &[BigInt]) -> bool {
    let m = BigInt::from(iw.field.ctx.modulus());
    let len = f.coeffs.len().max(oracle.len());
    (0..len).all(|i| {
        let want = oracle.get(i).cloned().unwrap_or_default();
        let want = ((want % &m) + &m) % &m;
        let got = f.coeffs.get(i).map(|c| {
            assert!(c.b.is_zero());
            c.a.residue_mod(iw.field.ctx.digits).expect("integral")
        });
        BigInt::from(got.unwrap_or(0)) == want
    })
}

#[test]
fn phi_one_at_three() {
    let iw = setup(3, 2);
    let f = iw.phi(1).unwrap();
    assert!(matches_big(&iw, &f, &[3.into(), 3.into(), 1.into()]));
}

#[test]
fn phi_two_matches_binomial_oracle() {
    let iw = setup(3, 2);
    let mut oracle = vec![BigInt::from(0); 7];
    for e in [0u64, 3, 6] {
        for (i, c) in big_power(e).into_iter().enumerate() {
            oracle[i] += c;
        }
    }
    assert!(matches_big(&iw, &iw.phi(2).unwrap(), &oracle));
}

#[test]
fn omega_small_cases() {
    let iw = setup(3, 2);
    assert!(matches_big(&iw, &iw.omega(0).unwrap(), &[0.into(), 1.into()]));
    assert!(matches_big(&iw, &iw.omega(1).unwrap(), &[0.into(), 3.into(), 3.into(), 1.into()]));
    assert!(iw.phi(0).is_err());
}

#[test]
fn omega_and_phi_match_oracle_up_to_five() {
    for p in [3u64, 5] {
        let iw = setup(p, 5);
        for n in 0..=5u32 {
            let mut oracle = big_power(p.pow(n));
            oracle[0] -= 1;
            assert!(matches_big(&iw, &iw.omega(n).unwrap(), &oracle), "omega p={p} n={n}");
        }
    }
}

#[test]
fn telescoping_identities() {
    for p in [3u64, 5] {
        let iw = setup(p, 5);
        for n in 1..=5u32 {
            let lhs = iw.mul_plain(&iw.phi(n).unwrap(), &iw.omega(n - 1).unwrap());
            assert!(iw.eq_to_precision(&lhs, &iw.omega(n).unwrap()), "p={p} n={n}");
            let q = iw.exact_div(&iw.omega(n).unwrap(), &iw.omega(n - 1).unwrap()).unwrap();
            assert!(iw.eq_to_precision(&q, &iw.phi(n).unwrap()));
            let prod = iw.phi_product(1, n).unwrap();
            let x = iw.omega(0).unwrap();
            assert!(iw.eq_to_precision(&iw.exact_div(&iw.omega(n).unwrap(), &x).unwrap(), &prod));
        }
    }
}

#[test]
fn projection_examples() {
    let iw = setup(3, 3);
    let w1 = iw.reduce(&iw.omega(1).unwrap(), 2).unwrap();
    assert!(iw.project(&w1, 2).unwrap().is_zero());
    let x = iw.from_ints(&[0, 1]);
    assert!(iw.project(&x, 1).unwrap().is_zero());
    let f = iw.from_ints(&[1, 1]);
    assert!(iw.eq_to_precision(&iw.project(&f, 2).unwrap(), &f));
    let low = iw.zero_at(2);
    assert_eq!(iw.project(&low, 3).unwrap_err(), IwError::InsufficientTruncation { have: 1, need: 2 });
}

#[test]
fn trace_examples() {
    let iw = setup(3, 3);
    let one = iw.element(1, vec![iw.field.one()]).unwrap();
    let t = iw.trace(&one, 1, 2).unwrap();
    let phi1 = iw.reduce(&iw.phi(1).unwrap(), 1).unwrap();
    assert!(iw.eq_to_precision(&t, &phi1));
    let f = iw.element(2, vec![iw.field.int(2), iw.field.int(5), iw.field.int(-1)]).unwrap();
    assert!(iw.eq_to_precision(&iw.trace(&f, 2, 2).unwrap(), &f));
}

#[test]
fn sup_norm_examples() {
    let iw = setup(3, 2);
    assert!((iw.sup_norm(&iw.from_ints(&[3])).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(iw.sup_norm(&iw.from_ints(&[1, 3])).unwrap(), 1.0);
    assert_eq!(iw.sup_norm(&iw.phi(1).unwrap()).unwrap(), 1.0);
    assert_eq!(iw.sup_norm(&iw.zero_at(2)).unwrap(), 0.0);
}

#[test]
fn nonzero_remainder_is_an_error() {
    let iw = setup(3, 2);
    let f = iw.from_ints(&[1, 0, 0, 1]);
    assert!(matches!(iw.exact_div(&f, &iw.phi(1).unwrap()), Err(IwError::NonzeroRemainder { .. })));
}

fn random_element(iw: &Iwasawa, n: u32, rng: &mut ChaCha8Rng) -> IwasawaPoly {
    let c = (0..iw.rank(n))
        .map(|_| QuadScalar { a: iw.field.ctx.int(rng.gen_range(-50..50)), b: iw.field.ctx.int(rng.gen_range(-50..50)) })
        .collect();
    iw.element(n, c).unwrap()
}

#[test]
fn trace_after_project_is_ratio_multiplication() {
    let iw = setup(3, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..50 {
        let n2 = 2 + (i % 3) as u32;
        let n = 1 + (i % n2 as usize) as u32;
        let z = random_element(&iw, n2, &mut rng);
        let lhs = iw.trace(&iw.project(&z, n).unwrap(), n, n2).unwrap();
        let ratio = iw.phi_product(n, n2 - 1).unwrap();
        let rhs = iw.reduce(&iw.mul_plain(&z, &ratio), n2 - 1).unwrap();
        assert!(iw.eq_to_precision(&lhs, &rhs), "n={n} n2={n2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn project_trace_is_covering_degree(seed in 0u64..1000, n in 1u32..3, d in 0u32..3) {
        let iw = setup(3, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_element(&iw, n, &mut rng);
        let t = iw.trace(&f, n, n + d).unwrap();
        let back = iw.project(&t, n).unwrap();
        let scaled = iw.scale(&f, &iw.field.int(3i64.pow(d)));
        prop_assert!(iw.eq_to_precision(&back, &scaled));
    }
}
