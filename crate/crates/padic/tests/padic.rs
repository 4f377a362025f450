use num_rational::Rational64;
use padic::*;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

#[test]
fn context_construction() {
    assert!(make_context(3, 12).is_ok());
    assert!(make_context(5, 8).is_ok());
    let e = make_context(2, 12).unwrap_err();
    assert_eq!(e.to_string(), "p must be odd");
    assert!(make_context(9, 4).is_err());
    assert!(make_context(3, 0).is_err());
}

#[test]
fn basic_valuations() {
    let ctx = make_context(3, 12).unwrap();
    assert_eq!(ctx.int(9).valuation(), Valuation::Exact(r(2, 1)));
    assert!(matches!(ctx.int(0).valuation(), Valuation::ZeroToPrecision(_)));
    assert_eq!(ctx.int(-6).valuation(), Valuation::Exact(r(1, 1)));
}

#[test]
fn roots_for_vanishing_ap() {
    let ctx = make_context(3, 12).unwrap();
    let (f, a, b) = hecke_roots(ctx, ctx.int(0), ctx.int(1)).unwrap();
    assert!(f.eq_to_precision(&f.mul(&a, &a), &f.int(-3)));
    assert!(f.eq_to_precision(&f.add(&a, &b), &f.int(0)));
    assert!(f.eq_to_precision(&f.mul(&a, &b), &f.int(3)));
    assert_eq!(f.valuation(&a), Valuation::Exact(r(1, 2)));
    assert_eq!(f.valuation(&b), Valuation::Exact(r(1, 2)));
}

/// Slopes of the lower convex hull of `(i, v(c_i))` for `c_0 + c_1 X + X^2`.
fn newton_slopes(v0: i64, v1: Option<i64>) -> Vec<Rational64> {
    let pts: Vec<(i64, i64)> = match v1 {
        Some(v1) => vec![(0, v0), (1, v1), (2, 0)],
        None => vec![(0, v0), (2, 0)],
    };
    let mut hull = vec![pts[0]];
    for &q in &pts[1..] {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let mut out = vec![];
    for w in hull.windows(2) {
        let s = r(w[0].1 - w[1].1, w[1].0 - w[0].0);
        for _ in 0..(w[1].0 - w[0].0) {
            out.push(s);
        }
    }
    out
}

#[test]
fn roots_match_newton_polygon() {
    let ctx = make_context(5, 8).unwrap();
    let (f, a, b) = hecke_roots(ctx, ctx.int(5), ctx.int(1)).unwrap();
    let va = f.valuation(&a).exact().unwrap();
    let vb = f.valuation(&b).exact().unwrap();
    assert_eq!(va + vb, r(1, 1));
    let mut oracle = newton_slopes(1, Some(1));
    oracle.sort();
    let mut got = vec![va, vb];
    got.sort();
    assert_eq!(got, oracle);
}

#[test]
fn ordinary_input_rejected() {
    let ctx = make_context(3, 12).unwrap();
    let e = hecke_roots(ctx, ctx.int(2), ctx.int(1)).unwrap_err();
    assert_eq!(e, PadicError::Ordinary);
    assert!(e.to_string().contains("ordinary"));
}

#[test]
fn alpha_valuation_from_norm() {
    let ctx = make_context(3, 12).unwrap();
    let f = QuadField::from_ints(ctx, 0, 1).unwrap();
    assert_eq!(f.norm(&f.alpha()).valuation(), Valuation::Exact(r(1, 1)));
    assert_eq!(f.valuation(&f.alpha()), Valuation::Exact(r(1, 2)));
}

#[test]
fn division_precision_accounting() {
    let ctx = make_context(3, 12).unwrap();
    let x = ctx.int(7);
    let unit = ctx.int(2);
    assert_eq!(x.div(&unit).unwrap().precision(), 12);
    let p3 = ctx.int(27);
    assert_eq!(x.div(&p3).unwrap().precision(), 12 - 3 - 3);
    let y = ctx.int(27 * 5);
    let q = y.div(&p3).unwrap();
    assert_eq!(q.precision(), 12 - 3);
    assert!(q.eq_to_precision(&ctx.int(5)));
}

#[test]
fn inverse_of_alpha() {
    let ctx = make_context(3, 12).unwrap();
    let f = QuadField::from_ints(ctx, 3, 2).unwrap();
    let a = f.alpha();
    let ai = f.inv(&a).unwrap();
    let one = f.mul(&a, &ai);
    assert!(f.eq_to_precision(&one, &f.one()));
    assert!(one.precision() >= 10);
}

fn scalar(ctx: PadicContext) -> impl Strategy<Value = PadicScalar> {
    (-20000i64..20000, 0i32..4).prop_map(move |(x, s)| ctx.int(x).shift_by(-s))
}

fn quad(f: QuadField) -> impl Strategy<Value = QuadScalar> {
    (-5000i64..5000, -5000i64..5000).prop_map(move |(a, b)| QuadScalar { a: f.ctx.int(a), b: f.ctx.int(b) })
}

fn field() -> QuadField {
    let ctx = make_context(3, 12).unwrap();
    QuadField::from_ints(ctx, 3, 1).unwrap()
}

proptest! {
    #[test]
    fn valuation_additive(x in scalar(make_context(3, 12).unwrap()), y in scalar(make_context(3, 12).unwrap())) {
        if let (Valuation::Exact(a), Valuation::Exact(b)) = (x.valuation(), y.valuation()) {
            let xy = x.mul(&y);
            if let Valuation::Exact(c) = xy.valuation() {
                prop_assert_eq!(c, a + b);
            }
        }
    }

    #[test]
    fn unit_division_keeps_precision(x in -10000i64..10000, u in 1i64..1000) {
        let ctx = make_context(3, 12).unwrap();
        prop_assume!(u % 3 != 0);
        let q = ctx.int(x).div(&ctx.int(u)).unwrap();
        prop_assert_eq!(q.precision(), 12);
        prop_assert!(q.mul(&ctx.int(u)).eq_to_precision(&ctx.int(x)));
    }

    #[test]
    fn p_power_division_costs_digits(x in -10000i64..10000, k in 0i32..5) {
        let ctx = make_context(3, 12).unwrap();
        let q = ctx.int(x).div(&ctx.p_pow(k)).unwrap();
        prop_assert_eq!(q.precision(), 12 - k);
    }

    #[test]
    fn quad_ring_laws(x in quad(field()), y in quad(field()), z in quad(field())) {
        let f = field();
        prop_assert!(f.eq_to_precision(&f.mul(&x, &y), &f.mul(&y, &x)));
        prop_assert!(f.eq_to_precision(&f.mul(&f.mul(&x, &y), &z), &f.mul(&x, &f.mul(&y, &z))));
        prop_assert!(f.eq_to_precision(&f.mul(&x, &f.add(&y, &z)), &f.add(&f.mul(&x, &y), &f.mul(&x, &z))));
    }

    #[test]
    fn norm_multiplicative(x in quad(field()), y in quad(field())) {
        let f = field();
        let lhs = f.norm(&f.mul(&x, &y));
        let rhs = f.norm(&x).mul(&f.norm(&y));
        prop_assert!(lhs.eq_to_precision(&rhs));
    }

    #[test]
    fn quad_valuation_additive(x in quad(field()), y in quad(field())) {
        let f = field();
        if let (Valuation::Exact(a), Valuation::Exact(b)) = (f.valuation(&x), f.valuation(&y)) {
            if let Valuation::Exact(c) = f.valuation(&f.mul(&x, &y)) {
                prop_assert_eq!(c, a + b);
            }
        }
    }
}
