//! Formal differentiation under randomized load: the dual-number route, the
//! shift-polynomial route, and a test-local Taylor expansion must all agree,
//! and the classical calculus identities hold exactly over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unring_core::dualcalc::{
    derivative, dual_inv, dual_mul, extend, seventeenth_century_quotient, DualNumber,
};
use unring_core::polyfrac::{
    ratfunc_eq_as_fractions, ratfunc_eq_as_functions, FunctionComparison, Polynomial,
    RationalFunction,
};
use unring_core::semiring::{Context, Element};
use unring_core::universal::{collapse_detect, InvertedSet};
use unring_core::semiring::OpKind;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn qelem(ctx: &Context, r: BigRational) -> Element {
    Element::from_rational(ctx, r).unwrap()
}

fn random_rat(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.random_range(-60..=60), rng.random_range(1..=12))
}

fn random_poly(rng: &mut ChaCha8Rng, ctx: &Context, max_degree: usize) -> Polynomial {
    let degree = rng.random_range(0..=max_degree);
    let coeffs: Vec<Element> = (0..=degree)
        .map(|_| qelem(ctx, random_rat(rng)))
        .collect();
    Polynomial::new(ctx, "x", coeffs).unwrap()
}

fn eq(a: &Element, b: &Element) -> bool {
    a.try_eq(b).expect("same context")
}

#[test]
fn leibniz_rule_holds_exactly_on_random_products() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e1b);
    for _ in 0..600 {
        let p = random_poly(&mut rng, &q, 6);
        let r = random_poly(&mut rng, &q, 6);
        let x = qelem(&q, random_rat(&mut rng));
        let lhs = derivative(&p.mul(&r).unwrap(), &x).unwrap();
        let rhs = p
            .eval(&x)
            .unwrap()
            .mul(&derivative(&r, &x).unwrap())
            .unwrap()
            .add(&r.eval(&x).unwrap().mul(&derivative(&p, &x).unwrap()).unwrap())
            .unwrap();
        assert!(eq(&lhs, &rhs));
    }
}

#[test]
fn differentiation_is_linear_on_random_sums() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    for _ in 0..600 {
        let p = random_poly(&mut rng, &q, 6);
        let r = random_poly(&mut rng, &q, 6);
        let x = qelem(&q, random_rat(&mut rng));
        let lhs = derivative(&p.add(&r).unwrap(), &x).unwrap();
        let rhs = derivative(&p, &x)
            .unwrap()
            .add(&derivative(&r, &x).unwrap())
            .unwrap();
        assert!(eq(&lhs, &rhs));
    }
}

#[test]
fn extending_a_polynomial_scales_the_dt_part_by_the_derivative() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0xe7e);
    for _ in 0..1_000 {
        let p = random_poly(&mut rng, &q, 6);
        let x = qelem(&q, random_rat(&mut rng));
        let y = qelem(&q, random_rat(&mut rng));
        let lifted = extend(&p, &x, &y).unwrap();
        assert!(eq(lifted.re(), &p.eval(&x).unwrap()));
        let expected_eps = y.mul(&derivative(&p, &x).unwrap()).unwrap();
        assert!(eq(lifted.eps(), &expected_eps));
    }
}

#[test]
fn dual_inverse_multiplies_back_to_one() {
    let q = Context::rationals();
    let one = DualNumber::new(qelem(&q, rat(1, 1)), qelem(&q, rat(0, 1))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    for _ in 0..1_000 {
        let re = loop {
            let r = random_rat(&mut rng);
            if r != rat(0, 1) {
                break r;
            }
        };
        let x = DualNumber::new(qelem(&q, re), qelem(&q, random_rat(&mut rng))).unwrap();
        let inv = dual_inv(&x).unwrap();
        assert!(dual_mul(&x, &inv).unwrap().try_eq(&one).unwrap());
        assert!(dual_mul(&inv, &x).unwrap().try_eq(&one).unwrap());
    }
}

#[test]
fn dual_inverse_reproduces_the_closed_formula() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0xf0);
    for _ in 0..1_000 {
        let x = loop {
            let r = random_rat(&mut rng);
            if r != rat(0, 1) {
                break r;
            }
        };
        let y = random_rat(&mut rng);
        let lifted = DualNumber::new(qelem(&q, x.clone()), qelem(&q, y.clone())).unwrap();
        let inv = dual_inv(&lifted).unwrap();
        // 1/(x + y dt) = 1/x - (y/x^2) dt, the derivative of 1/t at x scaled by y.
        let want_re = qelem(&q, x.clone().recip());
        let want_eps = qelem(&q, -y / (x.clone() * x));
        let want = DualNumber::new(want_re, want_eps).unwrap();
        assert!(inv.try_eq(&want).unwrap());
    }
}

#[test]
fn dt_is_not_cancellative_and_inverting_it_collapses_everything() {
    let q = Context::rationals();
    let dual = Context::dual(&q);
    let dt = Element::from_dual(DualNumber::dt(&q).unwrap());
    let zero = dual.zero().unwrap();
    // dt * dt = dt * 0 although dt != 0.
    assert!(eq(&dt.mul(&dt).unwrap(), &dt.mul(&zero).unwrap()));
    assert!(!eq(&dt, &zero));
    let set = InvertedSet::generated(OpKind::Multiplicative, vec![dt]).unwrap();
    let report = collapse_detect(&dual, &set).unwrap();
    assert!(report.collapsed_to_zero);
}

/// Taylor coefficients of p(x0 + h) in h, computed here from binomials with
/// no library involvement: coefficient k is sum over n >= k of
/// a_n * C(n, k) * x0^(n-k).
fn taylor_shift(coeffs: &[BigRational], x0: &BigRational) -> Vec<BigRational> {
    let deg = coeffs.len();
    let mut out = vec![rat(0, 1); deg];
    for (n, a) in coeffs.iter().enumerate() {
        let mut binom = BigRational::from_integer(BigInt::from(1));
        let mut power = num_traits::pow::pow(x0.clone(), n);
        for k in 0..=n {
            out[k] += a * &binom * &power;
            if k < n {
                let num = BigInt::from((n - k) as i64);
                let den = BigInt::from((k + 1) as i64);
                binom = binom * BigRational::new(num, den);
                if x0 == &rat(0, 1) {
                    power = if k + 1 == n { rat(1, 1) } else { rat(0, 1) };
                } else {
                    power = power / x0;
                }
            }
        }
    }
    out
}

#[test]
fn both_library_derivative_routes_match_a_taylor_expansion() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a7);
    for _ in 0..400 {
        let p = random_poly(&mut rng, &q, 6);
        let x0 = random_rat(&mut rng);
        let coeffs: Vec<BigRational> = p
            .coeffs()
            .iter()
            .map(|c| c.as_rational().unwrap().clone())
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        let shifted = taylor_shift(&coeffs, &x0);
        let x = qelem(&q, x0.clone());
        let value = p.eval(&x).unwrap();
        assert_eq!(value.as_rational().unwrap(), &shifted[0]);
        let by_shift = derivative(&p, &x).unwrap();
        let by_dual = seventeenth_century_quotient(&p, &x).unwrap();
        assert!(eq(&by_shift, &by_dual));
        if shifted.len() > 1 {
            assert_eq!(by_shift.as_rational().unwrap(), &shifted[1]);
        } else {
            assert!(by_shift.is_zero().unwrap());
        }
    }
}

#[test]
fn secant_slope_misses_the_derivative_by_an_exact_multiple_of_the_step() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec);
    for h in [rat(1, 10), rat(1, 100)] {
        for _ in 0..200 {
            let p = random_poly(&mut rng, &q, 6);
            let x0 = random_rat(&mut rng);
            let coeffs: Vec<BigRational> = p
                .coeffs()
                .iter()
                .map(|c| c.as_rational().unwrap().clone())
                .collect();
            if coeffs.len() < 2 {
                continue;
            }
            let shifted = taylor_shift(&coeffs, &x0);
            let x = qelem(&q, x0.clone());
            let x_h = qelem(&q, x0.clone() + h.clone());
            let secant = (p.eval(&x_h).unwrap().as_rational().unwrap()
                - p.eval(&x).unwrap().as_rational().unwrap())
                / h.clone();
            let deriv = derivative(&p, &x).unwrap().as_rational().unwrap().clone();
            // The gap is h times the tail of the Taylor expansion, exactly.
            let mut tail = rat(0, 1);
            for (k, c) in shifted.iter().enumerate().skip(2) {
                tail += c * num_traits::pow::pow(h.clone(), k - 2);
            }
            assert_eq!(secant - deriv, h.clone() * tail);
        }
    }
}

fn random_ratfunc(rng: &mut ChaCha8Rng, ctx: &Context) -> RationalFunction {
    loop {
        let num = random_poly(rng, ctx, 4);
        let den = random_poly(rng, ctx, 3);
        if !den.is_zero() {
            return RationalFunction::new(num, den).unwrap();
        }
    }
}

#[test]
fn fraction_equal_functions_never_evaluate_unequal() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfe);
    let mut checked = 0usize;
    while checked < 1_000 {
        let f = random_ratfunc(&mut rng, &q);
        // Scale numerator and denominator by a common nonzero polynomial:
        // fraction-equal by construction.
        let scale = loop {
            let s = random_poly(&mut rng, &q, 2);
            if !s.is_zero() {
                break s;
            }
        };
        let g = RationalFunction::new(
            f.num().mul(&scale).unwrap(),
            f.den().mul(&scale).unwrap(),
        )
        .unwrap();
        assert!(ratfunc_eq_as_fractions(&f, &g).unwrap());
        let samples: Vec<Element> = (0..6)
            .map(|_| qelem(&q, random_rat(&mut rng)))
            .collect();
        match ratfunc_eq_as_functions(&f, &g, &samples).unwrap() {
            FunctionComparison::Unequal { .. } => {
                panic!("fraction-equal functions disagreed on a sample")
            }
            FunctionComparison::Equal | FunctionComparison::DomainMismatch { .. } => {}
        }
        checked += 1;
    }
}

#[test]
fn fraction_equality_is_an_equivalence_relation_on_rational_functions() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0xe91);
    for _ in 0..200 {
        let f = random_ratfunc(&mut rng, &q);
        let g = random_ratfunc(&mut rng, &q);
        let h = random_ratfunc(&mut rng, &q);
        assert!(ratfunc_eq_as_fractions(&f, &f).unwrap());
        assert_eq!(
            ratfunc_eq_as_fractions(&f, &g).unwrap(),
            ratfunc_eq_as_fractions(&g, &f).unwrap()
        );
        if ratfunc_eq_as_fractions(&f, &g).unwrap() && ratfunc_eq_as_fractions(&g, &h).unwrap() {
            assert!(ratfunc_eq_as_fractions(&f, &h).unwrap());
        }
    }
}

#[test]
fn polynomial_evaluation_is_a_ring_morphism() {
    let q = Context::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0x30);
    for _ in 0..600 {
        let p = random_poly(&mut rng, &q, 6);
        let r = random_poly(&mut rng, &q, 6);
        let x = qelem(&q, random_rat(&mut rng));
        let sum = p.add(&r).unwrap().eval(&x).unwrap();
        assert!(eq(&sum, &p.eval(&x).unwrap().add(&r.eval(&x).unwrap()).unwrap()));
        let prod = p.mul(&r).unwrap().eval(&x).unwrap();
        assert!(eq(&prod, &p.eval(&x).unwrap().mul(&r.eval(&x).unwrap()).unwrap()));
    }
}
