//! Unit-carrying arithmetic: exponents form a free commutative group,
//! addition is total exactly on matching units, and dividing a total by a
//! count routes through the equation solver and multiplies back exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unring_core::quantity::{solve_rate, Quantity, UnitMonomial};

const ALPHABET: [&str; 3] = ["kg", "m", "s"];

fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn monomial(exps: &[i64; 3]) -> UnitMonomial {
    UnitMonomial::from_exponents(
        ALPHABET
            .iter()
            .zip(exps)
            .map(|(name, e)| (name.to_string(), *e)),
    )
}

fn exps() -> impl Strategy<Value = [i64; 3]> {
    [-3i64..=3, -3i64..=3, -3i64..=3]
}

fn scalar() -> impl Strategy<Value = BigRational> {
    (-200i64..=200, 1i64..=60).prop_map(|(p, q)| rational(p, q))
}

proptest! {
    #[test]
    fn unit_exponents_form_a_free_commutative_group(
        x in exps(),
        y in exps(),
        z in exps(),
    ) {
        let (mx, my, mz) = (monomial(&x), monomial(&y), monomial(&z));
        prop_assert_eq!(mx.mul(&my), my.mul(&mx));
        prop_assert_eq!(mx.mul(&my).mul(&mz), mx.mul(&my.mul(&mz)));
        prop_assert_eq!(mx.mul(&UnitMonomial::dimensionless()), mx.clone());
        prop_assert_eq!(mx.mul(&mx.inverse()), UnitMonomial::dimensionless());
        prop_assert_eq!(mx.mul(&my).div(&my), mx.clone());
    }

    #[test]
    fn quantity_division_undoes_multiplication(
        sx in scalar(),
        sy in scalar(),
        x in exps(),
        y in exps(),
    ) {
        prop_assume!(sy != rational(0, 1));
        let qx = Quantity::new(sx, monomial(&x));
        let qy = Quantity::new(sy, monomial(&y));
        let back = qx.mul(&qy).unwrap().div(&qy).unwrap();
        prop_assert_eq!(back, qx);
    }

    #[test]
    fn addition_succeeds_exactly_on_matching_units(
        sx in scalar(),
        sy in scalar(),
        x in exps(),
        y in exps(),
    ) {
        let qx = Quantity::new(sx.clone(), monomial(&x));
        let qy = Quantity::new(sy.clone(), monomial(&y));
        match qx.add(&qy) {
            Ok(sum) => {
                prop_assert_eq!(&x, &y, "only like units may add");
                prop_assert_eq!(sum.scalar().clone(), sx + sy);
                prop_assert_eq!(sum.unit(), qx.unit());
            }
            Err(_) => prop_assert_ne!(&x, &y, "like units must add"),
        }
    }
}

#[test]
fn a_thousand_random_rates_multiply_back_to_their_totals() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x2a7e);
    for _ in 0..1_000 {
        let total = Quantity::new(
            rational(rng.random_range(-400..=400), rng.random_range(1..=30)),
            monomial(&[
                rng.random_range(-2..=2),
                rng.random_range(-2..=2),
                rng.random_range(-2..=2),
            ]),
        );
        let count = Quantity::new(
            loop {
                let s = rational(rng.random_range(-30..=30), rng.random_range(1..=6));
                if s != rational(0, 1) {
                    break s;
                }
            },
            monomial(&[0, 0, rng.random_range(-1..=1)]),
        );
        let (rate, trace) = solve_rate(&total, &count).unwrap();
        assert!(!trace.collapsed);
        let back = rate.mul(&count).unwrap();
        assert_eq!(back.scalar(), total.scalar());
        assert_eq!(back.unit(), total.unit());
    }
}

#[test]
fn fully_cancelling_units_leave_a_bare_number() {
    let six_pounds = Quantity::new(rational(6, 1), UnitMonomial::base("lb"));
    let three_pounds = Quantity::new(rational(3, 1), UnitMonomial::base("lb"));
    let (rate, _) = solve_rate(&six_pounds, &three_pounds).unwrap();
    assert!(rate.unit().is_dimensionless());
    assert_eq!(rate.scalar(), &rational(2, 1));
    assert_eq!(rate.to_string(), "2");
}

#[test]
fn unit_display_separates_positive_and_negative_powers() {
    let m = monomial(&[1, 2, -1]);
    assert_eq!(m.to_string(), "kg*m^2/s");
    assert_eq!(monomial(&[0, 0, -1]).to_string(), "1/s");
    assert_eq!(monomial(&[0, 0, 0]).to_string(), "");
}
