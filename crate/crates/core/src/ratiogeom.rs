//! Exact geometry of ratios.
//!
//! A ratio is a nonzero point (a, b) of the plane up to nonzero scaling; read
//! it as "b per a", so its fraction form is b/a when a ≠ 0. The space of
//! ratios is a line glued into a loop, and a loop of ratios that returns to
//! its start can come back flipped: transporting a choice of representative
//! around the loop multiplies it by a sign, computed here exactly. Oriented
//! ratios (points up to *positive* scaling) double-cover the plain ones and
//! never flip.
//!
//! Everything is exact big-integer arithmetic except [`Ratio::to_angle`] and
//! [`OrientedRatio::to_angle`], which exist only to print approximate
//! positions and play no part in any decision.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A primitive integer representative: gcd(a, b) = 1, not both zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveDirection {
    pub a: BigInt,
    pub b: BigInt,
}

impl PrimitiveDirection {
    fn from_rationals(a: &BigRational, b: &BigRational) -> PrimitiveDirection {
        // Clear denominators, then divide by the gcd.
        let scale = a.denom().lcm(b.denom());
        let ia = (a * BigRational::from_integer(scale.clone())).to_integer();
        let ib = (b * BigRational::from_integer(scale)).to_integer();
        let g = ia.gcd(&ib);
        debug_assert!(!g.is_zero());
        PrimitiveDirection {
            a: &ia / &g,
            b: &ib / &g,
        }
    }

    pub fn negated(&self) -> PrimitiveDirection {
        PrimitiveDirection {
            a: -&self.a,
            b: -&self.b,
        }
    }

    /// Normalizes the overall sign: b > 0, or b = 0 and a > 0.
    fn canonical(self) -> PrimitiveDirection {
        if self.b.is_negative() || (self.b.is_zero() && self.a.is_negative()) {
            self.negated()
        } else {
            self
        }
    }

    fn dot(&self, other: &PrimitiveDirection) -> BigInt {
        &self.a * &other.a + &self.b * &other.b
    }
}

/// A nonzero plane point up to nonzero rescaling.
#[derive(Debug, Clone)]
pub struct Ratio {
    a: BigRational,
    b: BigRational,
}

impl Ratio {
    pub fn new(a: BigRational, b: BigRational) -> Result<Ratio> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPair);
        }
        Ok(Ratio { a, b })
    }

    pub fn from_integers(a: i64, b: i64) -> Result<Ratio> {
        Ratio::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn components(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }

    /// The fraction this ratio denotes: b per a. Vertical-axis ratios
    /// (a = 0) have no fraction form.
    pub fn to_fraction(&self) -> Result<BigRational> {
        if self.a.is_zero() {
            return Err(Error::VerticalAxis);
        }
        Ok(&self.b / &self.a)
    }

    /// The sign-normalized primitive integer representative.
    pub fn canonical_primitive(&self) -> PrimitiveDirection {
        PrimitiveDirection::from_rationals(&self.a, &self.b).canonical()
    }

    /// Approximate position in [0, π), for display only.
    pub fn to_angle(&self) -> f64 {
        let p = self.canonical_primitive();
        let af = p.a.to_f64().unwrap_or(0.0);
        let bf = p.b.to_f64().unwrap_or(0.0);
        let theta = libm::atan2(bf, af);
        if theta < 0.0 {
            theta + core::f64::consts::PI
        } else {
            theta
        }
    }
}

/// Ratio equality by cross-multiplication: (a, b) ~ (a', b') iff a·b' = a'·b.
pub fn ratio_eq(x: &Ratio, y: &Ratio) -> bool {
    &x.a * &y.b == &y.a * &x.b
}

/// A nonzero plane point up to positive rescaling.
#[derive(Debug, Clone)]
pub struct OrientedRatio {
    dir: PrimitiveDirection,
}

impl OrientedRatio {
    pub fn new(a: BigRational, b: BigRational) -> Result<OrientedRatio> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPair);
        }
        // Positive scaling only, so the sign pattern of (a, b) is preserved.
        Ok(OrientedRatio {
            dir: PrimitiveDirection::from_rationals(&a, &b),
        })
    }

    pub fn from_integers(a: i64, b: i64) -> Result<OrientedRatio> {
        OrientedRatio::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn direction(&self) -> &PrimitiveDirection {
        &self.dir
    }

    pub fn antipode(&self) -> OrientedRatio {
        OrientedRatio {
            dir: self.dir.negated(),
        }
    }

    /// Forgets the orientation.
    pub fn underlying_ratio(&self) -> Ratio {
        Ratio {
            a: BigRational::from_integer(self.dir.a.clone()),
            b: BigRational::from_integer(self.dir.b.clone()),
        }
    }

    /// Approximate position in [0, 2π), for display only.
    pub fn to_angle(&self) -> f64 {
        let af = self.dir.a.to_f64().unwrap_or(0.0);
        let bf = self.dir.b.to_f64().unwrap_or(0.0);
        let theta = libm::atan2(bf, af);
        if theta < 0.0 {
            theta + 2.0 * core::f64::consts::PI
        } else {
            theta
        }
    }
}

/// Oriented equality: identical primitive directions.
pub fn oriented_eq(x: &OrientedRatio, y: &OrientedRatio) -> bool {
    x.dir == y.dir
}

/// The sign a representative picks up around a closed loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromySign {
    Plus,
    Minus,
}

impl core::fmt::Display for MonodromySign {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MonodromySign::Plus => f.write_str("+1"),
            MonodromySign::Minus => f.write_str("-1"),
        }
    }
}

/// Transports a representative of the first stage along the loop, choosing at
/// each stage the sign that keeps a positive dot product with the previous
/// representative, and compares what comes back with what left.
///
/// The loop must revisit its starting ratio at the end, and consecutive
/// stages must not be perpendicular (there would be no preferred sign).
pub fn monodromy_ratios(stages: &[Ratio]) -> Result<MonodromySign> {
    let (first, rest) = match stages {
        [first, rest @ ..] if !rest.is_empty() => (first, rest),
        _ => return Err(Error::OpenLoop),
    };
    if !ratio_eq(first, stages.last().expect("nonempty")) {
        return Err(Error::OpenLoop);
    }
    let start = first.canonical_primitive();
    let mut carried = start.clone();
    for (offset, stage) in rest.iter().enumerate() {
        let candidate = stage.canonical_primitive();
        let d = candidate.dot(&carried);
        if d.is_zero() {
            return Err(Error::AmbiguousTransport { stage: offset + 1 });
        }
        carried = if d.is_negative() {
            candidate.negated()
        } else {
            candidate
        };
    }
    if carried == start {
        Ok(MonodromySign::Plus)
    } else {
        debug_assert_eq!(carried, start.negated());
        Ok(MonodromySign::Minus)
    }
}

/// The oriented version: representatives are already pinned by orientation,
/// so a closed oriented loop always comes back unchanged. The perpendicular
/// precondition is still enforced, for parity with the unoriented walk.
pub fn monodromy_oriented(stages: &[OrientedRatio]) -> Result<MonodromySign> {
    let (first, rest) = match stages {
        [first, rest @ ..] if !rest.is_empty() => (first, rest),
        _ => return Err(Error::OpenLoop),
    };
    if !oriented_eq(first, stages.last().expect("nonempty")) {
        return Err(Error::OpenLoop);
    }
    let mut carried = first.dir.clone();
    for (offset, stage) in rest.iter().enumerate() {
        if stage.dir.dot(&carried).is_zero() {
            return Err(Error::AmbiguousTransport { stage: offset + 1 });
        }
        carried = stage.dir.clone();
    }
    debug_assert_eq!(&carried, &first.dir);
    Ok(MonodromySign::Plus)
}

/// Doubles a loop end to end: [r0, .., r0] becomes [r0, .., r0, .., r0].
pub fn doubled<T: Clone>(stages: &[T]) -> Vec<T> {
    let mut out = stages.to_vec();
    out.extend_from_slice(&stages[1..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn r(a: i64, b: i64) -> Ratio {
        Ratio::from_integers(a, b).unwrap()
    }

    #[test]
    fn equality_ignores_scale_and_sign() {
        assert!(ratio_eq(&r(2, 3), &r(4, 6)));
        assert!(ratio_eq(&r(2, 3), &r(-2, -3)));
        assert!(!ratio_eq(&r(2, 3), &r(3, 2)));
        assert!(Ratio::from_integers(0, 0).is_err());
    }

    #[test]
    fn oriented_equality_keeps_sign() {
        let x = OrientedRatio::from_integers(2, 3).unwrap();
        let y = OrientedRatio::from_integers(4, 6).unwrap();
        assert!(oriented_eq(&x, &y));
        assert!(!oriented_eq(&x, &x.antipode()));
        assert!(ratio_eq(
            &x.underlying_ratio(),
            &x.antipode().underlying_ratio()
        ));
    }

    #[test]
    fn fractions_read_b_per_a() {
        assert_eq!(r(9, 50).to_fraction().unwrap().to_string(), "50/9");
        assert!(r(0, 1).to_fraction().is_err());
    }

    #[test]
    fn half_turn_flips() {
        let loop_stages = [
            r(1, 0),
            r(2, 1),
            r(1, 1),
            r(1, 2),
            r(0, 1),
            r(-1, 2),
            r(-1, 1),
            r(-2, 1),
            r(1, 0),
        ];
        assert_eq!(monodromy_ratios(&loop_stages).unwrap(), MonodromySign::Minus);
        // Traversing it twice undoes the flip.
        assert_eq!(
            monodromy_ratios(&doubled(&loop_stages)).unwrap(),
            MonodromySign::Plus
        );
    }

    #[test]
    fn open_and_perpendicular_loops_are_rejected() {
        assert!(matches!(
            monodromy_ratios(&[r(1, 0), r(0, 1), r(1, 1)]),
            Err(Error::OpenLoop)
        ));
        assert!(matches!(
            monodromy_ratios(&[r(1, 0), r(0, 1), r(1, 0)]),
            Err(Error::AmbiguousTransport { stage: 1 })
        ));
    }

    #[test]
    fn oriented_compass_loop_is_trivial() {
        let compass = [
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
            (1, 0),
        ];
        let stages: Vec<OrientedRatio> = compass
            .iter()
            .map(|&(a, b)| OrientedRatio::from_integers(a, b).unwrap())
            .collect();
        assert_eq!(monodromy_oriented(&stages).unwrap(), MonodromySign::Plus);
    }

    #[test]
    fn angles_land_in_their_ranges() {
        let theta = r(1, 1).to_angle();
        assert!((theta - core::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let down = OrientedRatio::from_integers(0, -1).unwrap().to_angle();
        assert!((down - 3.0 * core::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // Unoriented angle of the same direction folds into [0, π).
        let folded = r(0, -1).to_angle();
        assert!((folded - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
}
