//! Quantities: exact rational magnitudes carrying a unit monomial.
//!
//! Units multiply and divide freely (50 lb over 9 person is a fine unit,
//! lb/person); addition insists on identical units. Rate problems route
//! through the equation solver, so dividing 50 lb among 9 people genuinely
//! solves 9·□ = 50 and inherits its context-widening trace.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::eqsolve::{solve, LinearEquation, SolveTrace};
use crate::error::{Error, Result};
use crate::semiring::{Context, Element};
use crate::universal::rational_image;

/// A product of named units with integer exponents, e.g. lb·person⁻¹.
/// Dimensionless is the empty monomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnitMonomial {
    exponents: BTreeMap<String, i64>,
}

impl UnitMonomial {
    pub fn dimensionless() -> UnitMonomial {
        UnitMonomial::default()
    }

    pub fn base(name: &str) -> UnitMonomial {
        let mut exponents = BTreeMap::new();
        exponents.insert(name.to_string(), 1);
        UnitMonomial { exponents }
    }

    pub fn from_exponents<I: IntoIterator<Item = (String, i64)>>(pairs: I) -> UnitMonomial {
        let mut exponents = BTreeMap::new();
        for (name, e) in pairs {
            let entry = exponents.entry(name).or_insert(0);
            *entry += e;
        }
        exponents.retain(|_, e| *e != 0);
        UnitMonomial { exponents }
    }

    pub fn is_dimensionless(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.exponents.get(name).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &UnitMonomial) -> UnitMonomial {
        UnitMonomial::from_exponents(
            self.exponents
                .iter()
                .chain(&other.exponents)
                .map(|(k, v)| (k.clone(), *v)),
        )
    }

    pub fn div(&self, other: &UnitMonomial) -> UnitMonomial {
        self.mul(&other.inverse())
    }

    pub fn inverse(&self) -> UnitMonomial {
        UnitMonomial {
            exponents: self
                .exponents
                .iter()
                .map(|(k, v)| (k.clone(), -v))
                .collect(),
        }
    }
}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let format_side = |side: Vec<(&String, i64)>| -> String {
            let mut out = String::new();
            for (i, (name, e)) in side.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                out.push_str(name);
                if *e > 1 {
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
            out
        };
        let pos: Vec<(&String, i64)> = self
            .exponents
            .iter()
            .filter(|(_, e)| **e > 0)
            .map(|(k, e)| (k, *e))
            .collect();
        let neg: Vec<(&String, i64)> = self
            .exponents
            .iter()
            .filter(|(_, e)| **e < 0)
            .map(|(k, e)| (k, -e))
            .collect();
        match (pos.is_empty(), neg.is_empty()) {
            (true, true) => Ok(()),
            (false, true) => f.write_str(&format_side(pos)),
            (true, false) => write!(f, "1/{}", format_side(neg)),
            (false, false) => write!(f, "{}/{}", format_side(pos), format_side(neg)),
        }
    }
}

/// An exact magnitude with a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantity {
    scalar: BigRational,
    unit: UnitMonomial,
}

impl Quantity {
    pub fn new(scalar: BigRational, unit: UnitMonomial) -> Quantity {
        Quantity { scalar, unit }
    }

    pub fn dimensionless(scalar: BigRational) -> Quantity {
        Quantity {
            scalar,
            unit: UnitMonomial::dimensionless(),
        }
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn unit(&self) -> &UnitMonomial {
        &self.unit
    }

    /// Addition requires identical units; there is no implicit conversion.
    pub fn add(&self, other: &Quantity) -> Result<Quantity> {
        if self.unit != other.unit {
            return Err(Error::DimensionMismatch {
                left: self.unit.to_string(),
                right: other.unit.to_string(),
            });
        }
        Ok(Quantity {
            scalar: &self.scalar + &other.scalar,
            unit: self.unit.clone(),
        })
    }

    pub fn mul(&self, other: &Quantity) -> Result<Quantity> {
        Ok(Quantity {
            scalar: &self.scalar * &other.scalar,
            unit: self.unit.mul(&other.unit),
        })
    }

    pub fn div(&self, other: &Quantity) -> Result<Quantity> {
        if other.scalar.is_zero() {
            return Err(Error::ZeroMagnitudeDivisor);
        }
        Ok(Quantity {
            scalar: &self.scalar / &other.scalar,
            unit: self.unit.div(&other.unit),
        })
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit.is_dimensionless() {
            write!(f, "{}", self.scalar)
        } else {
            write!(f, "{} {}", self.scalar, self.unit)
        }
    }
}

/// Shares out `total` per unit of `count` by solving count·□ = total in the
/// narrowest context that holds both scalars: integer inputs genuinely
/// localize (Z to Z[1/9] for the 50-over-9 case), rational inputs divide in
/// place. Returns the rate and the solver's trace.
pub fn solve_rate(total: &Quantity, count: &Quantity) -> Result<(Quantity, SolveTrace)> {
    if count.scalar.is_zero() {
        return Err(Error::ZeroMagnitudeDivisor);
    }
    let integral = total.scalar.denom().is_one() && count.scalar.denom().is_one();
    let (a, b, c) = if integral {
        let z = Context::integers();
        (
            Element::from_bigint(&z, count.scalar.numer().clone())?,
            Element::from_int(&z, 0)?,
            Element::from_bigint(&z, total.scalar.numer().clone())?,
        )
    } else {
        let q = Context::rationals();
        (
            Element::from_rational(&q, count.scalar.clone())?,
            Element::from_int(&q, 0)?,
            Element::from_rational(&q, total.scalar.clone())?,
        )
    };
    let eq = LinearEquation::new(a, b, c)?;
    let (value, trace) = solve(&eq)?;
    let scalar = rational_image(&value)?;
    let unit = total.unit.div(&count.unit);
    Ok((Quantity::new(scalar, unit), trace))
}
