//! Formal calculus with dual numbers: base[dt] where dt² = 0.
//!
//! The derivative comes out of pure algebra twice over, by two genuinely
//! different routes that must agree:
//!
//! * [`derivative`] expands p(x + t) as a polynomial in a fresh variable t,
//!   subtracts p(x), observes the constant term vanish, and reads off the
//!   coefficient of t.
//! * [`seventeenth_century_quotient`] plugs the dual number x + dt straight
//!   into p, subtracts p(x), and divides by dt (which is exactly "discard
//!   the vanished real part and keep the dt coefficient").
//!
//! No limits, no epsilons, no floats.

use alloc::string::ToString;
use alloc::vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::polyfrac::Polynomial;
use crate::semiring::{Context, Element};

/// re + eps·dt with both parts in the same base context.
#[derive(Debug, Clone)]
pub struct DualNumber {
    re: Element,
    eps: Element,
}

impl DualNumber {
    pub(crate) fn raw(re: Element, eps: Element) -> DualNumber {
        DualNumber { re, eps }
    }

    pub fn new(re: Element, eps: Element) -> Result<DualNumber> {
        re.context().require_same(eps.context())?;
        Ok(DualNumber { re, eps })
    }

    /// The element x + 0·dt.
    pub fn constant(re: Element) -> Result<DualNumber> {
        let zero = re
            .context()
            .zero()
            .ok_or_else(|| re.context().unsupported("zero"))?;
        Ok(DualNumber { re, eps: zero })
    }

    /// The infinitesimal dt itself.
    pub fn dt(base: &Context) -> Result<DualNumber> {
        let zero = base.zero().ok_or_else(|| base.unsupported("zero"))?;
        let one = base.one().ok_or_else(|| base.unsupported("one"))?;
        Ok(DualNumber { re: zero, eps: one })
    }

    pub fn re(&self) -> &Element {
        &self.re
    }

    pub fn eps(&self) -> &Element {
        &self.eps
    }

    pub fn base(&self) -> &Context {
        self.re.context()
    }

    pub fn try_eq(&self, other: &DualNumber) -> Result<bool> {
        Ok(self.re.try_eq(&other.re)? && self.eps.try_eq(&other.eps)?)
    }
}

impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re_zero = self.re.is_zero().unwrap_or(false);
        let eps_zero = self.eps.is_zero().unwrap_or(false);
        if eps_zero {
            return write!(f, "{}", self.re);
        }
        let eps_str = self.eps.to_string();
        let eps_term = if self.eps.is_one().unwrap_or(false) {
            "dt".to_string()
        } else if eps_str == "-1" {
            "-dt".to_string()
        } else if eps_str.contains(' ') {
            alloc::format!("({eps_str})*dt")
        } else {
            alloc::format!("{eps_str}*dt")
        };
        if re_zero {
            return f.write_str(&eps_term);
        }
        if let Some(rest) = eps_term.strip_prefix('-') {
            write!(f, "{} - {}", self.re, rest)
        } else {
            write!(f, "{} + {}", self.re, eps_term)
        }
    }
}

pub fn dual_add(x: &DualNumber, y: &DualNumber) -> Result<DualNumber> {
    Ok(DualNumber::raw(
        x.re.add(&y.re)?,
        x.eps.add(&y.eps)?,
    ))
}

pub fn dual_sub(x: &DualNumber, y: &DualNumber) -> Result<DualNumber> {
    Ok(DualNumber::raw(
        x.re.sub(&y.re)?,
        x.eps.sub(&y.eps)?,
    ))
}

/// (a + b·dt)(c + d·dt) = ac + (ad + bc)·dt; the bd term carries dt² = 0.
pub fn dual_mul(x: &DualNumber, y: &DualNumber) -> Result<DualNumber> {
    let re = x.re.mul(&y.re)?;
    let eps = x.re.mul(&y.eps)?.add(&x.eps.mul(&y.re)?)?;
    Ok(DualNumber::raw(re, eps))
}

/// 1/(a + b·dt) = 1/a - (b/a²)·dt, defined when a is invertible in the base.
pub fn dual_inv(x: &DualNumber) -> Result<DualNumber> {
    let a_inv = x.re.mul_inverse()?;
    let eps = x.eps.mul(&a_inv)?.mul(&a_inv)?.neg()?;
    Ok(DualNumber::raw(a_inv, eps))
}

/// p evaluated at the dual number x + y·dt, by Horner over duals. The result
/// is p(x) + p'(x)·y·dt: the extension is automatically differentiable.
pub fn extend(p: &Polynomial, x: &Element, y: &Element) -> Result<DualNumber> {
    p.base().require_same(x.context())?;
    p.base().require_same(y.context())?;
    let zero = p.base().zero().ok_or_else(|| p.base().unsupported("zero"))?;
    let point = DualNumber::raw(x.clone(), y.clone());
    let mut acc = DualNumber::raw(zero.clone(), zero);
    for c in p.coeffs().iter().rev() {
        acc = dual_mul(&acc, &point)?;
        acc = dual_add(&acc, &DualNumber::constant(c.clone())?)?;
    }
    Ok(acc)
}

/// D p at x, via the shift route: expand p(x + t) in a fresh variable t,
/// subtract p(x); the constant term vanishes identically and the coefficient
/// of t is the derivative.
pub fn derivative(p: &Polynomial, x: &Element) -> Result<Element> {
    let base = p.base();
    base.require_same(x.context())?;
    let one = base.one().ok_or_else(|| base.unsupported("one"))?;
    let x_plus_t = Polynomial::new(base, "t", vec![x.clone(), one])?;
    let mut shifted = Polynomial::zero(base, "t");
    for c in p.coeffs().iter().rev() {
        shifted = shifted.mul(&x_plus_t)?;
        shifted = shifted.add(&Polynomial::constant(c.clone(), "t")?)?;
    }
    let at_x = Polynomial::constant(p.eval(x)?, "t")?;
    let difference = shifted.sub(&at_x)?;
    assert!(
        difference.coeff(0)?.is_zero()?,
        "p(x + t) - p(x) must be divisible by t"
    );
    difference.coeff(1)
}

/// The quotient (p(x + dt) - p(x)) / dt, computed literally: evaluate at the
/// dual point, subtract, check the real part vanished, read the dt
/// coefficient. Cross-checked against [`derivative`] on every call.
pub fn seventeenth_century_quotient(p: &Polynomial, x: &Element) -> Result<Element> {
    let one = p.base().one().ok_or_else(|| p.base().unsupported("one"))?;
    let at_dual = extend(p, x, &one)?;
    let at_x = DualNumber::constant(p.eval(x)?)?;
    let numerator = dual_sub(&at_dual, &at_x)?;
    if !numerator.re().is_zero()? {
        return Err(Error::NotDivisibleByDt {
            real_part: numerator.re().to_string(),
        });
    }
    let quotient = numerator.eps().clone();
    let via_shift = derivative(p, x)?;
    assert!(
        quotient.try_eq(&via_shift)?,
        "dual route and shift route disagree"
    );
    Ok(quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> Element {
        Element::from_rational(&Context::rationals(), BigRational::new(n.into(), d.into()))
            .unwrap()
    }

    fn qpoly(coeffs: &[i64]) -> Polynomial {
        Polynomial::new(
            &Context::rationals(),
            "x",
            coeffs.iter().map(|&c| q(c, 1)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn product_drops_dt_squared() {
        // (2 + 3dt)(4 + 5dt) = 8 + 22dt.
        let x = DualNumber::new(q(2, 1), q(3, 1)).unwrap();
        let y = DualNumber::new(q(4, 1), q(5, 1)).unwrap();
        let p = dual_mul(&x, &y).unwrap();
        assert!(p.re().try_eq(&q(8, 1)).unwrap());
        assert!(p.eps().try_eq(&q(22, 1)).unwrap());
    }

    #[test]
    fn inverse_matches_formula_and_multiplies_back() {
        let x = DualNumber::new(q(2, 1), q(3, 1)).unwrap();
        let inv = dual_inv(&x).unwrap();
        assert!(inv.re().try_eq(&q(1, 2)).unwrap());
        assert!(inv.eps().try_eq(&q(-3, 4)).unwrap());
        let product = dual_mul(&x, &inv).unwrap();
        assert!(product.re().is_one().unwrap());
        assert!(product.eps().is_zero().unwrap());
        assert_eq!(inv.to_string(), "1/2 - 3/4*dt");
    }

    #[test]
    fn extension_carries_the_derivative() {
        // x² at 3 with displacement 1: 9 + 6dt.
        let sq = qpoly(&[0, 0, 1]);
        let e = extend(&sq, &q(3, 1), &q(1, 1)).unwrap();
        assert!(e.re().try_eq(&q(9, 1)).unwrap());
        assert!(e.eps().try_eq(&q(6, 1)).unwrap());
        // x³ - 2x at 2 with displacement 5: (4, 50).
        let p = qpoly(&[0, -2, 0, 1]);
        let e = extend(&p, &q(2, 1), &q(5, 1)).unwrap();
        assert!(e.re().try_eq(&q(4, 1)).unwrap());
        assert!(e.eps().try_eq(&q(50, 1)).unwrap());
    }

    #[test]
    fn two_derivative_routes_agree() {
        let p = qpoly(&[1, -4, 0, 2]); // 2x³ - 4x + 1
        for i in -3..=3 {
            let x = q(i, 1);
            let d1 = derivative(&p, &x).unwrap();
            let d2 = seventeenth_century_quotient(&p, &x).unwrap();
            assert!(d1.try_eq(&d2).unwrap());
            // 6x² - 4 by hand.
            let expected = q(6 * i * i - 4, 1);
            assert!(d1.try_eq(&expected).unwrap());
        }
    }

    #[test]
    fn derivative_works_over_naturals() {
        // Subtraction of p(x) only ever cancels the constant term, so the
        // shift route stays inside N.
        let n = Context::naturals();
        let p = Polynomial::new(
            &n,
            "x",
            vec![
                Element::from_int(&n, 1).unwrap(),
                Element::from_int(&n, 0).unwrap(),
                Element::from_int(&n, 3).unwrap(),
            ],
        )
        .unwrap(); // 3x² + 1
        let d = derivative(&p, &Element::from_int(&n, 2).unwrap()).unwrap();
        assert!(d.try_eq(&Element::from_int(&n, 12).unwrap()).unwrap());
    }
}
