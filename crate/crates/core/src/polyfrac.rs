//! Dense univariate polynomials over a dynamic base context, and rational
//! functions built from them.
//!
//! Rational functions support two distinct equality questions: equality as
//! formal fractions (cross-multiplication, which silently cancels common
//! factors) and equality as functions on a sample of points (which notices
//! that (a² - x²)/(a - x) has a hole where a + x does not).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::error::{Error, Result};
use crate::semiring::{Context, Element};

/// Coefficients in ascending degree, normalized to drop trailing zeros.
#[derive(Debug, Clone)]
pub struct Polynomial {
    base: Context,
    var: String,
    coeffs: Vec<Element>,
}

impl Polynomial {
    pub fn new(base: &Context, var: &str, coeffs: Vec<Element>) -> Result<Polynomial> {
        for c in &coeffs {
            base.require_same(c.context())?;
        }
        let mut p = Polynomial {
            base: base.clone(),
            var: var.into(),
            coeffs,
        };
        p.normalize()?;
        Ok(p)
    }

    fn normalize(&mut self) -> Result<()> {
        while let Some(last) = self.coeffs.last() {
            if last.is_zero()? {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        Ok(())
    }

    pub fn zero(base: &Context, var: &str) -> Polynomial {
        Polynomial {
            base: base.clone(),
            var: var.into(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Element, var: &str) -> Result<Polynomial> {
        let base = c.context().clone();
        Polynomial::new(&base, var, vec![c])
    }

    /// The polynomial `x` itself.
    pub fn identity(base: &Context, var: &str) -> Result<Polynomial> {
        let zero = base.zero().ok_or_else(|| base.unsupported("zero"))?;
        let one = base.one().ok_or_else(|| base.unsupported("one"))?;
        Polynomial::new(base, var, vec![zero, one])
    }

    pub fn monomial(c: Element, degree: usize, var: &str) -> Result<Polynomial> {
        let base = c.context().clone();
        let zero = base.zero().ok_or_else(|| base.unsupported("zero"))?;
        let mut coeffs = vec![zero; degree];
        coeffs.push(c);
        Polynomial::new(&base, var, coeffs)
    }

    pub fn base(&self) -> &Context {
        &self.base
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i`, zero-padded beyond the degree.
    pub fn coeff(&self, i: usize) -> Result<Element> {
        match self.coeffs.get(i) {
            Some(c) => Ok(c.clone()),
            None => self.base.zero().ok_or_else(|| self.base.unsupported("zero")),
        }
    }

    /// `Some(c)` when the polynomial is a constant (degree at most 0).
    pub fn constant_value(&self) -> Option<Element> {
        match self.coeffs.len() {
            0 => self.base.zero(),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn require_compatible(&self, other: &Polynomial) -> Result<()> {
        self.base.require_same(&other.base)?;
        if self.var != other.var {
            return Err(Error::ContextMismatch {
                left: format!("{}[{}]", self.base.name(), self.var),
                right: format!("{}[{}]", other.base.name(), other.var),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.require_compatible(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i)?.add(&other.coeff(i)?)?);
        }
        Polynomial::new(&self.base, &self.var, coeffs)
    }

    /// Partial like the base's subtraction (coefficientwise).
    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.require_compatible(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i)?.sub(&other.coeff(i)?)?);
        }
        Polynomial::new(&self.base, &self.var, coeffs)
    }

    pub fn neg(&self) -> Result<Polynomial> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.neg())
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(&self.base, &self.var, coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.require_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.base, &self.var));
        }
        let zero = self.base.zero().ok_or_else(|| self.base.unsupported("zero"))?;
        let mut coeffs = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Polynomial::new(&self.base, &self.var, coeffs)
    }

    pub fn scale(&self, c: &Element) -> Result<Polynomial> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.mul(c))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(&self.base, &self.var, coeffs)
    }

    /// Horner evaluation at a base element.
    pub fn eval(&self, x: &Element) -> Result<Element> {
        self.base.require_same(x.context())?;
        let mut acc = self.base.zero().ok_or_else(|| self.base.unsupported("zero"))?;
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    /// The coefficientwise formal derivative.
    pub fn formal_derivative(&self) -> Result<Polynomial> {
        let mut coeffs = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let factor = Element::from_int(&self.base, i as i64)?;
            coeffs.push(c.mul(&factor)?);
        }
        Polynomial::new(&self.base, &self.var, coeffs)
    }

    pub(crate) fn repr_eq(&self, other: &Polynomial) -> bool {
        self.var == other.var
            && self.base.same(&other.base)
            && self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.repr_eq(b))
    }

    pub fn try_eq(&self, other: &Polynomial) -> Result<bool> {
        self.require_compatible(other)?;
        if self.coeffs.len() != other.coeffs.len() {
            return Ok(false);
        }
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if !a.try_eq(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero().unwrap_or(false) {
                continue;
            }
            let coeff_str = c.to_string();
            let is_one = c.is_one().unwrap_or(false);
            let is_minus_one = c
                .neg()
                .map(|n| n.is_one().unwrap_or(false))
                .unwrap_or(false);
            let term = match i {
                0 => coeff_str,
                _ => {
                    let power = if i == 1 {
                        self.var.clone()
                    } else {
                        format!("{}^{i}", self.var)
                    };
                    if is_one {
                        power
                    } else if is_minus_one {
                        format!("-{power}")
                    } else if coeff_str.contains(' ') || coeff_str.contains('+') {
                        format!("({coeff_str})*{power}")
                    } else {
                        format!("{coeff_str}*{power}")
                    }
                }
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        f.write_str(&out)
    }
}

/// A formal quotient of polynomials with a nonzero denominator.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalFunction> {
        num.require_compatible(&den)?;
        if den.is_zero() {
            return Err(Error::NotInvertible {
                element: "0".to_string(),
                ctx: format!("{}[{}]", num.base().name(), num.var()),
            });
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_polynomial(p: Polynomial) -> Result<RationalFunction> {
        let one = p.base().one().ok_or_else(|| p.base().unsupported("one"))?;
        let den = Polynomial::constant(one, p.var())?;
        RationalFunction::new(p, den)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn add(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        RationalFunction::new(num, self.den.mul(&other.den)?)
    }

    pub fn sub(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let num = self.num.mul(&other.den)?.sub(&other.num.mul(&self.den)?)?;
        RationalFunction::new(num, self.den.mul(&other.den)?)
    }

    pub fn neg(&self) -> Result<RationalFunction> {
        RationalFunction::new(self.num.neg()?, self.den.clone())
    }

    pub fn mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    /// Fails exactly when the numerator is the zero polynomial; that failure
    /// is the caller's cue that dividing would collapse the system.
    pub fn inverse(&self) -> Result<RationalFunction> {
        if self.num.is_zero() {
            return Err(Error::NotInvertible {
                element: "0".to_string(),
                ctx: format!("{}[{}]", self.num.base().name(), self.num.var()),
            });
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    /// Value at a point, or `None` where the denominator vanishes.
    pub fn eval(&self, x: &Element) -> Result<Option<Element>> {
        let den = self.den.eval(x)?;
        if den.is_zero()? {
            return Ok(None);
        }
        let num = self.num.eval(x)?;
        Ok(Some(num.mul(&den.mul_inverse()?)?))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().map(|c| c.is_one().unwrap_or(false)) == Some(true) {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Polynomial| {
            let s = p.to_string();
            if s.contains(' ') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Equality as formal fractions: num·den' = num'·den. Sound only when the
/// coefficient base has no zero divisors, and refused otherwise.
pub fn ratfunc_eq_as_fractions(f: &RationalFunction, g: &RationalFunction) -> Result<bool> {
    f.num().require_compatible(g.num())?;
    if !f.num().base().is_domain_like() {
        return Err(f
            .num()
            .base()
            .unsupported("fraction comparison (zero divisors defeat cancellation)"));
    }
    f.num.mul(&g.den)?.try_eq(&g.num.mul(&f.den)?)
}

/// Outcome of comparing two rational functions pointwise on a sample.
#[derive(Debug, Clone)]
pub enum FunctionComparison {
    Equal,
    /// Both sides defined but different at this point.
    Unequal {
        at: Element,
        left: Element,
        right: Element,
    },
    /// Exactly one side is defined at this point: the functions do not even
    /// have the same domain there.
    DomainMismatch { at: Element },
}

/// Compares values point by point, in sample order. Points where both
/// denominators vanish are skipped (neither side claims a value there).
pub fn ratfunc_eq_as_functions(
    f: &RationalFunction,
    g: &RationalFunction,
    sample: &[Element],
) -> Result<FunctionComparison> {
    for x in sample {
        let left = f.eval(x)?;
        let right = g.eval(x)?;
        match (left, right) {
            (None, None) => continue,
            (Some(_), None) | (None, Some(_)) => {
                return Ok(FunctionComparison::DomainMismatch { at: x.clone() })
            }
            (Some(l), Some(r)) => {
                if !l.try_eq(&r)? {
                    return Ok(FunctionComparison::Unequal {
                        at: x.clone(),
                        left: l,
                        right: r,
                    });
                }
            }
        }
    }
    Ok(FunctionComparison::Equal)
}
