//! Elements tagged with their context, and the operation dispatch.
//!
//! All arithmetic is fallible: an operation either succeeds inside the
//! element's context or reports precisely why it cannot (no silent widening
//! here; widening is a decision for the solver and CLI layers).

use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::format;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::semiring::context::{Context, ContextKind};
use crate::universal;

/// Which of the two semiring operations is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Additive,
    Multiplicative,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpKind::Additive => f.write_str("additive"),
            OpKind::Multiplicative => f.write_str("multiplicative"),
        }
    }
}

/// A value in the (min, +) semiring: an exact rational or +∞.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TropValue {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for TropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropValue::Finite(r) => write!(f, "{r}"),
            TropValue::Infinity => f.write_str("inf"),
        }
    }
}

/// The carrier-specific representation behind an [`Element`].
#[derive(Debug, Clone)]
pub enum Payload {
    Int(BigInt),
    Rat(BigRational),
    Residue(u64),
    Trop(TropValue),
    MonoidElem(usize),
    Poly(crate::polyfrac::Polynomial),
    Dual(Box<crate::dualcalc::DualNumber>),
    Frac(Box<universal::FractionElement>),
    Diff(Box<universal::DifferenceElement>),
    Zero,
}

impl Payload {
    pub(crate) fn int(n: i64) -> Payload {
        Payload::Int(BigInt::from(n))
    }

    pub(crate) fn rat(num: i64, den: i64) -> Payload {
        Payload::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub(crate) fn rat_trop(num: i64, den: i64) -> Payload {
        Payload::Trop(TropValue::Finite(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }
}

/// Verdict of a cancellativity check: a definite yes, a definite no with a
/// concrete witness pair, or an honest refusal to guess.
#[derive(Debug, Clone)]
pub enum Cancellativity {
    Yes,
    No { witness: (Element, Element) },
    Unknown,
}

impl Cancellativity {
    pub fn is_yes(&self) -> bool {
        matches!(self, Cancellativity::Yes)
    }
}

/// A value together with the context it lives in.
///
/// There is deliberately no `PartialEq` impl: equality is a property of the
/// context ([`Element::try_eq`]), not of the representation. Representation
/// equality is available separately as [`Element::repr_eq`].
#[derive(Debug, Clone)]
pub struct Element {
    ctx: Context,
    payload: Payload,
}

impl Element {
    pub(crate) fn raw(ctx: Context, payload: Payload) -> Element {
        Element { ctx, payload }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// Builds the image of a machine integer in any context that has a
    /// canonical one (via repeated structure for composite contexts).
    pub fn from_int(ctx: &Context, n: i64) -> Result<Element> {
        Element::from_bigint(ctx, BigInt::from(n))
    }

    pub fn from_bigint(ctx: &Context, n: BigInt) -> Result<Element> {
        let payload = match ctx.kind() {
            ContextKind::Naturals => {
                if n.is_negative() {
                    return Err(Error::InvalidElement(format!("{n} is not a natural number")));
                }
                Payload::Int(n)
            }
            ContextKind::Integers => Payload::Int(n),
            ContextKind::Rationals => Payload::Rat(BigRational::from_integer(n)),
            ContextKind::ZMod(m) => {
                let modulus = BigInt::from(*m);
                let r = n.mod_floor(&modulus);
                Payload::Residue(r.to_u64().expect("reduced residue fits in u64"))
            }
            ContextKind::Tropical => Payload::Trop(TropValue::Finite(BigRational::from_integer(n))),
            ContextKind::Monoid(_) => return Err(ctx.unsupported("integer embedding")),
            ContextKind::Polynomial { base, var } => {
                let c = Element::from_bigint(base, n)?;
                Payload::Poly(crate::polyfrac::Polynomial::constant(c, var)?)
            }
            ContextKind::Dual { base } => {
                let re = Element::from_bigint(base, n)?;
                let eps = base.zero().ok_or_else(|| base.unsupported("zero"))?;
                Payload::Dual(Box::new(crate::dualcalc::DualNumber::raw(re, eps)))
            }
            ContextKind::Localized { base, .. } => {
                let num = Element::from_bigint(base, n)?;
                let den = base.one().ok_or_else(|| base.unsupported("one"))?;
                Payload::Frac(Box::new(universal::FractionElement::raw(num, den)))
            }
            ContextKind::Grothendieck { base } => {
                let zero = base.zero().ok_or_else(|| base.unsupported("zero"))?;
                // A value the base cannot hold may still exist as a formal
                // difference: -3 in Groth(N) is (0, 3).
                let (plus, minus) = match Element::from_bigint(base, n.clone()) {
                    Ok(plus) => (plus, zero),
                    Err(_) => (zero, Element::from_bigint(base, -n)?),
                };
                Payload::Diff(Box::new(universal::DifferenceElement::raw(plus, minus)))
            }
            ContextKind::ZeroRing => Payload::Zero,
        };
        Ok(Element::raw(ctx.clone(), payload))
    }

    /// An exact rational in a context that can hold one (Q or Trop).
    pub fn from_rational(ctx: &Context, r: BigRational) -> Result<Element> {
        match ctx.kind() {
            ContextKind::Rationals => Ok(Element::raw(ctx.clone(), Payload::Rat(r))),
            ContextKind::Tropical => {
                Ok(Element::raw(ctx.clone(), Payload::Trop(TropValue::Finite(r))))
            }
            _ => Err(ctx.unsupported("rational embedding")),
        }
    }

    pub fn tropical_infinity(ctx: &Context) -> Result<Element> {
        match ctx.kind() {
            ContextKind::Tropical => Ok(Element::raw(ctx.clone(), Payload::Trop(TropValue::Infinity))),
            _ => Err(ctx.unsupported("infinity")),
        }
    }

    pub fn monoid_elem(ctx: &Context, index: usize) -> Result<Element> {
        match ctx.kind() {
            ContextKind::Monoid(m) if index < m.size() => {
                Ok(Element::raw(ctx.clone(), Payload::MonoidElem(index)))
            }
            ContextKind::Monoid(m) => Err(Error::InvalidElement(format!(
                "index {index} out of range for a table of size {}",
                m.size()
            ))),
            _ => Err(ctx.unsupported("table element")),
        }
    }

    pub fn from_polynomial(p: crate::polyfrac::Polynomial) -> Element {
        let ctx = Context::polynomial(p.base(), p.var());
        Element::raw(ctx, Payload::Poly(p))
    }

    pub fn from_dual(d: crate::dualcalc::DualNumber) -> Element {
        let ctx = Context::dual(d.re().context());
        Element::raw(ctx, Payload::Dual(Box::new(d)))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match &self.payload {
            Payload::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.payload {
            Payload::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.payload {
            Payload::Residue(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_tropical(&self) -> Option<&TropValue> {
        match &self.payload {
            Payload::Trop(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_monoid_index(&self) -> Option<usize> {
        match &self.payload {
            Payload::MonoidElem(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_polynomial(&self) -> Option<&crate::polyfrac::Polynomial> {
        match &self.payload {
            Payload::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_dual(&self) -> Option<&crate::dualcalc::DualNumber> {
        match &self.payload {
            Payload::Dual(d) => Some(d),
            _ => None,
        }
    }

    pub fn as_fraction(&self) -> Option<&universal::FractionElement> {
        match &self.payload {
            Payload::Frac(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_difference(&self) -> Option<&universal::DifferenceElement> {
        match &self.payload {
            Payload::Diff(d) => Some(d),
            _ => None,
        }
    }

    /// Representation equality: same context shape and syntactically equal
    /// payloads. Strictly finer than [`Element::try_eq`].
    pub fn repr_eq(&self, other: &Element) -> bool {
        if !self.ctx.same(&other.ctx) {
            return false;
        }
        match (&self.payload, &other.payload) {
            (Payload::Int(a), Payload::Int(b)) => a == b,
            (Payload::Rat(a), Payload::Rat(b)) => a == b,
            (Payload::Residue(a), Payload::Residue(b)) => a == b,
            (Payload::Trop(a), Payload::Trop(b)) => a == b,
            (Payload::MonoidElem(a), Payload::MonoidElem(b)) => a == b,
            (Payload::Poly(a), Payload::Poly(b)) => a.repr_eq(b),
            (Payload::Dual(a), Payload::Dual(b)) => {
                a.re().repr_eq(b.re()) && a.eps().repr_eq(b.eps())
            }
            (Payload::Frac(a), Payload::Frac(b)) => {
                a.num().repr_eq(b.num()) && a.den().repr_eq(b.den())
            }
            (Payload::Diff(a), Payload::Diff(b)) => {
                a.plus().repr_eq(b.plus()) && a.minus().repr_eq(b.minus())
            }
            (Payload::Zero, Payload::Zero) => true,
            _ => false,
        }
    }

    /// Context-defined equality. In a localization this is the ∃u
    /// cross-multiplication relation, in a Grothendieck context the ∃k
    /// cross-addition relation, and in the zero ring everything is equal.
    pub fn try_eq(&self, other: &Element) -> Result<bool> {
        self.ctx.require_same(&other.ctx)?;
        match (self.ctx.kind(), &self.payload, &other.payload) {
            (ContextKind::ZeroRing, _, _) => Ok(true),
            (_, Payload::Int(a), Payload::Int(b)) => Ok(a == b),
            (_, Payload::Rat(a), Payload::Rat(b)) => Ok(a == b),
            (_, Payload::Residue(a), Payload::Residue(b)) => Ok(a == b),
            (_, Payload::Trop(a), Payload::Trop(b)) => Ok(a == b),
            (_, Payload::MonoidElem(a), Payload::MonoidElem(b)) => Ok(a == b),
            (_, Payload::Poly(a), Payload::Poly(b)) => a.try_eq(b),
            (_, Payload::Dual(a), Payload::Dual(b)) => {
                Ok(a.re().try_eq(b.re())? && a.eps().try_eq(b.eps())?)
            }
            (ContextKind::Localized { .. }, Payload::Frac(a), Payload::Frac(b)) => {
                universal::frac_eq_in(&self.ctx, a, b)
            }
            (ContextKind::Grothendieck { base }, Payload::Diff(a), Payload::Diff(b)) => {
                universal::diff_eq_in(base, a, b)
            }
            _ => Err(Error::InvalidElement(
                "payload does not match context".to_string(),
            )),
        }
    }

    pub fn is_zero(&self) -> Result<bool> {
        match self.ctx.zero() {
            Some(z) => self.try_eq(&z),
            None => Ok(false),
        }
    }

    pub fn is_one(&self) -> Result<bool> {
        match self.ctx.one() {
            Some(o) => self.try_eq(&o),
            None => Ok(false),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.ctx.require_same(&other.ctx)?;
        let payload = match (self.ctx.kind(), &self.payload, &other.payload) {
            (ContextKind::ZeroRing, _, _) => Payload::Zero,
            (_, Payload::Int(a), Payload::Int(b)) => Payload::Int(a + b),
            (_, Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a + b),
            (ContextKind::ZMod(n), Payload::Residue(a), Payload::Residue(b)) => {
                Payload::Residue(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            (_, Payload::Trop(a), Payload::Trop(b)) => Payload::Trop(a.clone().min(b.clone())),
            (ContextKind::Monoid(m), Payload::MonoidElem(i), Payload::MonoidElem(j)) => {
                Payload::MonoidElem(m.apply(*i, *j))
            }
            (_, Payload::Poly(a), Payload::Poly(b)) => Payload::Poly(a.add(b)?),
            (_, Payload::Dual(a), Payload::Dual(b)) => {
                Payload::Dual(Box::new(crate::dualcalc::dual_add(a, b)?))
            }
            (ContextKind::Localized { .. }, Payload::Frac(a), Payload::Frac(b)) => {
                Payload::Frac(Box::new(universal::frac_add_raw(a, b)?))
            }
            (_, Payload::Diff(a), Payload::Diff(b)) => {
                Payload::Diff(Box::new(universal::diff_add_raw(a, b)?))
            }
            _ => {
                return Err(Error::InvalidElement(
                    "payload does not match context".to_string(),
                ))
            }
        };
        Ok(Element::raw(self.ctx.clone(), payload))
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.ctx.require_same(&other.ctx)?;
        let payload = match (self.ctx.kind(), &self.payload, &other.payload) {
            (ContextKind::ZeroRing, _, _) => Payload::Zero,
            (ContextKind::Monoid(_), _, _) => return Err(self.ctx.unsupported("multiplication")),
            (_, Payload::Int(a), Payload::Int(b)) => Payload::Int(a * b),
            (_, Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a * b),
            (ContextKind::ZMod(n), Payload::Residue(a), Payload::Residue(b)) => {
                Payload::Residue(((*a as u128 * *b as u128) % *n as u128) as u64)
            }
            (_, Payload::Trop(a), Payload::Trop(b)) => Payload::Trop(match (a, b) {
                (TropValue::Finite(x), TropValue::Finite(y)) => TropValue::Finite(x + y),
                _ => TropValue::Infinity,
            }),
            (_, Payload::Poly(a), Payload::Poly(b)) => Payload::Poly(a.mul(b)?),
            (_, Payload::Dual(a), Payload::Dual(b)) => {
                Payload::Dual(Box::new(crate::dualcalc::dual_mul(a, b)?))
            }
            (ContextKind::Localized { .. }, Payload::Frac(a), Payload::Frac(b)) => {
                Payload::Frac(Box::new(universal::frac_mul_raw(a, b)?))
            }
            (_, Payload::Diff(a), Payload::Diff(b)) => {
                Payload::Diff(Box::new(universal::diff_mul_raw(a, b)?))
            }
            _ => {
                return Err(Error::InvalidElement(
                    "payload does not match context".to_string(),
                ))
            }
        };
        Ok(Element::raw(self.ctx.clone(), payload))
    }

    /// Partial subtraction: defined exactly when the difference exists in
    /// this context. In N, `5 - 7` is an error here; turning that error into
    /// a context widening is the caller's move.
    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.ctx.require_same(&other.ctx)?;
        let payload = match (self.ctx.kind(), &self.payload, &other.payload) {
            (ContextKind::ZeroRing, _, _) => Payload::Zero,
            (ContextKind::Naturals, Payload::Int(a), Payload::Int(b)) => {
                if a < b {
                    return Err(self.ctx.unsupported("subtraction below zero"));
                }
                Payload::Int(a - b)
            }
            (_, Payload::Int(a), Payload::Int(b)) => Payload::Int(a - b),
            (_, Payload::Rat(a), Payload::Rat(b)) => Payload::Rat(a - b),
            (ContextKind::ZMod(n), Payload::Residue(a), Payload::Residue(b)) => {
                Payload::Residue(((*a as u128 + (*n - *b) as u128) % *n as u128) as u64)
            }
            (ContextKind::Tropical, Payload::Trop(_), Payload::Trop(_)) => {
                return Err(self.ctx.unsupported("additive inverses"))
            }
            (ContextKind::Monoid(_), _, _) => return Err(self.ctx.unsupported("subtraction")),
            (_, Payload::Poly(a), Payload::Poly(b)) => Payload::Poly(a.sub(b)?),
            (_, Payload::Dual(a), Payload::Dual(b)) => {
                Payload::Dual(Box::new(crate::dualcalc::dual_sub(a, b)?))
            }
            (ContextKind::Localized { .. }, Payload::Frac(a), Payload::Frac(b)) => {
                Payload::Frac(Box::new(universal::frac_sub_raw(a, b)?))
            }
            (_, Payload::Diff(a), Payload::Diff(b)) => {
                Payload::Diff(Box::new(universal::diff_sub_raw(a, b)?))
            }
            _ => {
                return Err(Error::InvalidElement(
                    "payload does not match context".to_string(),
                ))
            }
        };
        Ok(Element::raw(self.ctx.clone(), payload))
    }

    /// Additive inverse, where one exists.
    pub fn neg(&self) -> Result<Element> {
        let zero = self
            .ctx
            .zero()
            .ok_or_else(|| self.ctx.unsupported("additive inverses"))?;
        zero.sub(self)
    }

    /// Nonnegative integer power by repeated squaring. `x^0` is the
    /// context's one.
    pub fn pow(&self, exp: u32) -> Result<Element> {
        if exp == 0 {
            return self.ctx.one().ok_or_else(|| self.ctx.unsupported("empty product"));
        }
        let mut acc: Option<Element> = None;
        let mut base = self.clone();
        let mut e = exp;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base)?,
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("exp > 0"))
    }

    /// Multiplicative inverse, where one exists in this context. This never
    /// widens: 2 has no inverse in Z (that is what localization is for).
    pub fn mul_inverse(&self) -> Result<Element> {
        let not_invertible = || Error::NotInvertible {
            element: self.to_string(),
            ctx: self.ctx.name(),
        };
        let payload = match (self.ctx.kind(), &self.payload) {
            (ContextKind::ZeroRing, _) => Payload::Zero,
            (ContextKind::Naturals, Payload::Int(n)) => {
                if n.is_one() {
                    Payload::int(1)
                } else {
                    return Err(not_invertible());
                }
            }
            (ContextKind::Integers, Payload::Int(n)) => {
                if n.is_one() || (-n).is_one() {
                    Payload::Int(n.clone())
                } else {
                    return Err(not_invertible());
                }
            }
            (ContextKind::Rationals, Payload::Rat(r)) => {
                if r.is_zero() {
                    return Err(not_invertible());
                }
                Payload::Rat(r.recip())
            }
            (ContextKind::ZMod(n), Payload::Residue(a)) => match mod_inverse(*a, *n) {
                Some(inv) => Payload::Residue(inv),
                None => return Err(not_invertible()),
            },
            (ContextKind::Tropical, Payload::Trop(t)) => match t {
                TropValue::Finite(r) => Payload::Trop(TropValue::Finite(-r)),
                TropValue::Infinity => return Err(not_invertible()),
            },
            (ContextKind::Monoid(_), _) => return Err(self.ctx.unsupported("multiplication")),
            (ContextKind::Polynomial { .. }, Payload::Poly(p)) => match p.constant_value() {
                Some(c) => Payload::Poly(crate::polyfrac::Polynomial::constant(
                    c.mul_inverse().map_err(|_| not_invertible())?,
                    p.var(),
                )?),
                None => return Err(not_invertible()),
            },
            (ContextKind::Dual { .. }, Payload::Dual(d)) => {
                Payload::Dual(Box::new(crate::dualcalc::dual_inv(d)?))
            }
            (ContextKind::Localized { .. }, Payload::Frac(f)) => {
                Payload::Frac(Box::new(universal::frac_inv_in(&self.ctx, f)?))
            }
            (ContextKind::Grothendieck { .. }, Payload::Diff(_)) => {
                let one = self.ctx.one().ok_or_else(|| not_invertible())?;
                if self.try_eq(&one)? {
                    return Ok(one);
                }
                let minus_one = one.neg()?;
                if self.try_eq(&minus_one)? {
                    return Ok(minus_one);
                }
                return Err(not_invertible());
            }
            _ => {
                return Err(Error::InvalidElement(
                    "payload does not match context".to_string(),
                ))
            }
        };
        Ok(Element::raw(self.ctx.clone(), payload))
    }

    fn apply_op(&self, op: OpKind, x: &Element) -> Result<Element> {
        match op {
            OpKind::Additive => self.add(x),
            OpKind::Multiplicative => self.mul(x),
        }
    }

    /// Whether combining with this element under `op` is injective.
    ///
    /// Finite carriers are scanned exhaustively (first witness in enumeration
    /// order); infinite carriers go through a rule table; anything not
    /// covered is an honest `Unknown`.
    pub fn is_cancellative(&self, op: OpKind) -> Result<Cancellativity> {
        let ctx = &self.ctx;
        match op {
            OpKind::Additive if !ctx.supports_add() => return Err(ctx.unsupported("addition")),
            OpKind::Multiplicative if !ctx.supports_mul() => {
                return Err(ctx.unsupported("multiplication"))
            }
            _ => {}
        }
        if let Some(carrier) = ctx.enumerate() {
            if carrier.len() <= Context::EXHAUSTIVE_BOUND {
                for i in 0..carrier.len() {
                    for j in (i + 1)..carrier.len() {
                        let lhs = self.apply_op(op, &carrier[i])?;
                        let rhs = self.apply_op(op, &carrier[j])?;
                        if lhs.try_eq(&rhs)? {
                            return Ok(Cancellativity::No {
                                witness: (carrier[i].clone(), carrier[j].clone()),
                            });
                        }
                    }
                }
                return Ok(Cancellativity::Yes);
            }
        }
        match (ctx.kind(), op) {
            (ContextKind::ZMod(_), OpKind::Additive) => Ok(Cancellativity::Yes),
            (ContextKind::ZMod(n), OpKind::Multiplicative) => {
                let a = self.as_residue().ok_or_else(|| {
                    Error::InvalidElement("payload does not match context".to_string())
                })?;
                let g = a.gcd(n);
                if g == 1 {
                    Ok(Cancellativity::Yes)
                } else {
                    // d · (n/g) ≡ d · 0 without n/g ≡ 0.
                    Ok(Cancellativity::No {
                        witness: (
                            Element::raw(ctx.clone(), Payload::Residue(n / g)),
                            Element::raw(ctx.clone(), Payload::Residue(0)),
                        ),
                    })
                }
            }
            (
                ContextKind::Naturals | ContextKind::Integers | ContextKind::Rationals,
                OpKind::Additive,
            ) => Ok(Cancellativity::Yes),
            (
                ContextKind::Naturals | ContextKind::Integers | ContextKind::Rationals,
                OpKind::Multiplicative,
            ) => {
                if self.is_zero()? {
                    Ok(Cancellativity::No {
                        witness: (
                            Element::from_int(ctx, 0)?,
                            Element::from_int(ctx, 1)?,
                        ),
                    })
                } else {
                    Ok(Cancellativity::Yes)
                }
            }
            (ContextKind::Tropical, OpKind::Additive) => match &self.payload {
                Payload::Trop(TropValue::Infinity) => Ok(Cancellativity::Yes),
                Payload::Trop(TropValue::Finite(d)) => {
                    // min(d, d+1) = d = min(d, d+2).
                    let w1 = d + BigRational::one();
                    let w2 = d + BigRational::one() + BigRational::one();
                    Ok(Cancellativity::No {
                        witness: (
                            Element::from_rational(ctx, w1)?,
                            Element::from_rational(ctx, w2)?,
                        ),
                    })
                }
                _ => Err(Error::InvalidElement(
                    "payload does not match context".to_string(),
                )),
            },
            (ContextKind::Tropical, OpKind::Multiplicative) => match &self.payload {
                Payload::Trop(TropValue::Finite(_)) => Ok(Cancellativity::Yes),
                Payload::Trop(TropValue::Infinity) => Ok(Cancellativity::No {
                    witness: (
                        Element::from_int(ctx, 0)?,
                        Element::from_int(ctx, 1)?,
                    ),
                }),
                _ => Err(Error::InvalidElement(
                    "payload does not match context".to_string(),
                )),
            },
            (ContextKind::Polynomial { base, .. }, OpKind::Additive)
                if base.is_add_cancellative_carrier() =>
            {
                Ok(Cancellativity::Yes)
            }
            (ContextKind::Polynomial { base, .. }, OpKind::Multiplicative)
                if base.is_domain_like() && base.is_add_cancellative_carrier() =>
            {
                if self.is_zero()? {
                    let zero = ctx.zero().expect("polynomial ring has 0");
                    let one = ctx.one().ok_or_else(|| ctx.unsupported("one"))?;
                    Ok(Cancellativity::No { witness: (zero, one) })
                } else {
                    Ok(Cancellativity::Yes)
                }
            }
            (ContextKind::Dual { base }, OpKind::Additive)
                if base.is_add_cancellative_carrier() =>
            {
                Ok(Cancellativity::Yes)
            }
            (ContextKind::Dual { base }, OpKind::Multiplicative)
                if base.is_domain_like() && base.is_add_cancellative_carrier() =>
            {
                let d = self.as_dual().ok_or_else(|| {
                    Error::InvalidElement("payload does not match context".to_string())
                })?;
                if d.re().is_zero()? {
                    // (0, b)·(0, 1) = (0, 0) = (0, b)·(0, 0).
                    let zero = base.zero().expect("ring base has 0");
                    let one = base.one().ok_or_else(|| base.unsupported("one"))?;
                    Ok(Cancellativity::No {
                        witness: (
                            Element::from_dual(crate::dualcalc::DualNumber::raw(
                                zero.clone(),
                                one,
                            )),
                            Element::from_dual(crate::dualcalc::DualNumber::raw(
                                zero.clone(),
                                zero,
                            )),
                        ),
                    })
                } else {
                    Ok(Cancellativity::Yes)
                }
            }
            (ContextKind::Localized { .. }, OpKind::Additive)
                if ctx.is_add_cancellative_carrier() =>
            {
                Ok(Cancellativity::Yes)
            }
            (ContextKind::Localized { base, .. }, OpKind::Multiplicative)
                if base.is_domain_like() =>
            {
                if self.is_zero()? {
                    let zero = ctx.zero().expect("localization has 0");
                    let one = ctx.one().expect("localization has 1");
                    Ok(Cancellativity::No { witness: (zero, one) })
                } else {
                    Ok(Cancellativity::Yes)
                }
            }
            // Grothendieck contexts are groups under addition.
            (ContextKind::Grothendieck { .. }, OpKind::Additive) => Ok(Cancellativity::Yes),
            (ContextKind::Grothendieck { base }, OpKind::Multiplicative)
                if matches!(base.kind(), ContextKind::Naturals) =>
            {
                if self.is_zero()? {
                    let zero = ctx.zero().expect("Groth(N) has 0");
                    let one = ctx.one().expect("Groth(N) has 1");
                    Ok(Cancellativity::No { witness: (zero, one) })
                } else {
                    Ok(Cancellativity::Yes)
                }
            }
            (ContextKind::ZeroRing, _) => Ok(Cancellativity::Yes),
            _ => Ok(Cancellativity::Unknown),
        }
    }

    /// The image of this element along a recognized widening.
    pub fn embed(&self, target: &Context) -> Result<Element> {
        if self.ctx.same(target) {
            return Ok(self.clone());
        }
        match (self.ctx.kind(), target.kind()) {
            (_, ContextKind::ZeroRing) => Ok(target.zero().expect("zero ring has 0")),
            (ContextKind::Naturals, ContextKind::Integers) => {
                Ok(Element::raw(target.clone(), self.payload.clone()))
            }
            (ContextKind::Naturals | ContextKind::Integers, ContextKind::Rationals) => {
                let n = self.as_int().ok_or_else(|| {
                    Error::InvalidElement("payload does not match context".to_string())
                })?;
                Ok(Element::raw(
                    target.clone(),
                    Payload::Rat(BigRational::from_integer(n.clone())),
                ))
            }
            (ContextKind::Localized { .. }, ContextKind::Rationals) => {
                let r = universal::rational_image(self)?;
                Ok(Element::raw(target.clone(), Payload::Rat(r)))
            }
            (
                ContextKind::Localized { base: b1, .. },
                ContextKind::Localized { base: b2, inverted },
            ) => {
                let f = self.as_fraction().ok_or_else(|| {
                    Error::InvalidElement("payload does not match context".to_string())
                })?;
                let _ = b1;
                let num = f.num().embed(b2)?;
                let den = f.den().embed(b2)?;
                if !inverted.contains(&den)? {
                    return Err(Error::DenominatorNotInverted {
                        den: den.to_string(),
                        ctx: target.name(),
                    });
                }
                Ok(Element::raw(
                    target.clone(),
                    Payload::Frac(Box::new(universal::FractionElement::raw(num, den))),
                ))
            }
            (_, ContextKind::Localized { base, .. }) => {
                let lifted = self.embed(base)?;
                let den = base.one().ok_or_else(|| base.unsupported("one"))?;
                Ok(Element::raw(
                    target.clone(),
                    Payload::Frac(Box::new(universal::FractionElement::raw(lifted, den))),
                ))
            }
            (_, ContextKind::Grothendieck { base }) => {
                let lifted = self.embed(base)?;
                let minus = base
                    .zero()
                    .or_else(|| base.enumerate().and_then(|c| c.into_iter().next()))
                    .ok_or_else(|| base.unsupported("difference embedding"))?;
                let plus = match base.zero() {
                    Some(_) => lifted,
                    // Without a neutral element, represent a as (a∘x₀, x₀).
                    None => lifted.add(&minus)?,
                };
                Ok(Element::raw(
                    target.clone(),
                    Payload::Diff(Box::new(universal::DifferenceElement::raw(plus, minus))),
                ))
            }
            (_, ContextKind::Dual { base }) => {
                let re = self.embed(base)?;
                let eps = base.zero().ok_or_else(|| base.unsupported("zero"))?;
                Ok(Element::raw(
                    target.clone(),
                    Payload::Dual(Box::new(crate::dualcalc::DualNumber::raw(re, eps))),
                ))
            }
            (_, ContextKind::Polynomial { base, var }) => {
                let c = self.embed(base)?;
                Ok(Element::raw(
                    target.clone(),
                    Payload::Poly(crate::polyfrac::Polynomial::constant(c, var)?),
                ))
            }
            _ => Err(Error::Unsupported {
                ctx: format!("{} into {}", self.ctx.name(), target.name()),
                op: "embedding",
            }),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Int(n) => write!(f, "{n}"),
            Payload::Rat(r) => write!(f, "{r}"),
            Payload::Residue(r) => write!(f, "{r}"),
            Payload::Trop(t) => write!(f, "{t}"),
            Payload::MonoidElem(i) => write!(f, "{i}"),
            Payload::Poly(p) => write!(f, "{p}"),
            Payload::Dual(d) => write!(f, "{d}"),
            Payload::Frac(x) => write!(f, "{x}"),
            Payload::Diff(d) => {
                let base = match self.ctx.kind() {
                    ContextKind::Grothendieck { base } => base,
                    _ => return write!(f, "[{} - {}]", d.plus(), d.minus()),
                };
                match (base.kind(), d.plus().as_int(), d.minus().as_int()) {
                    (ContextKind::Naturals, Some(p), Some(m)) => write!(f, "{}", p - m),
                    _ => write!(f, "[{} - {}]", d.plus(), d.minus()),
                }
            }
            Payload::Zero => f.write_str("0"),
        }
    }
}

/// Modular inverse via extended Euclid, for u64 moduli.
fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}
