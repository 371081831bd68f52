//! Dynamic number-system descriptors.
//!
//! A [`Context`] plays the role a type usually would: it says which carrier an
//! element lives in and which operations make sense. Contexts are built at
//! runtime because the whole point of the library is that computations move
//! between them (N to Z, Z to Z[1/2], anything to the zero ring).

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::error::{Error, Result};
use crate::semiring::element::{Element, OpKind, Payload, TropValue};
use crate::semiring::monoid::FiniteMonoid;
use crate::universal::{DifferenceElement, FractionElement, InvertedSet};

/// A number system. Cheap to clone; structural equality.
#[derive(Debug, Clone)]
pub struct Context(Arc<ContextKind>);

#[derive(Debug, Clone)]
pub enum ContextKind {
    /// N = {0, 1, 2, ...} with + and ·. Subtraction is partial.
    Naturals,
    Integers,
    Rationals,
    /// Z/n for n ≥ 1.
    ZMod(u64),
    /// The (min, +) semiring over exact rationals with +∞. Addition is min,
    /// multiplication is ordinary +, the additive neutral is +∞ and the
    /// multiplicative neutral is 0.
    Tropical,
    /// A finite commutative operation table, carrying only "addition".
    Monoid(FiniteMonoid),
    /// Polynomials in one variable over a base context.
    Polynomial { base: Context, var: String },
    /// base[dt] with dt² = 0.
    Dual { base: Context },
    /// Fractions over `base` whose denominators come from `inverted`.
    Localized { base: Context, inverted: InvertedSet },
    /// Formal differences `plus - minus` of base elements.
    Grothendieck { base: Context },
    /// The one-element ring where 0 = 1. Every operation succeeds.
    ZeroRing,
}

impl Context {
    fn from_kind(kind: ContextKind) -> Self {
        Context(Arc::new(kind))
    }

    pub fn naturals() -> Self {
        Context::from_kind(ContextKind::Naturals)
    }

    pub fn integers() -> Self {
        Context::from_kind(ContextKind::Integers)
    }

    pub fn rationals() -> Self {
        Context::from_kind(ContextKind::Rationals)
    }

    pub fn zmod(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidElement("modulus must be at least 1".into()));
        }
        Ok(Context::from_kind(ContextKind::ZMod(n)))
    }

    pub fn tropical() -> Self {
        Context::from_kind(ContextKind::Tropical)
    }

    pub fn monoid(m: FiniteMonoid) -> Self {
        Context::from_kind(ContextKind::Monoid(m))
    }

    pub fn polynomial(base: &Context, var: &str) -> Self {
        Context::from_kind(ContextKind::Polynomial {
            base: base.clone(),
            var: var.into(),
        })
    }

    pub fn dual(base: &Context) -> Self {
        Context::from_kind(ContextKind::Dual { base: base.clone() })
    }

    pub fn zero_ring() -> Self {
        Context::from_kind(ContextKind::ZeroRing)
    }

    /// Raw constructor; use [`crate::universal::localize`], which handles the
    /// collapse-to-zero case.
    pub(crate) fn localized(base: &Context, inverted: InvertedSet) -> Self {
        Context::from_kind(ContextKind::Localized {
            base: base.clone(),
            inverted,
        })
    }

    /// Raw constructor; use [`crate::universal::grothendieck`].
    pub(crate) fn grothendieck_of(base: &Context) -> Self {
        Context::from_kind(ContextKind::Grothendieck { base: base.clone() })
    }

    pub fn kind(&self) -> &ContextKind {
        &self.0
    }

    pub fn is_zero_ring(&self) -> bool {
        matches!(self.kind(), ContextKind::ZeroRing)
    }

    /// Short display name: N, Z, Q, Z/6, Trop, Q[x], Q[dt], Z[1/2],
    /// Frac(Z), Groth(N), ZeroRing, or the monoid's own name.
    pub fn name(&self) -> String {
        match self.kind() {
            ContextKind::Naturals => "N".into(),
            ContextKind::Integers => "Z".into(),
            ContextKind::Rationals => "Q".into(),
            ContextKind::ZMod(n) => format!("Z/{n}"),
            ContextKind::Tropical => "Trop".into(),
            ContextKind::Monoid(m) => m.name().into(),
            ContextKind::Polynomial { base, var } => format!("{}[{var}]", base.name()),
            ContextKind::Dual { base } => format!("{}[dt]", base.name()),
            ContextKind::Localized { base, inverted } => inverted.decorate_name(&base.name()),
            ContextKind::Grothendieck { base } => format!("Groth({})", base.name()),
            ContextKind::ZeroRing => "ZeroRing".into(),
        }
    }

    pub fn supports_add(&self) -> bool {
        match self.kind() {
            ContextKind::Polynomial { base, .. }
            | ContextKind::Dual { base }
            | ContextKind::Localized { base, .. }
            | ContextKind::Grothendieck { base } => base.supports_add(),
            _ => true,
        }
    }

    pub fn supports_mul(&self) -> bool {
        match self.kind() {
            ContextKind::Monoid(_) => false,
            ContextKind::Polynomial { base, .. }
            | ContextKind::Dual { base }
            | ContextKind::Localized { base, .. }
            | ContextKind::Grothendieck { base } => base.supports_mul(),
            _ => true,
        }
    }

    /// The additive neutral element, when one exists.
    pub fn zero(&self) -> Option<Element> {
        let payload = match self.kind() {
            ContextKind::Naturals | ContextKind::Integers => Payload::int(0),
            ContextKind::Rationals => Payload::rat(0, 1),
            ContextKind::ZMod(_) => Payload::Residue(0),
            ContextKind::Tropical => Payload::Trop(TropValue::Infinity),
            ContextKind::Monoid(m) => Payload::MonoidElem(m.neutral()?),
            ContextKind::Polynomial { base, var } => {
                Payload::Poly(crate::polyfrac::Polynomial::zero(base, var))
            }
            ContextKind::Dual { base } => {
                let z = base.zero()?;
                Payload::Dual(alloc::boxed::Box::new(crate::dualcalc::DualNumber::raw(
                    z.clone(),
                    z,
                )))
            }
            ContextKind::Localized { base, .. } => Payload::Frac(alloc::boxed::Box::new(
                FractionElement::raw(base.zero()?, base.one()?),
            )),
            ContextKind::Grothendieck { base } => {
                let x = base.zero().or_else(|| base.enumerate()?.into_iter().next())?;
                Payload::Diff(alloc::boxed::Box::new(DifferenceElement::raw(x.clone(), x)))
            }
            ContextKind::ZeroRing => Payload::Zero,
        };
        Some(Element::raw(self.clone(), payload))
    }

    /// The multiplicative neutral element, when one exists.
    pub fn one(&self) -> Option<Element> {
        let payload = match self.kind() {
            ContextKind::Naturals | ContextKind::Integers => Payload::int(1),
            ContextKind::Rationals => Payload::rat(1, 1),
            ContextKind::ZMod(n) => Payload::Residue(1 % n),
            ContextKind::Tropical => Payload::rat_trop(0, 1),
            ContextKind::Monoid(_) => return None,
            ContextKind::Polynomial { base, var } => Payload::Poly(
                crate::polyfrac::Polynomial::constant(base.one()?, var).ok()?,
            ),
            ContextKind::Dual { base } => Payload::Dual(alloc::boxed::Box::new(
                crate::dualcalc::DualNumber::raw(base.one()?, base.zero()?),
            )),
            ContextKind::Localized { base, .. } => {
                let one = base.one()?;
                Payload::Frac(alloc::boxed::Box::new(FractionElement::raw(one.clone(), one)))
            }
            ContextKind::Grothendieck { base } => Payload::Diff(alloc::boxed::Box::new(
                DifferenceElement::raw(base.one()?, base.zero()?),
            )),
            ContextKind::ZeroRing => Payload::Zero,
        };
        Some(Element::raw(self.clone(), payload))
    }

    /// All elements of a finite carrier, in a fixed deterministic order.
    /// `None` when the carrier is infinite or too large to materialize.
    pub fn enumerate(&self) -> Option<Vec<Element>> {
        const MAX_ENUM: u64 = 4096;
        match self.kind() {
            ContextKind::ZMod(n) if *n <= MAX_ENUM => Some(
                (0..*n)
                    .map(|r| Element::raw(self.clone(), Payload::Residue(r)))
                    .collect(),
            ),
            ContextKind::Monoid(m) => Some(
                (0..m.size())
                    .map(|i| Element::raw(self.clone(), Payload::MonoidElem(i)))
                    .collect(),
            ),
            ContextKind::ZeroRing => Some(vec![self.zero().expect("zero ring has 0")]),
            ContextKind::Localized { base, inverted } => {
                let carrier = base.enumerate()?;
                let dens = inverted.closure()?.to_vec();
                let mut reps: Vec<Element> = Vec::new();
                for num in &carrier {
                    for den in &dens {
                        let frac = Element::raw(
                            self.clone(),
                            Payload::Frac(alloc::boxed::Box::new(FractionElement::raw(
                                num.clone(),
                                den.clone(),
                            ))),
                        );
                        let fresh = reps
                            .iter()
                            .map(|r| r.try_eq(&frac))
                            .collect::<Result<Vec<_>>>()
                            .ok()?
                            .iter()
                            .all(|eq| !eq);
                        if fresh {
                            reps.push(frac);
                        }
                    }
                }
                Some(reps)
            }
            ContextKind::Grothendieck { base } => {
                let carrier = base.enumerate()?;
                let mut reps: Vec<Element> = Vec::new();
                for plus in &carrier {
                    for minus in &carrier {
                        let diff = Element::raw(
                            self.clone(),
                            Payload::Diff(alloc::boxed::Box::new(DifferenceElement::raw(
                                plus.clone(),
                                minus.clone(),
                            ))),
                        );
                        let fresh = reps
                            .iter()
                            .map(|r| r.try_eq(&diff))
                            .collect::<Result<Vec<_>>>()
                            .ok()?
                            .iter()
                            .all(|eq| !eq);
                        if fresh {
                            reps.push(diff);
                        }
                    }
                }
                Some(reps)
            }
            _ => None,
        }
    }

    /// Whether multiplication has no zero divisors (so every nonzero element
    /// is multiplicatively cancellative). Conservative: `false` when unknown.
    pub(crate) fn is_domain_like(&self) -> bool {
        match self.kind() {
            ContextKind::Naturals | ContextKind::Integers | ContextKind::Rationals => true,
            ContextKind::ZMod(n) => is_prime(*n),
            // r ⊗ s = r + s hits +∞ only if one factor is +∞ already.
            ContextKind::Tropical => true,
            ContextKind::Polynomial { base, .. } | ContextKind::Localized { base, .. } => {
                base.is_domain_like()
            }
            ContextKind::Grothendieck { base } => matches!(base.kind(), ContextKind::Naturals),
            _ => false,
        }
    }

    /// Whether every element is additively cancellative.
    pub(crate) fn is_add_cancellative_carrier(&self) -> bool {
        match self.kind() {
            ContextKind::Naturals
            | ContextKind::Integers
            | ContextKind::Rationals
            | ContextKind::ZMod(_)
            | ContextKind::ZeroRing => true,
            ContextKind::Tropical => false,
            ContextKind::Monoid(m) => {
                let n = m.size();
                (0..n).all(|d| {
                    (0..n).all(|x| (0..n).all(|y| x == y || m.apply(d, x) != m.apply(d, y)))
                })
            }
            ContextKind::Polynomial { base, .. } | ContextKind::Dual { base } => {
                base.is_add_cancellative_carrier()
            }
            ContextKind::Localized { base, inverted } => {
                inverted.all_cancellative() && base.is_add_cancellative_carrier()
            }
            // Grothendieck contexts are groups under addition.
            ContextKind::Grothendieck { .. } => true,
        }
    }

    /// Structural widening order: `self` embeds into `target` by one of the
    /// recognized inclusions (N into Z, Z into Q, a base into its
    /// localization or Grothendieck context, everything into ZeroRing).
    pub fn widens_to(&self, target: &Context) -> bool {
        if self.same(target) {
            return true;
        }
        match (self.kind(), target.kind()) {
            (_, ContextKind::ZeroRing) => true,
            (ContextKind::Naturals, ContextKind::Integers) => true,
            (ContextKind::Naturals | ContextKind::Integers, ContextKind::Rationals) => true,
            (
                ContextKind::Localized { base: b1, inverted: d1 },
                ContextKind::Localized { base: b2, inverted: d2 },
            ) => b1.widens_to(b2) && d1.embeds_into(d2, b2),
            (ContextKind::Localized { base, .. }, ContextKind::Rationals) => base.widens_to(target),
            (_, ContextKind::Localized { base, .. }) => self.widens_to(base),
            (_, ContextKind::Grothendieck { base }) => self.widens_to(base),
            _ => false,
        }
    }

    /// Structural equality of contexts.
    pub fn same(&self, other: &Context) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (ContextKind::Naturals, ContextKind::Naturals)
            | (ContextKind::Integers, ContextKind::Integers)
            | (ContextKind::Rationals, ContextKind::Rationals)
            | (ContextKind::Tropical, ContextKind::Tropical)
            | (ContextKind::ZeroRing, ContextKind::ZeroRing) => true,
            (ContextKind::ZMod(a), ContextKind::ZMod(b)) => a == b,
            (ContextKind::Monoid(a), ContextKind::Monoid(b)) => a == b,
            (
                ContextKind::Polynomial { base: b1, var: v1 },
                ContextKind::Polynomial { base: b2, var: v2 },
            ) => v1 == v2 && b1.same(b2),
            (ContextKind::Dual { base: b1 }, ContextKind::Dual { base: b2 }) => b1.same(b2),
            (
                ContextKind::Localized { base: b1, inverted: d1 },
                ContextKind::Localized { base: b2, inverted: d2 },
            ) => b1.same(b2) && d1.same_spec(d2),
            (ContextKind::Grothendieck { base: b1 }, ContextKind::Grothendieck { base: b2 }) => {
                b1.same(b2)
            }
            _ => false,
        }
    }

    pub(crate) fn require_same(&self, other: &Context) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.name(),
                right: other.name(),
            })
        }
    }

    pub(crate) fn unsupported(&self, op: &'static str) -> Error {
        Error::Unsupported {
            ctx: self.name(),
            op,
        }
    }

    /// Exhaustive cancellativity scans stay below this carrier size.
    pub(crate) const EXHAUSTIVE_BOUND: usize = 1024;

    pub(crate) fn op_neutral(&self, op: OpKind) -> Option<Element> {
        match op {
            OpKind::Additive => self.zero(),
            OpKind::Multiplicative => self.one(),
        }
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Context {}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow_mod = |base: u64, mut exp: u64| -> u64 {
        let m = n as u128;
        let mut acc: u128 = 1;
        let mut b = base as u128 % m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        acc as u64
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(Context::naturals().name(), "N");
        assert_eq!(Context::zmod(6).unwrap().name(), "Z/6");
        assert_eq!(Context::dual(&Context::rationals()).name(), "Q[dt]");
        assert_eq!(
            Context::polynomial(&Context::rationals(), "x").name(),
            "Q[x]"
        );
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(7));
        assert!(!is_prime(1));
        assert!(!is_prime(6));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007u64 * 3));
    }

    #[test]
    fn widening_order() {
        let n = Context::naturals();
        let z = Context::integers();
        assert!(n.widens_to(&z));
        assert!(!z.widens_to(&n));
        assert!(z.widens_to(&Context::rationals()));
        assert!(n.widens_to(&Context::zero_ring()));
    }
}
