//! Universal constructions: formally inverting elements of a commutative
//! (semi)ring.
//!
//! Both constructions here are the same move performed on different
//! operations. To divide by `d` you pass to pairs `(a, d)` read as `a/d`; to
//! subtract you pass to pairs `(p, m)` read as `p - m`. Pair equality carries
//! an existential slack factor, which is what keeps the relation transitive
//! even when the inverted elements fail to be cancellative:
//!
//! ```text
//! (a, d) ~ (a', d')  iff  ∃u in closure(D):  u·a·d' = u·a'·d
//! (p, m) ~ (p', m')  iff  ∃k:                k + p + m' = k + p' + m
//! ```
//!
//! (For transitivity, chase: if u₁ witnesses the first equality and u₂ the
//! second, u₁·u₂·d' witnesses the composite; only commutativity is used.)
//!
//! When every inverted element is cancellative the slack is unnecessary and
//! the base maps into the new system injectively. When some element is not,
//! the construction still exists but identifies previously distinct elements,
//! and if 0 ends up invertible the whole system collapses to the zero ring.
//! [`injectivity_oracle`] checks the embedding claim by brute force on small
//! carriers, deliberately independent of the cancellativity rule table.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::format;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::semiring::{Context, ContextKind, Element, OpKind, Payload};

/// How the set of inverted elements is described.
#[derive(Debug, Clone)]
enum SetSpec {
    /// The closure of an explicit list of generators under the operation.
    Generated(Vec<Element>),
    /// Every element except the additive zero (total fractions).
    AllNonzero,
}

/// A subset of a context closed under one operation, designated for formal
/// inversion. The closure always contains the operation's neutral element
/// when the context has one.
#[derive(Debug, Clone)]
pub struct InvertedSet {
    base: Context,
    op: OpKind,
    spec: SetSpec,
    /// Materialized closure when it is finite within budget.
    closure: Option<Vec<Element>>,
    /// Whether every generator is cancellative (a cached rule-table answer;
    /// `false` also covers "unknown").
    cancellative: bool,
}

/// Closures larger than this stay symbolic (membership by search instead).
const CLOSURE_BUDGET: usize = 256;

impl InvertedSet {
    /// The closure of `generators` under the chosen operation of their
    /// shared context.
    pub fn generated(op: OpKind, generators: Vec<Element>) -> Result<InvertedSet> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidElement("inverted set needs a generator".to_string()))?;
        let base = first.context().clone();
        match op {
            OpKind::Additive if !base.supports_add() => return Err(base.unsupported("addition")),
            OpKind::Multiplicative if !base.supports_mul() => {
                return Err(base.unsupported("multiplication"))
            }
            _ => {}
        }
        let mut gens: Vec<Element> = Vec::new();
        for g in generators {
            base.require_same(g.context())?;
            let mut fresh = true;
            for seen in &gens {
                if seen.try_eq(&g)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                gens.push(g);
            }
        }
        let closure = compute_closure(&base, op, &gens)?;
        let mut cancellative = true;
        for g in &gens {
            if !g.is_cancellative(op)?.is_yes() {
                cancellative = false;
                break;
            }
        }
        Ok(InvertedSet {
            base,
            op,
            spec: SetSpec::Generated(gens),
            closure,
            cancellative,
        })
    }

    /// Every nonzero element, multiplicatively (the total-fraction set).
    pub fn all_nonzero(base: &Context) -> Result<InvertedSet> {
        if !base.supports_mul() {
            return Err(base.unsupported("multiplication"));
        }
        if base.zero().is_none() {
            return Err(base.unsupported("a zero to exclude"));
        }
        let closure = match base.enumerate() {
            Some(carrier) if carrier.len() <= CLOSURE_BUDGET => {
                let mut seed = Vec::new();
                for x in carrier {
                    if !x.is_zero()? {
                        seed.push(x);
                    }
                }
                compute_closure(base, OpKind::Multiplicative, &seed)?
            }
            _ => None,
        };
        Ok(InvertedSet {
            base: base.clone(),
            op: OpKind::Multiplicative,
            spec: SetSpec::AllNonzero,
            closure,
            cancellative: base.is_domain_like(),
        })
    }

    pub fn base(&self) -> &Context {
        &self.base
    }

    pub fn op(&self) -> OpKind {
        self.op
    }

    /// The explicit generators (empty for the all-nonzero set).
    pub fn generators(&self) -> &[Element] {
        match &self.spec {
            SetSpec::Generated(gens) => gens,
            SetSpec::AllNonzero => &[],
        }
    }

    pub fn is_all_nonzero(&self) -> bool {
        matches!(self.spec, SetSpec::AllNonzero)
    }

    /// The materialized closure, when finite within budget.
    pub fn closure(&self) -> Option<&[Element]> {
        self.closure.as_deref()
    }

    /// Whether every generator passed the cancellativity rule table.
    pub fn all_cancellative(&self) -> bool {
        self.cancellative
    }

    /// Membership in the closure.
    pub fn contains(&self, x: &Element) -> Result<bool> {
        self.base.require_same(x.context())?;
        if let SetSpec::AllNonzero = self.spec {
            if self.closure.is_none() {
                return Ok(!x.is_zero()?);
            }
        }
        if let Some(cl) = &self.closure {
            for c in cl {
                if c.try_eq(x)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        // Symbolic membership: integer carriers admit a divisor search.
        match (self.base.kind(), self.op) {
            (ContextKind::Naturals | ContextKind::Integers, OpKind::Multiplicative) => {
                let gens: Vec<BigInt> = self
                    .generators()
                    .iter()
                    .map(|g| g.as_int().cloned().expect("integer payload"))
                    .collect();
                let t = x.as_int().cloned().ok_or_else(|| {
                    Error::InvalidElement("payload does not match context".to_string())
                })?;
                let mut seen = BTreeSet::new();
                Ok(divisor_dfs(&t, &gens, &mut seen))
            }
            _ => Err(self.base.unsupported("inverted-set membership")),
        }
    }

    /// Whether 0 lies in the closure, which is the collapse trigger.
    pub fn contains_zero(&self) -> Result<bool> {
        let Some(zero) = self.base.zero() else {
            return Ok(false);
        };
        if let Some(cl) = &self.closure {
            for c in cl {
                if c.is_zero()? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        match &self.spec {
            SetSpec::AllNonzero => Ok(!self.base.is_domain_like()),
            SetSpec::Generated(gens) => {
                if self.base.is_domain_like() || self.op == OpKind::Additive {
                    // Products of nonzero elements stay nonzero in a domain;
                    // for sums this check is only a generator scan (a sum of
                    // nonzero naturals cannot vanish, and additive closures
                    // of other infinite carriers are not constructed here).
                    for g in gens {
                        if g.try_eq(&zero)? {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                } else {
                    Err(self.base.unsupported("zero-membership decision"))
                }
            }
        }
    }

    /// Structural identity of set descriptions (not extensional equality).
    pub(crate) fn same_spec(&self, other: &InvertedSet) -> bool {
        if self.op != other.op {
            return false;
        }
        match (&self.spec, &other.spec) {
            (SetSpec::AllNonzero, SetSpec::AllNonzero) => true,
            (SetSpec::Generated(a), SetSpec::Generated(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.repr_eq(y))
            }
            _ => false,
        }
    }

    /// Whether this set's inversions are all available in `other`, after
    /// embedding generators into `target_base`.
    pub(crate) fn embeds_into(&self, other: &InvertedSet, target_base: &Context) -> bool {
        if self.op != other.op {
            return false;
        }
        match (&self.spec, &other.spec) {
            (SetSpec::AllNonzero, SetSpec::AllNonzero) => true,
            (SetSpec::AllNonzero, SetSpec::Generated(_)) => false,
            (SetSpec::Generated(gens), _) => gens.iter().all(|g| {
                g.embed(target_base)
                    .and_then(|img| other.contains(&img))
                    .unwrap_or(false)
            }),
        }
    }

    pub(crate) fn decorate_name(&self, base_name: &str) -> String {
        match &self.spec {
            SetSpec::AllNonzero => format!("Frac({base_name})"),
            SetSpec::Generated(gens) => {
                let mut parts = String::new();
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        parts.push(',');
                    }
                    parts.push_str(&format!("1/{g}"));
                }
                format!("{base_name}[{parts}]")
            }
        }
    }
}

/// Closure of `seed` under `op`, including the neutral element, materialized
/// up to [`CLOSURE_BUDGET`]. `Ok(None)` means "finite materialization gave
/// up", not an error.
fn compute_closure(base: &Context, op: OpKind, seed: &[Element]) -> Result<Option<Vec<Element>>> {
    // Over N, Z and Q the answer is known without iterating: multiplicative
    // closures are finite only for generators of absolute value at most one,
    // additive ones only for zero. Skip straight to symbolic otherwise.
    if matches!(
        base.kind(),
        ContextKind::Naturals | ContextKind::Integers | ContextKind::Rationals
    ) {
        for g in seed {
            let escapes = match (op, g.payload()) {
                (OpKind::Multiplicative, Payload::Int(n)) => n.abs() > BigInt::one(),
                (OpKind::Multiplicative, Payload::Rat(r)) => {
                    r.numer().abs() != r.denom().abs() && !r.is_zero()
                }
                (OpKind::Additive, _) => !g.is_zero()?,
                _ => false,
            };
            if escapes {
                return Ok(None);
            }
        }
    }
    let mut closure: Vec<Element> = Vec::new();
    let mut work: Vec<Element> = Vec::new();
    let push = |cl: &mut Vec<Element>, work: &mut Vec<Element>, x: Element| -> Result<bool> {
        for seen in cl.iter() {
            if seen.try_eq(&x)? {
                return Ok(true);
            }
        }
        cl.push(x.clone());
        work.push(x);
        Ok(cl.len() <= CLOSURE_BUDGET)
    };
    if let Some(neutral) = base.op_neutral(op) {
        if !push(&mut closure, &mut work, neutral)? {
            return Ok(None);
        }
    }
    for g in seed {
        if !push(&mut closure, &mut work, g.clone())? {
            return Ok(None);
        }
    }
    while let Some(x) = work.pop() {
        let snapshot: Vec<Element> = closure.clone();
        for y in snapshot {
            let combined = match op {
                OpKind::Additive => x.add(&y)?,
                OpKind::Multiplicative => x.mul(&y)?,
            };
            if !push(&mut closure, &mut work, combined)? {
                return Ok(None);
            }
        }
    }
    Ok(Some(closure))
}

/// Can `t` be written as a product of the given integer generators?
fn divisor_dfs(t: &BigInt, gens: &[BigInt], seen: &mut BTreeSet<BigInt>) -> bool {
    if t.is_one() {
        return true;
    }
    if !seen.insert(t.clone()) {
        return false;
    }
    for g in gens {
        if g.is_zero() {
            if t.is_zero() {
                return true;
            }
            continue;
        }
        let (q, r) = t.div_rem(g);
        if r.is_zero() && divisor_dfs(&q, gens, seen) {
            return true;
        }
    }
    false
}

/// A formal fraction num/den. The denominator is always a closure member of
/// the context's inverted set; arithmetic preserves this because closures are
/// closed under the operation.
#[derive(Debug, Clone)]
pub struct FractionElement {
    num: Element,
    den: Element,
}

impl FractionElement {
    pub(crate) fn raw(num: Element, den: Element) -> FractionElement {
        FractionElement { num, den }
    }

    pub fn num(&self) -> &Element {
        &self.num
    }

    pub fn den(&self) -> &Element {
        &self.den
    }
}

impl fmt::Display for FractionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Integer fractions print in lowest terms with a positive
        // denominator; everything else prints as written.
        if let (Some(n), Some(d)) = (self.num.as_int(), self.den.as_int()) {
            if !d.is_zero() {
                let r = BigRational::new(n.clone(), d.clone());
                return write!(f, "{r}");
            }
        }
        let num = self.num.to_string();
        let den = self.den.to_string();
        let wrap = |s: &str| s.contains(' ') || s.contains('/');
        match (wrap(&num), wrap(&den)) {
            (false, false) => write!(f, "{num}/{den}"),
            (true, false) => write!(f, "({num})/{den}"),
            (false, true) => write!(f, "{num}/({den})"),
            (true, true) => write!(f, "({num})/({den})"),
        }
    }
}

/// A formal difference plus - minus.
#[derive(Debug, Clone)]
pub struct DifferenceElement {
    plus: Element,
    minus: Element,
}

impl DifferenceElement {
    pub(crate) fn raw(plus: Element, minus: Element) -> DifferenceElement {
        DifferenceElement { plus, minus }
    }

    pub fn plus(&self) -> &Element {
        &self.plus
    }

    pub fn minus(&self) -> &Element {
        &self.minus
    }
}

impl fmt::Display for DifferenceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} - {}]", self.plus, self.minus)
    }
}

/// The context of fractions over `base` with denominators from `inverted`.
/// If 0 is invertible the result is the zero ring: that is a legitimate
/// answer, not an error.
pub fn localize(base: &Context, inverted: InvertedSet) -> Result<Context> {
    base.require_same(inverted.base())?;
    if inverted.op() != OpKind::Multiplicative {
        return Err(base.unsupported("additive localization (use grothendieck)"));
    }
    if base.one().is_none() {
        return Err(base.unsupported("localization without a unit"));
    }
    if inverted.contains_zero()? {
        return Ok(Context::zero_ring());
    }
    Ok(Context::localized(base, inverted))
}

/// The context of formal differences over an additive commutative monoid.
pub fn grothendieck(base: &Context) -> Result<Context> {
    if !base.supports_add() {
        return Err(base.unsupported("addition"));
    }
    Ok(Context::grothendieck_of(base))
}

/// The fraction num/den in a localized context (or 0 in the zero ring, where
/// every fraction has collapsed).
pub fn fraction(ctx: &Context, num: Element, den: Element) -> Result<Element> {
    match ctx.kind() {
        ContextKind::ZeroRing => Ok(ctx.zero().expect("zero ring has 0")),
        ContextKind::Localized { base, inverted } => {
            base.require_same(num.context())?;
            base.require_same(den.context())?;
            if !inverted.contains(&den)? {
                return Err(Error::DenominatorNotInverted {
                    den: den.to_string(),
                    ctx: ctx.name(),
                });
            }
            Ok(Element::raw(
                ctx.clone(),
                Payload::Frac(Box::new(FractionElement::raw(num, den))),
            ))
        }
        _ => Err(ctx.unsupported("fractions")),
    }
}

/// The difference plus - minus in a Grothendieck context.
pub fn difference(ctx: &Context, plus: Element, minus: Element) -> Result<Element> {
    match ctx.kind() {
        ContextKind::Grothendieck { base } => {
            base.require_same(plus.context())?;
            base.require_same(minus.context())?;
            Ok(Element::raw(
                ctx.clone(),
                Payload::Diff(Box::new(DifferenceElement::raw(plus, minus))),
            ))
        }
        _ => Err(ctx.unsupported("formal differences")),
    }
}

pub(crate) fn frac_eq_in(ctx: &Context, a: &FractionElement, b: &FractionElement) -> Result<bool> {
    let ContextKind::Localized { inverted, .. } = ctx.kind() else {
        return Err(ctx.unsupported("fraction equality"));
    };
    let lhs = a.num.mul(&b.den)?;
    let rhs = b.num.mul(&a.den)?;
    if inverted.all_cancellative() {
        return lhs.try_eq(&rhs);
    }
    match inverted.closure() {
        Some(cl) => {
            for u in cl {
                if u.mul(&lhs)?.try_eq(&u.mul(&rhs)?)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        None => Err(ctx.unsupported("fraction equality over a symbolic closure")),
    }
}

pub(crate) fn frac_add_raw(a: &FractionElement, b: &FractionElement) -> Result<FractionElement> {
    let num = a.num.mul(&b.den)?.add(&b.num.mul(&a.den)?)?;
    let den = a.den.mul(&b.den)?;
    Ok(FractionElement::raw(num, den))
}

pub(crate) fn frac_sub_raw(a: &FractionElement, b: &FractionElement) -> Result<FractionElement> {
    let num = a.num.mul(&b.den)?.sub(&b.num.mul(&a.den)?)?;
    let den = a.den.mul(&b.den)?;
    Ok(FractionElement::raw(num, den))
}

pub(crate) fn frac_mul_raw(a: &FractionElement, b: &FractionElement) -> Result<FractionElement> {
    Ok(FractionElement::raw(
        a.num.mul(&b.num)?,
        a.den.mul(&b.den)?,
    ))
}

pub(crate) fn frac_inv_in(ctx: &Context, f: &FractionElement) -> Result<FractionElement> {
    let ContextKind::Localized { inverted, .. } = ctx.kind() else {
        return Err(ctx.unsupported("fraction inversion"));
    };
    if !inverted.contains(&f.num)? {
        return Err(Error::NotInvertible {
            element: f.to_string(),
            ctx: ctx.name(),
        });
    }
    Ok(FractionElement::raw(f.den.clone(), f.num.clone()))
}

pub(crate) fn diff_eq_in(base: &Context, a: &DifferenceElement, b: &DifferenceElement) -> Result<bool> {
    let lhs = a.plus.add(&b.minus)?;
    let rhs = b.plus.add(&a.minus)?;
    if base.is_add_cancellative_carrier() {
        return lhs.try_eq(&rhs);
    }
    if matches!(base.kind(), ContextKind::Tropical) {
        // min(k, x) = min(k, y) for any k at most min(x, y): the difference
        // construction on the tropical line is totally degenerate.
        return Ok(true);
    }
    match base.enumerate() {
        Some(carrier) if carrier.len() <= Context::EXHAUSTIVE_BOUND => {
            for k in &carrier {
                if k.add(&lhs)?.try_eq(&k.add(&rhs)?)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Err(base.unsupported("difference equality")),
    }
}

pub(crate) fn diff_add_raw(a: &DifferenceElement, b: &DifferenceElement) -> Result<DifferenceElement> {
    Ok(DifferenceElement::raw(
        a.plus.add(&b.plus)?,
        a.minus.add(&b.minus)?,
    ))
}

pub(crate) fn diff_sub_raw(a: &DifferenceElement, b: &DifferenceElement) -> Result<DifferenceElement> {
    Ok(DifferenceElement::raw(
        a.plus.add(&b.minus)?,
        a.minus.add(&b.plus)?,
    ))
}

pub(crate) fn diff_mul_raw(a: &DifferenceElement, b: &DifferenceElement) -> Result<DifferenceElement> {
    let plus = a.plus.mul(&b.plus)?.add(&a.minus.mul(&b.minus)?)?;
    let minus = a.plus.mul(&b.minus)?.add(&a.minus.mul(&b.plus)?)?;
    Ok(DifferenceElement::raw(plus, minus))
}

/// The canonical morphism into Q, where one exists: integers and naturals
/// map as themselves, fractions as num/den, differences as plus - minus,
/// recursively.
pub fn rational_image(e: &Element) -> Result<BigRational> {
    match e.payload() {
        Payload::Int(n) => Ok(BigRational::from_integer(n.clone())),
        Payload::Rat(r) => Ok(r.clone()),
        Payload::Frac(f) => {
            let num = rational_image(f.num())?;
            let den = rational_image(f.den())?;
            if den.is_zero() {
                return Err(Error::VerticalAxis);
            }
            Ok(num / den)
        }
        Payload::Diff(d) => Ok(rational_image(d.plus())? - rational_image(d.minus())?),
        _ => Err(e.context().unsupported("rational image")),
    }
}

/// Outcome of [`injectivity_oracle`].
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub injective: bool,
    /// Two distinct carrier elements with equal images, when not injective.
    pub witness: Option<(Element, Element)>,
    pub carrier_size: usize,
    pub closure_size: usize,
}

/// Default carrier bound for the brute-force oracle.
pub const DEFAULT_ORACLE_BOUND: usize = 12;

/// Brute-force check that the canonical map into the pair construction is
/// injective, by enumerating all pairs and deciding the ∃u relation
/// exhaustively. No cancellativity reasoning is used; this is the oracle the
/// rule table is judged against.
pub fn injectivity_oracle(
    base: &Context,
    inverted: &InvertedSet,
    op: OpKind,
    bound: usize,
) -> Result<InjectivityReport> {
    base.require_same(inverted.base())?;
    if inverted.op() != op {
        return Err(base.unsupported("oracle with mismatched operations"));
    }
    let carrier = base
        .enumerate()
        .ok_or_else(|| Error::NotEnumerable { ctx: base.name() })?;
    if carrier.len() > bound {
        return Err(Error::OracleBoundExceeded {
            size: carrier.len(),
            bound,
        });
    }
    let closure = inverted
        .closure()
        .ok_or_else(|| Error::NotEnumerable { ctx: base.name() })?;
    let apply = |x: &Element, y: &Element| -> Result<Element> {
        match op {
            OpKind::Additive => x.add(y),
            OpKind::Multiplicative => x.mul(y),
        }
    };
    // The canonical map sends a to the pair (a∘d₀, d₀); with a neutral
    // element that is just (a, e).
    let d0 = closure
        .first()
        .ok_or_else(|| Error::InvalidElement("empty closure".to_string()))?;
    let pairs_equal = |p: &(Element, Element), q: &(Element, Element)| -> Result<bool> {
        let lhs0 = apply(&p.0, &q.1)?;
        let rhs0 = apply(&q.0, &p.1)?;
        for u in closure {
            if apply(u, &lhs0)?.try_eq(&apply(u, &rhs0)?)? {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let images: Vec<(Element, Element)> = carrier
        .iter()
        .map(|a| Ok((apply(a, d0)?, d0.clone())))
        .collect::<Result<_>>()?;
    for i in 0..carrier.len() {
        for j in (i + 1)..carrier.len() {
            if pairs_equal(&images[i], &images[j])? {
                return Ok(InjectivityReport {
                    injective: false,
                    witness: Some((carrier[i].clone(), carrier[j].clone())),
                    carrier_size: carrier.len(),
                    closure_size: closure.len(),
                });
            }
        }
    }
    Ok(InjectivityReport {
        injective: true,
        witness: None,
        carrier_size: carrier.len(),
        closure_size: closure.len(),
    })
}

/// What inverting a set does to the base system.
#[derive(Debug, Clone)]
pub struct CollapseReport {
    /// True when 0 lands in the closure, so the localization is the zero ring.
    pub collapsed_to_zero: bool,
    /// Distinct base pairs that become identified (a sample, not exhaustive).
    pub identified_pairs: Vec<(Element, Element)>,
    pub reason: Option<String>,
}

/// Reports whether localizing at `inverted` collapses anything: fully (zero
/// becomes invertible) or partially (non-cancellative elements identify
/// pairs). Small carriers are scanned exhaustively; infinite ones fall back
/// to the generators' cancellativity witnesses.
pub fn collapse_detect(base: &Context, inverted: &InvertedSet) -> Result<CollapseReport> {
    base.require_same(inverted.base())?;
    let collapsed = inverted.contains_zero()?;
    let mut pairs: Vec<(Element, Element)> = Vec::new();
    const PAIR_SAMPLE: usize = 8;
    let carrier = base.enumerate().filter(|c| c.len() <= DEFAULT_ORACLE_BOUND);
    match (carrier, inverted.closure()) {
        (Some(carrier), Some(closure)) => {
            'outer: for i in 0..carrier.len() {
                for j in (i + 1)..carrier.len() {
                    for u in closure {
                        let lhs = match inverted.op() {
                            OpKind::Additive => u.add(&carrier[i])?,
                            OpKind::Multiplicative => u.mul(&carrier[i])?,
                        };
                        let rhs = match inverted.op() {
                            OpKind::Additive => u.add(&carrier[j])?,
                            OpKind::Multiplicative => u.mul(&carrier[j])?,
                        };
                        if lhs.try_eq(&rhs)? {
                            pairs.push((carrier[i].clone(), carrier[j].clone()));
                            if pairs.len() >= PAIR_SAMPLE {
                                break 'outer;
                            }
                            break;
                        }
                    }
                }
            }
        }
        _ => {
            for g in inverted.generators() {
                if let crate::semiring::Cancellativity::No { witness } =
                    g.is_cancellative(inverted.op())?
                {
                    pairs.push(witness);
                    if pairs.len() >= PAIR_SAMPLE {
                        break;
                    }
                }
            }
            if collapsed && pairs.is_empty() {
                if let (Some(zero), Some(one)) = (base.zero(), base.one()) {
                    pairs.push((zero, one));
                }
            }
        }
    }
    let reason = if collapsed {
        Some("0 is invertible, so every element equals 0".to_string())
    } else if !pairs.is_empty() {
        Some("a non-cancellative element was inverted".to_string())
    } else {
        None
    };
    Ok(CollapseReport {
        collapsed_to_zero: collapsed,
        identified_pairs: pairs,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use crate::semiring::FiniteMonoid;

    fn int(n: i64) -> Element {
        Element::from_int(&Context::integers(), n).unwrap()
    }

    #[test]
    fn closure_materializes_and_names() {
        let d = InvertedSet::generated(OpKind::Multiplicative, vec![int(2)]).unwrap();
        // 1, 2, 4, 8, ... does not fit any budget.
        assert!(d.closure().is_none());
        assert!(d.contains(&int(8)).unwrap());
        assert!(d.contains(&int(1)).unwrap());
        assert!(!d.contains(&int(6)).unwrap());
        assert!(!d.contains(&int(0)).unwrap());
        let ctx = localize(&Context::integers(), d).unwrap();
        assert_eq!(ctx.name(), "Z[1/2]");
    }

    #[test]
    fn localizing_at_zero_collapses() {
        let d = InvertedSet::generated(OpKind::Multiplicative, vec![int(0)]).unwrap();
        let ctx = localize(&Context::integers(), d).unwrap();
        assert!(ctx.is_zero_ring());
    }

    #[test]
    fn fraction_equality_cross_multiplies() {
        let d = InvertedSet::generated(OpKind::Multiplicative, vec![int(2)]).unwrap();
        let ctx = localize(&Context::integers(), d).unwrap();
        let half = fraction(&ctx, int(1), int(2)).unwrap();
        let two_quarters = fraction(&ctx, int(2), int(4)).unwrap();
        assert!(half.try_eq(&two_quarters).unwrap());
        let third_attempt = fraction(&ctx, int(3), int(4)).unwrap();
        assert!(!half.try_eq(&third_attempt).unwrap());
        // Denominators must come from the closure.
        assert!(fraction(&ctx, int(1), int(3)).is_err());
    }

    #[test]
    fn all_nonzero_over_a_finite_non_domain_collapses() {
        let z6 = Context::zmod(6).unwrap();
        let d = InvertedSet::all_nonzero(&z6).unwrap();
        // 2·3 = 0 forces 0 into the closure.
        assert!(d.contains_zero().unwrap());
        assert!(localize(&z6, d).unwrap().is_zero_ring());
    }

    #[test]
    fn grothendieck_of_naturals_subtracts() {
        let n = Context::naturals();
        let g = grothendieck(&n).unwrap();
        let three = Element::from_int(&n, 3).unwrap();
        let five = Element::from_int(&n, 5).unwrap();
        let d1 = difference(&g, three, five).unwrap();
        let d2 = difference(
            &g,
            Element::from_int(&n, 0).unwrap(),
            Element::from_int(&n, 2).unwrap(),
        )
        .unwrap();
        assert!(d1.try_eq(&d2).unwrap());
        assert_eq!(d1.to_string(), "-2");
    }

    #[test]
    fn boolean_or_identifies_everything() {
        let ctx = Context::monoid(FiniteMonoid::bool_or());
        let g = grothendieck(&ctx).unwrap();
        assert_eq!(g.enumerate().unwrap().len(), 1);
    }

    #[test]
    fn oracle_finds_boolean_witness() {
        let ctx = Context::monoid(FiniteMonoid::bool_or());
        let one = Element::monoid_elem(&ctx, 1).unwrap();
        let d = InvertedSet::generated(OpKind::Additive, vec![one]).unwrap();
        let report = injectivity_oracle(&ctx, &d, OpKind::Additive, DEFAULT_ORACLE_BOUND).unwrap();
        assert!(!report.injective);
        let (x, y) = report.witness.unwrap();
        assert_eq!(x.as_monoid_index(), Some(0));
        assert_eq!(y.as_monoid_index(), Some(1));
    }

    #[test]
    fn oracle_respects_its_bound() {
        let z = Context::zmod(100).unwrap();
        let two = Element::from_int(&z, 2).unwrap();
        let d = InvertedSet::generated(OpKind::Multiplicative, vec![two]).unwrap();
        match injectivity_oracle(&z, &d, OpKind::Multiplicative, DEFAULT_ORACLE_BOUND) {
            Err(Error::OracleBoundExceeded { size: 100, bound: 12 }) => {}
            other => panic!("expected a bound error, got {other:?}"),
        }
    }

    #[test]
    fn collapse_detect_reports_identifications() {
        let z6 = Context::zmod(6).unwrap();
        let two = Element::from_int(&z6, 2).unwrap();
        let d = InvertedSet::generated(OpKind::Multiplicative, vec![two]).unwrap();
        let report = collapse_detect(&z6, &d).unwrap();
        assert!(!report.collapsed_to_zero);
        assert!(!report.identified_pairs.is_empty());
        // 0 and 3 merge in Z/6[1/2].
        let (a, b) = &report.identified_pairs[0];
        assert_eq!(a.as_residue(), Some(0));
        assert_eq!(b.as_residue(), Some(3));
    }
}
