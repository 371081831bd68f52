//! Solving a·□ + b = c by un-adding and un-multiplying, widening the number
//! system exactly as far as the equation demands.
//!
//! Each inverse operation is a separate, recorded step. Un-adding b never
//! touches the left side: the new equation is literally a·□ = c - b, and if
//! c - b does not exist yet the context widens first (N to Z). Un-multiplying
//! by a unit divides in place; by anything else it localizes, which may turn
//! out to be conservative (the fraction was an old element all along) or to
//! collapse everything (a = 0).

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::Result;
use crate::semiring::{Context, ContextKind, Element, OpKind};
use crate::universal::{fraction, localize, InvertedSet};

/// a·□ + b = c over a single context.
#[derive(Debug, Clone)]
pub struct LinearEquation {
    a: Element,
    b: Element,
    c: Element,
}

impl LinearEquation {
    pub fn new(a: Element, b: Element, c: Element) -> Result<LinearEquation> {
        a.context().require_same(b.context())?;
        a.context().require_same(c.context())?;
        Ok(LinearEquation { a, b, c })
    }

    pub fn context(&self) -> &Context {
        self.a.context()
    }

    pub fn a(&self) -> &Element {
        &self.a
    }

    pub fn b(&self) -> &Element {
        &self.b
    }

    pub fn c(&self) -> &Element {
        &self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOp {
    Unadd,
    Unmultiply,
}

impl core::fmt::Display for StepOp {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            StepOp::Unadd => f.write_str("unadd"),
            StepOp::Unmultiply => f.write_str("unmultiply"),
        }
    }
}

/// What a step leaves behind: a smaller equation, or the answer.
#[derive(Debug, Clone)]
pub enum StepOutcome {
    Equation { coeff: Element, rhs: Element },
    Value(Element),
}

#[derive(Debug, Clone)]
pub struct SolveStep {
    pub op: StepOp,
    /// The element that was un-added or un-multiplied.
    pub operand: Element,
    /// The context after this step (equal to the previous one or wider).
    pub context: Context,
    pub outcome: StepOutcome,
    /// True when the step widened the context but the result turned out to
    /// lie in the narrower one anyway.
    pub conservative: bool,
}

#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub steps: Vec<SolveStep>,
    pub final_context: Context,
    /// True when solving collapsed the system to the zero ring.
    pub collapsed: bool,
}

impl SolveTrace {
    /// Contexts must only ever widen along the trace.
    pub fn is_monotone(&self, start: &Context) -> bool {
        let mut prev = start.clone();
        for step in &self.steps {
            if !prev.widens_to(&step.context) {
                return false;
            }
            prev = step.context.clone();
        }
        prev.widens_to(&self.final_context)
    }
}

/// Removes `+ b`: produces the coefficient and right side of a·□ = c - b.
/// Over N, when c - b does not exist, the context widens to Z first. The
/// coefficient is carried over by embedding only; no arithmetic touches it.
pub fn unadd(eq: &LinearEquation) -> Result<(Element, Element, SolveStep)> {
    let ctx = eq.context().clone();
    let (coeff, rhs, context) = match eq.c.sub(&eq.b) {
        Ok(rhs) => (eq.a.clone(), rhs, ctx),
        Err(_) if matches!(ctx.kind(), ContextKind::Naturals) => {
            let z = Context::integers();
            let rhs = eq.c.embed(&z)?.sub(&eq.b.embed(&z)?)?;
            (eq.a.embed(&z)?, rhs, z)
        }
        Err(e) => return Err(e),
    };
    let step = SolveStep {
        op: StepOp::Unadd,
        operand: eq.b.clone(),
        context: context.clone(),
        outcome: StepOutcome::Equation {
            coeff: coeff.clone(),
            rhs: rhs.clone(),
        },
        conservative: false,
    };
    Ok((coeff, rhs, step))
}

/// Removes the coefficient from coeff·□ = rhs. A unit divides in place; zero
/// collapses to the zero ring; anything else localizes at the coefficient,
/// flagged conservative when the fraction reduces into the unwidened context.
pub fn unmultiply(coeff: &Element, rhs: &Element) -> Result<(Element, SolveStep, bool)> {
    let ctx = coeff.context().clone();
    ctx.require_same(rhs.context())?;
    if coeff.is_zero()? {
        let zr = Context::zero_ring();
        let value = rhs.embed(&zr)?;
        let step = SolveStep {
            op: StepOp::Unmultiply,
            operand: coeff.clone(),
            context: zr,
            outcome: StepOutcome::Value(value.clone()),
            conservative: false,
        };
        return Ok((value, step, true));
    }
    if let Ok(inv) = coeff.mul_inverse() {
        let value = rhs.mul(&inv)?;
        let step = SolveStep {
            op: StepOp::Unmultiply,
            operand: coeff.clone(),
            context: ctx,
            outcome: StepOutcome::Value(value.clone()),
            conservative: false,
        };
        return Ok((value, step, false));
    }
    let inverted = InvertedSet::generated(OpKind::Multiplicative, vec![coeff.clone()])?;
    let wide = localize(&ctx, inverted)?;
    if wide.is_zero_ring() {
        let value = rhs.embed(&wide)?;
        let step = SolveStep {
            op: StepOp::Unmultiply,
            operand: coeff.clone(),
            context: wide,
            outcome: StepOutcome::Value(value.clone()),
            conservative: false,
        };
        return Ok((value, step, true));
    }
    let value = fraction(&wide, rhs.clone(), coeff.clone())?;
    let conservative = divides_exactly(coeff, rhs);
    let step = SolveStep {
        op: StepOp::Unmultiply,
        operand: coeff.clone(),
        context: wide,
        outcome: StepOutcome::Value(value.clone()),
        conservative,
    };
    Ok((value, step, false))
}

fn divides_exactly(coeff: &Element, rhs: &Element) -> bool {
    match (coeff.as_int(), rhs.as_int()) {
        (Some(c), Some(r)) if !c.is_zero() => r.mod_floor(c).is_zero(),
        _ => false,
    }
}

/// Un-add, then un-multiply. The value satisfies the original equation after
/// embedding everything into the final context.
pub fn solve(eq: &LinearEquation) -> Result<(Element, SolveTrace)> {
    let (coeff, rhs, unadd_step) = unadd(eq)?;
    let (value, unmul_step, collapsed) = unmultiply(&coeff, &rhs)?;
    let final_context = unmul_step.context.clone();
    let trace = SolveTrace {
        steps: vec![unadd_step, unmul_step],
        final_context,
        collapsed,
    };
    Ok((value, trace))
}

/// The note a conservative widening carries in rendered traces.
pub const CONSERVATIVE_NOTE: &str = "widening was conservative";

/// Checks a candidate value against its equation inside `target`: embeds a,
/// b, c and the value, then tests a·v + b = c there.
pub fn check_solution(eq: &LinearEquation, value: &Element, target: &Context) -> Result<bool> {
    let a = eq.a().embed(target)?;
    let b = eq.b().embed(target)?;
    let c = eq.c().embed(target)?;
    let v = value.embed(target)?;
    a.mul(&v)?.add(&b)?.try_eq(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::universal::rational_image;
    use num_rational::BigRational;

    fn eq_in(ctx: &Context, a: i64, b: i64, c: i64) -> LinearEquation {
        LinearEquation::new(
            Element::from_int(ctx, a).unwrap(),
            Element::from_int(ctx, b).unwrap(),
            Element::from_int(ctx, c).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn unit_coefficient_never_localizes() {
        let n = Context::naturals();
        let (value, trace) = solve(&eq_in(&n, 1, 4, 9)).unwrap();
        assert!(value.try_eq(&Element::from_int(&n, 5).unwrap()).unwrap());
        assert_eq!(trace.steps.len(), 2);
        assert!(trace.final_context.same(&n));
        assert!(trace.is_monotone(&n));
        assert!(!trace.collapsed);
    }

    #[test]
    fn exact_division_still_localizes_but_is_conservative() {
        let n = Context::naturals();
        let (value, trace) = solve(&eq_in(&n, 3, 1, 7)).unwrap();
        assert_eq!(trace.final_context.name(), "N[1/3]");
        assert!(trace.steps[1].conservative);
        assert_eq!(value.to_string(), "2");
        let two = Element::from_int(&trace.final_context, 2).unwrap();
        assert!(value.try_eq(&two).unwrap());
        assert!(trace.is_monotone(&n));
    }

    #[test]
    fn unadd_widens_naturals_to_integers() {
        let n = Context::naturals();
        let (value, trace) = solve(&eq_in(&n, 2, 7, 3)).unwrap();
        // 2·□ + 7 = 3 needs □ = -2.
        assert_eq!(
            rational_image(&value).unwrap(),
            BigRational::from_integer((-2).into())
        );
        assert!(trace.steps[0].context.same(&Context::integers()));
        assert!(trace.is_monotone(&n));
    }

    #[test]
    fn unmultiply_localizes_and_flags_conservative_widening() {
        let z = Context::integers();
        let (value, trace) = solve(&eq_in(&z, 2, 3, 7)).unwrap();
        assert_eq!(trace.final_context.name(), "Z[1/2]");
        assert!(trace.steps[1].conservative);
        assert_eq!(value.to_string(), "2");
        assert!(check_solution(&eq_in(&z, 2, 3, 7), &value, &trace.final_context).unwrap());
    }

    #[test]
    fn honest_fraction_is_not_conservative() {
        let n = Context::naturals();
        let (value, trace) = solve(&eq_in(&n, 9, 0, 50)).unwrap();
        assert_eq!(trace.final_context.name(), "N[1/9]");
        assert!(!trace.steps[1].conservative);
        assert_eq!(value.to_string(), "50/9");
        assert!(trace.is_monotone(&n));
    }

    #[test]
    fn zero_coefficient_collapses() {
        let z = Context::integers();
        let (value, trace) = solve(&eq_in(&z, 0, 1, 5)).unwrap();
        assert!(trace.collapsed);
        assert!(trace.final_context.is_zero_ring());
        assert!(check_solution(&eq_in(&z, 0, 1, 5), &value, &trace.final_context).unwrap());
    }

    #[test]
    fn units_divide_without_localizing() {
        let z = Context::integers();
        let (value, trace) = solve(&eq_in(&z, -1, 0, 4)).unwrap();
        assert!(value.try_eq(&Element::from_int(&z, -4).unwrap()).unwrap());
        assert!(trace.final_context.same(&z));
    }

    #[test]
    fn unadd_performs_no_left_side_arithmetic() {
        let n = Context::naturals();
        let eq = eq_in(&n, 9, 4, 22);
        let (coeff, rhs, step) = unadd(&eq).unwrap();
        // The coefficient is the original element, untouched.
        assert!(coeff.repr_eq(eq.a()));
        assert!(rhs.repr_eq(&Element::from_int(&n, 18).unwrap()));
        match step.outcome {
            StepOutcome::Equation { coeff: c, .. } => assert!(c.repr_eq(eq.a())),
            _ => panic!("unadd must leave an equation"),
        }
    }
}
