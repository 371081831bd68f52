//! Expression evaluation over a chosen ring lane. Operations never fail for
//! being partial: the context widens (logging the transition) or collapses to
//! the zero ring (logging a warning) instead.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use unring_core::dualcalc::DualNumber;
use unring_core::polyfrac::{Polynomial, RationalFunction};
use unring_core::semiring::{Context, ContextKind, Element, OpKind};
use unring_core::universal::{fraction, grothendieck, localize, InvertedSet};

use unring_core::quantity::{solve_rate, Quantity};

use crate::parser::{Expr, QExpr, SyntaxError};
use crate::report::{trace_transitions, EvalReport};

/// What went wrong, and which exit code it deserves.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input text (exit 2).
    Syntax(SyntaxError),
    /// Well-formed input that cannot be evaluated (exit 3).
    Semantic(String),
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> CliError {
        CliError::Syntax(e)
    }
}

fn sem(e: unring_core::Error) -> CliError {
    CliError::Semantic(e.to_string())
}

/// The number system an expression is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingLane {
    Nat,
    Int,
    Rat,
    Trop,
    Dual,
    PolyRat,
    ZMod(u64),
}

impl RingLane {
    pub fn parse(s: &str) -> Result<RingLane, String> {
        let unknown = || {
            format!("unknown ring `{s}` (expected nat, int, rat, trop, dual, polyrat, or zmod:<n>)")
        };
        if let Some(n) = s.strip_prefix("zmod:") {
            let n: u64 = n.parse().map_err(|_| unknown())?;
            if n < 2 {
                return Err(format!("zmod modulus must be at least 2, got {n}"));
            }
            return Ok(RingLane::ZMod(n));
        }
        match s {
            "nat" => Ok(RingLane::Nat),
            "int" => Ok(RingLane::Int),
            "rat" => Ok(RingLane::Rat),
            "trop" => Ok(RingLane::Trop),
            "dual" => Ok(RingLane::Dual),
            "polyrat" => Ok(RingLane::PolyRat),
            _ => Err(unknown()),
        }
    }

    fn base_context(self) -> Context {
        match self {
            RingLane::Nat => Context::naturals(),
            RingLane::Int => Context::integers(),
            RingLane::Rat => Context::rationals(),
            RingLane::Trop => Context::tropical(),
            RingLane::Dual => Context::dual(&Context::rationals()),
            RingLane::ZMod(n) => Context::zmod(n).expect("modulus validated"),
            RingLane::PolyRat => unreachable!("polynomial lane does not use contexts"),
        }
    }
}

/// Warning text attached to every collapse.
pub const COLLAPSE_WARNING: &str = "number system collapsed";

pub fn evaluate(expr: &Expr, lane: RingLane) -> Result<EvalReport, CliError> {
    if lane == RingLane::PolyRat {
        return eval_polyrat(expr);
    }
    let mut st = St {
        ctx: lane.base_context(),
        log: Vec::new(),
        warnings: Vec::new(),
        collapsed: false,
        lane,
    };
    let value = eval(expr, &mut st)?;
    Ok(EvalReport {
        value: display_value(&value),
        context_log: st.log,
        warnings: st.warnings,
        collapsed: st.collapsed,
    })
}

/// Renders an element the way the CLI prints values: fractions stay exactly
/// as computed, with the reduced form as an annotation when they differ.
pub fn display_value(v: &Element) -> String {
    if v.context().is_zero_ring() {
        return "0 (zero ring)".to_string();
    }
    if let Some(f) = v.as_fraction() {
        if let (Some(n), Some(d)) = (f.num().as_int(), f.den().as_int()) {
            if !d.is_zero() {
                let raw = format!("{n}/{d}");
                let reduced = BigRational::new(n.clone(), d.clone()).to_string();
                if reduced == raw {
                    return raw;
                }
                return format!("{raw} (={reduced})");
            }
        }
    }
    v.to_string()
}

struct St {
    ctx: Context,
    log: Vec<String>,
    warnings: Vec<String>,
    collapsed: bool,
    lane: RingLane,
}

impl St {
    fn transition(&mut self, wide: Context) {
        self.log.push(format!("{} → {}", self.ctx.name(), wide.name()));
        self.ctx = wide;
    }

    fn collapse(&mut self) -> Element {
        if !self.ctx.is_zero_ring() {
            self.transition(Context::zero_ring());
        }
        if !self.collapsed {
            self.warnings.push(COLLAPSE_WARNING.to_string());
            self.collapsed = true;
        }
        self.ctx.zero().expect("zero ring has 0")
    }
}

fn eval(expr: &Expr, st: &mut St) -> Result<Element, CliError> {
    match expr {
        Expr::Num(n) => Element::from_bigint(&st.ctx, n.clone()).map_err(sem),
        Expr::Dt => {
            if st.lane != RingLane::Dual {
                return Err(CliError::Semantic(
                    "the symbol `dt` needs --ring dual".to_string(),
                ));
            }
            let dt = Element::from_dual(DualNumber::dt(&Context::rationals()).map_err(sem)?);
            dt.embed(&st.ctx).map_err(sem)
        }
        Expr::Var => Err(CliError::Semantic(
            "the symbol `x` needs --ring polyrat".to_string(),
        )),
        Expr::Neg(e) => {
            let v = eval(e, st)?;
            if st.ctx.is_zero_ring() {
                return Ok(st.ctx.zero().expect("zero ring has 0"));
            }
            // In min-plus arithmetic `-` is the inverse for ⊗, which is what
            // negation means when there is no additive inverse to take.
            if matches!(st.ctx.kind(), ContextKind::Tropical) {
                if v.is_zero().map_err(sem)? {
                    return Ok(st.collapse());
                }
                return v.mul_inverse().map_err(sem);
            }
            match v.neg() {
                Ok(n) => Ok(n),
                Err(_) if matches!(st.ctx.kind(), ContextKind::Naturals) => {
                    st.transition(Context::integers());
                    v.embed(&st.ctx).map_err(sem)?.neg().map_err(sem)
                }
                Err(e) => Err(sem(e)),
            }
        }
        Expr::Add(l, r) => {
            let (a, b) = eval_pair(l, r, st)?;
            a.add(&b).map_err(sem)
        }
        Expr::Sub(l, r) => {
            let (a, b) = eval_pair(l, r, st)?;
            match a.sub(&b) {
                Ok(v) => Ok(v),
                Err(_) if matches!(st.ctx.kind(), ContextKind::Naturals) => {
                    st.transition(Context::integers());
                    let a = a.embed(&st.ctx).map_err(sem)?;
                    let b = b.embed(&st.ctx).map_err(sem)?;
                    a.sub(&b).map_err(sem)
                }
                Err(_) if matches!(st.ctx.kind(), ContextKind::Tropical) => {
                    // No un-min exists; the difference survives only as a
                    // formal pair, and that system identifies everything.
                    let wide = grothendieck(&st.ctx).map_err(sem)?;
                    st.transition(wide);
                    let a = a.embed(&st.ctx).map_err(sem)?;
                    let b = b.embed(&st.ctx).map_err(sem)?;
                    if !st.collapsed {
                        st.warnings.push(COLLAPSE_WARNING.to_string());
                        st.collapsed = true;
                    }
                    a.sub(&b).map_err(sem)
                }
                Err(e) => Err(sem(e)),
            }
        }
        Expr::Mul(l, r) => {
            let (a, b) = eval_pair(l, r, st)?;
            a.mul(&b).map_err(sem)
        }
        Expr::Div(l, r) => {
            let (a, b) = eval_pair(l, r, st)?;
            divide(&a, &b, st)
        }
        Expr::Pow(e, k) => {
            let v = eval(e, st)?;
            v.pow(*k).map_err(sem)
        }
    }
}

/// Evaluates both operands and brings them into the current context (the
/// right side may have widened it after the left was computed).
fn eval_pair(l: &Expr, r: &Expr, st: &mut St) -> Result<(Element, Element), CliError> {
    let a = eval(l, st)?;
    let b = eval(r, st)?;
    let a = a.embed(&st.ctx).map_err(sem)?;
    let b = b.embed(&st.ctx).map_err(sem)?;
    Ok((a, b))
}

fn divide(num: &Element, den: &Element, st: &mut St) -> Result<Element, CliError> {
    if st.ctx.is_zero_ring() {
        return Ok(st.ctx.zero().expect("zero ring has 0"));
    }
    if den.is_zero().map_err(sem)? {
        return Ok(st.collapse());
    }
    if let Ok(inv) = den.mul_inverse() {
        return num.mul(&inv).map_err(sem);
    }
    // A nonzero non-unit: widen to the localization where it is invertible.
    // Fractions split into their base parts so nested divisions flatten into
    // one localization of the original base.
    let (base, old_gens, mut top, x_den, mut gen) = match st.ctx.kind() {
        ContextKind::Localized { base, inverted } => {
            let nf = num.as_fraction().expect("localized elements are fractions");
            let df = den.as_fraction().expect("localized elements are fractions");
            let top = nf.num().mul(df.den()).map_err(sem)?;
            (
                base.clone(),
                inverted.generators().to_vec(),
                top,
                nf.den().clone(),
                df.num().clone(),
            )
        }
        _ => {
            let one = st.ctx.one().ok_or_else(|| {
                CliError::Semantic(format!("{} has no division", st.ctx.name()))
            })?;
            (st.ctx.clone(), Vec::new(), num.clone(), one, den.clone())
        }
    };
    // Over Z a negative divisor moves its sign to the numerator, keeping the
    // inverted set (and the context name) positive.
    if matches!(base.kind(), ContextKind::Integers) {
        if let Some(n) = gen.as_int() {
            if n.is_negative() {
                gen = gen.neg().map_err(sem)?;
                top = top.neg().map_err(sem)?;
            }
        }
    }
    let bot = x_den.mul(&gen).map_err(sem)?;
    let mut gens = old_gens;
    if !gens.iter().any(|g| g.repr_eq(&gen)) {
        gens.push(gen);
    }
    let set = InvertedSet::generated(OpKind::Multiplicative, gens).map_err(sem)?;
    let wide = localize(&base, set).map_err(sem)?;
    if wide.is_zero_ring() {
        return Ok(st.collapse());
    }
    st.transition(wide);
    fraction(&st.ctx, top, bot).map_err(sem)
}

/// Evaluates a quantity expression. A top-level division is a rate problem
/// and runs through the equation solver, so the widening it causes (say Z to
/// Z[1/9] for fifty pounds over nine people) shows up in the context log.
pub fn evaluate_quantity(expr: &QExpr) -> Result<EvalReport, CliError> {
    let (value, context_log) = match expr {
        QExpr::Div(l, r) => {
            let total = fold_quantity(l)?;
            let count = fold_quantity(r)?;
            let (q, trace) = solve_rate(&total, &count).map_err(sem)?;
            let start = trace
                .steps
                .first()
                .map(|s| s.context.clone())
                .unwrap_or_else(|| trace.final_context.clone());
            (q, trace_transitions(&start, &trace))
        }
        _ => (fold_quantity(expr)?, Vec::new()),
    };
    Ok(EvalReport {
        value: value.to_string(),
        context_log,
        warnings: Vec::new(),
        collapsed: false,
    })
}

fn fold_quantity(e: &QExpr) -> Result<Quantity, CliError> {
    let negated = |q: &Quantity| Quantity::new(-q.scalar().clone(), q.unit().clone());
    match e {
        QExpr::Lit(q) => Ok(q.clone()),
        QExpr::Neg(a) => Ok(negated(&fold_quantity(a)?)),
        QExpr::Add(a, b) => fold_quantity(a)?.add(&fold_quantity(b)?).map_err(sem),
        QExpr::Sub(a, b) => fold_quantity(a)?
            .add(&negated(&fold_quantity(b)?))
            .map_err(sem),
        QExpr::Mul(a, b) => fold_quantity(a)?.mul(&fold_quantity(b)?).map_err(sem),
        QExpr::Div(a, b) => fold_quantity(a)?.div(&fold_quantity(b)?).map_err(sem),
    }
}

/// Polynomial-lane evaluation: Q[x] until a division by a non-constant forces
/// the move to rational functions Q(x).
#[derive(Clone, Copy, PartialEq, Eq)]
enum PolyStage {
    Ring,
    Field,
    Zero,
}

impl PolyStage {
    fn name(self) -> &'static str {
        match self {
            PolyStage::Ring => "Q[x]",
            PolyStage::Field => "Q(x)",
            PolyStage::Zero => "ZeroRing",
        }
    }
}

struct PSt {
    stage: PolyStage,
    log: Vec<String>,
    warnings: Vec<String>,
}

impl PSt {
    fn transition(&mut self, to: PolyStage) {
        self.log.push(format!("{} → {}", self.stage.name(), to.name()));
        self.stage = to;
    }

    fn collapse(&mut self) -> RationalFunction {
        if self.stage != PolyStage::Zero {
            self.transition(PolyStage::Zero);
            self.warnings.push(COLLAPSE_WARNING.to_string());
        }
        rf_zero()
    }
}

const POLY_VAR: &str = "x";

fn rf_zero() -> RationalFunction {
    RationalFunction::from_polynomial(Polynomial::zero(&Context::rationals(), POLY_VAR))
        .expect("zero over one is a rational function")
}

fn eval_polyrat(expr: &Expr) -> Result<EvalReport, CliError> {
    let mut st = PSt {
        stage: PolyStage::Ring,
        log: Vec::new(),
        warnings: Vec::new(),
    };
    let value = eval_rf(expr, &mut st)?;
    let collapsed = st.stage == PolyStage::Zero;
    Ok(EvalReport {
        value: if collapsed {
            "0 (zero ring)".to_string()
        } else {
            value.to_string()
        },
        context_log: st.log,
        warnings: st.warnings,
        collapsed,
    })
}

fn eval_rf(expr: &Expr, st: &mut PSt) -> Result<RationalFunction, CliError> {
    let q = Context::rationals();
    match expr {
        Expr::Num(n) => {
            let c = Element::from_bigint(&q, n.clone()).map_err(sem)?;
            RationalFunction::from_polynomial(Polynomial::constant(c, POLY_VAR).map_err(sem)?)
                .map_err(sem)
        }
        Expr::Var => {
            RationalFunction::from_polynomial(Polynomial::identity(&q, POLY_VAR).map_err(sem)?)
                .map_err(sem)
        }
        Expr::Dt => Err(CliError::Semantic(
            "the symbol `dt` needs --ring dual".to_string(),
        )),
        Expr::Neg(e) => eval_rf(e, st)?.neg().map_err(sem),
        Expr::Add(l, r) => {
            let a = eval_rf(l, st)?;
            let b = eval_rf(r, st)?;
            a.add(&b).map_err(sem)
        }
        Expr::Sub(l, r) => {
            let a = eval_rf(l, st)?;
            let b = eval_rf(r, st)?;
            a.sub(&b).map_err(sem)
        }
        Expr::Mul(l, r) => {
            let a = eval_rf(l, st)?;
            let b = eval_rf(r, st)?;
            a.mul(&b).map_err(sem)
        }
        Expr::Div(l, r) => {
            let a = eval_rf(l, st)?;
            let b = eval_rf(r, st)?;
            if st.stage == PolyStage::Zero {
                return Ok(rf_zero());
            }
            if b.num().is_zero() {
                return Ok(st.collapse());
            }
            // Dividing by a nonzero constant stays inside Q[x].
            if st.stage == PolyStage::Ring {
                if let (Some(n), Some(d)) = (b.num().constant_value(), b.den().constant_value()) {
                    let scalar = d.mul(&n.mul_inverse().map_err(sem)?).map_err(sem)?;
                    let by = RationalFunction::from_polynomial(
                        Polynomial::constant(scalar, POLY_VAR).map_err(sem)?,
                    )
                    .map_err(sem)?;
                    return a.mul(&by).map_err(sem);
                }
                st.transition(PolyStage::Field);
            }
            a.mul(&b.inverse().map_err(sem)?).map_err(sem)
        }
        Expr::Pow(e, k) => {
            let v = eval_rf(e, st)?;
            let mut acc = RationalFunction::from_polynomial(
                Polynomial::constant(
                    Context::rationals().one().expect("Q has 1"),
                    POLY_VAR,
                )
                .map_err(sem)?,
            )
            .map_err(sem)?;
            for _ in 0..*k {
                acc = acc.mul(&v).map_err(sem)?;
            }
            Ok(acc)
        }
    }
}
