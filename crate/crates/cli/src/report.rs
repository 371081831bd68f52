//! Output rendering. Every command produces a report struct that renders
//! either as human-readable lines or as JSON with a fixed key order.

use std::io::IsTerminal;

use serde::Serialize;
use unring_core::eqsolve::{SolveTrace, StepOutcome};
use unring_core::semiring::{Context, Element};

use crate::eval::display_value;

/// Whether to emit ANSI colors: `UNRING_COLOR=never` disables them, anything
/// else defers to whether stdout is a terminal.
pub fn color_enabled() -> bool {
    match std::env::var("UNRING_COLOR").as_deref() {
        Ok("never") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

const DIM: &str = "\x1b[2m";
const YELLOW: &str = "\x1b[33m";
const RESET: &str = "\x1b[0m";

fn paint(s: &str, code: &str, color: bool) -> String {
    if color {
        format!("{code}{s}{RESET}")
    } else {
        s.to_string()
    }
}

/// The result of evaluating an expression: the value plus everything that
/// happened to the number system along the way.
#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub value: String,
    pub context_log: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub collapsed: bool,
}

impl EvalReport {
    pub fn render_human(&self, color: bool) -> String {
        let mut out = String::new();
        out.push_str(&self.value);
        out.push('\n');
        for t in &self.context_log {
            out.push_str(&paint(&format!("  context: {t}"), DIM, color));
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str(&paint(&format!("  warning: {w}"), YELLOW, color));
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Serialize)]
pub struct SolveStepReport {
    pub op: String,
    pub operand: String,
    pub result: String,
    pub context: String,
    pub conservative: bool,
}

/// A solved equation: the full step trace plus where the value ended up.
#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub steps: Vec<SolveStepReport>,
    pub final_context: String,
    pub value: String,
    pub collapsed: bool,
    #[serde(skip)]
    equation: String,
    #[serde(skip)]
    context_chain: Vec<String>,
}

fn equation_text(coeff: &Element, rhs: &Element) -> String {
    format!("{coeff}·□ = {rhs}")
}

impl SolveReport {
    pub fn new(a: &Element, b: &Element, c: &Element, value: &Element, trace: &SolveTrace) -> Self {
        let start = a.context().clone();
        let b_str = b.to_string();
        let equation = if let Some(rest) = b_str.strip_prefix('-') {
            format!("{a}·□ - {rest} = {c}  in {}", start.name())
        } else {
            format!("{a}·□ + {b_str} = {c}  in {}", start.name())
        };
        let mut chain = vec![start.name()];
        let mut prev = start;
        let mut steps = Vec::new();
        for step in &trace.steps {
            if !prev.same(&step.context) {
                chain.push(step.context.name());
                prev = step.context.clone();
            }
            let result = match &step.outcome {
                StepOutcome::Equation { coeff, rhs } => equation_text(coeff, rhs),
                StepOutcome::Value(v) => format!("□ = {}", display_value(v)),
            };
            steps.push(SolveStepReport {
                op: step.op.to_string(),
                operand: step.operand.to_string(),
                result,
                context: step.context.name(),
                conservative: step.conservative,
            });
        }
        if !prev.same(&trace.final_context) {
            chain.push(trace.final_context.name());
        }
        SolveReport {
            steps,
            final_context: trace.final_context.name(),
            value: display_value(value),
            collapsed: trace.collapsed,
            equation,
            context_chain: chain,
        }
    }

    pub fn render_human(&self, color: bool) -> String {
        let mut out = String::new();
        out.push_str(&self.equation);
        out.push('\n');
        let op_width = self
            .steps
            .iter()
            .map(|s| s.op.len() + 1 + s.operand.len())
            .max()
            .unwrap_or(0);
        let result_width = self.steps.iter().map(|s| s.result.chars().count()).max().unwrap_or(0);
        for s in &self.steps {
            let lhs = format!("{} {}", s.op, s.operand);
            let pad_result: String = {
                let fill = result_width - s.result.chars().count();
                format!("{}{}", s.result, " ".repeat(fill))
            };
            let mut line = format!("  {lhs:<op_width$}  →  {pad_result}  in {}", s.context);
            if s.conservative {
                line.push_str("  (");
                line.push_str(unring_core::eqsolve::CONSERVATIVE_NOTE);
                line.push(')');
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str(&format!("value: {}\n", self.value));
        out.push_str(&paint(
            &format!("  context: {}", self.context_chain.join(" → ")),
            DIM,
            color,
        ));
        out.push('\n');
        if self.collapsed {
            out.push_str(&paint(
                &format!("  warning: {}", crate::eval::COLLAPSE_WARNING),
                YELLOW,
                color,
            ));
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Builds the `X → Y` transition list out of a solve trace.
pub fn trace_transitions(start: &Context, trace: &SolveTrace) -> Vec<String> {
    let mut log = Vec::new();
    let mut prev = start.clone();
    for step in &trace.steps {
        if !prev.same(&step.context) {
            log.push(format!("{} → {}", prev.name(), step.context.name()));
            prev = step.context.clone();
        }
    }
    if !prev.same(&trace.final_context) {
        log.push(format!("{} → {}", prev.name(), trace.final_context.name()));
    }
    log
}

#[derive(Debug, Serialize)]
pub struct MonodromyReport {
    pub sign: String,
}

impl MonodromyReport {
    pub fn render_human(&self) -> String {
        format!("{}\n", self.sign)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("report serializes");
        s.push('\n');
        s
    }
}
