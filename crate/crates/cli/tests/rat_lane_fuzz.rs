//! Fuzzes the rational lane: random expression trees evaluate to exactly the
//! value an independent reduced-rational oracle computes, with division by
//! zero mapping to a collapse rather than an error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use unring_cli::eval::{evaluate, RingLane};
use unring_cli::parser::{parse_expr, Expr};

const CASES: usize = 1200;
const MAX_DEPTH: u32 = 6;

fn gen_expr(rng: &mut StdRng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.random_range(0..100) < 22;
    if leaf {
        return Expr::Num(BigInt::from(rng.random_range(0..=12u32)));
    }
    match rng.random_range(0..100) {
        0..=24 => Expr::Add(
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        25..=49 => Expr::Sub(
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        50..=69 => Expr::Mul(
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        70..=89 => Expr::Div(
            Box::new(gen_expr(rng, depth - 1)),
            Box::new(gen_expr(rng, depth - 1)),
        ),
        90..=95 => Expr::Neg(Box::new(gen_expr(rng, depth - 1))),
        _ => Expr::Pow(Box::new(gen_expr(rng, depth - 1)), rng.random_range(0..=4)),
    }
}

/// Renders with explicit parentheses so the string parses back to the same
/// tree regardless of precedence.
fn render(e: &Expr) -> String {
    match e {
        Expr::Num(n) => n.to_string(),
        Expr::Dt => "dt".to_string(),
        Expr::Var => "x".to_string(),
        Expr::Neg(a) => format!("-({})", render(a)),
        Expr::Add(a, b) => format!("({} + {})", render(a), render(b)),
        Expr::Sub(a, b) => format!("({} - {})", render(a), render(b)),
        Expr::Mul(a, b) => format!("({} * {})", render(a), render(b)),
        Expr::Div(a, b) => format!("({} / {})", render(a), render(b)),
        Expr::Pow(a, k) => format!("(({})^{k})", render(a)),
    }
}

/// Exact rational semantics, computed with nothing from the library under
/// test: any division by zero anywhere poisons the whole expression.
enum Oracle {
    Val(BigRational),
    Collapsed,
}

fn oracle(e: &Expr) -> Oracle {
    use Oracle::*;
    let bin = |a: &Expr, b: &Expr, f: fn(BigRational, BigRational) -> BigRational| match (
        oracle(a),
        oracle(b),
    ) {
        (Val(x), Val(y)) => Val(f(x, y)),
        _ => Collapsed,
    };
    match e {
        Expr::Num(n) => Val(BigRational::from_integer(n.clone())),
        Expr::Dt | Expr::Var => unreachable!("not generated"),
        Expr::Neg(a) => match oracle(a) {
            Val(x) => Val(-x),
            Collapsed => Collapsed,
        },
        Expr::Add(a, b) => bin(a, b, |x, y| x + y),
        Expr::Sub(a, b) => bin(a, b, |x, y| x - y),
        Expr::Mul(a, b) => bin(a, b, |x, y| x * y),
        Expr::Div(a, b) => match (oracle(a), oracle(b)) {
            (Val(x), Val(y)) if !y.is_zero() => Val(x / y),
            _ => Collapsed,
        },
        Expr::Pow(a, k) => match oracle(a) {
            Val(x) => {
                let mut acc = BigRational::one();
                for _ in 0..*k {
                    acc *= &x;
                }
                Val(acc)
            }
            Collapsed => Collapsed,
        },
    }
}

#[test]
fn random_trees_match_the_reduced_rational_oracle() {
    let mut rng = StdRng::seed_from_u64(0xfa22);
    let mut collapsed_count = 0usize;
    for case in 0..CASES {
        let expr = gen_expr(&mut rng, MAX_DEPTH);
        let text = render(&expr);
        let parsed = parse_expr(&text).unwrap_or_else(|e| panic!("case {case}: {e}: {text}"));
        assert_eq!(parsed, expr, "case {case}: parser round-trip of {text}");
        let report = evaluate(&expr, RingLane::Rat).expect("rat lane never errors");
        match oracle(&expr) {
            Oracle::Val(want) => {
                assert!(!report.collapsed, "case {case}: {text}");
                assert_eq!(report.value, want.to_string(), "case {case}: {text}");
                assert!(report.context_log.is_empty(), "case {case}: {text}");
                assert!(report.warnings.is_empty(), "case {case}: {text}");
            }
            Oracle::Collapsed => {
                collapsed_count += 1;
                assert!(report.collapsed, "case {case}: {text}");
                assert_eq!(report.value, "0 (zero ring)", "case {case}: {text}");
                assert_eq!(report.warnings, ["number system collapsed"]);
            }
        }
    }
    // The generator must actually exercise both outcomes.
    assert!(collapsed_count >= 30, "only {collapsed_count} collapses");
    assert!(CASES - collapsed_count >= 30);
}

#[test]
fn a_sample_of_trees_goes_through_the_binary_end_to_end() {
    let mut rng = StdRng::seed_from_u64(0x5a11);
    for _ in 0..25 {
        let expr = gen_expr(&mut rng, 4);
        let text = render(&expr);
        let report = evaluate(&expr, RingLane::Rat).expect("rat lane never errors");
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_unring"))
            .args(["--ring", "rat", &text])
            .output()
            .expect("binary runs");
        assert_eq!(
            String::from_utf8_lossy(&out.stdout),
            report.render_human(false),
            "expr {text}"
        );
        assert_eq!(out.status.code(), Some(0));
    }
}
