use std::io::Read;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use unring_core::eqsolve::{solve, LinearEquation};
use unring_core::ratiogeom::{monodromy_ratios, Ratio};
use unring_core::semiring::{Context, Element};

use unring_cli::eval::{self, CliError, RingLane};
use unring_cli::parser;
use unring_cli::report::{color_enabled, MonodromyReport, SolveReport};

/// Exact arithmetic that widens its number system instead of failing.
#[derive(Parser)]
#[command(name = "unring", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression in a chosen ring (the default subcommand)
    Eval(EvalArgs),
    /// Solve a·□ + b = c, widening the number system as needed
    Solve(SolveArgs),
    /// Transport a sign around a loop of ratios and report +1 or -1
    Monodromy(MonodromyArgs),
    /// Arithmetic on unit-carrying quantities, e.g. `50 lb / 9 person`
    Quantity(QuantityArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Expression to evaluate, or `-` to read it from stdin
    #[arg(allow_hyphen_values = true)]
    expr: String,
    /// Ring lane: nat, int, rat, trop, dual, polyrat, or zmod:<n>
    #[arg(long, default_value = "int")]
    ring: String,
    /// Emit JSON ({"value", "context_log", "warnings"}) instead of text
    #[arg(long)]
    json: bool,
    /// Exit with code 4 when the number system collapses to the zero ring
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
    #[arg(allow_hyphen_values = true)]
    c: String,
    /// Starting number system: nat or int
    #[arg(long, default_value = "int")]
    ring: String,
    /// Emit JSON ({"steps", "final_context", "value", "collapsed"})
    #[arg(long)]
    json: bool,
    /// Exit with code 4 when solving collapses to the zero ring
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct MonodromyArgs {
    /// Loop stages as whitespace-separated p:q tokens (`-` reads stdin)
    #[arg(allow_hyphen_values = true)]
    stages: Vec<String>,
    /// Emit JSON ({"sign"})
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QuantityArgs {
    /// Quantity expression, e.g. `50 lb / 9 person` (`-` reads stdin)
    #[arg(allow_hyphen_values = true)]
    expr: Vec<String>,
    /// Emit JSON ({"value", "context_log", "warnings"})
    #[arg(long)]
    json: bool,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let mut argv: Vec<std::ffi::OsString> = std::env::args_os().collect();
    // A first argument that is not a subcommand is an expression for `eval`.
    if let Some(first) = argv.get(1).and_then(|s| s.to_str()) {
        let known = matches!(
            first,
            "eval" | "solve" | "monodromy" | "quantity" | "help" | "-h" | "--help" | "-V"
                | "--version"
        );
        if !known {
            argv.insert(1, "eval".into());
        }
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    3
                }
            };
        }
    };
    let outcome = match cli.cmd {
        Command::Eval(args) => cmd_eval(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Monodromy(args) => cmd_monodromy(args),
        Command::Quantity(args) => cmd_quantity(args),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Syntax(e)) => {
            eprintln!("unring: {e}");
            2
        }
        Err(CliError::Semantic(m)) => {
            eprintln!("unring: {m}");
            3
        }
    }
}

fn sem(e: unring_core::Error) -> CliError {
    CliError::Semantic(e.to_string())
}

fn read_input(expr: &str) -> Result<String, CliError> {
    if expr != "-" {
        return Ok(expr.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| CliError::Semantic(format!("cannot read stdin: {e}")))?;
    Ok(s.trim_end().to_string())
}

/// Prints a syntax error with a caret under the offending byte.
fn syntax_error(src: &str, e: parser::SyntaxError) -> i32 {
    eprintln!("unring: {e}");
    if !src.contains('\n') && src.len() <= 200 {
        eprintln!("  {src}");
        eprintln!("  {}^", " ".repeat(e.offset));
    }
    2
}

fn cmd_eval(args: EvalArgs) -> Result<i32, CliError> {
    let lane = RingLane::parse(&args.ring).map_err(CliError::Semantic)?;
    let src = read_input(&args.expr)?;
    let expr = match parser::parse_expr(&src) {
        Ok(expr) => expr,
        Err(e) => return Ok(syntax_error(&src, e)),
    };
    let report = eval::evaluate(&expr, lane)?;
    if args.json {
        print!("{}", report.render_json());
    } else {
        print!("{}", report.render_human(color_enabled()));
    }
    Ok(if report.collapsed && args.strict { 4 } else { 0 })
}

fn cmd_solve(args: SolveArgs) -> Result<i32, CliError> {
    let ctx = match args.ring.as_str() {
        "nat" => Context::naturals(),
        "int" => Context::integers(),
        other => {
            return Err(CliError::Semantic(format!(
                "solve supports --ring nat or int, got `{other}`"
            )))
        }
    };
    let term = |s: &str, what: &str| -> Result<Element, CliError> {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| CliError::Semantic(format!("{what} must be an integer, got `{s}`")))?;
        Element::from_bigint(&ctx, n).map_err(sem)
    };
    let a = term(&args.a, "a")?;
    let b = term(&args.b, "b")?;
    let c = term(&args.c, "c")?;
    let eq = LinearEquation::new(a.clone(), b.clone(), c.clone()).map_err(sem)?;
    let (value, trace) = solve(&eq).map_err(sem)?;
    let report = SolveReport::new(&a, &b, &c, &value, &trace);
    if args.json {
        print!("{}", report.render_json());
    } else {
        print!("{}", report.render_human(color_enabled()));
    }
    Ok(if trace.collapsed && args.strict { 4 } else { 0 })
}

fn cmd_monodromy(args: MonodromyArgs) -> Result<i32, CliError> {
    let tokens: Vec<String> =
        if args.stages.is_empty() || (args.stages.len() == 1 && args.stages[0] == "-") {
            let joined = read_input("-")?;
            joined.split_whitespace().map(str::to_string).collect()
        } else {
            args.stages
        };
    if tokens.is_empty() {
        return Err(CliError::Semantic("no loop stages given".to_string()));
    }
    let mut stages = Vec::with_capacity(tokens.len());
    for t in &tokens {
        let (p, q) = parser::parse_ratio_token(t).map_err(CliError::Semantic)?;
        stages.push(Ratio::from_integers(p, q).map_err(sem)?);
    }
    let sign = monodromy_ratios(&stages).map_err(sem)?;
    let report = MonodromyReport {
        sign: sign.to_string(),
    };
    if args.json {
        print!("{}", report.render_json());
    } else {
        print!("{}", report.render_human());
    }
    Ok(0)
}

fn cmd_quantity(args: QuantityArgs) -> Result<i32, CliError> {
    let joined = args.expr.join(" ");
    let src = read_input(if joined.is_empty() { "-" } else { &joined })?;
    if src.trim().is_empty() {
        return Err(CliError::Semantic("no quantity expression given".to_string()));
    }
    let expr = match parser::parse_quantity(&src) {
        Ok(expr) => expr,
        Err(e) => return Ok(syntax_error(&src, e)),
    };
    let report = eval::evaluate_quantity(&expr)?;
    if args.json {
        print!("{}", report.render_json());
    } else {
        print!("{}", report.render_human(color_enabled()));
    }
    Ok(0)
}
