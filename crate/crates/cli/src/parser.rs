//! Text front ends: the arithmetic expression grammar shared by every ring
//! lane, and the quantity grammar (`50 lb / 9 person`).

use num_bigint::BigInt;
use num_rational::BigRational;
use unring_core::quantity::{Quantity, UnitMonomial};

/// Exponents above this are rejected at parse time.
pub const MAX_EXPONENT: u32 = 10_000;

/// A parse failure with the byte offset it was detected at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for SyntaxError {}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError {
        offset,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    /// The infinitesimal `dt` (dual lane only).
    Dt,
    /// The indeterminate `x` (polyrat lane only).
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Word(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Colon,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(input: &str) -> Result<Vec<Token>, SyntaxError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let offset = i;
        let tok = match c {
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &input[start..i];
                Tok::Num(digits.parse().expect("digit run parses"))
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                Tok::Word(input[start..i].to_string())
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ':' => Tok::Colon,
            _ => return err(offset, format!("unexpected character `{c}`")),
        };
        if !matches!(tok, Tok::Num(_) | Tok::Word(_)) {
            i += 1;
        }
        out.push(Token { tok, offset });
    }
    Ok(out)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Cursor {
    fn new(input: &str) -> Result<Cursor, SyntaxError> {
        Ok(Cursor {
            tokens: tokenize(input)?,
            pos: 0,
            end: input.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + ahead).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos < self.tokens.len() {
            return err(self.offset(), "unexpected trailing input");
        }
        Ok(())
    }
}

/// Parses an arithmetic expression:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor (('*' | '/') factor)*
/// factor := '-'? power
/// power  := atom ('^' nat)?
/// atom   := nat | 'dt' | 'x' | '(' expr ')'
/// ```
///
/// `/` is always division; `2/3` is the expression two-divided-by-three, and
/// whichever ring lane evaluates it decides what that means.
pub fn parse_expr(input: &str) -> Result<Expr, SyntaxError> {
    let mut cur = Cursor::new(input)?;
    let e = expr(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

fn expr(cur: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut lhs = term(cur)?;
    loop {
        if cur.eat(&Tok::Plus) {
            lhs = Expr::Add(Box::new(lhs), Box::new(term(cur)?));
        } else if cur.eat(&Tok::Minus) {
            lhs = Expr::Sub(Box::new(lhs), Box::new(term(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn term(cur: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut lhs = factor(cur)?;
    loop {
        if cur.eat(&Tok::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(factor(cur)?));
        } else if cur.eat(&Tok::Slash) {
            lhs = Expr::Div(Box::new(lhs), Box::new(factor(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn factor(cur: &mut Cursor) -> Result<Expr, SyntaxError> {
    if cur.eat(&Tok::Minus) {
        return Ok(Expr::Neg(Box::new(power(cur)?)));
    }
    power(cur)
}

fn power(cur: &mut Cursor) -> Result<Expr, SyntaxError> {
    let base = atom(cur)?;
    if !cur.eat(&Tok::Caret) {
        return Ok(base);
    }
    let offset = cur.offset();
    match cur.bump() {
        Some(Tok::Num(n)) => {
            let exp: u32 = n
                .try_into()
                .ok()
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or(SyntaxError {
                    offset,
                    message: format!("exponent exceeds {MAX_EXPONENT}"),
                })?;
            Ok(Expr::Pow(Box::new(base), exp))
        }
        _ => err(offset, "expected an exponent"),
    }
}

fn atom(cur: &mut Cursor) -> Result<Expr, SyntaxError> {
    let offset = cur.offset();
    match cur.bump() {
        Some(Tok::Num(n)) => Ok(Expr::Num(n)),
        Some(Tok::Word(w)) if w == "dt" => Ok(Expr::Dt),
        Some(Tok::Word(w)) if w == "x" => Ok(Expr::Var),
        Some(Tok::Word(w)) => err(offset, format!("unknown symbol `{w}`")),
        Some(Tok::LParen) => {
            let e = expr(cur)?;
            if !cur.eat(&Tok::RParen) {
                return err(cur.offset(), "expected `)`");
            }
            Ok(e)
        }
        _ => err(offset, "expected a value"),
    }
}

/// A quantity expression: arithmetic over unit-carrying literals.
#[derive(Debug, Clone)]
pub enum QExpr {
    Lit(Quantity),
    Neg(Box<QExpr>),
    Add(Box<QExpr>, Box<QExpr>),
    Sub(Box<QExpr>, Box<QExpr>),
    Mul(Box<QExpr>, Box<QExpr>),
    Div(Box<QExpr>, Box<QExpr>),
}

/// Parses a quantity expression:
///
/// ```text
/// qexpr    := qterm (('+' | '-') qterm)*
/// qterm    := qfactor (('*' | '/') qfactor)*
/// qfactor  := '-'? ('(' qexpr ')' | literal)
/// literal  := rational unitterm?
/// rational := nat ('/' nat)?
/// unitterm := unit (('*' | '/') unit)*
/// unit     := symbol ('^' '-'? nat)?
/// ```
///
/// A `/` directly between two numbers binds into the rational (`1/2 lb` is
/// half a pound); a `/` after a unit symbol divides quantities, so
/// `50 lb / 9 person` is the quotient of fifty pounds by nine people.
pub fn parse_quantity(input: &str) -> Result<QExpr, SyntaxError> {
    let mut cur = Cursor::new(input)?;
    let e = qexpr(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

fn qexpr(cur: &mut Cursor) -> Result<QExpr, SyntaxError> {
    let mut lhs = qterm(cur)?;
    loop {
        if cur.eat(&Tok::Plus) {
            lhs = QExpr::Add(Box::new(lhs), Box::new(qterm(cur)?));
        } else if cur.eat(&Tok::Minus) {
            lhs = QExpr::Sub(Box::new(lhs), Box::new(qterm(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn qterm(cur: &mut Cursor) -> Result<QExpr, SyntaxError> {
    let mut lhs = qfactor(cur)?;
    loop {
        if cur.eat(&Tok::Star) {
            lhs = QExpr::Mul(Box::new(lhs), Box::new(qfactor(cur)?));
        } else if cur.eat(&Tok::Slash) {
            lhs = QExpr::Div(Box::new(lhs), Box::new(qfactor(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn qfactor(cur: &mut Cursor) -> Result<QExpr, SyntaxError> {
    if cur.eat(&Tok::Minus) {
        return Ok(QExpr::Neg(Box::new(qfactor(cur)?)));
    }
    if cur.eat(&Tok::LParen) {
        let e = qexpr(cur)?;
        if !cur.eat(&Tok::RParen) {
            return err(cur.offset(), "expected `)`");
        }
        return Ok(e);
    }
    qliteral(cur)
}

fn qliteral(cur: &mut Cursor) -> Result<QExpr, SyntaxError> {
    let offset = cur.offset();
    let Some(Tok::Num(numer)) = cur.bump() else {
        return err(offset, "expected a quantity");
    };
    // Greedy rational: a slash straight into another number stays inside the
    // literal, so `1/2 lb` is (1/2)*lb rather than 1 over two pounds.
    let mut denom = BigInt::from(1);
    if cur.peek() == Some(&Tok::Slash) {
        if let Some(Tok::Num(_)) = cur.peek_at(1) {
            cur.bump();
            let den_offset = cur.offset();
            let Some(Tok::Num(d)) = cur.bump() else {
                unreachable!("peeked number")
            };
            if d == BigInt::from(0) {
                return err(den_offset, "zero denominator in a rational literal");
            }
            denom = d;
        }
    }
    let scalar = BigRational::new(numer, denom);
    let unit = unitterm(cur)?;
    Ok(QExpr::Lit(Quantity::new(scalar, unit)))
}

fn unitterm(cur: &mut Cursor) -> Result<UnitMonomial, SyntaxError> {
    let mut unit = UnitMonomial::dimensionless();
    if !matches!(cur.peek(), Some(Tok::Word(_))) {
        return Ok(unit);
    }
    let (sym, exp) = unit_atom(cur)?;
    unit = unit.mul(&pow_unit(&sym, exp));
    loop {
        // `*` or `/` extends the unit term only when a symbol follows;
        // otherwise it is an operator between quantities.
        let divide = match cur.peek() {
            Some(Tok::Star) => false,
            Some(Tok::Slash) => true,
            _ => return Ok(unit),
        };
        if !matches!(cur.peek_at(1), Some(Tok::Word(_))) {
            return Ok(unit);
        }
        cur.bump();
        let (sym, exp) = unit_atom(cur)?;
        let factor = pow_unit(&sym, exp);
        unit = if divide {
            unit.div(&factor)
        } else {
            unit.mul(&factor)
        };
    }
}

fn unit_atom(cur: &mut Cursor) -> Result<(String, i64), SyntaxError> {
    let offset = cur.offset();
    let Some(Tok::Word(sym)) = cur.bump() else {
        return err(offset, "expected a unit symbol");
    };
    if !cur.eat(&Tok::Caret) {
        return Ok((sym, 1));
    }
    let neg = cur.eat(&Tok::Minus);
    let exp_offset = cur.offset();
    match cur.bump() {
        Some(Tok::Num(n)) => {
            let exp: i64 = n.try_into().map_err(|_| SyntaxError {
                offset: exp_offset,
                message: "unit exponent out of range".to_string(),
            })?;
            Ok((sym, if neg { -exp } else { exp }))
        }
        _ => err(exp_offset, "expected a unit exponent"),
    }
}

fn pow_unit(sym: &str, exp: i64) -> UnitMonomial {
    UnitMonomial::from_exponents([(sym.to_string(), exp)])
}

/// One `p:q` stage of a monodromy loop.
pub fn parse_ratio_token(tok: &str) -> Result<(i64, i64), String> {
    let Some((p, q)) = tok.split_once(':') else {
        return Err(format!("malformed stage `{tok}` (expected p:q)"));
    };
    let parse = |s: &str| -> Result<i64, String> {
        s.trim()
            .parse()
            .map_err(|_| format!("malformed stage `{tok}` (expected p:q)"))
    };
    Ok((parse(p)?, parse(q)?))
}
