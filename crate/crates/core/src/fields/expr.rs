//! A tiny expression language for multivector-valued fields.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' exponent)*
//! exponent:= '-'? primary
//! primary := number | x0..x3 | blade | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Blades are `g` followed by distinct indices 0..3, multiplied as
//! lower-index generators in the written order (`g21` is γ_2γ_1); `g5` is
//! γ₅ = γ_0γ_1γ_2γ_3. Functions, exponents and divisors must be scalar, which
//! is checked when parsing.

use std::fmt;

use crate::algebra::Multivector;
use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Cosh,
    Sinh,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "cosh" => Func::Cosh,
            "sinh" => Func::Sinh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Cosh => "cosh",
            Func::Sinh => "sinh",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Cosh => x.cosh(),
            Func::Sinh => x.sinh(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldExpr {
    Num(f64),
    Coord(usize),
    Blade { name: String, value: Multivector },
    Neg(Box<FieldExpr>),
    Add(Box<FieldExpr>, Box<FieldExpr>),
    Sub(Box<FieldExpr>, Box<FieldExpr>),
    Mul(Box<FieldExpr>, Box<FieldExpr>),
    Div(Box<FieldExpr>, Box<FieldExpr>),
    Pow(Box<FieldExpr>, Box<FieldExpr>),
    Call(Func, Box<FieldExpr>),
}

impl FieldExpr {
    /// True when the value is a real scalar everywhere.
    pub fn is_scalar(&self) -> bool {
        match self {
            FieldExpr::Num(_) | FieldExpr::Coord(_) | FieldExpr::Call(..) => true,
            FieldExpr::Blade { .. } => false,
            FieldExpr::Neg(a) => a.is_scalar(),
            FieldExpr::Add(a, b) | FieldExpr::Sub(a, b) | FieldExpr::Mul(a, b) => {
                a.is_scalar() && b.is_scalar()
            }
            FieldExpr::Div(a, _) | FieldExpr::Pow(a, _) => a.is_scalar(),
        }
    }

    pub fn eval(&self, x: &[f64; 4]) -> Multivector {
        match self {
            FieldExpr::Num(v) => Multivector::scalar(*v),
            FieldExpr::Coord(i) => Multivector::scalar(x[*i]),
            FieldExpr::Blade { value, .. } => *value,
            FieldExpr::Neg(a) => -a.eval(x),
            FieldExpr::Add(a, b) => a.eval(x) + b.eval(x),
            FieldExpr::Sub(a, b) => a.eval(x) - b.eval(x),
            FieldExpr::Mul(a, b) => a.eval(x) * b.eval(x),
            FieldExpr::Div(a, b) => a.eval(x) / b.eval(x).scalar_part(),
            FieldExpr::Pow(a, b) => {
                let e = b.eval(x).scalar_part();
                let base = a.eval(x);
                if base == Multivector::scalar(base.scalar_part()) {
                    Multivector::scalar(base.scalar_part().powf(e))
                } else {
                    // The parser only admits literal natural exponents here.
                    (0..e as u32).fold(Multivector::ONE, |acc, _| acc * base)
                }
            }
            FieldExpr::Call(f, a) => Multivector::scalar(f.apply(a.eval(x).scalar_part())),
        }
    }

    /// Binding strength, for printing with minimal parentheses.
    fn precedence(&self) -> u8 {
        match self {
            FieldExpr::Add(..) | FieldExpr::Sub(..) => 1,
            FieldExpr::Mul(..) | FieldExpr::Div(..) => 2,
            FieldExpr::Neg(..) => 3,
            FieldExpr::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &FieldExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            FieldExpr::Num(v) => write!(f, "{v:?}"),
            FieldExpr::Coord(i) => write!(f, "x{i}"),
            FieldExpr::Blade { name, .. } => write!(f, "{name}"),
            FieldExpr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 3)
            }
            FieldExpr::Add(a, b) | FieldExpr::Sub(a, b) => {
                let op = if matches!(self, FieldExpr::Add(..)) { "+" } else { "-" };
                wrap(f, a, 1)?;
                write!(f, " {op} ")?;
                wrap(f, b, 2)
            }
            FieldExpr::Mul(a, b) | FieldExpr::Div(a, b) => {
                let op = if matches!(self, FieldExpr::Mul(..)) { "*" } else { "/" };
                wrap(f, a, 2)?;
                write!(f, " {op} ")?;
                wrap(f, b, 3)
            }
            FieldExpr::Pow(a, b) => {
                wrap(f, a, 5)?;
                write!(f, "^")?;
                wrap(f, b, 5)
            }
            FieldExpr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(c as char)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' | b'.' => self.number(start)?,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Tok::Ident(text.to_owned())
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    message: format!("unexpected character {:?}", char::from(c)),
                })
            }
        };
        Ok((tok, start))
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        let digits = |lx: &mut Self| {
            while lx.src.get(lx.pos).is_some_and(u8::is_ascii_digit) {
                lx.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                digits(self);
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Tok::Num)
            .ok_or_else(|| ParseError::Syntax { pos: start, message: format!("bad number {text:?}") })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    pos: usize,
    depth: usize,
    tokens: usize,
}

const MAX_DEPTH: usize = 128;
const MAX_TOKENS: usize = 2048;

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, pos) = self.lexer.next()?;
        self.tokens += 1;
        if self.tokens > MAX_TOKENS {
            return Err(ParseError::Syntax { pos, message: "expression too long".into() });
        }
        self.tok = tok;
        self.pos = pos;
        Ok(())
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos, message: message.into() })
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.syntax("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<FieldExpr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Tok::Op(op @ ('+' | '-')) = self.tok {
            self.bump()?;
            let rhs = self.term()?;
            lhs = if op == '+' {
                FieldExpr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                FieldExpr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<FieldExpr, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(op @ ('*' | '/')) = self.tok {
            self.bump()?;
            let at = self.pos;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                FieldExpr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                if !rhs.is_scalar() {
                    return Err(ParseError::NonScalarOperand { pos: at, context: "divisor".into() });
                }
                FieldExpr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FieldExpr, ParseError> {
        if self.tok == Tok::Op('-') {
            self.enter()?;
            self.bump()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(FieldExpr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<FieldExpr, ParseError> {
        let mut base = self.primary()?;
        while self.tok == Tok::Op('^') {
            self.bump()?;
            let at = self.pos;
            let exponent = if self.tok == Tok::Op('-') {
                self.bump()?;
                FieldExpr::Neg(Box::new(self.primary()?))
            } else {
                self.primary()?
            };
            if !exponent.is_scalar() {
                return Err(ParseError::NonScalarOperand { pos: at, context: "exponent".into() });
            }
            if !base.is_scalar() && !is_small_natural(&exponent) {
                return Err(ParseError::NonScalarOperand {
                    pos: at,
                    context: "a multivector base needs a literal natural exponent".into(),
                });
            }
            base = FieldExpr::Pow(Box::new(base), Box::new(exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<FieldExpr, ParseError> {
        let at = self.pos;
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(FieldExpr::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump()?;
                if let Some(func) = Func::from_name(&name) {
                    if self.tok != Tok::LParen {
                        return self.syntax(format!("expected `(` after `{name}`"));
                    }
                    self.bump()?;
                    let arg_pos = self.pos;
                    let arg = self.expr()?;
                    if self.tok != Tok::RParen {
                        return self.syntax("expected `)`");
                    }
                    self.bump()?;
                    if !arg.is_scalar() {
                        return Err(ParseError::NonScalarOperand {
                            pos: arg_pos,
                            context: format!("argument of {name}"),
                        });
                    }
                    return Ok(FieldExpr::Call(func, Box::new(arg)));
                }
                identifier(&name).ok_or(ParseError::UnknownIdentifier { name, pos: at })
            }
            Tok::End => self.syntax("unexpected end of input"),
            Tok::RParen => self.syntax("unexpected `)`"),
            Tok::Op(c) => self.syntax(format!("unexpected operator `{c}`")),
        }
    }
}

fn is_small_natural(e: &FieldExpr) -> bool {
    matches!(e, FieldExpr::Num(v) if v.fract() == 0.0 && (0.0..=64.0).contains(v))
}

fn identifier(name: &str) -> Option<FieldExpr> {
    if let Some(i) = name.strip_prefix('x') {
        return match i {
            "0" | "1" | "2" | "3" => Some(FieldExpr::Coord(i.parse().ok()?)),
            _ => None,
        };
    }
    let digits = name.strip_prefix('g')?;
    let value = if digits == "5" {
        Multivector::gamma5()
    } else {
        if digits.is_empty() || !digits.bytes().all(|b| (b'0'..=b'3').contains(&b)) {
            return None;
        }
        let idx: Vec<usize> = digits.bytes().map(|b| usize::from(b - b'0')).collect();
        Multivector::lowered(&idx)?
    };
    Some(FieldExpr::Blade { name: name.to_owned(), value })
}

pub fn parse_field_expr(src: &str) -> Result<FieldExpr, ParseError> {
    let mut parser = Parser { lexer: Lexer { src: src.as_bytes(), pos: 0 }, tok: Tok::End, pos: 0, depth: 0, tokens: 0 };
    parser.bump()?;
    let e = parser.expr()?;
    if parser.tok != Tok::End {
        return parser.syntax("unexpected trailing input");
    }
    Ok(e)
}
