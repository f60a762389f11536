//! Expression grammar shared by the library and the command line.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" INTEGER)?
//! atom  := INTEGER | IDENT | "(" expr ")"
//! ```
//!
//! Rational literals are written `p/q` and fall out of the division rule.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Chart, Poly, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> Self {
        Self {
            line: 1,
            column,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }

    pub fn shifted(mut self, columns: usize) -> Self {
        self.column += columns;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ident {
        name: String,
        column: usize,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div {
        num: Box<Expr>,
        den: Box<Expr>,
        column: usize,
    },
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^(),".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(ParseError::new(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser {
    lx: Lexer,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.lx
            .toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.lx.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::new(self.col(), format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let column = self.col();
                self.pos += 1;
                lhs = Expr::Div {
                    num: Box::new(lhs),
                    den: Box::new(self.unary()?),
                    column,
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = n
                        .to_u32()
                        .ok_or_else(|| ParseError::new(col, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(ParseError::new(
                    col,
                    "exponent must be a non-negative integer",
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident { name, column: col })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(ParseError::new(col, format!("unexpected `{c}`"))),
            None => Err(ParseError::new(col, "unexpected end of expression")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(ParseError::new(self.col(), "trailing input")),
        }
    }
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lx: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses either a parenthesised, comma-separated tuple or a single expression.
pub fn parse_tuple(src: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser {
        lx: lex(src)?,
        pos: 0,
    };
    if p.peek() == Some(&Tok::Sym('(')) {
        // only a tuple if a top-level comma appears before the matching paren
        let save = p.pos;
        p.pos += 1;
        let first = p.expr()?;
        if p.eat(',') {
            let mut items = vec![first, p.expr()?];
            while p.eat(',') {
                items.push(p.expr()?);
            }
            p.expect(')')?;
            p.finish()?;
            return Ok(items);
        }
        p.pos = save;
    }
    let e = p.expr()?;
    p.finish()?;
    Ok(vec![e])
}

/// Evaluates an expression to a rational function, resolving identifiers
/// against the chart.
pub fn eval_ratfunc(e: &Expr, chart: &Chart) -> Result<RatFunc, ParseError> {
    Ok(match e {
        Expr::Int(n) => RatFunc::constant(chart, Rational::from_integer(n.clone())),
        Expr::Ident { name, column } => match chart.index_of(name) {
            Some(i) => RatFunc::var(chart, i),
            None => {
                return Err(ParseError::new(
                    *column,
                    format!("undeclared variable `{name}`"),
                ))
            }
        },
        Expr::Neg(a) => -eval_ratfunc(a, chart)?,
        Expr::Add(a, b) => &eval_ratfunc(a, chart)? + &eval_ratfunc(b, chart)?,
        Expr::Sub(a, b) => &eval_ratfunc(a, chart)? - &eval_ratfunc(b, chart)?,
        Expr::Mul(a, b) => &eval_ratfunc(a, chart)? * &eval_ratfunc(b, chart)?,
        Expr::Div { num, den, column } => {
            let d = eval_ratfunc(den, chart)?;
            if d.is_zero() {
                return Err(ParseError::new(*column, "division by zero"));
            }
            &eval_ratfunc(num, chart)? / &d
        }
        Expr::Pow(a, k) => eval_ratfunc(a, chart)?.pow(*k),
    })
}

pub fn parse_ratfunc(chart: &Chart, src: &str) -> Result<RatFunc, ParseError> {
    eval_ratfunc(&parse_expr(src)?, chart)
}

/// Parses a polynomial; division is allowed only by non-zero constants.
pub fn parse_poly(chart: &Chart, src: &str) -> Result<Poly, ParseError> {
    let f = parse_ratfunc(chart, src)?;
    match f.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(ParseError::new(
            1,
            "expected a polynomial, found a rational function",
        )),
    }
}

impl Expr {
    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Int(n) if n.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let c = Chart::new(["x", "y"]).unwrap();
        assert_eq!(parse_poly(&c, "-x^2").unwrap().to_string(), "-x^2");
        assert_eq!(parse_poly(&c, "1/2*x").unwrap().to_string(), "1/2*x");
        assert_eq!(parse_poly(&c, "2 - 3 - 4").unwrap().to_string(), "-5");
        assert_eq!(
            parse_poly(&c, "(x + y)^2 - x*(x + 2*y)")
                .unwrap()
                .to_string(),
            "y^2"
        );
        assert_eq!(parse_poly(&c, "  x*  y ").unwrap().to_string(), "x*y");
    }

    #[test]
    fn errors_carry_columns() {
        let c = Chart::new(["x"]).unwrap();
        let e = parse_poly(&c, "x + z").unwrap_err();
        assert_eq!(e.column, 5);
        assert!(e.message.contains("undeclared variable"));
        assert_eq!(parse_poly(&c, "x^y").unwrap_err().column, 3);
        assert_eq!(parse_poly(&c, "(x + 1").unwrap_err().column, 7);
        assert!(parse_poly(&c, "x $").is_err());
        assert!(parse_poly(&c, "1/x").is_err());
        assert!(parse_ratfunc(&c, "1/(x-x)").is_err());
    }

    #[test]
    fn tuples() {
        assert_eq!(parse_tuple("(x, y^2, 1)").unwrap().len(), 3);
        assert_eq!(parse_tuple("(x + 1)*y").unwrap().len(), 1);
        assert!(parse_tuple("(x, y").is_err());
    }
}
