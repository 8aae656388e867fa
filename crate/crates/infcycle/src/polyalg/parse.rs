use num_bigint::BigInt;
use thiserror::Error;

use crate::exactla::Rat;

use super::poly::Poly;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at column {col}: {msg}")]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((col, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((col, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((col, Tok::Int(s.parse().unwrap())));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(ExprError { col, msg: format!("unexpected character '{}'", other) });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [String],
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { col: self.col(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let col = self.col();
                    let d = self.factor()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(ExprError {
                            col,
                            msg: "division is only allowed by nonzero rational constants".into(),
                        });
                    }
                    let c = d.constant_term();
                    acc = acc.scale(&(Rat::from_integer(1.into()) / c));
                }
                // juxtaposition like `2x` is not allowed; keep the grammar strict
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ExprError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(self.factor()?.neg())
            }
            _ => {
                let base = self.atom()?;
                if let Some(Tok::Caret) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(n)) => {
                            let e: u32 = n.try_into().map_err(|_| ExprError {
                                col: self.col(),
                                msg: "exponent too large".into(),
                            })?;
                            Ok(base.pow(e))
                        }
                        _ => self.err("expected a nonnegative integer exponent after '^'"),
                    }
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Poly, ExprError> {
        let nvars = self.vars.len();
        let col = self.col();
        match self.bump() {
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Poly::var(nvars, i)),
                None => Err(ExprError { col, msg: format!("unknown variable '{}'", name) }),
            },
            Some(Tok::Int(n)) => Ok(Poly::constant(nvars, Rat::from_integer(n))),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ExprError { col: self.col(), msg: "expected ')'".into() }),
                }
            }
            Some(t) => Err(ExprError { col, msg: format!("unexpected token {:?}", t) }),
            None => Err(ExprError { col, msg: "unexpected end of expression".into() }),
        }
    }
}

/// Parses an infix polynomial expression like `x^2*y - 3/2*z` over the given
/// variable names.
pub fn parse_poly(input: &str, vars: &[String]) -> Result<Poly, ExprError> {
    let toks = lex(input)?;
    let end_col = input.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, vars, end_col };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input after expression");
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_spec_example() {
        let v = vars(&["x", "y", "z"]);
        let p = parse_poly("x^2*y - 3/2*z", &v).unwrap();
        assert_eq!(p.format(&v), "x^2*y - 3/2*z");
    }

    #[test]
    fn parses_parens_and_unary_minus() {
        let v = vars(&["x", "y"]);
        let p = parse_poly("-(x + y)^2", &v).unwrap();
        let q = parse_poly("-x^2 - 2*x*y - y^2", &v).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_unknown_variable() {
        let v = vars(&["x"]);
        let e = parse_poly("x + w", &v).unwrap_err();
        assert!(e.msg.contains("unknown variable"));
        assert_eq!(e.col, 5);
    }

    #[test]
    fn rejects_polynomial_division() {
        let v = vars(&["x"]);
        assert!(parse_poly("1/x", &v).is_err());
        assert!(parse_poly("x/2", &v).is_ok());
    }
}
