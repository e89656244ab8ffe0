//! Infix expressions over tower generators and the Ore variable `t`.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" "-"? INT)?
//! atom  := INT | IDENT | "(" expr ")"
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Element, FieldTower};
use crate::ore::{OrePoly, OreRing};

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

fn tokenize(src: &str, start: Pos) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| Pos {
        line: start.line,
        col: start.col + i,
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[s..i].iter().collect();
            out.push((Tok::Int(text.parse().unwrap()), at(s)));
        } else if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[s..i].iter().collect()), at(s)));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), at(i)));
            i += 1;
        } else {
            return Err(Error::SyntaxError {
                line: start.line,
                col: start.col + i,
                expected: "a number, a name, an operator or a parenthesis".into(),
            });
        }
    }
    out.push((Tok::End, at(chars.len())));
    Ok(out)
}

/// Parse an expression whose first character sits at `start`.
pub fn parse_at(src: &str, start: Pos) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(src, start)?,
        i: 0,
    };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(p.error("an operator or end of expression"));
    }
    Ok(e)
}

pub fn parse(src: &str) -> Result<Expr> {
    parse_at(src, Pos { line: 1, col: 1 })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn error(&self, expected: &str) -> Error {
        let p = self.pos();
        Error::SyntaxError {
            line: p.line,
            col: p.col,
            expected: expected.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('+') {
                ExprKind::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.eat('-') {
                ExprKind::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { kind, pos };
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('*') {
                ExprKind::Mul(Box::new(lhs), Box::new(self.unary()?))
            } else if self.eat('/') {
                ExprKind::Div(Box::new(lhs), Box::new(self.unary()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { kind, pos };
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                pos,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let Tok::Int(n) = self.peek().clone() else {
            return Err(self.error("an integer exponent"));
        };
        self.i += 1;
        let n: i64 = i64::try_from(n).map_err(|_| Error::SyntaxError {
            line: pos.line,
            col: pos.col,
            expected: "an exponent that fits in 64 bits".into(),
        })?;
        Ok(Expr {
            kind: ExprKind::Pow(Box::new(base), if neg { -n } else { n }),
            pos,
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.i += 1;
                Ok(Expr {
                    kind: ExprKind::Int(n),
                    pos,
                })
            }
            Tok::Ident(s) => {
                self.i += 1;
                Ok(Expr {
                    kind: ExprKind::Ident(s),
                    pos,
                })
            }
            Tok::Sym('(') => {
                self.i += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("')'"));
                }
                Ok(e)
            }
            _ => Err(self.error("a number, a name or '('")),
        }
    }
}

fn type_error(pos: Pos, msg: impl std::fmt::Display) -> Error {
    Error::TypeError(format!("{}:{}: {}", pos.line, pos.col, msg))
}

/// Evaluate as an element of `k`; names must be generators of `k`.
pub fn eval_element(k: &FieldTower, e: &Expr) -> Result<Element> {
    Ok(match &e.kind {
        ExprKind::Int(n) => k.from_bigint(n),
        ExprKind::Ident(name) => match k.generator_index(name) {
            Some(i) => k.generator(i),
            None => return Err(type_error(e.pos, format_args!("unknown generator '{name}'"))),
        },
        ExprKind::Neg(a) => k.neg(&eval_element(k, a)?),
        ExprKind::Add(a, b) => k.add(&eval_element(k, a)?, &eval_element(k, b)?),
        ExprKind::Sub(a, b) => k.sub(&eval_element(k, a)?, &eval_element(k, b)?),
        ExprKind::Mul(a, b) => k.mul(&eval_element(k, a)?, &eval_element(k, b)?),
        ExprKind::Div(a, b) => {
            let d = eval_element(k, b)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            k.div(&eval_element(k, a)?, &d)
        }
        ExprKind::Pow(a, n) => {
            let base = eval_element(k, a)?;
            if *n < 0 && base.is_zero() {
                return Err(Error::DivisionByZero);
            }
            k.pow(&base, *n)
        }
    })
}

/// Evaluate as an element of `K[t; d]`. `*` is the noncommutative product;
/// `/` and negative powers are only allowed on elements of K.
pub fn eval_ore(r: &OreRing, e: &Expr) -> Result<OrePoly> {
    let k = r.tower();
    let as_element = |p: &OrePoly, pos: Pos| -> Result<Element> {
        match p.degree() {
            None => Ok(k.zero()),
            Some(0) => Ok(p.coeffs()[0].clone()),
            Some(_) => Err(type_error(pos, "division and negative powers apply only to field elements")),
        }
    };
    Ok(match &e.kind {
        ExprKind::Int(n) => r.constant(k.from_bigint(n)),
        ExprKind::Ident(name) if name == "t" => r.t(),
        ExprKind::Ident(_) => r.constant(eval_element(k, e)?),
        ExprKind::Neg(a) => r.neg(&eval_ore(r, a)?),
        ExprKind::Add(a, b) => r.add(&eval_ore(r, a)?, &eval_ore(r, b)?),
        ExprKind::Sub(a, b) => r.sub(&eval_ore(r, a)?, &eval_ore(r, b)?),
        ExprKind::Mul(a, b) => r.mul(&eval_ore(r, a)?, &eval_ore(r, b)?),
        ExprKind::Div(a, b) => {
            let x = as_element(&eval_ore(r, a)?, a.pos)?;
            let y = as_element(&eval_ore(r, b)?, b.pos)?;
            if y.is_zero() {
                return Err(Error::DivisionByZero);
            }
            r.constant(k.div(&x, &y))
        }
        ExprKind::Pow(a, n) => {
            let base = eval_ore(r, a)?;
            if *n >= 0 {
                r.pow(&base, *n as usize)
            } else {
                let x = as_element(&base, a.pos)?;
                if x.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                r.constant(k.pow(&x, *n))
            }
        }
    })
}

/// `true` if the expression mentions the Ore variable.
pub fn mentions_t(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Int(_) => false,
        ExprKind::Ident(s) => s == "t",
        ExprKind::Neg(a) | ExprKind::Pow(a, _) => mentions_t(a),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
            mentions_t(a) || mentions_t(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let e = parse("1 - 2 - 3").unwrap();
        let ExprKind::Sub(lhs, _) = e.kind else { panic!() };
        assert!(matches!(lhs.kind, ExprKind::Sub(..)));
        let e = parse("-x^2").unwrap();
        let ExprKind::Neg(inner) = e.kind else { panic!() };
        assert!(matches!(inner.kind, ExprKind::Pow(_, 2)));
    }

    #[test]
    fn negative_exponent() {
        let e = parse("x^-3").unwrap();
        assert!(matches!(e.kind, ExprKind::Pow(_, -3)));
    }

    #[test]
    fn error_location() {
        let err = parse("x + * 2").unwrap_err();
        assert_eq!(
            err,
            Error::SyntaxError {
                line: 1,
                col: 5,
                expected: "a number, a name or '('".into()
            }
        );
        assert!(matches!(parse("(x + 1").unwrap_err(), Error::SyntaxError { col: 7, .. }));
        assert!(matches!(parse("x $ 1").unwrap_err(), Error::SyntaxError { col: 3, .. }));
    }
}
