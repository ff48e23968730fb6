//! Text form of [`MultiPoly`].
//!
//! The canonical output is a `+`-separated list of terms
//! `(re±imi)*x1^2*x3`. The reader accepts a superset: sums, differences,
//! products, integer powers, parentheses, real and imaginary literals
//! (`2.5`, `3i`, `i`) and variables `x1, x2, ...`. Whitespace is ignored.


use super::{MultiPoly, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Expr {
    Num(C64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.term()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return self.err("expected an exponent after '^'");
            }
            let k: u32 = digits.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("exponent {digits} too large"),
            })?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.src
            .get(at)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let d = self.digits();
                if d.is_empty() {
                    return self.err("expected a variable index after 'x'");
                }
                let idx: usize = d.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "variable index too large".into(),
                })?;
                if idx == 0 {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: "variables are numbered from x1".into(),
                    });
                }
                if self.ident_continues(self.pos) {
                    return self.err("unexpected character in variable name");
                }
                Ok(Expr::Var(idx - 1))
            }
            Some(b'i') if !self.ident_continues(self.pos + 1) => {
                self.pos += 1;
                Ok(Expr::Num(C64::new(0.0, 1.0)))
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let v = self.number()?;
                if self.src.get(self.pos) == Some(&b'i') && !self.ident_continues(self.pos + 1) {
                    self.pos += 1;
                    Ok(Expr::Num(C64::new(0.0, v)))
                } else {
                    Ok(Expr::Num(C64::new(v, 0.0)))
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.src;
        let mut p = self.pos;
        while p < s.len() && s[p].is_ascii_digit() {
            p += 1;
        }
        if p < s.len() && s[p] == b'.' {
            p += 1;
            while p < s.len() && s[p].is_ascii_digit() {
                p += 1;
            }
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if q < s.len() && s[q].is_ascii_digit() {
                while q < s.len() && s[q].is_ascii_digit() {
                    q += 1;
                }
                p = q;
            }
        }
        self.pos = p;
        let text = std::str::from_utf8(&s[start..p]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Syntax {
                pos: start,
                msg: format!("malformed number {text:?}"),
            }),
        }
    }
}

fn max_var(e: &Expr) -> Option<usize> {
    match e {
        Expr::Num(_) => None,
        Expr::Var(j) => Some(*j),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => max_var(a).max(max_var(b)),
        Expr::Neg(a) | Expr::Pow(a, _) => max_var(a),
    }
}

fn build(e: &Expr, nvars: usize) -> Result<MultiPoly> {
    Ok(match e {
        Expr::Num(c) => MultiPoly::constant(nvars, *c),
        Expr::Var(j) => MultiPoly::var(nvars, *j),
        Expr::Add(a, b) => build(a, nvars)?.add_exact(&build(b, nvars)?)?,
        Expr::Sub(a, b) => build(a, nvars)?.add_exact(&build(b, nvars)?.neg())?,
        Expr::Mul(a, b) => build(a, nvars)?.mul_exact(&build(b, nvars)?)?,
        Expr::Neg(a) => build(a, nvars)?.neg(),
        Expr::Pow(a, k) => {
            let base = build(a, nvars)?;
            let mut acc = MultiPoly::one(nvars);
            for _ in 0..*k {
                acc = acc.mul_exact(&base)?;
            }
            acc
        }
    })
}

fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser::new(s);
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a polynomial; `nvars` is the largest variable index that occurs.
pub fn parse_text(s: &str) -> Result<MultiPoly> {
    let e = parse_expr(s)?;
    let nvars = max_var(&e).map_or(0, |j| j + 1);
    build(&e, nvars)
}

/// Parses a polynomial in exactly `nvars` variables.
pub fn parse_text_with_nvars(s: &str, nvars: usize) -> Result<MultiPoly> {
    let e = parse_expr(s)?;
    if let Some(j) = max_var(&e) {
        if j >= nvars {
            return Err(Error::VariableOutOfRange { index: j + 1, nvars });
        }
    }
    build(&e, nvars)
}

fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

fn fmt_coeff(c: C64) -> String {
    let sign = if c.im < 0.0 { '-' } else { '+' };
    format!("({}{}{}i)", fmt_f64(c.re), sign, fmt_f64(c.im.abs()))
}

/// Canonical text form. Reading it back with [`parse_text_with_nvars`]
/// reproduces the polynomial exactly.
pub fn format_text(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::with_capacity(p.num_terms());
    for (e, c) in p.terms() {
        let mut s = fmt_coeff(c);
        for (j, k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => s.push_str(&format!("*x{}", j + 1)),
                _ => s.push_str(&format!("*x{}^{}", j + 1, k)),
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}
