//! A small language for q-series built from Pochhammer symbols.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := atom ['^' int]
//! atom   := digits | 'q' ['^' qexp] | 'P(' int ',' int ')'
//!         | 'slice(' int ',' int ',' expr ')' | '(' expr ')'
//! qexp   := ['-'] int | '(' ['-'] int '/' int ')'
//! int    := ['-'] digits            (after '^' only)
//! ```
//!
//! `P(g,d)` is `(q^g; q^d)_inf` with `g >= 1`, `q^r` a monomial with rational
//! `r`, and `slice(m,t,E)` is `sum_n c(mn+t) q^n` where `c(n)` are the
//! coefficients of `E`. Constructs that read two ways are rejected:
//! `q^a/b` (write `q^(a/b)` or `(q^a)/b`), chained powers `x^a^b`, and
//! a unary minus directly after an operator.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qseries::{mul_one_minus_q_pow, QSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    Q(Rational64),
    P(u64, u64),
    Slice(u64, u64, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            perr(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return perr(start, "expected digits");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn small(&mut self) -> Result<i64> {
        let p = self.pos;
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let v: i64 = d.try_into().or_else(|_| perr(p, "integer too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn unsigned(&mut self) -> Result<u64> {
        let p = self.pos;
        let v = self.small()?;
        if v < 0 {
            return perr(p, "expected a nonnegative integer");
        }
        Ok(v as u64)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = if self.eat(b'-') { Expr::Neg(Box::new(self.term()?)) } else { self.term()? };
        loop {
            if self.eat(b'+') {
                e = Expr::Add(Box::new(e), Box::new(self.operand()?));
            } else if self.eat(b'-') {
                e = Expr::Sub(Box::new(e), Box::new(self.operand()?));
            } else {
                return Ok(e);
            }
        }
    }

    /// A term after a binary operator; a sign here would be ambiguous.
    fn operand(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            return perr(self.pos, "sign after an operator; use parentheses");
        }
        self.term()
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.power()?;
        loop {
            if self.eat(b'*') {
                if matches!(self.peek(), Some(b'-') | Some(b'+')) {
                    return perr(self.pos, "sign after an operator; use parentheses");
                }
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self.eat(b'/') {
                if matches!(self.peek(), Some(b'-') | Some(b'+')) {
                    return perr(self.pos, "sign after an operator; use parentheses");
                }
                e = Expr::Div(Box::new(e), Box::new(self.power()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let a = self.atom()?;
        let a = if !matches!(a, Expr::Q(_)) && self.eat(b'^') { Expr::Pow(Box::new(a), self.small()?) } else { a };
        if self.peek() == Some(b'^') {
            return perr(self.pos, "chained powers are ambiguous; use parentheses");
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Expr> {
        let p = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Some(b'q') => {
                self.pos += 1;
                if !self.eat(b'^') {
                    return Ok(Expr::Q(Rational64::one()));
                }
                let r = if self.eat(b'(') {
                    let a = self.small()?;
                    let r = if self.eat(b'/') {
                        let bp = self.pos;
                        let b = self.small()?;
                        if b <= 0 {
                            return perr(bp, "denominator must be positive");
                        }
                        Rational64::new(a, b)
                    } else {
                        Rational64::from_integer(a)
                    };
                    self.expect(b')')?;
                    r
                } else {
                    let a = self.small()?;
                    let save = self.pos;
                    if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return perr(save, "q^a/b is ambiguous; write q^(a/b) or (q^a)/b");
                    }
                    self.pos = save;
                    Rational64::from_integer(a)
                };
                Ok(Expr::Q(r))
            }
            Some(b'P') => {
                self.pos += 1;
                self.expect(b'(')?;
                let g = self.unsigned()?;
                self.expect(b',')?;
                let d = self.unsigned()?;
                self.expect(b')')?;
                if g == 0 || d == 0 {
                    return perr(p, "P(g,d) needs g >= 1 and d >= 1");
                }
                Ok(Expr::P(g, d))
            }
            Some(b's') => {
                if !self.s[self.pos..].starts_with(b"slice") {
                    return perr(p, "unknown name");
                }
                self.pos += 5;
                self.expect(b'(')?;
                let m = self.unsigned()?;
                self.expect(b',')?;
                let t = self.unsigned()?;
                self.expect(b',')?;
                let e = self.expr()?;
                self.expect(b')')?;
                if m == 0 || t >= m {
                    return perr(p, "slice(m,t,..) needs 0 <= t < m");
                }
                Ok(Expr::Slice(m, t, Box::new(e)))
            }
            Some(c) => perr(p, format!("unexpected '{}'", c as char)),
            None => perr(p, "unexpected end of input"),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return perr(p.pos, "trailing input");
    }
    Ok(e)
}

/// `(q^g; q^d)_inf` below `q^bound`.
fn pochhammer_series(g: u64, d: u64, bound: i64) -> QSeries {
    if bound <= 0 {
        return QSeries::big_o(Rational64::from_integer(bound));
    }
    let mut c = vec![BigInt::zero(); bound as usize];
    c[0] = BigInt::one();
    let mut n = g;
    while (n as i64) < bound {
        mul_one_minus_q_pow(&mut c, n as usize, 1);
        n += d;
    }
    QSeries::from_int_coeffs(c, Rational64::zero(), false)
}

fn eval(e: &Expr, bound: i64) -> Result<QSeries> {
    Ok(match e {
        Expr::Num(x) => QSeries::constant(x.clone()),
        Expr::Q(r) => QSeries::monomial(BigRational::one(), *r),
        Expr::P(g, d) => pochhammer_series(*g, *d, bound),
        Expr::Slice(m, t, x) => {
            let inner = eval(x, *m as i64 * bound + *t as i64)?;
            if !inner.has_integral_exponents() {
                return Err(Error::Diagnostic("slice of a series with fractional exponents".into()));
            }
            inner.slice(*m as i64, *t as i64)
        }
        Expr::Add(a, b) => eval(a, bound)?.add(&eval(b, bound)?),
        Expr::Sub(a, b) => eval(a, bound)?.sub(&eval(b, bound)?),
        Expr::Neg(a) => eval(a, bound)?.neg(),
        Expr::Mul(a, b) => eval(a, bound)?.mul(&eval(b, bound)?),
        Expr::Div(a, b) => eval(a, bound)?.div(&eval(b, bound)?)?,
        Expr::Pow(a, k) => eval(a, bound)?.pow(*k)?,
    })
}

/// Expansion of `e` below `q^order`, widening the working bound until the
/// result is known that far.
pub fn expand(e: &Expr, order: i64) -> Result<QSeries> {
    let target = Rational64::from_integer(order);
    let mut bound = order + 8;
    for _ in 0..16 {
        let s = eval(e, bound)?;
        match s.trunc() {
            None => return Ok(s.truncate(target)),
            Some(t) if t >= target => return Ok(s.truncate(target)),
            Some(t) => bound += (target - t).ceil().to_integer().max(1) * 2 + 8,
        }
    }
    Err(Error::InsufficientTruncation { need: order.to_string(), have: "unbounded growth".into() })
}

pub fn expand_str(s: &str, order: i64) -> Result<QSeries> {
    expand(&parse(s)?, order)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub order: i64,
    /// First exponent where the sides differ, with both coefficients.
    pub mismatch: Option<(Rational64, BigRational, BigRational)>,
}

impl VerifyReport {
    pub fn equal(&self) -> bool {
        self.mismatch.is_none()
    }

    pub fn to_json(&self) -> Value {
        match &self.mismatch {
            None => json!({"equal": true, "order": self.order}),
            Some((e, a, b)) => json!({
                "equal": false,
                "order": self.order,
                "first_mismatch": {"exponent": e.to_string(), "lhs": a.to_string(), "rhs": b.to_string()},
            }),
        }
    }
}

/// Compare two expressions coefficient by coefficient below `q^order`.
pub fn verify_identity(lhs: &str, rhs: &str, order: i64) -> Result<VerifyReport> {
    let a = expand_str(lhs, order)?;
    let b = expand_str(rhs, order)?;
    let mismatch = a.first_mismatch(&b).map(|e| (e, a.coeff(e), b.coeff(e)));
    Ok(VerifyReport { order, mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_pentagonal() {
        let s = expand_str("P(1,1)", 10).unwrap();
        let t = expand_str("1 - q - q^2 + q^5 + q^7", 10).unwrap();
        assert!(s.agrees_with(&t));
    }

    #[test]
    fn rejects_ambiguity() {
        assert!(parse("q^1/2").is_err());
        assert!(parse("P(1,1)^2^3").is_err());
        assert!(parse("1 - -q").is_err());
        assert!(parse("q^(1/2)").is_ok());
        assert!(parse("(q^1)/2").is_ok());
    }
}
