//! Text literals for real oracles.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'pi' | 'e' | 'phi' | '(' expr ')'
//!         | 'sqrt(' expr ')' | 'log(' expr ')' | 'exp(' expr ')'
//!         | 'surd(' int ',' int ',' int ',' int ')'
//!         | 'alg([' int,* '];[' number ',' number '])'
//!         | 'stream(' base ';' digits ')'
//! ```
//! `sqrt` and `log` accept rational arguments only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::oracle::RealOracle;
use crate::error::{Error, Result};

/// Cap used for sign decisions during parsing (division, negative powers).
const PARSE_CAP: u32 = 4096;

pub fn parse_oracle(text: &str) -> Result<RealOracle> {
    let normalized: String = text.replace('\u{2212}', "-").chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { s: normalized.as_bytes(), i: 0, src: text };
    let x = p.expr()?;
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(x)
}

/// Parses a rational written as an integer, `p/q`, or a decimal such as `-1.25`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let x = parse_oracle(text)?;
    x.as_rational().ok_or_else(|| Error::Parse(format!("{text}: expected a rational number")))
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.i, self.src))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, k: &str) -> bool {
        let kb = k.as_bytes();
        if self.s[self.i..].starts_with(kb) {
            let next = self.s.get(self.i + kb.len()).copied();
            if next.is_some_and(|c| c.is_ascii_alphanumeric()) {
                return false;
            }
            self.i += kb.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RealOracle> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RealOracle> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let d = self.unary()?;
                acc = acc.div(&d, PARSE_CAP).map_err(|e| Error::Parse(format!("{}: {e}", self.src)))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RealOracle> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RealOracle> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let n: i64 = n.try_into().map_err(|_| self.err("exponent too large"))?;
            let n = if neg { -n } else { n };
            if n.abs() > 64 {
                return Err(self.err("exponent magnitude above 64"));
            }
            return base.powi(n, PARSE_CAP).map_err(|e| Error::Parse(format!("{}: {e}", self.src)));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().unwrap())
    }

    fn signed_integer(&mut self) -> Result<BigInt> {
        let neg = self.eat(b'-');
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    /// Unsigned decimal literal, exact.
    fn number(&mut self) -> Result<BigRational> {
        let int = self.integer()?;
        if self.eat(b'.') {
            let start = self.i;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.i += 1;
            }
            let frac = std::str::from_utf8(&self.s[start..self.i]).unwrap();
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let f: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().unwrap() };
            return Ok(BigRational::new(int * &scale + f, scale));
        }
        Ok(BigRational::from_integer(int))
    }

    fn signed_number(&mut self) -> Result<BigRational> {
        let neg = self.eat(b'-');
        let n = self.number()?;
        let n = if self.eat(b'/') { n / BigRational::from_integer(self.integer()?) } else { n };
        Ok(if neg { -n } else { n })
    }

    fn rational_arg(&mut self, what: &str) -> Result<BigRational> {
        self.expect(b'(')?;
        let x = self.expr()?;
        self.expect(b')')?;
        x.as_rational().ok_or_else(|| self.err(&format!("{what} takes a rational argument")))
    }

    fn atom(&mut self) -> Result<RealOracle> {
        let wrap = |e: Error| Error::Parse(e.to_string());
        match self.peek() {
            Some(c) if c.is_ascii_digit() => return Ok(RealOracle::rational(self.number()?)),
            Some(b'(') => {
                self.i += 1;
                let x = self.expr()?;
                self.expect(b')')?;
                return Ok(x);
            }
            _ => {}
        }
        if self.keyword("pi") {
            return Ok(RealOracle::pi());
        }
        if self.keyword("phi") {
            return RealOracle::surd(1.into(), 1.into(), 2.into(), 5.into()).map_err(wrap);
        }
        if self.keyword("e") {
            return Ok(RealOracle::e());
        }
        if self.keyword("sqrt") {
            let r = self.rational_arg("sqrt")?;
            return RealOracle::sqrt_rational(&r).map_err(wrap);
        }
        if self.keyword("log") {
            let r = self.rational_arg("log")?;
            return RealOracle::log(r).map_err(wrap);
        }
        if self.keyword("exp") {
            self.expect(b'(')?;
            let x = self.expr()?;
            self.expect(b')')?;
            return Ok(x.exp());
        }
        if self.keyword("surd") {
            self.expect(b'(')?;
            let a = self.signed_integer()?;
            self.expect(b',')?;
            let b = self.signed_integer()?;
            self.expect(b',')?;
            let c = self.signed_integer()?;
            self.expect(b',')?;
            let d = self.signed_integer()?;
            self.expect(b')')?;
            return RealOracle::surd(a, b, c, d).map_err(wrap);
        }
        if self.keyword("alg") {
            self.expect(b'(')?;
            self.expect(b'[')?;
            let mut coeffs = vec![self.signed_integer()?];
            while self.eat(b',') {
                coeffs.push(self.signed_integer()?);
            }
            self.expect(b']')?;
            self.expect(b';')?;
            self.expect(b'[')?;
            let lo = self.signed_number()?;
            self.expect(b',')?;
            let hi = self.signed_number()?;
            self.expect(b']')?;
            self.expect(b')')?;
            return RealOracle::algebraic(&coeffs, lo, hi).map_err(wrap);
        }
        if self.keyword("stream") {
            self.expect(b'(')?;
            let base = self.integer()?;
            let base: u32 = base.try_into().map_err(|_| self.err("base too large"))?;
            if !(2..=36).contains(&base) {
                return Err(self.err("base must be in 2..=36"));
            }
            self.expect(b';')?;
            let neg = self.eat(b'-');
            let start = self.i;
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                self.i += 1;
            }
            let int_digits = std::str::from_utf8(&self.s[start..self.i]).unwrap().to_string();
            let mut frac = String::new();
            if self.eat(b'.') {
                let s2 = self.i;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.i += 1;
                }
                frac = std::str::from_utf8(&self.s[s2..self.i]).unwrap().to_string();
            }
            self.expect(b')')?;
            let digit = |ch: char| ch.to_digit(base).ok_or_else(|| Error::Parse(format!("digit {ch:?} invalid in base {base}")));
            let mut integer = BigInt::zero();
            for ch in int_digits.chars() {
                integer = integer * base + digit(ch)?;
            }
            let digits = frac.chars().map(digit).collect::<Result<Vec<u32>>>()?;
            return RealOracle::digit_stream(base, neg, integer, digits).map_err(wrap);
        }
        Err(self.err("unexpected token"))
    }
}

/// Parses a JSON array of integers given as numbers or decimal strings.
pub fn parse_int_list(text: &str) -> Result<Vec<BigInt>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("sequence literal: {e}")))?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("sequence literal must be a JSON array".into()))?;
    arr.iter().map(json_int).collect()
}

pub(crate) fn json_int(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        serde_json::Value::Number(n) => n.to_string().parse().map_err(|_| Error::Parse(format!("not an integer: {n}"))),
        other => Err(Error::Parse(format!("not an integer: {other}"))),
    }
}

/// Parses a JSON array of integer vectors.
pub fn parse_int_vectors(text: &str) -> Result<Vec<Vec<BigInt>>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("vector literal: {e}")))?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("vector literal must be a JSON array".into()))?;
    arr.iter()
        .map(|row| match row {
            serde_json::Value::Array(xs) => xs.iter().map(json_int).collect(),
            other => Ok(vec![json_int(other)?]),
        })
        .collect()
}

/// Parses a JSON grid of oracle literals (strings or numbers).
pub fn parse_oracle_grid(text: &str) -> Result<Vec<Vec<RealOracle>>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix literal: {e}")))?;
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix literal must be a JSON array of rows".into()))?;
    rows.iter()
        .map(|row| match row {
            serde_json::Value::Array(xs) => xs.iter().map(json_oracle).collect(),
            other => Ok(vec![json_oracle(other)?]),
        })
        .collect()
}

/// Parses a JSON array of oracle literals.
pub fn parse_oracle_list(text: &str) -> Result<Vec<RealOracle>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("list literal: {e}")))?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("list literal must be a JSON array".into()))?;
    arr.iter().map(json_oracle).collect()
}

fn json_oracle(v: &serde_json::Value) -> Result<RealOracle> {
    match v {
        serde_json::Value::String(s) => parse_oracle(s),
        serde_json::Value::Number(n) => parse_oracle(&n.to_string()),
        other => Err(Error::Parse(format!("not an oracle literal: {other}"))),
    }
}
