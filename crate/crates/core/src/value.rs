//! Closed element terms and their canonical text form.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rat = Ratio<i64>;

/// An element of some universe. Finite-range and boolean elements are `Nat`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Unit,
    Nat(u64),
    Int(i64),
    Rat(Rat),
    Sym(Arc<str>),
    Tuple(Vec<Value>),
    /// Finite sequences, used for strings over an alphabet.
    Seq(Vec<Value>),
    Inj(usize, Box<Value>),
    Mask(u64),
}

impl Value {
    pub fn sym(s: &str) -> Value {
        Value::Sym(Arc::from(s))
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Tuple(vec![a, b])
    }

    pub fn nat_pair(a: u64, b: u64) -> Value {
        Value::Tuple(vec![Value::Nat(a), Value::Nat(b)])
    }

    pub fn int_pair(a: i64, b: i64) -> Value {
        Value::Tuple(vec![Value::Int(a), Value::Int(b)])
    }

    pub fn rat(n: i64, d: i64) -> Value {
        Value::Rat(Rat::new(n, d))
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Value::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Value]> {
        match self {
            Value::Tuple(v) => Some(v),
            _ => None,
        }
    }

    /// Rational view of any numeric value.
    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            Value::Nat(n) => i64::try_from(*n).ok().map(Rat::from_integer),
            Value::Int(i) => Some(Rat::from_integer(*i)),
            Value::Rat(r) => Some(*r),
            _ => None,
        }
    }

    /// Largest natural-number magnitude inside the term. Drives the
    /// level-major variable order of the forcing engine.
    pub fn level(&self) -> u64 {
        match self {
            Value::Unit | Value::Sym(_) | Value::Mask(_) => 0,
            Value::Nat(n) => *n,
            Value::Int(i) => i.unsigned_abs(),
            Value::Rat(r) => r.numer().unsigned_abs().max(r.denom().unsigned_abs()),
            Value::Tuple(vs) => vs.iter().map(Value::level).max().unwrap_or(0),
            Value::Seq(vs) => vs
                .iter()
                .map(Value::level)
                .max()
                .unwrap_or(0)
                .max(vs.len() as u64),
            Value::Inj(_, v) => v.level(),
        }
    }

    pub fn parse_text(text: &str) -> Result<Value> {
        let mut p = TextParser { s: text.as_bytes(), pos: 0 };
        p.ws();
        let v = p.value()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!(
                "trailing input at column {} in value `{text}`",
                p.pos + 1
            )));
        }
        Ok(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "()"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Rat(r) => {
                if *r.denom() == 1 {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Value::Sym(s) => write!(f, "'{s}"),
            Value::Tuple(vs) => {
                write!(f, "(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
            Value::Seq(vs) => {
                write!(f, "[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Value::Inj(i, v) => write!(f, "in{}({v})", i + 1),
            Value::Mask(m) => {
                write!(f, "{{")?;
                let mut first = true;
                for b in 0..64 {
                    if m >> b & 1 == 1 {
                        if !first {
                            write!(f, ",")?;
                        }
                        first = false;
                        write!(f, "{b}")?;
                    }
                }
                write!(f, "}}")
            }
        }
    }
}

struct TextParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl TextParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("expected {what} at column {}", self.pos + 1)))
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn list(&mut self, close: u8) -> Result<Vec<Value>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            self.ws();
            out.push(self.value()?);
            if self.eat(close) {
                return Ok(out);
            }
            if !self.eat(b',') {
                return self.err("`,` or closing bracket");
            }
        }
    }

    fn integer(&mut self) -> Result<i128> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<i128>().ok())
            .map_or_else(|| self.err("integer"), Ok)
    }

    fn value(&mut self) -> Result<Value> {
        self.ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let items = self.list(b')')?;
                Ok(match items.len() {
                    0 => Value::Unit,
                    1 => items.into_iter().next().unwrap_or(Value::Unit),
                    _ => Value::Tuple(items),
                })
            }
            Some(b'[') => {
                self.pos += 1;
                Ok(Value::Seq(self.list(b']')?))
            }
            Some(b'{') => {
                self.pos += 1;
                let items = self.list(b'}')?;
                let mut mask = 0u64;
                for it in items {
                    match it {
                        Value::Nat(b) if b < 64 => mask |= 1 << b,
                        _ => return self.err("bit index below 64"),
                    }
                }
                Ok(Value::Mask(mask))
            }
            Some(b'\'') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                if start == self.pos {
                    return self.err("symbol name");
                }
                Ok(Value::sym(std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")))
            }
            Some(b'i') => {
                if !self.s[self.pos..].starts_with(b"in") {
                    return self.err("value");
                }
                self.pos += 2;
                let k = self.integer()?;
                if k < 1 {
                    return self.err("injection index from 1");
                }
                if !self.eat(b'(') {
                    return self.err("`(`");
                }
                let v = self.value()?;
                if !self.eat(b')') {
                    return self.err("`)`");
                }
                Ok(Value::Inj(k as usize - 1, Box::new(v)))
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let n = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == 0 {
                        return self.err("nonzero denominator");
                    }
                    let (n, d) = (i64::try_from(n), i64::try_from(d));
                    match (n, d) {
                        (Ok(n), Ok(d)) => Ok(Value::Rat(Rat::new(n, d))),
                        _ => Err(Error::Overflow("rational literal".into())),
                    }
                } else if n >= 0 {
                    u64::try_from(n)
                        .map(Value::Nat)
                        .map_err(|_| Error::Overflow("natural literal".into()))
                } else {
                    i64::try_from(n)
                        .map(Value::Int)
                        .map_err(|_| Error::Overflow("integer literal".into()))
                }
            }
            _ => self.err("value"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for t in ["()", "5", "-3", "3/4", "'a", "(1,2)", "in2(7)", "{0,3,4}", "[0,1]", "((1,2),-4)"] {
            let v = Value::parse_text(t).unwrap();
            assert_eq!(v.to_string(), t);
        }
    }

    #[test]
    fn rationals_are_canonical() {
        assert_eq!(Value::rat(6, -8), Value::rat(-3, 4));
        assert_eq!(Value::rat(4, 2).to_string(), "2");
    }

    #[test]
    fn parse_errors_carry_column() {
        let e = Value::parse_text("(1,").unwrap_err();
        assert!(e.to_string().contains("column"));
    }
}
