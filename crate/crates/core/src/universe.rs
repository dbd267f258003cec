//! Carriers of diagram nodes.

use std::fmt;
use std::sync::Arc;

use crate::bounds::SolverBounds;
use crate::error::{Error, Result};
use crate::value::{Rat, Value};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Universe {
    Unit,
    Bool,
    Fin(u64),
    Alphabet { name: Arc<str>, symbols: Arc<[Arc<str>]> },
    Nat,
    Int,
    Rat,
    Prod(Vec<Universe>),
    Sum(Vec<Universe>),
    /// Powerset of a finite universe of at most 64 elements, as bitmasks.
    Pow(Box<Universe>),
    /// Finite sequences over a universe.
    Seq(Box<Universe>),
}

/// A window enumeration, possibly cut short by the cardinality cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub values: Vec<Value>,
    pub truncated: bool,
}

impl Universe {
    pub fn alphabet(name: &str, symbols: &[&str]) -> Universe {
        Universe::Alphabet {
            name: Arc::from(name),
            symbols: symbols.iter().map(|s| Arc::from(*s)).collect(),
        }
    }

    pub fn prod(us: impl IntoIterator<Item = Universe>) -> Universe {
        Universe::Prod(us.into_iter().collect())
    }

    pub fn nat2() -> Universe {
        Universe::Prod(vec![Universe::Nat, Universe::Nat])
    }

    pub fn int2() -> Universe {
        Universe::Prod(vec![Universe::Int, Universe::Int])
    }

    pub fn rat2() -> Universe {
        Universe::Prod(vec![Universe::Rat, Universe::Rat])
    }

    pub fn pow(u: Universe) -> Result<Universe> {
        match u.cardinality() {
            Some(c) if c <= 64 => Ok(Universe::Pow(Box::new(u))),
            _ => Err(Error::Malformed(format!("powerset argument {u} must be finite with at most 64 elements"))),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Universe::Unit, Value::Unit) => true,
            (Universe::Bool, Value::Nat(n)) => *n < 2,
            (Universe::Fin(k), Value::Nat(n)) => n < k,
            (Universe::Alphabet { symbols, .. }, Value::Sym(s)) => symbols.iter().any(|x| x == s),
            (Universe::Nat, Value::Nat(_)) => true,
            (Universe::Int, Value::Int(_)) => true,
            (Universe::Rat, Value::Rat(_)) => true,
            (Universe::Prod(us), Value::Tuple(vs)) => {
                us.len() == vs.len() && us.iter().zip(vs).all(|(u, v)| u.contains(v))
            }
            (Universe::Sum(us), Value::Inj(i, v)) => us.get(*i).is_some_and(|u| u.contains(v)),
            (Universe::Pow(u), Value::Mask(m)) => {
                let c = u.cardinality().unwrap_or(64);
                c >= 64 || m >> c == 0
            }
            (Universe::Seq(u), Value::Seq(vs)) => vs.iter().all(|v| u.contains(v)),
            _ => false,
        }
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(format!("{v} is not in {self}")))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    /// Exact cardinality for finite universes (saturating at `u64::MAX`).
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Universe::Unit => Some(1),
            Universe::Bool => Some(2),
            Universe::Fin(n) => Some(*n),
            Universe::Alphabet { symbols, .. } => Some(symbols.len() as u64),
            Universe::Nat | Universe::Int | Universe::Rat => None,
            Universe::Prod(us) => us
                .iter()
                .try_fold(1u64, |acc, u| u.cardinality().map(|c| acc.saturating_mul(c))),
            Universe::Sum(us) => us
                .iter()
                .try_fold(0u64, |acc, u| u.cardinality().map(|c| acc.saturating_add(c))),
            Universe::Pow(u) => u.cardinality().map(|c| if c >= 64 { u64::MAX } else { 1 << c }),
            Universe::Seq(u) => match u.cardinality() {
                Some(0) => Some(1),
                _ => None,
            },
        }
    }

    /// All elements of a finite universe in canonical order.
    pub fn elements(&self) -> Option<Vec<Value>> {
        if !self.is_finite() {
            return None;
        }
        let w = self.window(&SolverBounds::default().with_card_cap(usize::MAX)).ok()?;
        Some(w.values)
    }

    /// Position of `v` in the canonical enumeration of a finite universe.
    pub fn index_of(&self, v: &Value) -> Option<u64> {
        match (self, v) {
            (Universe::Unit, Value::Unit) => Some(0),
            (Universe::Bool | Universe::Fin(_), Value::Nat(n)) if self.contains(v) => Some(*n),
            (Universe::Alphabet { symbols, .. }, Value::Sym(s)) => {
                symbols.iter().position(|x| x == s).map(|p| p as u64)
            }
            (Universe::Prod(us), Value::Tuple(vs)) if us.len() == vs.len() => {
                let mut idx = 0u64;
                for (u, x) in us.iter().zip(vs) {
                    idx = idx.checked_mul(u.cardinality()?)?.checked_add(u.index_of(x)?)?;
                }
                Some(idx)
            }
            (Universe::Sum(us), Value::Inj(i, x)) => {
                let offset: u64 = us.get(..*i)?.iter().map(|u| u.cardinality()).sum::<Option<u64>>()?;
                Some(offset + us.get(*i)?.index_of(x)?)
            }
            (Universe::Pow(_), Value::Mask(m)) if self.contains(v) => Some(*m),
            _ => None,
        }
    }

    /// Whether `v` lies inside the enumeration window of this universe.
    pub fn in_window(&self, v: &Value, b: &SolverBounds) -> bool {
        match (self, v) {
            (Universe::Nat, Value::Nat(n)) => *n <= b.nat_max,
            (Universe::Int, Value::Int(i)) => b.int_min <= *i && *i <= b.int_max,
            (Universe::Rat, Value::Rat(r)) => {
                let scaled = *r * Rat::from_integer(b.rat_den);
                scaled.is_integer()
                    && Rat::from_integer(b.int_min) <= *r
                    && *r <= Rat::from_integer(b.int_max)
            }
            (Universe::Prod(us), Value::Tuple(vs)) => {
                us.len() == vs.len() && us.iter().zip(vs).all(|(u, v)| u.in_window(v, b))
            }
            (Universe::Sum(us), Value::Inj(i, v)) => us.get(*i).is_some_and(|u| u.in_window(v, b)),
            (Universe::Seq(u), Value::Seq(vs)) => {
                vs.len() as u64 <= b.nat_max && vs.iter().all(|v| u.in_window(v, b))
            }
            _ => self.contains(v),
        }
    }

    /// Number of window elements, saturating.
    pub fn window_size(&self, b: &SolverBounds) -> u128 {
        match self {
            Universe::Nat => b.nat_max as u128 + 1,
            Universe::Int => (b.int_max - b.int_min + 1).max(0) as u128,
            Universe::Rat => ((b.int_max - b.int_min) as i128 * b.rat_den as i128 + 1).max(0) as u128,
            Universe::Prod(us) => us.iter().fold(1u128, |a, u| a.saturating_mul(u.window_size(b))),
            Universe::Sum(us) => us.iter().fold(0u128, |a, u| a.saturating_add(u.window_size(b))),
            Universe::Seq(u) => {
                let k = u.window_size(b);
                let mut total = 0u128;
                let mut pow = 1u128;
                for _ in 0..=b.nat_max {
                    total = total.saturating_add(pow);
                    pow = pow.saturating_mul(k);
                }
                total
            }
            _ => self.cardinality().map_or(u128::MAX, |c| c as u128),
        }
    }

    /// Enumerate the window, truncating at the cardinality cap.
    pub fn window(&self, b: &SolverBounds) -> Result<Window> {
        let cap = b.card_cap;
        let mut values = Vec::new();
        let truncated = self.push_window(b, cap, &mut values)?;
        Ok(Window { values, truncated })
    }

    fn push_window(&self, b: &SolverBounds, cap: usize, out: &mut Vec<Value>) -> Result<bool> {
        let push = |v: Value, out: &mut Vec<Value>| -> bool {
            if out.len() >= cap {
                return false;
            }
            out.push(v);
            true
        };
        match self {
            Universe::Unit => Ok(!push(Value::Unit, out)),
            Universe::Bool => Ok(!(0..2).all(|i| push(Value::Nat(i), out))),
            Universe::Fin(n) => Ok(!(0..*n).all(|i| push(Value::Nat(i), out))),
            Universe::Alphabet { symbols, .. } => {
                Ok(!symbols.iter().all(|s| push(Value::Sym(s.clone()), out)))
            }
            Universe::Nat => Ok(!(0..=b.nat_max).all(|i| push(Value::Nat(i), out))),
            Universe::Int => Ok(!(b.int_min..=b.int_max).all(|i| push(Value::Int(i), out))),
            Universe::Rat => {
                let lo = b.int_min as i128 * b.rat_den as i128;
                let hi = b.int_max as i128 * b.rat_den as i128;
                for k in lo..=hi {
                    let n = i64::try_from(k).map_err(|_| Error::Overflow("rational window".into()))?;
                    if !push(Value::Rat(Rat::new(n, b.rat_den)), out) {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Universe::Prod(us) => {
                let mut parts = Vec::with_capacity(us.len());
                let mut truncated = false;
                for u in us {
                    let w = u.window(b)?;
                    truncated |= w.truncated;
                    parts.push(w.values);
                }
                if parts.iter().any(Vec::is_empty) {
                    return Ok(truncated);
                }
                let mut idx = vec![0usize; parts.len()];
                loop {
                    let v = Value::Tuple(idx.iter().zip(&parts).map(|(&i, p)| p[i].clone()).collect());
                    if !push(v, out) {
                        return Ok(true);
                    }
                    let mut k = parts.len();
                    loop {
                        if k == 0 {
                            return Ok(truncated);
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < parts[k].len() {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            }
            Universe::Sum(us) => {
                let mut truncated = false;
                for (i, u) in us.iter().enumerate() {
                    let w = u.window(b)?;
                    truncated |= w.truncated;
                    for v in w.values {
                        if !push(Value::Inj(i, Box::new(v)), out) {
                            return Ok(true);
                        }
                    }
                }
                Ok(truncated)
            }
            Universe::Pow(u) => {
                let c = u.cardinality().unwrap_or(64);
                if c >= 64 {
                    return Err(Error::NotEnumerable(self.to_string()));
                }
                for m in 0..(1u64 << c) {
                    if !push(Value::Mask(m), out) {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Universe::Seq(u) => {
                let w = u.window(b)?;
                let mut layer: Vec<Vec<Value>> = vec![Vec::new()];
                if !push(Value::Seq(Vec::new()), out) {
                    return Ok(true);
                }
                for _ in 0..b.nat_max {
                    let mut next = Vec::new();
                    for s in &layer {
                        for x in &w.values {
                            let mut t = s.clone();
                            t.push(x.clone());
                            if !push(Value::Seq(t.clone()), out) {
                                return Ok(true);
                            }
                            next.push(t);
                        }
                    }
                    if next.is_empty() {
                        break;
                    }
                    layer = next;
                }
                Ok(w.truncated)
            }
        }
    }

    /// Coerce an untyped literal to this universe.
    pub fn coerce(&self, v: &Value) -> Result<Value> {
        let fail = || Error::UniverseMismatch(format!("{v} is not in {self}"));
        let out = match (self, v) {
            (Universe::Int, Value::Nat(n)) => Value::Int(i64::try_from(*n).map_err(|_| fail())?),
            (Universe::Rat, Value::Nat(_) | Value::Int(_)) => Value::Rat(v.as_rat().ok_or_else(fail)?),
            (Universe::Prod(us), Value::Tuple(vs)) if us.len() == vs.len() => Value::Tuple(
                us.iter().zip(vs).map(|(u, x)| u.coerce(x)).collect::<Result<_>>()?,
            ),
            (Universe::Sum(us), Value::Inj(i, x)) => {
                let u = us.get(*i).ok_or_else(fail)?;
                Value::Inj(*i, Box::new(u.coerce(x)?))
            }
            (Universe::Seq(u), Value::Seq(vs)) => {
                Value::Seq(vs.iter().map(|x| u.coerce(x)).collect::<Result<_>>()?)
            }
            (Universe::Unit, Value::Nat(0)) => Value::Unit,
            _ => v.clone(),
        };
        if self.contains(&out) {
            Ok(out)
        } else {
            Err(fail())
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Universe::Prod(us) => us.len(),
            _ => 1,
        }
    }

    pub fn component(&self, i: usize) -> Option<&Universe> {
        match self {
            Universe::Prod(us) => us.get(i),
            _ => None,
        }
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Universe::Unit => write!(f, "1"),
            Universe::Bool => write!(f, "2"),
            Universe::Fin(n) => write!(f, "fin({n})"),
            Universe::Alphabet { name, .. } => write!(f, "{name}"),
            Universe::Nat => write!(f, "N"),
            Universe::Int => write!(f, "Z"),
            Universe::Rat => write!(f, "Q"),
            Universe::Prod(us) => {
                write!(f, "(")?;
                for (i, u) in us.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    write!(f, "{u}")?;
                }
                write!(f, ")")
            }
            Universe::Sum(us) => {
                write!(f, "(")?;
                for (i, u) in us.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{u}")?;
                }
                write!(f, ")")
            }
            Universe::Pow(u) => write!(f, "P({u})"),
            Universe::Seq(u) => write!(f, "Seq({u})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_window_is_lexicographic() {
        let b = SolverBounds::default().with_nat_max(1);
        let w = Universe::nat2().window(&b).unwrap();
        let got: Vec<String> = w.values.iter().map(|v| v.to_string()).collect();
        assert_eq!(got, ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        assert!(!w.truncated);
    }

    #[test]
    fn cap_truncates() {
        let b = SolverBounds::default().with_nat_max(10).with_card_cap(3);
        let w = Universe::Nat.window(&b).unwrap();
        assert_eq!(w.values.len(), 3);
        assert!(w.truncated);
    }

    #[test]
    fn rational_window() {
        let b = SolverBounds::default().with_int_window(0, 1).with_rat_den(2);
        let w = Universe::Rat.window(&b).unwrap();
        assert_eq!(w.values, vec![Value::rat(0, 1), Value::rat(1, 2), Value::rat(1, 1)]);
        assert!(Universe::Rat.in_window(&Value::rat(1, 2), &b));
        assert!(!Universe::Rat.in_window(&Value::rat(1, 3), &b));
    }

    #[test]
    fn index_matches_enumeration() {
        let u = Universe::prod([Universe::Fin(3), Universe::Sum(vec![Universe::Bool, Universe::Unit])]);
        for (i, v) in u.elements().unwrap().iter().enumerate() {
            assert_eq!(u.index_of(v), Some(i as u64));
        }
    }

    #[test]
    fn coercion() {
        let u = Universe::prod([Universe::Int, Universe::Rat]);
        let v = u.coerce(&Value::parse_text("(3,1/2)").unwrap()).unwrap();
        assert_eq!(v, Value::Tuple(vec![Value::Int(3), Value::rat(1, 2)]));
        assert!(Universe::Fin(2).coerce(&Value::Nat(2)).is_err());
    }
}
