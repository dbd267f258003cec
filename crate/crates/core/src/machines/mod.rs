//! Automata and Turing machines as diagrams over `{0, succ}`.

pub mod compile;
pub mod config;
pub mod dfa;
pub mod table;
pub mod tm;

use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

pub use compile::{attach_program, compile_tm, CompiledMachine};
pub use config::{compile_config, ConfigMachine};
pub use dfa::{compile_dfa, Dfa, DfaDiagram};
pub use table::{build_fun_table, FunTable};
pub use tm::{Halt, Run, TMSpec};

/// `{(i, σ[i])} ∪ {(|σ|, 0), (|σ|, 1)}`. Characters other than `'0'` and
/// `'1'` are read as `1`.
pub fn encode_string(sigma: &str) -> Subset {
    Subset::ext(&Universe::nat2(), encode_values(sigma)).expect("pairs of naturals")
}

pub fn encode_values(sigma: &str) -> Vec<Value> {
    let mut out: Vec<Value> =
        sigma.chars().enumerate().map(|(i, c)| Value::nat_pair(i as u64, u64::from(c != '0'))).collect();
    let n = sigma.chars().count() as u64;
    out.push(Value::nat_pair(n, 0));
    out.push(Value::nat_pair(n, 1));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StringParse {
    String(String),
    NotAString,
}

impl StringParse {
    pub fn string(&self) -> Option<&str> {
        match self {
            StringParse::String(s) => Some(s),
            StringParse::NotAString => None,
        }
    }
}

/// Inverse of [`encode_string`] on its image.
pub fn parse_string_subset(a: &Subset) -> StringParse {
    let Some(vals) = a.values() else { return StringParse::NotAString };
    parse_string_values(vals.iter())
}

pub fn parse_string_values<'a>(vals: impl IntoIterator<Item = &'a Value>) -> StringParse {
    let mut rows: Vec<[bool; 2]> = Vec::new();
    for v in vals {
        let Some([Value::Nat(i), Value::Nat(b)]) = v.as_tuple().map(|t| <&[Value; 2]>::try_from(t).ok()).flatten() else {
            return StringParse::NotAString;
        };
        if *b > 1 || *i > 1 << 20 {
            return StringParse::NotAString;
        }
        let i = *i as usize;
        if rows.len() <= i {
            rows.resize(i + 1, [false; 2]);
        }
        rows[i][*b as usize] = true;
    }
    let Some(last) = rows.last() else { return StringParse::NotAString };
    if *last != [true, true] {
        return StringParse::NotAString;
    }
    let mut s = String::with_capacity(rows.len() - 1);
    for r in &rows[..rows.len() - 1] {
        match r {
            [true, false] => s.push('0'),
            [false, true] => s.push('1'),
            _ => return StringParse::NotAString,
        }
    }
    StringParse::String(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings() {
        let set = |s: &str| encode_string(s).values().unwrap().clone();
        let pairs = |ps: &[(u64, u64)]| ps.iter().map(|&(a, b)| Value::nat_pair(a, b)).collect();
        assert_eq!(set("01"), pairs(&[(0, 0), (1, 1), (2, 0), (2, 1)]));
        assert_eq!(set(""), pairs(&[(0, 0), (0, 1)]));
        assert_eq!(set("1"), pairs(&[(0, 1), (1, 0), (1, 1)]));
    }

    #[test]
    fn parsing() {
        let sub = |ps: &[(u64, u64)]| Subset::ext(&Universe::nat2(), ps.iter().map(|&(a, b)| Value::nat_pair(a, b))).unwrap();
        assert_eq!(parse_string_subset(&sub(&[(0, 0), (0, 1)])), StringParse::String(String::new()));
        assert_eq!(parse_string_subset(&sub(&[(0, 1), (1, 0), (1, 1)])), StringParse::String("1".into()));
        assert_eq!(parse_string_subset(&sub(&[(0, 0)])), StringParse::NotAString);
        assert_eq!(parse_string_subset(&sub(&[(1, 0), (1, 1)])), StringParse::NotAString);
        assert_eq!(parse_string_subset(&sub(&[(0, 0), (0, 1), (1, 0), (1, 1)])), StringParse::NotAString);
        assert_eq!(parse_string_subset(&sub(&[])), StringParse::NotAString);
    }
}
