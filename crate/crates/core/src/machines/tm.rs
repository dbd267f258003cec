//! Turing machine specifications, their text format, and a direct simulator.
//!
//! States are `0..n` and tape symbols `0..m`; symbols 0 and 1 are the input
//! alphabet. Inside compiled diagrams the extra state `q_e = n` marks plain
//! tape entries and the extra symbol `□ = m` marks the right end of the tape.
//! A direction bit is 0 for a left move and 1 for a right move.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub write: usize,
    pub next: usize,
    pub right: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMSpec {
    pub states: usize,
    pub symbols: usize,
    pub blank: usize,
    pub q0: usize,
    pub qa: usize,
    pub qr: usize,
    /// `delta[x][q]`; more than one move makes the machine nondeterministic.
    pub delta: Vec<Vec<Vec<Move>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    Accept { step: u64 },
    Reject { step: u64 },
    Running,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub tape: Vec<usize>,
    pub head: usize,
    pub state: usize,
}

/// Every configuration of a deterministic run up to the step cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub halt: Halt,
    pub configs: Vec<Config>,
}

impl TMSpec {
    pub fn new(states: usize, symbols: usize, blank: usize, q0: usize, qa: usize, qr: usize) -> TMSpec {
        TMSpec { states, symbols, blank, q0, qa, qr, delta: vec![vec![Vec::new(); states]; symbols] }
    }

    /// Replace the moves for `(x, q)` with a single move.
    pub fn set(&mut self, x: usize, q: usize, write: usize, next: usize, right: bool) -> &mut Self {
        self.delta[x][q] = vec![Move { write, next, right }];
        self
    }

    pub fn add(&mut self, x: usize, q: usize, write: usize, next: usize, right: bool) -> &mut Self {
        self.delta[x][q].push(Move { write, next, right });
        self
    }

    pub fn q_e(&self) -> usize {
        self.states
    }

    pub fn end_mark(&self) -> usize {
        self.symbols
    }

    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().flatten().all(|ms| ms.len() <= 1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedMachine(m));
        if self.states == 0 || self.symbols < 3 {
            return bad("need at least one state and three symbols (0, 1, blank)".into());
        }
        if self.blank < 2 || self.blank >= self.symbols {
            return bad(format!("blank {} must be a non-input symbol below {}", self.blank, self.symbols));
        }
        for (name, q) in [("q0", self.q0), ("qa", self.qa), ("qr", self.qr)] {
            if q >= self.states {
                return bad(format!("{name} = {q} is not a state"));
            }
        }
        if self.qa == self.qr {
            return bad("accept and reject states coincide".into());
        }
        if self.delta.len() != self.symbols || self.delta.iter().any(|r| r.len() != self.states) {
            return bad("transition table has the wrong shape".into());
        }
        for x in 0..self.symbols {
            for q in 0..self.states {
                let ms = &self.delta[x][q];
                if ms.is_empty() && q != self.qa && q != self.qr {
                    return bad(format!("no move for symbol {x} in state {q}"));
                }
                for m in ms {
                    if m.write >= self.symbols || m.next >= self.states {
                        return bad(format!("move {x} {q} -> {} {} out of range", m.write, m.next));
                    }
                }
            }
        }
        Ok(())
    }

    /// Halting states loop in place, the reject state drifting left:
    /// `δ(x, q) = (x, q, L)` for `q ∈ {q_A, q_R}`.
    pub fn normalized(&self) -> TMSpec {
        let mut t = self.clone();
        for x in 0..t.symbols {
            for q in [t.qa, t.qr] {
                t.delta[x][q] = vec![Move { write: x, next: q, right: false }];
            }
        }
        t
    }

    pub fn moves(&self, x: usize, q: usize) -> &[Move] {
        &self.delta[x][q]
    }

    /// Tape symbols for a binary input string.
    pub fn input_tape(sigma: &str) -> Vec<usize> {
        sigma.chars().map(|c| usize::from(c != '0')).collect()
    }

    fn start(&self, sigma: &str) -> Config {
        let mut c = Config { tape: Self::input_tape(sigma), head: 0, state: self.q0 };
        self.settle(&mut c);
        c
    }

    /// A running head never rests on the end mark: the tape grows by a blank.
    fn settle(&self, c: &mut Config) {
        if c.head == c.tape.len() && c.state != self.qa {
            c.tape.push(self.blank);
        }
    }

    fn apply(&self, c: &Config, m: Move) -> Config {
        let mut n = c.clone();
        n.tape[c.head] = m.write;
        n.head = if m.right { c.head + 1 } else { c.head.saturating_sub(1) };
        n.state = m.next;
        self.settle(&mut n);
        n
    }

    /// Deterministic run for at most `k_max` steps; configurations `0..=k`.
    pub fn simulate(&self, sigma: &str, k_max: u64) -> Result<Run> {
        self.validate()?;
        if !self.is_deterministic() {
            return Err(Error::MalformedMachine("simulate needs a deterministic machine".into()));
        }
        let t = self.normalized();
        let mut configs = vec![t.start(sigma)];
        for k in 0..=k_max {
            let c = configs.last().expect("nonempty");
            if c.state == t.qa {
                return Ok(Run { halt: Halt::Accept { step: k }, configs });
            }
            if c.state == t.qr {
                return Ok(Run { halt: Halt::Reject { step: k }, configs });
            }
            if k == k_max {
                break;
            }
            let m = t.moves(c.tape[c.head], c.state)[0];
            let next = t.apply(c, m);
            configs.push(next);
        }
        Ok(Run { halt: Halt::Running, configs })
    }

    /// Whether some branch accepts within `k_max` steps.
    pub fn accepts_nondet(&self, sigma: &str, k_max: u64) -> Result<bool> {
        self.validate()?;
        let t = self.normalized();
        let mut frontier = BTreeSet::from([{
            let c = t.start(sigma);
            (c.tape, c.head, c.state)
        }]);
        for _ in 0..=k_max {
            if frontier.iter().any(|c| c.2 == t.qa) {
                return Ok(true);
            }
            let mut next = BTreeSet::new();
            for (tape, head, state) in &frontier {
                if *state == t.qr {
                    continue;
                }
                let c = Config { tape: tape.clone(), head: *head, state: *state };
                for &m in t.moves(tape[*head], *state) {
                    let n = t.apply(&c, m);
                    next.insert((n.tape, n.head, n.state));
                }
            }
            frontier = next;
        }
        Ok(false)
    }

    /// Rows `0..=k_max` of the execution history in the row encoding used by
    /// the compiled diagram: `(i, x, q_e, k)` for every tape cell and the end
    /// mark, plus `(i, x, q, k)` for the head. After acceptance the tape is
    /// frozen and the accepting entries spread one cell per step each way.
    pub fn history_rows(&self, sigma: &str, k_max: u64) -> Result<BTreeSet<Value>> {
        let run = self.simulate(sigma, k_max)?;
        let (qe, end) = (self.q_e() as u64, self.end_mark() as u64);
        let row = |i: usize, x: u64, q: u64, k: u64| {
            Value::Tuple(vec![Value::Nat(i as u64), Value::Nat(x), Value::Nat(q), Value::Nat(k)])
        };
        let mut out = BTreeSet::new();
        let last = run.configs.len() as u64 - 1;
        for k in 0..=k_max {
            let c = &run.configs[k.min(last) as usize];
            let sym = |i: usize| c.tape.get(i).map_or(end, |&x| x as u64);
            for i in 0..=c.tape.len() {
                out.insert(row(i, sym(i), qe, k));
            }
            match run.halt {
                Halt::Accept { step } if k >= step => {
                    let d = (k - step) as usize;
                    let lo = c.head.saturating_sub(d);
                    let hi = (c.head + d).min(c.tape.len());
                    for i in lo..=hi {
                        out.insert(row(i, sym(i), self.qa as u64, k));
                    }
                }
                _ => {
                    if k > last {
                        // rejecting runs keep drifting left after the recorded prefix
                        let steps = (k - last) as usize;
                        let head = c.head.saturating_sub(steps);
                        out.insert(row(head, sym(head), c.state as u64, k));
                        continue;
                    }
                    out.insert(row(c.head, sym(c.head), c.state as u64, k));
                }
            }
        }
        Ok(out)
    }

    /// The value expected at the output node after `k_max` rows: the
    /// termination map applied to the accepting cells visible by then.
    pub fn expected_output(&self, sigma: &str, k_max: u64) -> Result<BTreeSet<Value>> {
        let rows = self.history_rows(sigma, k_max)?;
        let a: BTreeSet<(u64, u64)> = rows
            .iter()
            .filter_map(|v| {
                let t = v.as_tuple()?;
                (t[2] == Value::Nat(self.qa as u64)).then(|| (t[0].as_nat().unwrap(), t[1].as_nat().unwrap()))
            })
            .collect();
        Ok(self.terminate(&a))
    }

    /// `θ(A)` with `B = {blank, □}`.
    pub fn terminate(&self, a: &BTreeSet<(u64, u64)>) -> BTreeSet<Value> {
        let bit = |x: u64| x < 2;
        let blank = |y: u64| y == self.blank as u64 || y == self.end_mark() as u64;
        let at = |i: u64| a.range((i, 0)..=(i, u64::MAX)).map(|p| p.1).collect::<Vec<_>>();
        let mut out = BTreeSet::new();
        for &(i, x) in a {
            let next = at(i + 1);
            if bit(x) && next.iter().any(|&y| bit(y)) {
                out.insert(Value::nat_pair(i, x));
            }
            if bit(x) && next.iter().any(|&y| blank(y)) {
                out.insert(Value::nat_pair(i, x));
                out.insert(Value::nat_pair(i + 1, 0));
                out.insert(Value::nat_pair(i + 1, 1));
            }
            if i == 0 && blank(x) {
                out.insert(Value::nat_pair(0, 0));
                out.insert(Value::nat_pair(0, 1));
            }
        }
        out
    }

    /// The tape left by an accepting run, trailing blanks removed, as a
    /// binary string; `None` when a non-input symbol precedes the end.
    pub fn output_string(tape: &[usize], blank: usize) -> Option<String> {
        let end = tape.iter().rposition(|&x| x != blank).map_or(0, |p| p + 1);
        tape[..end].iter().map(|&x| match x {
            0 => Some('0'),
            1 => Some('1'),
            _ => None,
        }).collect()
    }

    pub fn parse(text: &str) -> Result<TMSpec> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hn, header) = lines.next().ok_or_else(|| Error::Parse("1:1: empty machine description".into()))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let keys = ["states", "symbols", "blank", "q0", "qa", "qr"];
        if words.len() != 12 || words.iter().step_by(2).zip(keys).any(|(w, k)| *w != k) {
            return Err(Error::Parse(format!(
                "{hn}:1: expected `states n symbols m blank b q0 i qa j qr k`"
            )));
        }
        let mut nums = [0usize; 6];
        for (slot, w) in nums.iter_mut().zip(words.iter().skip(1).step_by(2)) {
            *slot = w.parse().map_err(|_| Error::Parse(format!("{hn}:1: `{w}` is not a number")))?;
        }
        let [n, m, b, q0, qa, qr] = nums;
        let mut t = TMSpec::new(n, m, b, q0, qa, qr);
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 6 || toks[2] != "->" {
                return Err(Error::Parse(format!("{ln}:1: expected `x q -> x' q' d`")));
            }
            let num = |i: usize| -> Result<usize> {
                toks[i].parse().map_err(|_| Error::Parse(format!("{ln}: `{}` is not a number", toks[i])))
            };
            let (x, q, w, nq) = (num(0)?, num(1)?, num(3)?, num(4)?);
            let right = match toks[5] {
                "L" => false,
                "R" => true,
                d => return Err(Error::Parse(format!("{ln}: direction `{d}` is not L or R"))),
            };
            if x >= m || q >= n {
                return Err(Error::Parse(format!("{ln}: ({x}, {q}) is outside the table")));
            }
            t.add(x, q, w, nq, right);
        }
        t.validate()?;
        Ok(t)
    }
}

impl fmt::Display for TMSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "states {} symbols {} blank {} q0 {} qa {} qr {}",
            self.states, self.symbols, self.blank, self.q0, self.qa, self.qr
        )?;
        for q in 0..self.states {
            for x in 0..self.symbols {
                for m in &self.delta[x][q] {
                    writeln!(f, "{x} {q} -> {} {} {}", m.write, m.next, if m.right { 'R' } else { 'L' })?;
                }
            }
        }
        Ok(())
    }
}
