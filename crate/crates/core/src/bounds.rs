use serde::{Deserialize, Serialize};

/// Enumeration windows and caps for infinite carriers.
///
/// The rational window is the multiples of `1/rat_den` inside
/// `[int_min, int_max]`. Sequences are windowed to length `nat_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverBounds {
    pub nat_max: u64,
    pub int_min: i64,
    pub int_max: i64,
    pub rat_den: i64,
    pub grade_cap: u64,
    pub card_cap: usize,
    pub iter_cap: u64,
}

impl Default for SolverBounds {
    fn default() -> Self {
        SolverBounds {
            nat_max: 16,
            int_min: -8,
            int_max: 8,
            rat_den: 1,
            grade_cap: 16,
            card_cap: 1 << 20,
            iter_cap: 1 << 20,
        }
    }
}

impl SolverBounds {
    pub fn with_nat_max(mut self, n: u64) -> Self {
        self.nat_max = n;
        self
    }

    pub fn with_int_window(mut self, lo: i64, hi: i64) -> Self {
        self.int_min = lo;
        self.int_max = hi;
        self
    }

    pub fn with_rat_den(mut self, d: i64) -> Self {
        self.rat_den = d.max(1);
        self
    }

    pub fn with_grade_cap(mut self, k: u64) -> Self {
        self.grade_cap = k;
        self
    }

    pub fn with_card_cap(mut self, c: usize) -> Self {
        self.card_cap = c.max(1);
        self
    }

    pub fn with_iter_cap(mut self, c: u64) -> Self {
        self.iter_cap = c.max(1);
        self
    }
}
