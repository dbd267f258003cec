use std::collections::BTreeSet;

use setdiag::Value;

pub fn ints(v: &Value) -> (i64, i64) {
    let t = v.as_tuple().unwrap();
    let f = |x: &Value| x.as_rat().unwrap().to_integer();
    (f(&t[0]), f(&t[1]))
}

pub fn window(lo: i64, hi: i64) -> impl Iterator<Item = (i64, i64)> {
    (lo..=hi).flat_map(move |x| (lo..=hi).map(move |y| (x, y)))
}

pub fn circle_scan(lo: i64, hi: i64, c: (i64, i64), r2: i64) -> BTreeSet<(i64, i64)> {
    window(lo, hi).filter(|&(x, y)| (x - c.0).pow(2) + (y - c.1).pow(2) == r2).collect()
}

pub fn points(s: &BTreeSet<Value>) -> BTreeSet<(i64, i64)> {
    s.iter().map(ints).collect()
}

/// `⋃_{n≤cap} {p + w1 + … + wn}` by direct recurrence.
pub fn dots_oracle(p: (i64, i64), steps: &[(i64, i64)], cap: u64) -> BTreeSet<(i64, i64)> {
    let mut layer = BTreeSet::from([p]);
    let mut all = layer.clone();
    for _ in 0..cap {
        layer = layer.iter().flat_map(|&(x, y)| steps.iter().map(move |&(a, b)| (x + a, y + b))).collect();
        all.extend(&layer);
    }
    all
}

pub fn ifs(t: &[(i64, i64)], depth: u64) -> BTreeSet<(i64, i64)> {
    // vertices scaled by 2^depth so that every halving is exact
    let s = 1i64 << depth;
    let v: Vec<(i64, i64)> = t.iter().map(|&(x, y)| (x * s, y * s)).collect();
    let mut set: BTreeSet<(i64, i64)> = v.iter().copied().collect();
    let mut all = set.clone();
    for _ in 0..depth {
        set = set.iter().flat_map(|&(x, y)| v.iter().map(move |&(px, py)| (px + (x - px) / 2, py + (y - py) / 2))).collect();
        all.extend(&set);
    }
    all
}

pub fn golden(name: &str) -> Vec<u8> {
    let p = format!("{}/fixtures/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read(&p).unwrap_or_else(|e| panic!("{p}: {e}"))
}
