#![allow(dead_code)]

pub mod geom;
pub mod props;
pub mod tm;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use setdiag::machines::{Halt, TMSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Three states, symbols {0, 1, blank}; the roles of the states are drawn
/// too, so some machines start halted.
pub fn random_tm(r: &mut impl Rng) -> TMSpec {
    let qa = r.gen_range(0..3);
    let qr = (qa + r.gen_range(1..3)) % 3;
    let q0 = r.gen_range(0..3);
    let mut t = TMSpec::new(3, 3, 2, q0, qa, qr);
    for q in (0..3).filter(|&q| q != qa && q != qr) {
        for x in 0..3 {
            t.set(x, q, r.gen_range(0..3), r.gen_range(0..3), r.gen_bool(0.5));
        }
    }
    t
}

pub fn random_input(r: &mut impl Rng, max_len: usize) -> String {
    let len = r.gen_range(0..=max_len);
    (0..len).map(|_| if r.gen_bool(0.5) { '1' } else { '0' }).collect()
}

/// Seeded accepting pairs whose final tape is a binary string.
pub fn accepting_pairs(seed: u64, n: usize) -> Vec<(TMSpec, String, String)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let t = random_tm(&mut r);
        let sigma = random_input(&mut r, 4);
        let run = t.simulate(&sigma, 16).unwrap();
        if let Halt::Accept { .. } = run.halt {
            if let Some(s) = TMSpec::output_string(&run.configs.last().unwrap().tape, t.blank) {
                out.push((t, sigma, s));
            }
        }
    }
    out
}
