mod common;

use std::time::Instant;

use setdiag::machines::Halt;

use common::tm::{check, K};

#[test]
fn hundred_random_machines_match_the_simulator() {
    let start = Instant::now();
    let mut r = common::rng(6);
    let mut halted = 0;
    for case in 0..100 {
        let t = common::random_tm(&mut r);
        let sigma = common::random_input(&mut r, 4);
        if let Err(e) = check(&t, &sigma) {
            panic!("case {case} σ={sigma:?}\n{t}\n{e}");
        }
        halted += usize::from(t.simulate(&sigma, K).unwrap().halt != Halt::Running);
    }
    assert!(halted > 20, "only {halted} halting cases");
    assert!(start.elapsed().as_secs() < 60, "{:?}", start.elapsed());
}
