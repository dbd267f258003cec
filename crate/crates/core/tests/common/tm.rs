use std::collections::BTreeSet;

use setdiag::machines::{compile_tm, parse_string_subset, Halt, TMSpec};
use setdiag::Value;

pub const K: u64 = 16;

/// Compiled history, halting state and θ output against the simulator.
pub fn check(t: &TMSpec, sigma: &str) -> Result<(), String> {
    let c = compile_tm(t).map_err(|e| e.to_string())?;
    let r = c.run(sigma, K).map_err(|e| e.to_string())?;
    let run = t.simulate(sigma, K).map_err(|e| e.to_string())?;
    let want_state: BTreeSet<Value> = match run.halt {
        Halt::Accept { .. } => BTreeSet::from([Value::Nat(t.qa as u64)]),
        Halt::Reject { .. } => BTreeSet::from([Value::Nat(t.qr as u64)]),
        Halt::Running => BTreeSet::new(),
    };
    if r.state != want_state {
        return Err(format!("state {:?} != {:?}", r.state, want_state));
    }
    let rows = t.history_rows(sigma, K).map_err(|e| e.to_string())?;
    if r.history != rows {
        return Err("history rows differ".into());
    }
    let out = r.output.values().cloned().unwrap_or_default();
    if out != t.expected_output(sigma, K).map_err(|e| e.to_string())? {
        return Err("output set differs".into());
    }
    if let Halt::Accept { step } = run.halt {
        let last = run.configs.last().unwrap();
        let reach = (K - step) as usize;
        // every cell visible: the decoded output is the final tape
        if last.head <= reach && last.head + reach >= last.tape.len() {
            let want = TMSpec::output_string(&last.tape, t.blank);
            if parse_string_subset(&r.output).string().map(str::to_string) != want {
                return Err(format!("decoded {:?} != {:?}", parse_string_subset(&r.output), want));
            }
        }
    }
    Ok(())
}
