//! The schedule of steps at which the 5-state machine has just finished
//! writing `2^n`, and a verifier that runs the machine against it.
//!
//! At checkpoint `s_n` the machine is in `rewind` with its head on the
//! separator cell (-1 in engine coordinates). The counter sits one cell to
//! the left of it and the reverse-ternary digits of `2^n` start at cell 0.

use serde::Serialize;
use thiserror::Error;

use crate::tm::{Configuration, MachineTable, Symbol};
use crate::ternary::{power_of_two_ternary, TernaryNumber};

pub const SEPARATOR_CELL: i64 = -1;
pub const COUNTER_CELL: i64 = -2;
pub const DIGITS_START: i64 = 0;

/// `c_n`: 0 for `n <= 1`, 2 for `2 <= n <= 7`, 4 from `n = 8` on.
pub fn counter_offset(n: u64) -> u64 {
    match n {
        0 | 1 => 0,
        2..=7 => 2,
        _ => 4,
    }
}

/// `s_n = 5 + c_n + sum_{j=1..n} 2 (len3(2^j) + 1)`.
pub fn checkpoint_steps(n: u64) -> u64 {
    *checkpoint_schedule(n).last().expect("schedule is never empty")
}

/// `s_0 ..= s_n`, sharing one digit vector across the sum.
pub fn checkpoint_schedule(n: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut x = TernaryNumber::one();
    let mut sum = 0u64;
    out.push(5 + counter_offset(0));
    for j in 1..=n {
        x.double_in_place();
        sum += 2 * (x.len() as u64 + 1);
        out.push(5 + counter_offset(j) + sum);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckpointError {
    #[error("checkpoint n={n}: {detail}")]
    CheckpointMismatch { n: u64, detail: String },
    #[error("machine is missing `{0}`")]
    Setup(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckpointRecord {
    pub n: u64,
    pub step: u64,
    /// Value of the counter cell, `c_n / 2`.
    pub counter: u8,
    pub digits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckpointReport {
    pub n_max: u64,
    pub records: Vec<CheckpointRecord>,
}

/// Runs `m54` to each `s_n`, `n <= n_max`, and checks the full tape there.
pub fn verify_checkpoints(m54: &MachineTable, n_max: u64) -> Result<CheckpointReport, CheckpointError> {
    let rewind = m54
        .state_by_name("rewind")
        .ok_or_else(|| CheckpointError::Setup("state rewind".into()))?;
    let sym = |label: &str| {
        m54.symbol_by_label(label)
            .ok_or_else(|| CheckpointError::Setup(format!("symbol {label}")))
    };
    let digit_syms = [sym("0")?, sym("1")?, sym("2")?];
    let blank = m54.blank();
    let digit_of = |s: Symbol| digit_syms.iter().position(|&d| d == s).map(|d| d as u8);

    let schedule = checkpoint_schedule(n_max);
    let mut c = Configuration::new(m54);
    let mut expected = power_of_two_ternary(0);
    let mut records = Vec::with_capacity(schedule.len());

    for (n, &s_n) in schedule.iter().enumerate() {
        let n = n as u64;
        let fail = |detail: String| CheckpointError::CheckpointMismatch { n, detail };
        if n > 0 {
            expected.double_in_place();
        }
        if s_n < n {
            return Err(fail(format!("s_n = {s_n} is below n")));
        }
        c.run(m54, s_n - c.step);
        if c.halted {
            return Err(fail(format!("machine halted at step {}", c.step)));
        }
        if c.state != rewind {
            return Err(fail(format!("state is {}, expected rewind", m54.state_name(c.state))));
        }
        if c.head != SEPARATOR_CELL {
            return Err(fail(format!("head at {}, expected {SEPARATOR_CELL}", c.head)));
        }
        if c.tape.get(SEPARATOR_CELL) != blank {
            return Err(fail("separator cell is not blank".into()));
        }
        let want_counter = (counter_offset(n) / 2) as u8;
        let counter = digit_of(c.tape.get(COUNTER_CELL));
        if counter != Some(want_counter) {
            return Err(fail(format!(
                "counter cell holds {}, expected {want_counter}",
                m54.symbol_label(c.tape.get(COUNTER_CELL))
            )));
        }
        let (lo, hi) = c.tape.extent();
        if (lo..COUNTER_CELL).any(|i| c.tape.get(i) != blank) {
            return Err(fail("non-blank cell left of the counter".into()));
        }
        let digits = expected.digits();
        for (j, &want) in digits.iter().enumerate() {
            let cell = DIGITS_START + j as i64;
            if digit_of(c.tape.get(cell)) != Some(want) {
                return Err(fail(format!(
                    "digit cell {cell} holds {}, expected {want}",
                    m54.symbol_label(c.tape.get(cell))
                )));
            }
        }
        let end = DIGITS_START + digits.len() as i64;
        if let Some(i) = (end..=hi).find(|&i| c.tape.get(i) != blank) {
            return Err(fail(format!("cell {i} past the digits is not blank")));
        }
        records.push(CheckpointRecord {
            n,
            step: s_n,
            counter: want_counter,
            digits: digits.len(),
        });
    }
    Ok(CheckpointReport { n_max, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::builtin_m54;

    #[test]
    fn schedule_values() {
        assert_eq!(checkpoint_steps(0), 5);
        assert_eq!(checkpoint_steps(1), 9);
        assert_eq!(checkpoint_steps(7), 63);
        assert_eq!(checkpoint_steps(8), 79);
        assert_eq!(checkpoint_steps(20), 333);
    }

    #[test]
    fn counter_jumps() {
        let jumps: Vec<u64> = (1..100)
            .filter(|&n| counter_offset(n) != counter_offset(n - 1))
            .collect();
        assert_eq!(jumps, vec![2, 8]);
    }

    #[test]
    fn schedule_is_strictly_increasing() {
        let s = checkpoint_schedule(300);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn machine_matches_schedule() {
        let r = verify_checkpoints(&builtin_m54(), 20).unwrap();
        assert_eq!(r.records.len(), 21);
        assert_eq!(r.records[20].step, 333);
        assert_eq!(r.records[20].counter, 2);
        assert_eq!(r.records[20].digits, 13);
    }

    #[test]
    fn zero_checkpoint_window() {
        let m = builtin_m54();
        verify_checkpoints(&m, 0).unwrap();
        let mut c = Configuration::new(&m);
        c.run(&m, 5);
        let labels: Vec<&str> = c.window(-2, 1).into_iter().map(|s| m.symbol_label(s)).collect();
        assert_eq!(labels, ["0", "#", "1", "#"]);
    }
}
