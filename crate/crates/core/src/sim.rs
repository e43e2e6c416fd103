//! Bounded checker for "big simulates small": the 15-state, 2-symbol machine
//! against the 5-state, 4-symbol one.
//!
//! Small-machine cell `i` is stored in big-machine cells `2i` and `2i+1`
//! through a block [`Encoding`]. When the small machine is at step `n` in
//! state `q`, having arrived by moving in direction `d` (`d_0 = R`), the big
//! machine must be at step `f(n)` in state `h(q, d)` with its head on
//! `2i + π(d)`, where `π(L) = 1` and `π(R) = 0`. The time scaling is
//! `f(0) = 0`, `f(n+1) = f(n) + g((q, d), σ)` for the read symbol `σ`.
//!
//! Two checks are offered:
//!
//! * [`verify_step_cases`] runs the big machine on every defined
//!   `((q, d), σ)` case in isolation and checks it lands where `h`, `π` and
//!   `E` say it should after exactly `g` steps, reading only its own block.
//! * [`verify_lockstep`] runs both machines from blank tapes for a bounded
//!   number of small steps and compares them at every `f(n)`.
//!
//! [`verify_simulation`] does both.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::tm::{Configuration, Direction, MachineTable, StateId, StepStatus, Symbol, Tape, Transition};

/// `(small state, direction of the move that entered it)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StepKey {
    pub state: StateId,
    pub dir: Direction,
}

/// The reachable keys of the small machine.
pub const REACHABLE_KEYS: [(&str, Direction); 6] = [
    ("mul2_F", Direction::R),
    ("mul2_G", Direction::R),
    ("find_2", Direction::L),
    ("check_halt", Direction::L),
    ("rewind", Direction::L),
    ("rewind", Direction::R),
];

const STATE_MAP: [((&str, Direction), &str); 6] = [
    (("mul2_F", Direction::R), "mul2_F_sim"),
    (("mul2_G", Direction::R), "mul2_G_sim"),
    (("find_2", Direction::L), "find_2_sim"),
    (("check_halt", Direction::L), "check_halt_sim"),
    (("rewind", Direction::L), "rewind_sim"),
    (("rewind", Direction::R), "rewind_b"),
];

type CostRow = ((&'static str, Direction), [Option<u8>; 4]);

/// Big-machine steps per small-machine step, by key and read symbol
/// (`0`, `1`, `2`, `#`). `(rewind, R)` can only ever read `#`.
const STEP_COSTS: [CostRow; 6] = [
    (("mul2_F", Direction::R), [Some(2), Some(2), Some(2), Some(3)]),
    (("mul2_G", Direction::R), [Some(2), Some(4), Some(2), Some(2)]),
    (("find_2", Direction::L), [Some(2), Some(2), Some(2), Some(2)]),
    (("check_halt", Direction::L), [Some(3), Some(1), Some(2), Some(1)]),
    (("rewind", Direction::L), [Some(2), Some(2), Some(2), Some(3)]),
    (("rewind", Direction::R), [None, None, None, Some(2)]),
];

const COST_SYMBOLS: [&str; 4] = ["0", "1", "2", "#"];

/// The name-level state map `h`.
pub fn state_map_h(state: &str, dir: Direction) -> Result<&'static str, SimError> {
    STATE_MAP
        .iter()
        .find(|((q, d), _)| *q == state && *d == dir)
        .map(|(_, target)| *target)
        .ok_or_else(|| SimError::UnknownKey {
            state: state.to_string(),
            dir,
        })
}

/// Big-machine head position for small head `i` entered by moving `d`.
pub fn head_map(i: i64, d: Direction) -> i64 {
    2 * i
        + match d {
            Direction::L => 1,
            Direction::R => 0,
        }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("key ({state}, {dir:?}) is not a reachable key")]
    UnknownKey { state: String, dir: Direction },
    #[error("no step cost for ({state}, {dir:?}) reading {symbol}")]
    UndefinedCost {
        state: String,
        dir: Direction,
        symbol: String,
    },
    #[error("{0}")]
    Mismatch(Box<MismatchReport>),
    #[error("step {n} is beyond the verified range 0..={verified}")]
    OutOfRange { n: u64, verified: u64 },
    #[error("bad setup: {0}")]
    Setup(String),
}

/// A block encoding of small-machine symbols as pairs of big-machine symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    blocks: Vec<[Symbol; 2]>,
}

impl Encoding {
    /// `# -> bb`, `0 -> ba`, `1 -> ab`, `2 -> aa`.
    pub fn standard(small: &MachineTable, big: &MachineTable) -> Result<Self, SimError> {
        Self::from_labels(
            small,
            big,
            &[("#", ["b", "b"]), ("0", ["b", "a"]), ("1", ["a", "b"]), ("2", ["a", "a"])],
        )
    }

    /// Builds an encoding from label pairs; it must be total and injective.
    pub fn from_labels(
        small: &MachineTable,
        big: &MachineTable,
        pairs: &[(&str, [&str; 2])],
    ) -> Result<Self, SimError> {
        let mut blocks = vec![None; small.num_symbols()];
        for (s, [x, y]) in pairs {
            let s = small
                .symbol_by_label(s)
                .ok_or_else(|| SimError::Setup(format!("small machine has no symbol `{s}`")))?;
            let lookup = |l: &str| {
                big.symbol_by_label(l)
                    .ok_or_else(|| SimError::Setup(format!("big machine has no symbol `{l}`")))
            };
            blocks[s.index()] = Some([lookup(x)?, lookup(y)?]);
        }
        let blocks: Vec<[Symbol; 2]> = blocks
            .into_iter()
            .enumerate()
            .map(|(i, b)| {
                b.ok_or_else(|| {
                    SimError::Setup(format!(
                        "encoding is not total: `{}` unmapped",
                        small.symbol_label(Symbol(i as u8))
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        let mut seen = std::collections::HashSet::new();
        if !blocks.iter().all(|b| seen.insert(*b)) {
            return Err(SimError::Setup("encoding is not injective".into()));
        }
        Ok(Encoding { blocks })
    }

    pub fn encode(&self, s: Symbol) -> [Symbol; 2] {
        self.blocks[s.index()]
    }

    pub fn block_len(&self) -> usize {
        2
    }
}

/// The step-cost function `g`, resolved against a small machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCostTable {
    costs: HashMap<(StepKey, Symbol), u8>,
}

impl StepCostTable {
    pub fn erdos(small: &MachineTable) -> Result<Self, SimError> {
        let mut costs = HashMap::new();
        for ((q, d), row) in STEP_COSTS {
            let state = resolve_state(small, q)?;
            for (label, cost) in COST_SYMBOLS.iter().zip(row) {
                let sym = small
                    .symbol_by_label(label)
                    .ok_or_else(|| SimError::Setup(format!("small machine has no symbol `{label}`")))?;
                if let Some(c) = cost {
                    costs.insert((StepKey { state, dir: d }, sym), c);
                }
            }
        }
        Ok(StepCostTable { costs })
    }

    pub fn get(&self, key: StepKey, sigma: Symbol) -> Option<u8> {
        self.costs.get(&(key, sigma)).copied()
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }
}

/// `g(key, σ)`; an undefined entry is a verification failure.
pub fn step_cost(
    table: &StepCostTable,
    small: &MachineTable,
    key: StepKey,
    sigma: Symbol,
) -> Result<u8, SimError> {
    table.get(key, sigma).ok_or_else(|| SimError::UndefinedCost {
        state: small.state_name(key.state).to_string(),
        dir: key.dir,
        symbol: small.symbol_label(sigma).to_string(),
    })
}

fn resolve_state(m: &MachineTable, name: &str) -> Result<StateId, SimError> {
    m.state_by_name(name)
        .ok_or_else(|| SimError::Setup(format!("machine has no state `{name}`")))
}

/// `h`, `g` and `E` resolved against a concrete pair of tables.
#[derive(Clone, Debug)]
pub struct SimulationMap {
    h: HashMap<StepKey, StateId>,
    costs: StepCostTable,
    enc: Encoding,
}

impl SimulationMap {
    pub fn erdos(small: &MachineTable, big: &MachineTable, enc: Encoding) -> Result<Self, SimError> {
        if small.num_symbols() != 4 || small.symbol_label(small.blank()) != "#" {
            return Err(SimError::Setup(
                "small machine must have 4 symbols with blank `#`".into(),
            ));
        }
        if big.num_symbols() != 2 || big.symbol_label(big.blank()) != "b" {
            return Err(SimError::Setup(
                "big machine must have 2 symbols with blank `b`".into(),
            ));
        }
        if enc.encode(small.blank()) != [big.blank(), big.blank()] {
            return Err(SimError::Setup("blank must encode to a blank block".into()));
        }
        let mut h = HashMap::new();
        for ((q, d), target) in STATE_MAP {
            h.insert(
                StepKey {
                    state: resolve_state(small, q)?,
                    dir: d,
                },
                resolve_state(big, target)?,
            );
        }
        Ok(SimulationMap {
            h,
            costs: StepCostTable::erdos(small)?,
            enc,
        })
    }

    pub fn state_for(&self, small: &MachineTable, key: StepKey) -> Result<StateId, SimError> {
        self.h.get(&key).copied().ok_or_else(|| SimError::UnknownKey {
            state: small.state_name(key.state).to_string(),
            dir: key.dir,
        })
    }

    pub fn costs(&self) -> &StepCostTable {
        &self.costs
    }

    pub fn encoding(&self) -> &Encoding {
        &self.enc
    }

    fn keys(&self) -> Vec<StepKey> {
        let mut keys: Vec<StepKey> = self.h.keys().copied().collect();
        keys.sort();
        keys
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MismatchKind {
    State { expected: String, actual: String },
    Head { expected: i64, actual: i64 },
    Cell { index: i64, expected: String, actual: String },
    Halting { small_halted: bool, big_halted: bool },
    /// The big machine changed a cell outside the block being simulated.
    Locality { index: i64 },
    /// An isolated `((q, d), σ)` case did not behave as required.
    StepCase {
        state: String,
        dir: Direction,
        symbol: String,
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MismatchReport {
    /// Small-machine step at which the check failed.
    pub n: u64,
    /// Big-machine step the check was made at.
    pub f_n: u64,
    pub kind: MismatchKind,
}

impl fmt::Display for MismatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mismatch at n={}, f(n)={}: ", self.n, self.f_n)?;
        match &self.kind {
            MismatchKind::State { expected, actual } => {
                write!(f, "state expected {expected}, actual {actual}")
            }
            MismatchKind::Head { expected, actual } => {
                write!(f, "head expected {expected}, actual {actual}")
            }
            MismatchKind::Cell {
                index,
                expected,
                actual,
            } => write!(f, "cell {index} expected {expected}, actual {actual}"),
            MismatchKind::Halting {
                small_halted,
                big_halted,
            } => write!(f, "halting differs: small halted {small_halted}, big halted {big_halted}"),
            MismatchKind::Locality { index } => {
                write!(f, "cell {index} modified outside the simulated block")
            }
            MismatchKind::StepCase {
                state,
                dir,
                symbol,
                detail,
            } => write!(f, "case ({state}, {dir:?}) reading {symbol}: {detail}"),
        }
    }
}

fn mismatch(n: u64, f_n: u64, kind: MismatchKind) -> SimError {
    SimError::Mismatch(Box::new(MismatchReport { n, f_n, kind }))
}

/// One small-machine step as seen by the checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub state: StateId,
    pub dir: Direction,
    pub read: Symbol,
    pub head: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TranscriptStatus {
    /// Both machines still running and matched at every `n <= steps`.
    Verified { steps: u64 },
    /// Both halted, the small one at step `steps`, the big one at `f(steps)`.
    BothHalted { steps: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationTranscript {
    /// `records[n]` describes small step `n` (key, read symbol, head).
    pub records: Vec<StepRecord>,
    /// `f[n]` for every verified `n`, starting with `f[0] = 0`.
    pub f: Vec<u64>,
    pub status: TranscriptStatus,
}

impl SimulationTranscript {
    pub fn verified_steps(&self) -> u64 {
        (self.f.len() - 1) as u64
    }
}

/// `f(n)` from a transcript.
pub fn time_scale(transcript: &SimulationTranscript, n: u64) -> Result<u64, SimError> {
    transcript
        .f
        .get(n as usize)
        .copied()
        .ok_or(SimError::OutOfRange {
            n,
            verified: transcript.verified_steps(),
        })
}

/// Full check: isolated step cases first, then `n_max` lockstep steps.
pub fn verify_simulation(
    big: &MachineTable,
    small: &MachineTable,
    enc: &Encoding,
    n_max: u64,
) -> Result<SimulationTranscript, SimError> {
    let map = SimulationMap::erdos(small, big, enc.clone())?;
    verify_step_cases(big, small, &map)?;
    verify_lockstep(big, small, &map, n_max)
}

/// Runs the big machine on each defined case with the encoded symbol under
/// its head and checks the result after exactly `g` steps.
pub fn verify_step_cases(
    big: &MachineTable,
    small: &MachineTable,
    map: &SimulationMap,
) -> Result<(), SimError> {
    for key in map.keys() {
        for sigma in small.symbols() {
            let Some(cost) = map.costs.get(key, sigma) else {
                continue;
            };
            let fail = |detail: String| {
                mismatch(
                    0,
                    0,
                    MismatchKind::StepCase {
                        state: small.state_name(key.state).to_string(),
                        dir: key.dir,
                        symbol: small.symbol_label(sigma).to_string(),
                        detail,
                    },
                )
            };
            let mut tape = Tape::new(big.blank());
            let [x, y] = map.enc.encode(sigma);
            tape.set(0, x);
            tape.set(1, y);
            let mut b = Configuration {
                state: map.state_for(small, key)?,
                head: head_map(0, key.dir),
                tape,
                step: 0,
                halted: false,
            };
            for j in 0..cost {
                if b.halted {
                    return Err(fail(format!("halted after {j} of {cost} steps")));
                }
                if !(0..=1).contains(&b.head) {
                    return Err(fail(format!("step {j} reads cell {} outside its block", b.head)));
                }
                b.step_unchecked(big);
            }
            match small.cell(key.state, sigma) {
                Transition::Halt => {
                    if !b.halted {
                        return Err(fail(format!("did not halt after {cost} steps")));
                    }
                }
                Transition::Move { write, dir, next } => {
                    if b.halted {
                        return Err(fail("halted, but the small machine does not".into()));
                    }
                    let next_key = StepKey { state: next, dir };
                    let expected_state = map
                        .state_for(small, next_key)
                        .map_err(|e| fail(format!("leads to unmapped key: {e}")))?;
                    if b.state != expected_state {
                        return Err(fail(format!(
                            "ends in {}, expected {}",
                            big.state_name(b.state),
                            big.state_name(expected_state)
                        )));
                    }
                    let expected_head = head_map(dir.offset(), dir);
                    if b.head != expected_head {
                        return Err(fail(format!(
                            "head ends at {}, expected {expected_head}",
                            b.head
                        )));
                    }
                    let block = [b.tape.get(0), b.tape.get(1)];
                    if block != map.enc.encode(write) {
                        return Err(fail(format!(
                            "block holds {}{}, expected encoding of {}",
                            big.symbol_label(block[0]),
                            big.symbol_label(block[1]),
                            small.symbol_label(write)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn compare_tapes(
    big: &MachineTable,
    small: &MachineTable,
    enc: &Encoding,
    b: &Configuration,
    s: &Configuration,
    n: u64,
    f_n: u64,
) -> Result<(), SimError> {
    let (lo, hi) = s.tape.extent();
    let (blo, bhi) = b.tape.extent();
    let from = (lo - 1).min(blo.div_euclid(2));
    let to = (hi + 1).max(bhi.div_euclid(2));
    for i in from..=to {
        compare_block(big, small, enc, b, s, i, n, f_n)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn compare_block(
    big: &MachineTable,
    small: &MachineTable,
    enc: &Encoding,
    b: &Configuration,
    s: &Configuration,
    i: i64,
    n: u64,
    f_n: u64,
) -> Result<(), SimError> {
    let expected = enc.encode(s.tape.get(i));
    for (off, want) in expected.iter().enumerate() {
        let idx = 2 * i + off as i64;
        let got = b.tape.get(idx);
        if got != *want {
            return Err(mismatch(
                n,
                f_n,
                MismatchKind::Cell {
                    index: idx,
                    expected: format!(
                        "{} (encoding {} of small cell {i})",
                        big.symbol_label(*want),
                        small.symbol_label(s.tape.get(i))
                    ),
                    actual: big.symbol_label(got).to_string(),
                },
            ));
        }
    }
    Ok(())
}

/// Runs both machines from blank tapes and checks state, head, tape and
/// halting agreement at every `f(n)` for `n <= n_max`.
///
/// After each small step only the block under the small head is compared,
/// together with a check that the big machine changed nothing outside that
/// block; the whole tape is compared at `n = 0`, at every power of two and at
/// the end.
pub fn verify_lockstep(
    big: &MachineTable,
    small: &MachineTable,
    map: &SimulationMap,
    n_max: u64,
) -> Result<SimulationTranscript, SimError> {
    let enc = &map.enc;
    let mut s = small.initial_configuration();
    let mut b = big.initial_configuration();
    let mut dir = Direction::R;
    let mut f_n = 0u64;
    let mut records = Vec::with_capacity(n_max.min(1 << 24) as usize);
    let mut f = Vec::with_capacity(n_max.min(1 << 24) as usize + 1);
    f.push(0);

    let expected = map.state_for(small, StepKey { state: s.state, dir })?;
    if b.state != expected {
        return Err(mismatch(
            0,
            0,
            MismatchKind::State {
                expected: big.state_name(expected).into(),
                actual: big.state_name(b.state).into(),
            },
        ));
    }
    compare_tapes(big, small, enc, &b, &s, 0, 0)?;

    for n in 0..n_max {
        let key = StepKey { state: s.state, dir };
        let sigma = s.read();
        let i = s.head;
        let cost = step_cost(&map.costs, small, key, sigma)?;
        records.push(StepRecord {
            state: key.state,
            dir,
            read: sigma,
            head: i,
        });
        let t = small.cell(s.state, sigma);
        s.step_unchecked(small);

        for j in 0..cost as u64 {
            if b.halted {
                return Err(mismatch(
                    n + 1,
                    f_n + j,
                    MismatchKind::Halting {
                        small_halted: false,
                        big_halted: true,
                    },
                ));
            }
            let pos = b.head;
            let before = b.tape.get(pos);
            let status = b.step_unchecked(big);
            if status == StepStatus::Moved
                && pos != 2 * i
                && pos != 2 * i + 1
                && b.tape.get(pos) != before
            {
                return Err(mismatch(n + 1, f_n + j + 1, MismatchKind::Locality { index: pos }));
            }
        }
        f_n += cost as u64;
        f.push(f_n);

        if s.halted || b.halted {
            if s.halted && b.halted {
                return Ok(SimulationTranscript {
                    records,
                    f,
                    status: TranscriptStatus::BothHalted { steps: n + 1 },
                });
            }
            return Err(mismatch(
                n + 1,
                f_n,
                MismatchKind::Halting {
                    small_halted: s.halted,
                    big_halted: b.halted,
                },
            ));
        }
        if let Transition::Move { dir: d, .. } = t {
            dir = d;
        }

        let expected = map.state_for(small, StepKey { state: s.state, dir })?;
        if b.state != expected {
            return Err(mismatch(
                n + 1,
                f_n,
                MismatchKind::State {
                    expected: big.state_name(expected).into(),
                    actual: big.state_name(b.state).into(),
                },
            ));
        }
        let expected_head = head_map(s.head, dir);
        if b.head != expected_head {
            return Err(mismatch(
                n + 1,
                f_n,
                MismatchKind::Head {
                    expected: expected_head,
                    actual: b.head,
                },
            ));
        }
        compare_block(big, small, enc, &b, &s, i, n + 1, f_n)?;
        let m = n + 1;
        if m.is_power_of_two() || m == n_max {
            compare_tapes(big, small, enc, &b, &s, m, f_n)?;
        }
    }
    Ok(SimulationTranscript {
        records,
        f,
        status: TranscriptStatus::Verified { steps: n_max },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::{builtin_m152, builtin_m54};

    fn setup() -> (MachineTable, MachineTable, Encoding) {
        let small = builtin_m54();
        let big = builtin_m152();
        let enc = Encoding::standard(&small, &big).unwrap();
        (big, small, enc)
    }

    fn key(m: &MachineTable, q: &str, d: Direction) -> StepKey {
        StepKey {
            state: m.state_by_name(q).unwrap(),
            dir: d,
        }
    }

    #[test]
    fn h_entries() {
        assert_eq!(state_map_h("mul2_G", Direction::R).unwrap(), "mul2_G_sim");
        assert_eq!(state_map_h("rewind", Direction::R).unwrap(), "rewind_b");
        assert_eq!(state_map_h("rewind", Direction::L).unwrap(), "rewind_sim");
        assert_eq!(state_map_h("check_halt", Direction::L).unwrap(), "check_halt_sim");
        assert!(matches!(
            state_map_h("mul2_F", Direction::L),
            Err(SimError::UnknownKey { .. })
        ));
    }

    #[test]
    fn head_map_values() {
        assert_eq!(head_map(0, Direction::R), 0);
        assert_eq!(head_map(0, Direction::L), 1);
        assert_eq!(head_map(-1, Direction::L), -1);
    }

    #[test]
    fn step_costs() {
        let (_, small, _) = setup();
        let g = StepCostTable::erdos(&small).unwrap();
        assert_eq!(g.len(), 21);
        let sym = |l| small.symbol_by_label(l).unwrap();
        assert_eq!(
            step_cost(&g, &small, key(&small, "mul2_G", Direction::R), sym("1")).unwrap(),
            4
        );
        assert_eq!(
            step_cost(&g, &small, key(&small, "check_halt", Direction::L), sym("#")).unwrap(),
            1
        );
        assert!(matches!(
            step_cost(&g, &small, key(&small, "rewind", Direction::R), sym("0")),
            Err(SimError::UndefinedCost { .. })
        ));
    }

    #[test]
    fn encoding_checks() {
        let (big, small, enc) = setup();
        assert_eq!(enc.encode(small.blank()), [big.blank(), big.blank()]);
        let bad = Encoding::from_labels(
            &small,
            &big,
            &[("#", ["b", "b"]), ("0", ["b", "a"]), ("1", ["b", "a"]), ("2", ["a", "a"])],
        );
        assert!(matches!(bad, Err(SimError::Setup(_))));
        let partial = Encoding::from_labels(&small, &big, &[("#", ["b", "b"])]);
        assert!(matches!(partial, Err(SimError::Setup(_))));
    }

    #[test]
    fn step_cases_hold() {
        let (big, small, enc) = setup();
        let map = SimulationMap::erdos(&small, &big, enc).unwrap();
        verify_step_cases(&big, &small, &map).unwrap();
    }

    #[test]
    fn zero_steps() {
        let (big, small, enc) = setup();
        let t = verify_simulation(&big, &small, &enc, 0).unwrap();
        assert_eq!(time_scale(&t, 0).unwrap(), 0);
        assert_eq!(t.status, TranscriptStatus::Verified { steps: 0 });
        assert!(matches!(time_scale(&t, 1), Err(SimError::OutOfRange { .. })));
    }

    #[test]
    fn example_checkpoints() {
        let (big, small, enc) = setup();
        let t = verify_simulation(&big, &small, &enc, 333).unwrap();
        let f = |n| time_scale(&t, n).unwrap();
        assert_eq!(
            [f(5), f(9), f(13), f(16), f(17), f(23), f(63), f(71), f(79), f(333)],
            [10, 19, 29, 35, 38, 51, 143, 165, 180, 741]
        );
    }

    #[test]
    fn f_increments_stay_in_one_to_four() {
        let (big, small, enc) = setup();
        let t = verify_simulation(&big, &small, &enc, 5000).unwrap();
        assert!(t.f.windows(2).all(|w| (1..=4).contains(&(w[1] - w[0]))));
    }

    #[test]
    fn halting_machines_stay_in_sync() {
        // Force a halt on the first counter read: check_halt reading # halts.
        let (big, small, enc) = setup();
        let small_h = small
            .with_cell(
                small.state_by_name("check_halt").unwrap(),
                small.symbol_by_label("#").unwrap(),
                Transition::Halt,
            )
            .unwrap();
        let big_h = big
            .with_cell(
                big.state_by_name("check_halt_sim").unwrap(),
                big.symbol_by_label("b").unwrap(),
                Transition::Halt,
            )
            .unwrap();
        // The isolated cases no longer match (the halting cost differs), but
        // the lockstep run shows both halting together.
        let map = SimulationMap::erdos(&small_h, &big_h, enc).unwrap();
        let t = verify_lockstep(&big_h, &small_h, &map, 100).unwrap();
        assert_eq!(t.status, TranscriptStatus::BothHalted { steps: 5 });
        assert_eq!(time_scale(&t, 5).unwrap(), t.f[4] + 1);
    }

    #[test]
    fn corrupted_cell_is_reported_with_location() {
        let (big, small, enc) = setup();
        let bad = big
            .with_cell(
                big.state_by_name("find_2_a").unwrap(),
                big.symbol_by_label("a").unwrap(),
                Transition::Move {
                    write: big.symbol_by_label("b").unwrap(),
                    dir: Direction::L,
                    next: big.state_by_name("rewind_sim").unwrap(),
                },
            )
            .unwrap();
        let map = SimulationMap::erdos(&small, &bad, enc).unwrap();
        match verify_lockstep(&bad, &small, &map, 1000) {
            Err(SimError::Mismatch(r)) => {
                assert!(matches!(r.kind, MismatchKind::Cell { .. }), "{r}");
                assert!(r.to_string().contains("expected"));
            }
            other => panic!("{other:?}"),
        }
    }
}
