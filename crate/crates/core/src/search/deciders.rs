//! Non-halting deciders with replayable certificates.
//!
//! One simulation pass drives all detectors:
//!
//! * cycler: Brent-style exact repetition of `(state, head, tape)`;
//! * translated cycler: two record-breaking visits to new territory in the
//!   same state whose surroundings match after shifting;
//! * escape: at a record, the machine reading blanks keeps moving outward
//!   through a loop of states.
//!
//! Machines the simulation leaves open go to backward reasoning, then to an
//! n-gram closed position set (an over-approximation tracking the state, the
//! head symbol, `n` cells either side, and every `n`-gram ever seen on each
//! side), then to finite automata reduction.
//!
//! Certificates are checked by [`validate_certificate`], which replays the
//! machine with the core engine rather than the search loop.

use std::collections::VecDeque;

use serde::Serialize;

use super::far;
use crate::tm::{Configuration, DeciderTag, Direction, MachineTable, StateId, Symbol, Tape, Transition};

/// Evidence that a machine never halts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decider", rename_all = "kebab-case")]
pub enum Certificate {
    /// No Halt cell belongs to a state reachable from the initial state.
    UnreachableHalt,
    /// The configurations at `t1` and `t2` are identical.
    Cycler { t1: u64, t2: u64 },
    /// At `t1` and `t2` the head is at a record in direction `dir`, in the
    /// same state, and the tape swept between them matches after shifting.
    TranslatedCycler { t1: u64, t2: u64, dir: Direction },
    /// At `t` only blanks lie ahead in direction `dir`, and reading blanks
    /// the machine cycles through states that all move in `dir`.
    Escape { t: u64, dir: Direction },
    /// Every chain of transitions leading back from a Halt cell dies out
    /// within `depth` steps without meeting the blank start.
    BackwardReasoning { depth: u32 },
    /// The `n`-gram abstraction closes without reaching a Halt cell.
    NGramCps { n: u32 },
    /// A regular invariant built from the DFA `dfa` (`dfa[a * k + s]`) read
    /// over the left tape, or over the right tape when `mirrored`.
    AutomataReduction { dfa: Vec<usize>, mirrored: bool },
}

impl Certificate {
    pub fn tag(&self) -> DeciderTag {
        match self {
            Certificate::UnreachableHalt => DeciderTag::UnreachableHalt,
            Certificate::Cycler { .. } => DeciderTag::Cycler,
            Certificate::TranslatedCycler { .. } => DeciderTag::TranslatedCycler,
            Certificate::Escape { .. } => DeciderTag::Escape,
            Certificate::BackwardReasoning { .. } => DeciderTag::BackwardReasoning,
            Certificate::NGramCps { .. } => DeciderTag::NGramCps,
            Certificate::AutomataReduction { .. } => DeciderTag::AutomataReduction,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Detectors {
    pub cycler: bool,
    pub translated: bool,
    pub escape: bool,
}

impl Detectors {
    pub const ALL: Detectors = Detectors {
        cycler: true,
        translated: true,
        escape: true,
    };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Trajectory {
    /// A Halt cell was executed; `steps` includes it.
    Halted { steps: u64 },
    /// The cell `(state, symbol)` is unassigned and was reached after `step`
    /// steps.
    Undefined { state: StateId, symbol: Symbol, step: u64 },
    Proven(Certificate),
    Budget,
}

/// Tape snapshots kept per state and side for the translated-cycler check.
const MAX_RECORDS: usize = 128;

struct Record {
    t: u64,
    head: i64,
    tape: Tape,
}

/// Whether some Halt or unassigned cell belongs to a state reachable from
/// `init` in the transition graph.
pub(crate) fn halt_reachable(cells: &[Option<Transition>], k: usize, init: StateId) -> bool {
    let n = cells.len() / k;
    let mut seen = vec![false; n];
    let mut stack = vec![init.index()];
    seen[init.index()] = true;
    while let Some(q) = stack.pop() {
        for c in &cells[q * k..(q + 1) * k] {
            match c {
                None | Some(Transition::Halt) => return true,
                Some(Transition::Move { next, .. }) => {
                    if !seen[next.index()] {
                        seen[next.index()] = true;
                        stack.push(next.index());
                    }
                }
            }
        }
    }
    false
}

fn escapes(cells: &[Option<Transition>], k: usize, blank: Symbol, from: StateId, dir: Direction) -> bool {
    let n = cells.len() / k;
    let mut seen = vec![false; n];
    let mut q = from;
    loop {
        if seen[q.index()] {
            return true;
        }
        seen[q.index()] = true;
        match cells[q.index() * k + blank.index()] {
            Some(Transition::Move { dir: d, next, .. }) if d == dir => q = next,
            _ => return false,
        }
    }
}

/// Looks for an earlier record on the same side matching the current one.
/// `records` is ordered by time; `heads[t]` is the head position at `t`.
fn match_record(
    records: &VecDeque<Record>,
    heads: &[i64],
    t2: u64,
    h2: i64,
    tape: &Tape,
    dir: Direction,
) -> Option<u64> {
    // Running extreme of the head over [r.t, t2] on the side away from `dir`.
    let mut back = h2;
    let mut cursor = t2 as usize;
    for r in records.iter().rev() {
        while cursor > r.t as usize {
            cursor -= 1;
            back = match dir {
                Direction::R => back.min(heads[cursor]),
                Direction::L => back.max(heads[cursor]),
            };
        }
        let shift = h2 - r.head;
        let matches = match dir {
            Direction::R => (back..=r.head).all(|i| r.tape.get(i) == tape.get(i + shift)),
            Direction::L => (r.head..=back).all(|i| r.tape.get(i) == tape.get(i + shift)),
        };
        if matches {
            return Some(r.t);
        }
    }
    None
}

/// Simulates from a blank tape, running the enabled detectors after every
/// step.
pub(crate) fn analyze(
    cells: &[Option<Transition>],
    k: usize,
    blank: Symbol,
    init: StateId,
    budget: u64,
    det: Detectors,
) -> Trajectory {
    let n = cells.len() / k;
    let mut tape = Tape::new(blank);
    let mut state = init;
    let mut head = 0i64;
    let mut t = 0u64;

    let mut saved: Option<(u64, StateId, i64, Tape)> = None;
    let mut next_save = 0u64;

    let mut max_head = 0i64;
    let mut min_head = 0i64;
    let mut heads: Vec<i64> = Vec::new();
    let mut right: Vec<VecDeque<Record>> = (0..n).map(|_| VecDeque::new()).collect();
    let mut left: Vec<VecDeque<Record>> = (0..n).map(|_| VecDeque::new()).collect();

    loop {
        let right_record = t == 0 || head > max_head;
        let left_record = t == 0 || head < min_head;
        max_head = max_head.max(head);
        min_head = min_head.min(head);

        if det.escape {
            for (is_record, dir) in [(right_record, Direction::R), (left_record, Direction::L)] {
                if is_record && escapes(cells, k, blank, state, dir) {
                    return Trajectory::Proven(Certificate::Escape { t, dir });
                }
            }
        }

        if det.translated {
            heads.push(head);
            for (is_record, dir, log) in [
                (right_record, Direction::R, &mut right),
                (left_record, Direction::L, &mut left),
            ] {
                if !is_record {
                    continue;
                }
                let log = &mut log[state.index()];
                if let Some(t1) = match_record(log, &heads, t, head, &tape, dir) {
                    return Trajectory::Proven(Certificate::TranslatedCycler { t1, t2: t, dir });
                }
                if log.len() == MAX_RECORDS {
                    log.pop_front();
                }
                log.push_back(Record {
                    t,
                    head,
                    tape: tape.clone(),
                });
            }
        }

        if det.cycler {
            if let Some((t1, q, h, ref saved_tape)) = saved {
                if q == state && h == head && saved_tape.same_content(&tape) {
                    return Trajectory::Proven(Certificate::Cycler { t1, t2: t });
                }
            }
            if t == next_save {
                saved = Some((t, state, head, tape.clone()));
                next_save = if t == 0 { 1 } else { t * 2 };
            }
        }

        if t == budget {
            return Trajectory::Budget;
        }
        let symbol = tape.get(head);
        match cells[state.index() * k + symbol.index()] {
            None => return Trajectory::Undefined { state, symbol, step: t },
            Some(Transition::Halt) => return Trajectory::Halted { steps: t + 1 },
            Some(Transition::Move { write, dir, next }) => {
                tape.set(head, write);
                head += dir.offset();
                tape.touch(head);
                state = next;
                t += 1;
            }
        }
    }
}

/// Limits for the backward search.
pub const BACKWARD_DEPTH: u32 = 40;
pub(crate) const BACKWARD_NODES: usize = 20_000;

/// Searches backwards from every Halt or unassigned cell. Returns the depth
/// at which all branches had died, or `None` if some branch reached `depth`,
/// exceeded `max_nodes`, or is consistent with the blank start.
pub(crate) fn backward_depth(
    cells: &[Option<Transition>],
    k: usize,
    blank: Symbol,
    init: StateId,
    depth: u32,
    max_nodes: usize,
) -> Option<u32> {
    let n = cells.len() / k;
    // preds[q]: (state, read, write, dir) of every transition entering q
    let mut preds: Vec<Vec<(StateId, Symbol, Symbol, Direction)>> = vec![Vec::new(); n];
    for (i, c) in cells.iter().enumerate() {
        if let Some(Transition::Move { write, dir, next }) = c {
            preds[next.index()].push((StateId((i / k) as u16), Symbol((i % k) as u8), *write, *dir));
        }
    }
    // (state, head, known cells, depth)
    type Node = (StateId, i64, Vec<(i64, Symbol)>, u32);
    let mut stack: Vec<Node> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, None | Some(Transition::Halt)))
        .map(|(i, _)| (StateId((i / k) as u16), 0, vec![(0, Symbol((i % k) as u8))], 0))
        .collect();
    let mut nodes = 0usize;
    let mut deepest = 0u32;
    while let Some((q, head, tape, d)) = stack.pop() {
        nodes += 1;
        deepest = deepest.max(d);
        if nodes > max_nodes || d >= depth {
            return None;
        }
        if q == init && tape.iter().all(|&(_, s)| s == blank) {
            return None;
        }
        for &(p, read, write, dir) in &preds[q.index()] {
            let prev = head - dir.offset();
            let slot = tape.iter().position(|&(c, _)| c == prev);
            if let Some(i) = slot {
                if tape[i].1 != write {
                    continue;
                }
            }
            let mut t = tape.clone();
            match slot {
                Some(i) => t[i].1 = read,
                None => t.push((prev, read)),
            }
            stack.push((p, prev, t, d + 1));
        }
    }
    Some(deepest + 1)
}

/// Largest `n` tried by [`decide_ngram_cps`].
pub const NGRAM_MAX: u32 = 8;
pub(crate) const NGRAM_CONFIGS: usize = 50_000;

/// Closes the `n`-gram abstraction. `true` means no Halt or unassigned cell
/// is reachable. Windows are packed base `k`, nearest cell least
/// significant.
pub(crate) fn ngram_closed(
    cells: &[Option<Transition>],
    k: usize,
    blank: Symbol,
    init: StateId,
    n: u32,
    max_configs: usize,
) -> bool {
    let k64 = k as u64;
    let Some(space) = k64.checked_pow(n).filter(|&s| s <= 1 << 20) else {
        return false;
    };
    let top = space / k64;
    let b = blank.0 as u64;
    let all_blank = (0..n).fold(0u64, |acc, _| acc * k64 + b);
    let mut left = vec![false; space as usize];
    let mut right = vec![false; space as usize];
    left[all_blank as usize] = true;
    right[all_blank as usize] = true;
    let mut seen = std::collections::HashSet::new();
    let mut configs = vec![(init.0, all_blank, blank.0, all_blank)];
    seen.insert(configs[0]);
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < configs.len() {
            let (q, l, sym, r) = configs[i];
            i += 1;
            let Some(Transition::Move { write, dir, next }) = cells[q as usize * k + sym as usize] else {
                return false;
            };
            let w = write.0 as u64;
            // The side we leave gains `w`; the side we enter yields its
            // nearest cell and pulls in any continuation seen there.
            let (from, to, from_set, to_set) = match dir {
                Direction::R => (l, r, &mut left, &mut right),
                Direction::L => (r, l, &mut right, &mut left),
            };
            let pushed = w + k64 * (from % top);
            if !from_set[pushed as usize] {
                from_set[pushed as usize] = true;
                changed = true;
            }
            let head = (to % k64) as u8;
            for x in 0..k64 {
                let pulled = to / k64 + x * top;
                if !to_set[pulled as usize] {
                    continue;
                }
                let c = match dir {
                    Direction::R => (next.0, pushed, head, pulled),
                    Direction::L => (next.0, pulled, head, pushed),
                };
                if seen.insert(c) {
                    configs.push(c);
                    changed = true;
                    if configs.len() > max_configs {
                        return false;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Largest DFA tried by automata reduction, and DFAs tried per size.
pub const FAR_MAX_STATES: usize = 5;
const FAR_DFAS_PER_SIZE: usize = 200_000;

fn decide_far_cells(cells: &[Option<Transition>], k: usize, blank: Symbol, init: StateId) -> Option<Certificate> {
    for mirrored in [false, true] {
        let c = if mirrored { far::mirrored(cells) } else { cells.to_vec() };
        for size in 1..=FAR_MAX_STATES {
            let mut limit = FAR_DFAS_PER_SIZE;
            if let Some(dfa) = far::search_dfas(size, k, blank, &mut limit, &mut |d| {
                far::far_closed(&c, k, blank, init, d)
            }) {
                return Some(Certificate::AutomataReduction { dfa, mirrored });
            }
        }
    }
    None
}

/// The deciders that do not need a simulation: backward reasoning, n-gram
/// CPS and automata reduction, cheapest first.
pub(crate) fn prove_without_simulation(
    cells: &[Option<Transition>],
    k: usize,
    blank: Symbol,
    init: StateId,
) -> Option<Certificate> {
    backward_depth(cells, k, blank, init, BACKWARD_DEPTH, BACKWARD_NODES)
        .map(|depth| Certificate::BackwardReasoning { depth })
        .or_else(|| {
            (1..=NGRAM_MAX)
                .find(|&n| ngram_closed(cells, k, blank, init, n, NGRAM_CONFIGS))
                .map(|n| Certificate::NGramCps { n })
        })
        .or_else(|| decide_far_cells(cells, k, blank, init))
}

fn defined_cells(m: &MachineTable) -> Vec<Option<Transition>> {
    m.cells().iter().copied().map(Some).collect()
}

fn run_detectors(m: &MachineTable, budget: u64, det: Detectors) -> Option<Certificate> {
    match analyze(&defined_cells(m), m.num_symbols(), m.blank(), m.init(), budget, det) {
        Trajectory::Proven(c) => Some(c),
        _ => None,
    }
}

pub fn decide_unreachable_halt(m: &MachineTable) -> Option<Certificate> {
    (!halt_reachable(&defined_cells(m), m.num_symbols(), m.init())).then_some(Certificate::UnreachableHalt)
}

/// Exact configuration repetition within `budget` steps.
pub fn decide_cycler(m: &MachineTable, budget: u64) -> Option<Certificate> {
    run_detectors(
        m,
        budget,
        Detectors {
            cycler: true,
            translated: false,
            escape: false,
        },
    )
}

/// Repetition up to a shift of the tape, detected at record positions.
pub fn decide_translated_cycler(m: &MachineTable, budget: u64) -> Option<Certificate> {
    run_detectors(
        m,
        budget,
        Detectors {
            cycler: false,
            translated: true,
            escape: false,
        },
    )
}

/// Backward search from the Halt cells, up to [`BACKWARD_DEPTH`] steps.
pub fn decide_backward(m: &MachineTable) -> Option<Certificate> {
    backward_depth(
        &defined_cells(m),
        m.num_symbols(),
        m.blank(),
        m.init(),
        BACKWARD_DEPTH,
        BACKWARD_NODES,
    )
    .map(|depth| Certificate::BackwardReasoning { depth })
}

/// Tries the `n`-gram abstraction for `n = 1 ..= NGRAM_MAX`.
pub fn decide_ngram_cps(m: &MachineTable) -> Option<Certificate> {
    let cells = defined_cells(m);
    (1..=NGRAM_MAX)
        .find(|&n| ngram_closed(&cells, m.num_symbols(), m.blank(), m.init(), n, NGRAM_CONFIGS))
        .map(|n| Certificate::NGramCps { n })
}

/// Automata reduction with DFAs of up to [`FAR_MAX_STATES`] states.
pub fn decide_automata_reduction(m: &MachineTable) -> Option<Certificate> {
    decide_far_cells(&defined_cells(m), m.num_symbols(), m.blank(), m.init())
}

pub fn decide_escape(m: &MachineTable, budget: u64) -> Option<Certificate> {
    run_detectors(
        m,
        budget,
        Detectors {
            cycler: false,
            translated: false,
            escape: true,
        },
    )
}

fn replay(m: &MachineTable, steps: u64) -> Result<Configuration, String> {
    let mut c = Configuration::new(m);
    c.run(m, steps);
    if c.halted {
        Err(format!("machine halts at step {}", c.step))
    } else {
        Ok(c)
    }
}

/// Replays the machine and checks that `cert` proves it never halts.
pub fn validate_certificate(m: &MachineTable, cert: &Certificate) -> Result<(), String> {
    match *cert {
        Certificate::UnreachableHalt => {
            let mut seen = vec![false; m.num_states()];
            let mut todo = vec![m.init()];
            while let Some(q) = todo.pop() {
                if std::mem::replace(&mut seen[q.index()], true) {
                    continue;
                }
                for s in m.symbols() {
                    match m.cell(q, s) {
                        Transition::Halt => {
                            return Err(format!("Halt cell reachable in {}", m.state_name(q)))
                        }
                        Transition::Move { next, .. } => todo.push(next),
                    }
                }
            }
            Ok(())
        }
        Certificate::Cycler { t1, t2 } => {
            if t1 >= t2 {
                return Err("t1 must precede t2".into());
            }
            let a = replay(m, t1)?;
            let mut b = a.clone();
            b.run(m, t2 - t1);
            if b.halted {
                return Err(format!("machine halts at step {}", b.step));
            }
            if a.state == b.state && a.head == b.head && a.tape.same_content(&b.tape) {
                Ok(())
            } else {
                Err(format!("configurations at {t1} and {t2} differ"))
            }
        }
        Certificate::TranslatedCycler { t1, t2, dir } => {
            if t1 >= t2 {
                return Err("t1 must precede t2".into());
            }
            let a = replay(m, t1)?;
            let mut b = a.clone();
            let mut back = a.head;
            while b.step < t2 {
                b.step(m).map_err(|e| e.to_string())?;
                if b.halted {
                    return Err(format!("machine halts at step {}", b.step));
                }
                back = match dir {
                    Direction::R => back.min(b.head),
                    Direction::L => back.max(b.head),
                };
            }
            if a.state != b.state {
                return Err("states differ".into());
            }
            let shift = b.head - a.head;
            if shift == 0 || (shift > 0) != (dir == Direction::R) {
                return Err("head did not advance in the certified direction".into());
            }
            let blank = m.blank();
            let ahead_blank = |c: &Configuration| {
                let (lo, hi) = c.tape.extent();
                match dir {
                    Direction::R => (c.head..=hi).all(|i| c.tape.get(i) == blank),
                    Direction::L => (lo..=c.head).all(|i| c.tape.get(i) == blank),
                }
            };
            if !ahead_blank(&a) || !ahead_blank(&b) {
                return Err("tape ahead of the head is not blank".into());
            }
            let (lo, hi) = match dir {
                Direction::R => (back, a.head),
                Direction::L => (a.head, back),
            };
            if (lo..=hi).all(|i| a.tape.get(i) == b.tape.get(i + shift)) {
                Ok(())
            } else {
                Err("swept segments differ".into())
            }
        }
        Certificate::Escape { t, dir } => {
            let c = replay(m, t)?;
            let (lo, hi) = c.tape.extent();
            let blank = m.blank();
            let clear = match dir {
                Direction::R => (c.head..=hi).all(|i| c.tape.get(i) == blank),
                Direction::L => (lo..=c.head).all(|i| c.tape.get(i) == blank),
            };
            if !clear {
                return Err("tape ahead of the head is not blank".into());
            }
            if escapes(&defined_cells(m), m.num_symbols(), blank, c.state, dir) {
                Ok(())
            } else {
                Err("blank-reading chain does not loop outward".into())
            }
        }
        Certificate::BackwardReasoning { depth } => {
            let cells = defined_cells(m);
            match backward_depth(&cells, m.num_symbols(), m.blank(), m.init(), depth, usize::MAX) {
                Some(_) => Ok(()),
                None => Err(format!("backward search does not close within depth {depth}")),
            }
        }
        Certificate::NGramCps { n } => {
            let cells = defined_cells(m);
            if ngram_closed(&cells, m.num_symbols(), m.blank(), m.init(), n, usize::MAX) {
                Ok(())
            } else {
                Err(format!("{n}-gram abstraction reaches a Halt cell"))
            }
        }
        Certificate::AutomataReduction { ref dfa, mirrored } => {
            let k = m.num_symbols();
            let b = m.blank().index();
            if dfa.is_empty() || dfa.len() % k != 0 || dfa[b] != 0 {
                return Err("malformed DFA".into());
            }
            if dfa.iter().any(|&t| t >= dfa.len() / k) {
                return Err("DFA transition out of range".into());
            }
            let cells = defined_cells(m);
            let cells = if mirrored { far::mirrored(&cells) } else { cells };
            if far::far_closed(&cells, k, m.blank(), m.init(), dfa) {
                Ok(())
            } else {
                Err("automaton does not give a closed non-halting language".into())
            }
        }
    }
}

/// What enumeration concluded about one machine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    Halts { steps: u64 },
    NonHalt { decider: DeciderTag },
    Undecided { budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub classification: Classification,
    pub certificate: Option<Certificate>,
}

/// Static check, then one simulation pass with all detectors.
pub fn classify(m: &MachineTable, budget: u64) -> Verdict {
    let cells = defined_cells(m);
    if !halt_reachable(&cells, m.num_symbols(), m.init()) {
        return Verdict {
            classification: Classification::NonHalt {
                decider: DeciderTag::UnreachableHalt,
            },
            certificate: Some(Certificate::UnreachableHalt),
        };
    }
    match analyze(&cells, m.num_symbols(), m.blank(), m.init(), budget, Detectors::ALL) {
        Trajectory::Halted { steps } => Verdict {
            classification: Classification::Halts { steps },
            certificate: None,
        },
        Trajectory::Proven(c) => Verdict {
            classification: Classification::NonHalt { decider: c.tag() },
            certificate: Some(c),
        },
        Trajectory::Budget | Trajectory::Undefined { .. } => match prove_without_simulation(
            &cells,
            m.num_symbols(),
            m.blank(),
            m.init(),
        ) {
            Some(c) => Verdict {
                classification: Classification::NonHalt { decider: c.tag() },
                certificate: Some(c),
            },
            None => Verdict {
                classification: Classification::Undecided { budget },
                certificate: None,
            },
        },
    }
}
