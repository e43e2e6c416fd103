//! Enumeration of `TM(n, k)` from a blank tape.
//!
//! Two spaces are offered. [`SpaceMode::Raw`] walks every one of the
//! `(2nk + 1)^(nk)` tables. [`SpaceMode::TreeNormalForm`] grows tables while
//! simulating: a cell is only assigned when first reached, new states and
//! symbols are introduced in first-use order, and the very first move goes
//! right. Each tree leaf stands for every completion of its unassigned cells.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::deciders::{analyze, halt_reachable, prove_without_simulation, validate_certificate, Certificate, Detectors, Trajectory};
use crate::machines::to_compact;
use crate::tm::{DeciderTag, Direction, MachineTable, StateId, Symbol, Transition};

/// Candidate count above which enumeration is refused.
pub const SPACE_LIMIT: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceMode {
    Raw,
    TreeNormalForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search space of about {candidates} machines exceeds the limit of {limit}")]
    SpaceTooLarge { candidates: u128, limit: u128 },
    #[error("unsupported shape: {0}")]
    Shape(String),
    #[error("certificate for {machine} did not revalidate: {reason}")]
    CertificateRejected { machine: String, reason: String },
    #[error("{machine} was classified as halting after {claimed} steps but replays to {actual:?}")]
    HaltReplayMismatch {
        machine: String,
        claimed: u64,
        actual: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub n: usize,
    pub k: usize,
    pub budget: u64,
    pub mode: SpaceMode,
    /// Replay every halting machine and re-check every certificate.
    pub revalidate: bool,
}

impl EnumerationOptions {
    pub fn new(n: usize, k: usize, budget: u64) -> Self {
        EnumerationOptions {
            n,
            k,
            budget,
            mode: SpaceMode::Raw,
            revalidate: true,
        }
    }
}

/// Champions listed in a summary; ties beyond this are only counted.
const MAX_CHAMPIONS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationSummary {
    pub n: usize,
    pub k: usize,
    pub budget: u64,
    pub mode: SpaceMode,
    pub machines: u64,
    pub halting: u64,
    pub non_halting: BTreeMap<DeciderTag, u64>,
    /// Longest halting run, counting the Halt step.
    pub max_steps: Option<u64>,
    pub champion_count: u64,
    /// Machines attaining `max_steps`, in compact form, sorted.
    pub champions: Vec<String>,
    /// Machines neither halting nor proven within the budget, sorted.
    pub undecided: Vec<String>,
}

impl EnumerationSummary {
    fn empty(o: &EnumerationOptions) -> Self {
        EnumerationSummary {
            n: o.n,
            k: o.k,
            budget: o.budget,
            mode: o.mode,
            machines: 0,
            halting: 0,
            non_halting: BTreeMap::new(),
            max_steps: None,
            champion_count: 0,
            champions: Vec::new(),
            undecided: Vec::new(),
        }
    }

    /// Associative, and commutative up to the final sort.
    fn merge(mut self, other: Self) -> Self {
        self.machines += other.machines;
        self.halting += other.halting;
        for (tag, c) in other.non_halting {
            *self.non_halting.entry(tag).or_default() += c;
        }
        match self.max_steps.cmp(&other.max_steps) {
            std::cmp::Ordering::Less => {
                self.max_steps = other.max_steps;
                self.champion_count = other.champion_count;
                self.champions = other.champions;
            }
            std::cmp::Ordering::Equal => {
                self.champion_count += other.champion_count;
                self.champions.extend(other.champions);
                self.champions.truncate(MAX_CHAMPIONS);
            }
            std::cmp::Ordering::Greater => {}
        }
        self.undecided.extend(other.undecided);
        self
    }

    fn finish(mut self) -> Self {
        self.champions.sort();
        self.undecided.sort();
        self
    }

    pub fn non_halting_total(&self) -> u64 {
        self.non_halting.values().sum()
    }

    /// The maximum is a busy beaver value only when nothing is undecided.
    pub fn confirmed(&self) -> bool {
        self.undecided.is_empty()
    }

    fn add_halting(&mut self, steps: u64, machine: impl FnOnce() -> String) {
        self.machines += 1;
        self.halting += 1;
        match self.max_steps.cmp(&Some(steps)) {
            std::cmp::Ordering::Less => {
                self.max_steps = Some(steps);
                self.champion_count = 1;
                self.champions = vec![machine()];
            }
            std::cmp::Ordering::Equal => {
                self.champion_count += 1;
                if self.champions.len() < MAX_CHAMPIONS {
                    self.champions.push(machine());
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }

    fn add_non_halting(&mut self, tag: DeciderTag) {
        self.machines += 1;
        *self.non_halting.entry(tag).or_default() += 1;
    }

    fn add_undecided(&mut self, machine: String) {
        self.machines += 1;
        self.undecided.push(machine);
    }
}

/// `(2nk + 1)^(nk)`, saturating.
pub fn raw_space_size(n: usize, k: usize) -> u128 {
    let base = (2 * n * k + 1) as u128;
    u32::try_from(n * k)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .unwrap_or(u128::MAX)
}

/// Rough size of the tree-normal-form space: the raw space divided by the
/// relabelings of non-initial states and non-blank symbols and by the
/// mirror image.
pub fn reduced_space_estimate(n: usize, k: usize) -> u128 {
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    raw_space_size(n, k) / (fact(n - 1) * fact(k - 1) * 2)
}

fn check_shape(o: &EnumerationOptions) -> Result<(), SearchError> {
    if o.n == 0 || o.n > 26 {
        return Err(SearchError::Shape(format!("{} states (1..=26 supported)", o.n)));
    }
    if o.k < 2 || o.k > 10 {
        return Err(SearchError::Shape(format!("{} symbols (2..=10 supported)", o.k)));
    }
    let candidates = match o.mode {
        SpaceMode::Raw => raw_space_size(o.n, o.k),
        SpaceMode::TreeNormalForm => reduced_space_estimate(o.n, o.k),
    };
    if candidates > SPACE_LIMIT {
        return Err(SearchError::SpaceTooLarge {
            candidates,
            limit: SPACE_LIMIT,
        });
    }
    Ok(())
}

/// Unassigned cells become Halt; they are never reached by the run that
/// classified the machine.
fn materialize(cells: &[Option<Transition>], n: usize, k: usize) -> MachineTable {
    let full = cells.iter().map(|c| c.unwrap_or(Transition::Halt)).collect();
    MachineTable::with_default_names(n, k, full).expect("enumerated tables are valid")
}

fn compact(cells: &[Option<Transition>], n: usize, k: usize) -> String {
    to_compact(&materialize(cells, n, k)).expect("shape checked")
}

/// The raw table with index `i`: cell `j` is base-`(2nk+1)` digit `j`, where
/// digit 0 is Halt and `v > 0` encodes write `(v-1) % k`, direction
/// `((v-1) / k) % 2` (0 = L) and next state `(v-1) / 2k`.
pub fn raw_table(n: usize, k: usize, mut i: u64) -> Vec<Transition> {
    let base = (2 * n * k + 1) as u64;
    (0..n * k)
        .map(|_| {
            let v = (i % base) as usize;
            i /= base;
            if v == 0 {
                Transition::Halt
            } else {
                let v = v - 1;
                Transition::Move {
                    write: Symbol((v % k) as u8),
                    dir: if (v / k).is_multiple_of(2) { Direction::L } else { Direction::R },
                    next: StateId((v / (2 * k)) as u16),
                }
            }
        })
        .collect()
}

fn classify_leaf(
    cells: &[Option<Transition>],
    o: &EnumerationOptions,
    acc: &mut EnumerationSummary,
) -> Result<Option<(StateId, Symbol, u64)>, SearchError> {
    let (n, k) = (o.n, o.k);
    let reject = |reason: String| SearchError::CertificateRejected {
        machine: compact(cells, n, k),
        reason,
    };
    if !halt_reachable(cells, k, StateId(0)) {
        if o.revalidate {
            validate_certificate(&materialize(cells, n, k), &Certificate::UnreachableHalt)
                .map_err(reject)?;
        }
        acc.add_non_halting(DeciderTag::UnreachableHalt);
        return Ok(None);
    }
    match analyze(cells, k, Symbol(0), StateId(0), o.budget, Detectors::ALL) {
        Trajectory::Halted { steps } => {
            record_halt(cells, o, steps, acc)?;
            Ok(None)
        }
        Trajectory::Proven(cert) => {
            if o.revalidate {
                validate_certificate(&materialize(cells, n, k), &cert).map_err(reject)?;
            }
            acc.add_non_halting(cert.tag());
            Ok(None)
        }
        Trajectory::Budget => {
            let cert = prove_without_simulation(cells, k, Symbol(0), StateId(0));
            match cert {
                Some(cert) => {
                    if o.revalidate {
                        validate_certificate(&materialize(cells, n, k), &cert).map_err(reject)?;
                    }
                    acc.add_non_halting(cert.tag());
                }
                None => acc.add_undecided(compact(cells, n, k)),
            }
            Ok(None)
        }
        Trajectory::Undefined { state, symbol, step } => Ok(Some((state, symbol, step))),
    }
}

fn record_halt(
    cells: &[Option<Transition>],
    o: &EnumerationOptions,
    steps: u64,
    acc: &mut EnumerationSummary,
) -> Result<(), SearchError> {
    if o.revalidate {
        let m = materialize(cells, o.n, o.k);
        let actual = m.run(steps).halted_at();
        if actual != Some(steps) {
            return Err(SearchError::HaltReplayMismatch {
                machine: compact(cells, o.n, o.k),
                claimed: steps,
                actual,
            });
        }
    }
    acc.add_halting(steps, || compact(cells, o.n, o.k));
    Ok(())
}

#[derive(Clone)]
struct Node {
    cells: Vec<Option<Transition>>,
    used_states: usize,
    used_symbols: usize,
}

/// Classifies `node` or, when it reaches an unassigned cell, records the
/// Halt completion and returns the children.
fn expand(node: &Node, o: &EnumerationOptions, acc: &mut EnumerationSummary) -> Result<Vec<Node>, SearchError> {
    let Some((state, symbol, step)) = classify_leaf(&node.cells, o, acc)? else {
        return Ok(Vec::new());
    };
    let idx = state.index() * o.k + symbol.index();
    let mut halting = node.cells.clone();
    halting[idx] = Some(Transition::Halt);
    record_halt(&halting, o, step + 1, acc)?;

    let first = node.cells.iter().all(Option::is_none);
    let mut children = Vec::new();
    for next in 0..(node.used_states + 1).min(o.n) {
        for write in 0..(node.used_symbols + 1).min(o.k) {
            for dir in [Direction::L, Direction::R] {
                if first && dir == Direction::L {
                    continue;
                }
                let mut cells = node.cells.clone();
                cells[idx] = Some(Transition::Move {
                    write: Symbol(write as u8),
                    dir,
                    next: StateId(next as u16),
                });
                children.push(Node {
                    cells,
                    used_states: node.used_states.max(next + 1),
                    used_symbols: node.used_symbols.max(write + 1),
                });
            }
        }
    }
    Ok(children)
}

fn explore(node: Node, o: &EnumerationOptions, acc: &mut EnumerationSummary) -> Result<(), SearchError> {
    let mut stack = vec![node];
    while let Some(node) = stack.pop() {
        stack.extend(expand(&node, o, acc)?);
    }
    Ok(())
}

/// Classifies every machine of the chosen space.
pub fn enumerate(o: &EnumerationOptions) -> Result<EnumerationSummary, SearchError> {
    check_shape(o)?;
    let summary = match o.mode {
        SpaceMode::Raw => {
            let total = raw_space_size(o.n, o.k) as u64;
            (0..total)
                .into_par_iter()
                .try_fold(
                    || EnumerationSummary::empty(o),
                    |mut acc, i| {
                        let cells: Vec<Option<Transition>> =
                            raw_table(o.n, o.k, i).into_iter().map(Some).collect();
                        classify_leaf(&cells, o, &mut acc)?;
                        Ok(acc)
                    },
                )
                .try_reduce(|| EnumerationSummary::empty(o), |a, b| Ok(a.merge(b)))?
        }
        SpaceMode::TreeNormalForm => {
            let mut acc = EnumerationSummary::empty(o);
            let mut frontier = vec![Node {
                cells: vec![None; o.n * o.k],
                used_states: 1,
                used_symbols: 1,
            }];
            // Grow a frontier wide enough to spread across threads.
            while !frontier.is_empty() && frontier.len() < 512 {
                let mut next = Vec::new();
                for node in &frontier {
                    next.extend(expand(node, o, &mut acc)?);
                }
                frontier = next;
            }
            let rest = frontier
                .into_par_iter()
                .try_fold(
                    || EnumerationSummary::empty(o),
                    |mut acc, node| {
                        explore(node, o, &mut acc)?;
                        Ok(acc)
                    },
                )
                .try_reduce(|| EnumerationSummary::empty(o), |a, b| Ok(a.merge(b)))?;
            acc.merge(rest)
        }
    };
    Ok(summary.finish())
}

/// Raw enumeration with revalidation.
pub fn enumerate_and_classify(n: usize, k: usize, budget: u64) -> Result<EnumerationSummary, SearchError> {
    enumerate(&EnumerationOptions::new(n, k, budget))
}
