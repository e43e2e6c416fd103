//! Exact execution engine for deterministic single-tape Turing machines on a
//! bi-infinite tape.
//!
//! A [`MachineTable`] is immutable once built and can be shared freely between
//! threads. A [`Configuration`] is owned by whoever is running it and is
//! advanced in place with [`Configuration::step`].

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Index of a tape symbol within its table's alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Symbol(pub u8);

/// Index of a state within its table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StateId(pub u16);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    L,
    R,
}

impl Direction {
    pub fn offset(self) -> i64 {
        match self {
            Direction::L => -1,
            Direction::R => 1,
        }
    }

    pub fn flip(self) -> Direction {
        match self {
            Direction::L => Direction::R,
            Direction::R => Direction::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Direction::L => 'L',
            Direction::R => 'R',
        }
    }
}

/// One cell of a transition table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transition {
    /// Stops the machine. Executing it counts as one step but writes nothing
    /// and does not move the head.
    Halt,
    Move {
        write: Symbol,
        dir: Direction,
        next: StateId,
    },
}

impl Transition {
    pub fn is_halt(&self) -> bool {
        matches!(self, Transition::Halt)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("a table needs at least one state and one symbol")]
    Empty,
    #[error("expected {expected} cells, got {got}")]
    CellCount { expected: usize, got: usize },
    #[error("state {0} is out of range")]
    StateOutOfRange(u16),
    #[error("symbol {0} is out of range")]
    SymbolOutOfRange(u8),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("names must be non-empty and contain no whitespace: `{0}`")]
    BadName(String),
    #[error("{what} name count {got} does not match {expected}")]
    NameCount {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("too many {0}")]
    TooLarge(&'static str),
}

/// An `n`-state, `k`-symbol transition table with a designated blank symbol
/// and initial state. Cells are stored state-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MachineTable {
    num_states: usize,
    num_symbols: usize,
    blank: Symbol,
    init: StateId,
    cells: Vec<Transition>,
    state_names: Vec<String>,
    symbol_labels: Vec<String>,
}

impl MachineTable {
    /// Builds a table, checking that every cell refers to valid states and
    /// symbols and that names are unique.
    pub fn new(
        state_names: Vec<String>,
        symbol_labels: Vec<String>,
        blank: Symbol,
        init: StateId,
        cells: Vec<Transition>,
    ) -> Result<Self, TableError> {
        let n = state_names.len();
        let k = symbol_labels.len();
        if n == 0 || k == 0 {
            return Err(TableError::Empty);
        }
        if n > u16::MAX as usize {
            return Err(TableError::TooLarge("states"));
        }
        if k > u8::MAX as usize + 1 {
            return Err(TableError::TooLarge("symbols"));
        }
        if cells.len() != n * k {
            return Err(TableError::CellCount {
                expected: n * k,
                got: cells.len(),
            });
        }
        if blank.index() >= k {
            return Err(TableError::SymbolOutOfRange(blank.0));
        }
        if init.index() >= n {
            return Err(TableError::StateOutOfRange(init.0));
        }
        for cell in &cells {
            if let Transition::Move { write, next, .. } = *cell {
                if write.index() >= k {
                    return Err(TableError::SymbolOutOfRange(write.0));
                }
                if next.index() >= n {
                    return Err(TableError::StateOutOfRange(next.0));
                }
            }
        }
        check_names(&state_names)?;
        check_names(&symbol_labels)?;
        Ok(MachineTable {
            num_states: n,
            num_symbols: k,
            blank,
            init,
            cells,
            state_names,
            symbol_labels,
        })
    }

    /// Builds a table with generated names: states `A`, `B`, ... and symbols
    /// `0`, `1`, ...; blank is symbol 0 and the initial state is `A`.
    pub fn with_default_names(
        num_states: usize,
        num_symbols: usize,
        cells: Vec<Transition>,
    ) -> Result<Self, TableError> {
        let states = (0..num_states).map(default_state_name).collect();
        let symbols = (0..num_symbols).map(|s| s.to_string()).collect();
        Self::new(states, symbols, Symbol(0), StateId(0), cells)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    #[inline]
    pub fn cell(&self, state: StateId, symbol: Symbol) -> Transition {
        self.cells[state.index() * self.num_symbols + symbol.index()]
    }

    pub fn cells(&self) -> &[Transition] {
        &self.cells
    }

    /// Returns a copy of this table with one cell replaced.
    pub fn with_cell(
        &self,
        state: StateId,
        symbol: Symbol,
        transition: Transition,
    ) -> Result<Self, TableError> {
        let mut cells = self.cells.clone();
        cells[state.index() * self.num_symbols + symbol.index()] = transition;
        Self::new(
            self.state_names.clone(),
            self.symbol_labels.clone(),
            self.blank,
            self.init,
            cells,
        )
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.state_names[state.index()]
    }

    pub fn symbol_label(&self, symbol: Symbol) -> &str {
        &self.symbol_labels[symbol.index()]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn symbol_labels(&self) -> &[String] {
        &self.symbol_labels
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u16))
    }

    pub fn symbol_by_label(&self, label: &str) -> Option<Symbol> {
        self.symbol_labels
            .iter()
            .position(|s| s == label)
            .map(|i| Symbol(i as u8))
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.num_states as u16).map(StateId)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.num_symbols as u16).map(|s| Symbol(s as u8))
    }

    pub fn halt_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_halt()).count()
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration::new(self)
    }

    /// Runs from the blank tape for at most `budget` steps.
    pub fn run(&self, budget: u64) -> RunOutcome {
        let mut config = self.initial_configuration();
        config.run(self, budget);
        config.into_outcome()
    }

    /// Runs from the blank tape and snapshots the configuration at each
    /// requested step count. Execution stops at the first halt, so
    /// checkpoints after the halting step produce no snapshot.
    pub fn run_trace(&self, checkpoints: &[u64]) -> Vec<Configuration> {
        debug_assert!(checkpoints.windows(2).all(|w| w[0] <= w[1]));
        let mut config = self.initial_configuration();
        let mut out = Vec::with_capacity(checkpoints.len());
        for &target in checkpoints {
            while config.step < target && !config.halted {
                config.step_unchecked(self);
            }
            if config.step < target {
                break;
            }
            out.push(config.snapshot());
        }
        out
    }
}

pub(crate) fn default_state_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("S{i}")
    }
}

fn check_names(names: &[String]) -> Result<(), TableError> {
    let mut seen = std::collections::HashSet::new();
    for name in names {
        if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains(';') {
            return Err(TableError::BadName(name.clone()));
        }
        if !seen.insert(name.as_str()) {
            return Err(TableError::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

/// Bi-infinite tape stored as two growable halves.
///
/// Cells outside the stored halves read as blank. The touched extent
/// `[lo, hi]` covers every cell the head has visited and never shrinks.
#[derive(Clone, Debug)]
pub struct Tape {
    blank: Symbol,
    /// Cells 0, 1, 2, ...
    right: Vec<Symbol>,
    /// Cells -1, -2, -3, ...
    left: Vec<Symbol>,
    lo: i64,
    hi: i64,
}

impl Tape {
    pub fn new(blank: Symbol) -> Self {
        Tape {
            blank,
            right: vec![blank],
            left: Vec::new(),
            lo: 0,
            hi: 0,
        }
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    /// The touched extent `(lo, hi)`, inclusive.
    pub fn extent(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    #[inline]
    pub fn get(&self, cell: i64) -> Symbol {
        let stored = if cell >= 0 {
            self.right.get(cell as usize)
        } else {
            self.left.get((-1 - cell) as usize)
        };
        stored.copied().unwrap_or(self.blank)
    }

    /// Writes a cell, widening the touched extent to include it.
    #[inline]
    pub fn set(&mut self, cell: i64, symbol: Symbol) {
        self.touch(cell);
        if cell >= 0 {
            self.right[cell as usize] = symbol;
        } else {
            self.left[(-1 - cell) as usize] = symbol;
        }
    }

    /// Marks a cell as visited, allocating storage for it.
    #[inline]
    pub fn touch(&mut self, cell: i64) {
        if cell >= 0 {
            let idx = cell as usize;
            if idx >= self.right.len() {
                self.right.resize(idx + 1, self.blank);
            }
            self.hi = self.hi.max(cell);
        } else {
            let idx = (-1 - cell) as usize;
            if idx >= self.left.len() {
                self.left.resize(idx + 1, self.blank);
            }
            self.lo = self.lo.min(cell);
        }
    }

    /// Symbols at cells `lo..=hi`; blanks where untouched.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Symbol> {
        if lo > hi {
            return Vec::new();
        }
        (lo..=hi).map(|i| self.get(i)).collect()
    }

    /// Content equality on the union of both extents, ignoring the extents
    /// themselves.
    pub fn same_content(&self, other: &Tape) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        self.blank == other.blank && (lo..=hi).all(|i| self.get(i) == other.get(i))
    }

    fn trimmed(&self) -> Tape {
        let right_len = (self.hi + 1).max(1) as usize;
        let left_len = (-self.lo).max(0) as usize;
        Tape {
            blank: self.blank,
            right: self.right[..right_len.min(self.right.len())].to_vec(),
            left: self.left[..left_len.min(self.left.len())].to_vec(),
            lo: self.lo,
            hi: self.hi,
        }
    }
}

impl PartialEq for Tape {
    fn eq(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi && self.same_content(other)
    }
}

impl Eq for Tape {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("configuration is halted; no further steps can be executed")]
    StepAfterHalt,
}

/// What a single step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Moved,
    Halted,
}

/// Machine state, head position, tape and executed-step count.
///
/// Once a Halt transition has been executed the configuration is frozen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub state: StateId,
    pub head: i64,
    pub tape: Tape,
    pub step: u64,
    pub halted: bool,
}

impl Configuration {
    pub fn new(m: &MachineTable) -> Self {
        Configuration {
            state: m.init(),
            head: 0,
            tape: Tape::new(m.blank()),
            step: 0,
            halted: false,
        }
    }

    pub fn read(&self) -> Symbol {
        self.tape.get(self.head)
    }

    pub fn step(&mut self, m: &MachineTable) -> Result<StepStatus, StepError> {
        if self.halted {
            return Err(StepError::StepAfterHalt);
        }
        Ok(self.step_unchecked(m))
    }

    #[inline]
    pub(crate) fn step_unchecked(&mut self, m: &MachineTable) -> StepStatus {
        let read = self.tape.get(self.head);
        self.step += 1;
        match m.cell(self.state, read) {
            Transition::Halt => {
                self.halted = true;
                StepStatus::Halted
            }
            Transition::Move { write, dir, next } => {
                self.tape.set(self.head, write);
                self.head += dir.offset();
                self.tape.touch(self.head);
                self.state = next;
                StepStatus::Moved
            }
        }
    }

    /// Executes up to `budget` further steps, stopping early on halt.
    /// Returns the number of steps executed.
    pub fn run(&mut self, m: &MachineTable, budget: u64) -> u64 {
        let start = self.step;
        let end = start.saturating_add(budget);
        while self.step < end && !self.halted {
            self.step_unchecked(m);
        }
        self.step - start
    }

    pub fn window(&self, lo: i64, hi: i64) -> Vec<Symbol> {
        self.tape.window(lo, hi)
    }

    /// A copy that holds only the touched window of the tape.
    pub fn snapshot(&self) -> Configuration {
        Configuration {
            state: self.state,
            head: self.head,
            tape: self.tape.trimmed(),
            step: self.step,
            halted: self.halted,
        }
    }

    pub fn into_outcome(self) -> RunOutcome {
        if self.halted {
            RunOutcome::HaltedAt {
                step: self.step,
                config: self,
            }
        } else {
            RunOutcome::Running(self)
        }
    }

    /// Renders the configuration as `state, ..[x]..` over the touched extent.
    pub fn display<'a>(&'a self, m: &'a MachineTable) -> ConfigDisplay<'a> {
        ConfigDisplay { config: self, m }
    }
}

pub struct ConfigDisplay<'a> {
    config: &'a Configuration,
    m: &'a MachineTable,
}

impl fmt::Display for ConfigDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.config.tape.extent();
        write!(f, "{}, ", self.m.state_name(self.config.state))?;
        for i in lo..=hi {
            let label = self.m.symbol_label(self.config.tape.get(i));
            if i == self.config.head {
                write!(f, "[{label}]")?;
            } else {
                write!(f, "{label}")?;
            }
        }
        Ok(())
    }
}

/// Which decider proved a machine never halts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeciderTag {
    /// No Halt cell is reachable in the state graph from the initial state.
    UnreachableHalt,
    Cycler,
    TranslatedCycler,
    Escape,
    BackwardReasoning,
    NGramCps,
    AutomataReduction,
}

impl fmt::Display for DeciderTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeciderTag::UnreachableHalt => "unreachable-halt",
            DeciderTag::Cycler => "cycler",
            DeciderTag::TranslatedCycler => "translated-cycler",
            DeciderTag::Escape => "escape",
            DeciderTag::BackwardReasoning => "backward-reasoning",
            DeciderTag::NGramCps => "ngram-cps",
            DeciderTag::AutomataReduction => "automata-reduction",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    /// Halted; `step` counts the Halt transition itself.
    HaltedAt { step: u64, config: Configuration },
    /// Still running after exactly the budgeted number of steps.
    Running(Configuration),
    /// Only produced by the enumeration deciders.
    NonHaltProven(DeciderTag),
}

impl RunOutcome {
    pub fn halted_at(&self) -> Option<u64> {
        match self {
            RunOutcome::HaltedAt { step, .. } => Some(*step),
            _ => None,
        }
    }

    pub fn configuration(&self) -> Option<&Configuration> {
        match self {
            RunOutcome::HaltedAt { config, .. } | RunOutcome::Running(config) => Some(config),
            RunOutcome::NonHaltProven(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(write: u8, dir: Direction, next: u16) -> Transition {
        Transition::Move {
            write: Symbol(write),
            dir,
            next: StateId(next),
        }
    }

    fn bb2() -> MachineTable {
        // 1RB1LB_1LA---
        MachineTable::with_default_names(
            2,
            2,
            vec![
                mv(1, Direction::R, 1),
                mv(1, Direction::L, 1),
                mv(1, Direction::L, 0),
                Transition::Halt,
            ],
        )
        .unwrap()
    }

    #[test]
    fn halt_counts_as_a_step() {
        let out = bb2().run(100);
        assert_eq!(out.halted_at(), Some(6));
        let cfg = out.configuration().unwrap();
        assert_eq!(cfg.window(-2, 1), vec![Symbol(1); 4]);
    }

    #[test]
    fn zero_budget_is_identity() {
        let m = bb2();
        assert_eq!(m.run(0), RunOutcome::Running(m.initial_configuration()));
    }

    #[test]
    fn stepping_a_halted_configuration_fails() {
        let m = bb2();
        let mut cfg = m.initial_configuration();
        cfg.run(&m, 100);
        assert!(cfg.halted);
        let frozen = cfg.clone();
        assert_eq!(cfg.step(&m), Err(StepError::StepAfterHalt));
        assert_eq!(cfg, frozen);
    }

    #[test]
    fn fresh_window_is_blank() {
        let m = bb2();
        let cfg = m.initial_configuration();
        assert_eq!(cfg.window(-2, 2), vec![Symbol(0); 5]);
        assert_eq!(cfg.tape.extent(), (0, 0));
    }

    #[test]
    fn trace_stops_at_halt() {
        let m = bb2();
        let trace = m.run_trace(&[0, 3, 6, 10]);
        assert_eq!(trace.len(), 3);
        assert_eq!(trace[0], m.initial_configuration());
        assert!(trace[2].halted);
    }

    #[test]
    fn table_validation() {
        let err = MachineTable::with_default_names(1, 2, vec![Transition::Halt]).unwrap_err();
        assert_eq!(err, TableError::CellCount { expected: 2, got: 1 });
        let err =
            MachineTable::with_default_names(1, 2, vec![mv(0, Direction::L, 3), Transition::Halt])
                .unwrap_err();
        assert_eq!(err, TableError::StateOutOfRange(3));
        let err = MachineTable::new(
            vec!["A".into(), "A".into()],
            vec!["0".into()],
            Symbol(0),
            StateId(0),
            vec![Transition::Halt; 2],
        )
        .unwrap_err();
        assert_eq!(err, TableError::DuplicateName("A".into()));
    }

    #[test]
    fn tape_negative_cells() {
        let mut t = Tape::new(Symbol(0));
        t.set(-3, Symbol(2));
        assert_eq!(t.get(-3), Symbol(2));
        assert_eq!(t.get(-2), Symbol(0));
        assert_eq!(t.get(40), Symbol(0));
        assert_eq!(t.extent(), (-3, 0));
    }
}
