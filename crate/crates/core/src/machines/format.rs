//! The canonical `.tm` text format and the compact underscore format.
//!
//! ```text
//! symbols: 0 1 2 #
//! blank: #
//! states: mul2_F mul2_G find_2 rewind check_halt
//! init: mul2_G
//! mul2_F 0 -> 0 R mul2_F
//! check_halt 2 -> halt
//! ```
//!
//! `;` starts a comment. `#` is an ordinary token because it is a symbol.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::tm::{default_state_name, Direction, MachineTable, StateId, Symbol, TableError, Transition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid machine: {0}")]
    Validation(String),
}

fn parse_err(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        reason: reason.into(),
    }
}

fn invalid(reason: impl Into<String>) -> FormatError {
    FormatError::Validation(reason.into())
}

struct CellLine<'a> {
    line: usize,
    state: &'a str,
    symbol: &'a str,
    action: Action<'a>,
}

enum Action<'a> {
    Halt,
    Move {
        write: &'a str,
        dir: Direction,
        next: &'a str,
    },
}

/// Parses a machine in the canonical `.tm` format.
pub fn parse_machine<'a>(src: &'a str) -> Result<MachineTable, FormatError> {
    let mut symbols: Option<Vec<&str>> = None;
    let mut states: Option<Vec<&str>> = None;
    let mut blank: Option<(usize, &str)> = None;
    let mut init: Option<(usize, &str)> = None;
    let mut cell_lines = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split(';').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some((key, rest)) = text.split_once(':') {
            let key = key.trim();
            let values: Vec<&str> = rest.split_whitespace().collect();
            let single = |values: &[&'a str]| -> Result<&'a str, FormatError> {
                match values {
                    [v] => Ok(*v),
                    _ => Err(parse_err(line, format!("`{key}:` takes exactly one value"))),
                }
            };
            let dup = || parse_err(line, format!("`{key}:` declared twice"));
            match key {
                "symbols" => {
                    if symbols.replace(values).is_some() {
                        return Err(dup());
                    }
                }
                "states" => {
                    if states.replace(values).is_some() {
                        return Err(dup());
                    }
                }
                "blank" => {
                    if blank.replace((line, single(&values)?)).is_some() {
                        return Err(dup());
                    }
                }
                "init" => {
                    if init.replace((line, single(&values)?)).is_some() {
                        return Err(dup());
                    }
                }
                other => return Err(parse_err(line, format!("unknown declaration `{other}:`"))),
            }
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let action = match tokens.as_slice() {
            [_, _, "->", h] if h.eq_ignore_ascii_case("halt") => Action::Halt,
            [_, _, "->", write, dir, next] => {
                let dir = match *dir {
                    "L" => Direction::L,
                    "R" => Direction::R,
                    other => return Err(parse_err(line, format!("bad direction `{other}`"))),
                };
                Action::Move {
                    write,
                    dir,
                    next,
                }
            }
            _ => {
                return Err(parse_err(
                    line,
                    "expected `state symbol -> write dir next` or `state symbol -> halt`",
                ))
            }
        };
        cell_lines.push(CellLine {
            line,
            state: tokens[0],
            symbol: tokens[1],
            action,
        });
    }

    let symbols = symbols.ok_or_else(|| invalid("missing `symbols:` declaration"))?;
    let states = states.ok_or_else(|| invalid("missing `states:` declaration"))?;
    let (_, blank) = blank.ok_or_else(|| invalid("missing `blank:` declaration"))?;
    let (_, init) = init.ok_or_else(|| invalid("missing `init:` declaration"))?;
    if symbols.is_empty() || states.is_empty() {
        return Err(invalid("empty symbol or state list"));
    }

    let state_ix: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let symbol_ix: HashMap<&str, usize> =
        symbols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    if state_ix.len() != states.len() {
        return Err(invalid("duplicate state name"));
    }
    if symbol_ix.len() != symbols.len() {
        return Err(invalid("duplicate symbol label"));
    }
    let lookup_state = |name: &str, line: usize| {
        state_ix
            .get(name)
            .map(|&i| StateId(i as u16))
            .ok_or_else(|| invalid(format!("line {line}: unknown state `{name}`")))
    };
    let lookup_symbol = |label: &str, line: usize| {
        symbol_ix
            .get(label)
            .map(|&i| Symbol(i as u8))
            .ok_or_else(|| invalid(format!("line {line}: unknown symbol `{label}`")))
    };
    let blank = symbol_ix
        .get(blank)
        .map(|&i| Symbol(i as u8))
        .ok_or_else(|| invalid(format!("blank `{blank}` is not a declared symbol")))?;
    let init = state_ix
        .get(init)
        .map(|&i| StateId(i as u16))
        .ok_or_else(|| invalid(format!("init `{init}` is not a declared state")))?;

    let k = symbols.len();
    let mut cells: Vec<Option<Transition>> = vec![None; states.len() * k];
    for c in cell_lines {
        let q = lookup_state(c.state, c.line)?;
        let s = lookup_symbol(c.symbol, c.line)?;
        let t = match c.action {
            Action::Halt => Transition::Halt,
            Action::Move { write, dir, next } => Transition::Move {
                write: lookup_symbol(write, c.line)?,
                dir,
                next: lookup_state(next, c.line)?,
            },
        };
        let slot = &mut cells[q.index() * k + s.index()];
        if slot.is_some() {
            return Err(invalid(format!(
                "line {}: duplicate cell `{} {}`",
                c.line, c.state, c.symbol
            )));
        }
        *slot = Some(t);
    }
    let missing: Vec<String> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(i, _)| format!("{} {}", states[i / k], symbols[i % k]))
        .collect();
    if !missing.is_empty() {
        return Err(invalid(format!("missing cells: {}", missing.join(", "))));
    }
    MachineTable::new(
        states.iter().map(|s| s.to_string()).collect(),
        symbols.iter().map(|s| s.to_string()).collect(),
        blank,
        init,
        cells.into_iter().flatten().collect(),
    )
    .map_err(|e: TableError| invalid(e.to_string()))
}

/// Writes the canonical form: declarations, then one line per cell in
/// state-major, symbol-minor order.
pub fn serialize_machine(m: &MachineTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "symbols: {}", m.symbol_labels().join(" "));
    let _ = writeln!(out, "blank: {}", m.symbol_label(m.blank()));
    let _ = writeln!(out, "states: {}", m.state_names().join(" "));
    let _ = writeln!(out, "init: {}", m.state_name(m.init()));
    for q in m.states() {
        for s in m.symbols() {
            let _ = write!(out, "{} {} -> ", m.state_name(q), m.symbol_label(s));
            match m.cell(q, s) {
                Transition::Halt => out.push_str("halt\n"),
                Transition::Move { write, dir, next } => {
                    let _ = writeln!(
                        out,
                        "{} {} {}",
                        m.symbol_label(write),
                        dir.as_char(),
                        m.state_name(next)
                    );
                }
            }
        }
    }
    out
}

/// Reads the compact row format, e.g. `1RB1LC_1RC1RB_1RD0LE_1LA1LD_---0LA`.
///
/// States are named `A`, `B`, ... in row order, symbols are `0`..`k-1` with
/// `0` blank, and the initial state is `A`. Any cell starting with `-`
/// is Halt.
pub fn parse_compact(src: &str) -> Result<MachineTable, FormatError> {
    let rows: Vec<&str> = src.trim().split('_').collect();
    let n = rows.len();
    if rows[0].is_empty() || rows.iter().any(|r| r.len() % 3 != 0 || r.len() != rows[0].len()) {
        return Err(parse_err(1, "rows must be equal-length runs of 3-character cells"));
    }
    let k = rows[0].len() / 3;
    if k > 10 {
        return Err(parse_err(1, "compact format supports at most 10 symbols"));
    }
    let mut cells = Vec::with_capacity(n * k);
    for row in &rows {
        for chunk in row.as_bytes().chunks(3) {
            if chunk[0] == b'-' {
                cells.push(Transition::Halt);
                continue;
            }
            let write = match chunk[0] {
                c @ b'0'..=b'9' if ((c - b'0') as usize) < k => Symbol(c - b'0'),
                _ => return Err(parse_err(1, format!("bad write symbol in `{row}`"))),
            };
            let dir = match chunk[1] {
                b'L' => Direction::L,
                b'R' => Direction::R,
                _ => return Err(parse_err(1, format!("bad direction in `{row}`"))),
            };
            let next = match chunk[2] {
                c @ b'A'..=b'Z' if ((c - b'A') as usize) < n => StateId((c - b'A') as u16),
                _ => return Err(parse_err(1, format!("bad next state in `{row}`"))),
            };
            cells.push(Transition::Move { write, dir, next });
        }
    }
    MachineTable::with_default_names(n, k, cells).map_err(|e| invalid(e.to_string()))
}

/// Compact row format using table indices (states as letters, symbols as
/// digits). `None` when the table is too large for single characters.
pub fn to_compact(m: &MachineTable) -> Option<String> {
    if m.num_states() > 26 || m.num_symbols() > 10 {
        return None;
    }
    let rows: Vec<String> = m
        .states()
        .map(|q| {
            m.symbols()
                .map(|s| match m.cell(q, s) {
                    Transition::Halt => "---".to_string(),
                    Transition::Move { write, dir, next } => format!(
                        "{}{}{}",
                        write.0,
                        dir.as_char(),
                        default_state_name(next.index())
                    ),
                })
                .collect()
        })
        .collect();
    Some(rows.join("_"))
}
