//! Built-in machines and the `.tm` text format.
//!
//! Three machines ship with the crate:
//!
//! * `m54`: the 5-state, 4-symbol machine that iterates `x -> 2x` in
//!   reverse ternary and halts iff some `2^n` with `n > 8` has no ternary
//!   digit 2.
//! * `m152`: the 15-state, 2-symbol machine that simulates `m54` through the
//!   block encoding `# -> bb, 0 -> ba, 1 -> ab, 2 -> aa`.
//! * `bb5-champion`: the 5-state, 2-symbol champion that halts after
//!   47,176,870 steps.

mod format;

pub use format::{parse_compact, parse_machine, serialize_machine, to_compact, FormatError};

use crate::tm::{Direction, MachineTable, StateId, Symbol, Transition};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["m54", "m152", "bb5-champion"];

/// The bundled `.tm` sources for the built-in machines.
pub const M54_SOURCE: &str = include_str!("../machines/m54.tm");
pub const M152_SOURCE: &str = include_str!("../machines/m152.tm");
pub const BB5_CHAMPION_SOURCE: &str = include_str!("../machines/bb5-champion.tm");

pub fn builtin(name: &str) -> Option<MachineTable> {
    match name {
        "m54" => Some(builtin_m54()),
        "m152" => Some(builtin_m152()),
        "bb5-champion" => Some(builtin_bb5_champion()),
        _ => None,
    }
}

/// Builds a table from `(state, symbol, action)` rows where the action is
/// either `halt` or `write dir next`.
fn literal(
    states: &[&str],
    symbols: &[&str],
    blank: &str,
    init: &str,
    rows: &[(&str, &str, &str)],
) -> MachineTable {
    let state = |name: &str| {
        StateId(states.iter().position(|s| *s == name).expect("known state") as u16)
    };
    let symbol =
        |label: &str| Symbol(symbols.iter().position(|s| *s == label).expect("known symbol") as u8);
    let mut cells = vec![None; states.len() * symbols.len()];
    for &(q, s, action) in rows {
        let t = if action == "halt" {
            Transition::Halt
        } else {
            let parts: Vec<&str> = action.split_whitespace().collect();
            let dir = match parts[1] {
                "L" => Direction::L,
                "R" => Direction::R,
                other => panic!("bad direction {other}"),
            };
            Transition::Move {
                write: symbol(parts[0]),
                dir,
                next: state(parts[2]),
            }
        };
        let idx = state(q).index() * symbols.len() + symbol(s).index();
        assert!(cells[idx].is_none(), "duplicate cell {q} {s}");
        cells[idx] = Some(t);
    }
    let cells = cells
        .into_iter()
        .map(|c| c.expect("every cell assigned"))
        .collect();
    MachineTable::new(
        states.iter().map(|s| s.to_string()).collect(),
        symbols.iter().map(|s| s.to_string()).collect(),
        symbol(blank),
        state(init),
        cells,
    )
    .expect("builtin tables are valid")
}

/// The 5-state, 4-symbol Erdős machine. Blank `#`, initial state `mul2_G`.
pub fn builtin_m54() -> MachineTable {
    literal(
        &["mul2_F", "mul2_G", "find_2", "rewind", "check_halt"],
        &["0", "1", "2", "#"],
        "#",
        "mul2_G",
        &[
            ("mul2_F", "0", "0 R mul2_F"),
            ("mul2_F", "1", "2 R mul2_F"),
            ("mul2_F", "2", "1 R mul2_G"),
            ("mul2_F", "#", "# L find_2"),
            ("mul2_G", "0", "1 R mul2_F"),
            ("mul2_G", "1", "0 R mul2_G"),
            ("mul2_G", "2", "2 R mul2_G"),
            ("mul2_G", "#", "1 R mul2_F"),
            ("find_2", "0", "0 L find_2"),
            ("find_2", "1", "1 L find_2"),
            ("find_2", "2", "2 L rewind"),
            ("find_2", "#", "# L check_halt"),
            ("rewind", "0", "0 L rewind"),
            ("rewind", "1", "1 L rewind"),
            ("rewind", "2", "2 L rewind"),
            ("rewind", "#", "# R mul2_F"),
            ("check_halt", "0", "1 R rewind"),
            ("check_halt", "1", "2 R rewind"),
            ("check_halt", "2", "halt"),
            ("check_halt", "#", "0 R rewind"),
        ],
    )
}

/// The 15-state, 2-symbol Erdős machine. Blank `b`, initial state
/// `mul2_G_sim`.
///
/// Each `m54` state `q` is simulated by a column `q_sim`, `q_a`, `q_b`
/// (there is no `check_halt_b`), plus `mul2_G_extra`, which is shared by the
/// `mul2_G` reading 1 case and the `check_halt` reading 0 case.
pub fn builtin_m152() -> MachineTable {
    literal(
        &[
            "mul2_F_sim",
            "mul2_F_a",
            "mul2_F_b",
            "mul2_G_sim",
            "mul2_G_a",
            "mul2_G_b",
            "mul2_G_extra",
            "find_2_sim",
            "find_2_a",
            "find_2_b",
            "rewind_sim",
            "rewind_a",
            "rewind_b",
            "check_halt_sim",
            "check_halt_a",
        ],
        &["a", "b"],
        "b",
        "mul2_G_sim",
        &[
            ("mul2_F_sim", "a", "a R mul2_F_a"),
            ("mul2_F_sim", "b", "b R mul2_F_b"),
            ("mul2_F_a", "a", "b R mul2_G_sim"),
            ("mul2_F_a", "b", "a R mul2_F_sim"),
            ("mul2_F_b", "a", "a R mul2_F_sim"),
            ("mul2_F_b", "b", "b L find_2_a"),
            ("mul2_G_sim", "a", "a R mul2_G_a"),
            ("mul2_G_sim", "b", "a R mul2_G_b"),
            ("mul2_G_a", "a", "a R mul2_G_sim"),
            ("mul2_G_a", "b", "a L mul2_G_extra"),
            ("mul2_G_b", "a", "b R mul2_F_sim"),
            ("mul2_G_b", "b", "b R mul2_F_sim"),
            ("mul2_G_extra", "a", "b R mul2_G_a"),
            ("mul2_G_extra", "b", "b R rewind_b"),
            ("find_2_sim", "a", "a L find_2_a"),
            ("find_2_sim", "b", "b L find_2_b"),
            ("find_2_a", "a", "a L rewind_sim"),
            ("find_2_a", "b", "b L find_2_sim"),
            ("find_2_b", "a", "a L find_2_sim"),
            ("find_2_b", "b", "b L check_halt_sim"),
            ("rewind_sim", "a", "a L rewind_a"),
            ("rewind_sim", "b", "b L rewind_b"),
            ("rewind_a", "a", "a L rewind_sim"),
            ("rewind_a", "b", "b L rewind_sim"),
            ("rewind_b", "a", "a L rewind_sim"),
            ("rewind_b", "b", "b R mul2_G_b"),
            ("check_halt_sim", "a", "b L check_halt_a"),
            ("check_halt_sim", "b", "a R rewind_b"),
            ("check_halt_a", "a", "halt"),
            ("check_halt_a", "b", "a R mul2_G_extra"),
        ],
    )
}

/// The 5-state, 2-symbol busy beaver champion (`1RB1LC_1RC1RB_1RD0LE_1LA1LD_---0LA`).
pub fn builtin_bb5_champion() -> MachineTable {
    literal(
        &["A", "B", "C", "D", "E"],
        &["0", "1"],
        "0",
        "A",
        &[
            ("A", "0", "1 R B"),
            ("A", "1", "1 L C"),
            ("B", "0", "1 R C"),
            ("B", "1", "1 R B"),
            ("C", "0", "1 R D"),
            ("C", "1", "0 L E"),
            ("D", "0", "1 L A"),
            ("D", "1", "1 L D"),
            ("E", "0", "halt"),
            ("E", "1", "0 L A"),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(m: &MachineTable, q: &str, s: &str) -> Transition {
        m.cell(m.state_by_name(q).unwrap(), m.symbol_by_label(s).unwrap())
    }

    fn mv(m: &MachineTable, w: &str, d: Direction, q: &str) -> Transition {
        Transition::Move {
            write: m.symbol_by_label(w).unwrap(),
            dir: d,
            next: m.state_by_name(q).unwrap(),
        }
    }

    #[test]
    fn m54_shape() {
        let m = builtin_m54();
        assert_eq!((m.num_states(), m.num_symbols()), (5, 4));
        assert_eq!(m.symbol_label(m.blank()), "#");
        assert_eq!(m.state_name(m.init()), "mul2_G");
        assert_eq!(cell(&m, "mul2_F", "2"), mv(&m, "1", Direction::R, "mul2_G"));
        assert_eq!(cell(&m, "mul2_G", "#"), mv(&m, "1", Direction::R, "mul2_F"));
        assert_eq!(m.halt_count(), 1);
        assert!(cell(&m, "check_halt", "2").is_halt());
    }

    #[test]
    fn m152_shape() {
        let m = builtin_m152();
        assert_eq!((m.num_states(), m.num_symbols()), (15, 2));
        assert_eq!(m.halt_count(), 1);
        assert_eq!(m.state_name(m.init()), "mul2_G_sim");
        assert_eq!(m.symbol_label(m.blank()), "b");
        assert!(m.state_by_name("mul2_G_extra").is_some());
        assert!(m.state_by_name("check_halt_b").is_none());
    }

    #[test]
    fn champion_shape() {
        let m = builtin_bb5_champion();
        assert_eq!(cell(&m, "A", "0"), mv(&m, "1", Direction::R, "B"));
        assert!(cell(&m, "E", "0").is_halt());
        assert_eq!(m.state_name(m.init()), "A");
        assert_eq!(to_compact(&m).unwrap(), "1RB1LC_1RC1RB_1RD0LE_1LA1LD_---0LA");
    }

    #[test]
    fn bundled_sources_match_builtins() {
        assert_eq!(parse_machine(M54_SOURCE).unwrap(), builtin_m54());
        assert_eq!(parse_machine(M152_SOURCE).unwrap(), builtin_m152());
        assert_eq!(
            parse_machine(BB5_CHAMPION_SOURCE).unwrap(),
            builtin_bb5_champion()
        );
    }

    #[test]
    fn bundled_sources_are_canonical() {
        for name in BUILTIN_NAMES {
            let m = builtin(name).unwrap();
            let text = serialize_machine(&m);
            let bundled = match name {
                "m54" => M54_SOURCE,
                "m152" => M152_SOURCE,
                _ => BB5_CHAMPION_SOURCE,
            };
            // bundled files carry a leading comment block
            let body: String = bundled
                .lines()
                .filter(|l| !l.starts_with(';'))
                .map(|l| format!("{l}\n"))
                .collect();
            assert_eq!(text, body, "{name}");
        }
    }
}
