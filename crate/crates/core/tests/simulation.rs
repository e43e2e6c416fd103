use std::collections::HashSet;

use bblab::sim::{
    head_map, state_map_h, time_scale, verify_lockstep, verify_simulation, Encoding, MismatchKind, SimError,
    SimulationMap, TranscriptStatus,
};
use bblab::{builtin, Direction, MachineTable, StateId, Symbol, Transition};

fn machines() -> (MachineTable, MachineTable, Encoding) {
    let small = builtin("m54").unwrap();
    let big = builtin("m152").unwrap();
    let enc = Encoding::standard(&small, &big).unwrap();
    (big, small, enc)
}

/// Every transition of a 15-state, 2-symbol table other than `t`.
fn alternatives(t: Transition) -> Vec<Transition> {
    let mut out = vec![Transition::Halt];
    for next in 0..15 {
        for write in 0..2 {
            for dir in [Direction::L, Direction::R] {
                out.push(Transition::Move {
                    write: Symbol(write),
                    dir,
                    next: StateId(next),
                });
            }
        }
    }
    out.retain(|&a| a != t);
    out
}

/// Cells of the big machine used during the first `n` small steps.
fn reached_cells(big: &MachineTable, steps: u64) -> HashSet<(StateId, Symbol)> {
    let mut c = big.initial_configuration();
    let mut seen = HashSet::new();
    while c.step < steps && !c.halted {
        seen.insert((c.state, c.read()));
        c.step(big).unwrap();
    }
    seen
}

#[test]
fn time_scale_values() {
    let (big, small, enc) = machines();
    let t = verify_simulation(&big, &small, &enc, 1000).unwrap();
    assert_eq!(t.status, TranscriptStatus::Verified { steps: 1000 });
    let expected = [
        (5, 10),
        (9, 19),
        (13, 29),
        (16, 35),
        (17, 38),
        (23, 51),
        (63, 143),
        (71, 165),
        (79, 180),
        (333, 741),
    ];
    for (n, f) in expected {
        assert_eq!(time_scale(&t, n).unwrap(), f, "f({n})");
    }
    assert!(matches!(time_scale(&t, 1001), Err(SimError::OutOfRange { .. })));
}

#[test]
fn time_scale_is_linear() {
    let (big, small, enc) = machines();
    let t = verify_simulation(&big, &small, &enc, 20_000).unwrap();
    // each small step costs 1 to 4 big steps
    for w in t.f.windows(2) {
        assert!((1..=4).contains(&(w[1] - w[0])));
    }
    // transcript agrees with an independent run of the big machine
    let f = t.f[20_000];
    let direct = big.run(f).configuration().unwrap().clone();
    assert_eq!(direct.step, f);
    let s = small.run(20_000).configuration().unwrap().clone();
    let last = t.records.last().unwrap();
    let Transition::Move { dir, .. } = small.cell(last.state, last.read) else {
        panic!("small machine halted");
    };
    let h = state_map_h(small.state_name(s.state), dir).unwrap();
    assert_eq!(big.state_name(direct.state), h);
    assert_eq!(direct.head, head_map(s.head, dir));
}

#[test]
fn every_corruption_is_caught() {
    let (big, small, enc) = machines();
    let mut checked = 0;
    for q in big.states() {
        for s in big.symbols() {
            for alt in alternatives(big.cell(q, s)) {
                let bad = big.with_cell(q, s, alt).unwrap();
                let r = verify_simulation(&bad, &small, &enc, 1000);
                assert!(
                    r.is_err(),
                    "{} {} -> {alt:?} not caught",
                    big.state_name(q),
                    big.symbol_label(s)
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 60 * 30);
}

#[test]
fn lockstep_alone_catches_reached_cells() {
    let (big, small, enc) = machines();
    let reached = reached_cells(&big, 2300);
    // only the halting cell is idle on the real run
    assert_eq!(reached.len(), 29);
    assert!(!reached.contains(&(
        big.state_by_name("check_halt_a").unwrap(),
        big.symbol_by_label("a").unwrap()
    )));
    for &(q, s) in &reached {
        for alt in alternatives(big.cell(q, s)) {
            let bad = big.with_cell(q, s, alt).unwrap();
            let map = SimulationMap::erdos(&small, &bad, enc.clone()).unwrap();
            let r = verify_lockstep(&bad, &small, &map, 1000);
            assert!(
                r.is_err(),
                "{} {} -> {alt:?} survives 1000 lockstep steps",
                big.state_name(q),
                big.symbol_label(s)
            );
        }
    }
}

#[test]
fn corrupted_halt_cell_reports_step_case() {
    let (big, small, enc) = machines();
    let q = big.state_by_name("check_halt_a").unwrap();
    let a = big.symbol_by_label("a").unwrap();
    let bad = big
        .with_cell(
            q,
            a,
            Transition::Move {
                write: a,
                dir: Direction::R,
                next: q,
            },
        )
        .unwrap();
    let err = verify_simulation(&bad, &small, &enc, 1000).unwrap_err();
    let SimError::Mismatch(report) = err else {
        panic!("expected a mismatch, got {err}");
    };
    let MismatchKind::StepCase { state, symbol, .. } = &report.kind else {
        panic!("expected a step case, got {:?}", report.kind);
    };
    assert_eq!((state.as_str(), symbol.as_str()), ("check_halt", "2"));
}

#[test]
fn lockstep_mismatch_names_first_bad_step() {
    let (big, small, enc) = machines();
    // the counter increment 0 -> 1 is first exercised at small step 16
    let q = big.state_by_name("check_halt_sim").unwrap();
    let a = big.symbol_by_label("a").unwrap();
    let bad = big
        .with_cell(
            q,
            a,
            Transition::Move {
                write: a,
                dir: Direction::L,
                next: big.state_by_name("check_halt_a").unwrap(),
            },
        )
        .unwrap();
    let map = SimulationMap::erdos(&small, &bad, enc).unwrap();
    let SimError::Mismatch(report) = verify_lockstep(&bad, &small, &map, 1000).unwrap_err() else {
        panic!("expected a mismatch");
    };
    assert_eq!(report.n, 17);
}

#[test]
fn encodings_are_validated() {
    let (big, small, _) = machines();
    let dup = &[("#", ["b", "b"]), ("0", ["b", "a"]), ("1", ["b", "a"]), ("2", ["a", "a"])];
    assert!(Encoding::from_labels(&small, &big, dup).is_err());
    let partial = &[("#", ["b", "b"]), ("0", ["b", "a"]), ("1", ["a", "b"])];
    assert!(Encoding::from_labels(&small, &big, partial).is_err());
    let ok = &[("#", ["b", "b"]), ("0", ["b", "a"]), ("1", ["a", "b"]), ("2", ["a", "a"])];
    assert_eq!(
        Encoding::from_labels(&small, &big, ok).unwrap(),
        Encoding::standard(&small, &big).unwrap()
    );
    // swapping two codes breaks the simulation
    let swapped = &[("#", ["b", "b"]), ("0", ["a", "b"]), ("1", ["b", "a"]), ("2", ["a", "a"])];
    let enc = Encoding::from_labels(&small, &big, swapped).unwrap();
    assert!(verify_simulation(&big, &small, &enc, 100).is_err());
}
