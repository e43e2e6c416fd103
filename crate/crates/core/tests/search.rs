use std::time::Instant;

use bblab::search::{
    classify, decide_automata_reduction, decide_backward, decide_cycler, decide_escape,
    decide_ngram_cps, decide_translated_cycler, decide_unreachable_halt, enumerate,
    validate_certificate, Certificate, Classification, EnumerationOptions, SpaceMode,
};
use bblab::search::enumerate::{raw_space_size, raw_table};
use bblab::{parse_compact, MachineTable};
use proptest::prelude::*;

fn raw_machine(n: usize, k: usize, i: u64) -> MachineTable {
    MachineTable::with_default_names(n, k, raw_table(n, k, i)).unwrap()
}

/// Any decider that claims `m` never halts.
fn any_proof(m: &MachineTable, budget: u64) -> Option<Certificate> {
    decide_unreachable_halt(m)
        .or_else(|| decide_cycler(m, budget))
        .or_else(|| decide_translated_cycler(m, budget))
        .or_else(|| decide_escape(m, budget))
        .or_else(|| decide_backward(m))
        .or_else(|| decide_ngram_cps(m))
        .or_else(|| decide_automata_reduction(m))
}

fn shape(k3: bool) -> impl Strategy<Value = (usize, usize, u64)> {
    let shapes = if k3 {
        vec![(2usize, 2usize), (3, 2), (2, 3), (4, 2)]
    } else {
        vec![(2, 2), (3, 2), (4, 2)]
    };
    proptest::sample::select(shapes).prop_flat_map(
        |(n, k)| {
            let size = raw_space_size(n, k).min(u64::MAX as u128) as u64;
            (Just(n), Just(k), 0..size)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdicts_agree_with_direct_runs((n, k, i) in shape(true)) {
        let m = raw_machine(n, k, i);
        let direct = m.run(100_000).halted_at();
        let v = classify(&m, 1000);
        match v.classification {
            Classification::Halts { steps } => prop_assert_eq!(direct, Some(steps)),
            Classification::NonHalt { decider } => {
                prop_assert_eq!(direct, None);
                let cert = v.certificate.unwrap();
                prop_assert_eq!(cert.tag(), decider);
                prop_assert!(validate_certificate(&m, &cert).is_ok());
            }
            Classification::Undecided { .. } => prop_assert!(direct.is_none_or(|s| s > 1000)),
        }
    }

    // exhausting every 4-state DFA over 3 symbols takes seconds per
    // machine, so three-symbol halters are covered by the fixed list below
    #[test]
    fn halters_are_never_proven((n, k, i) in shape(false)) {
        let m = raw_machine(n, k, i);
        if m.run(100_000).halted_at().is_some() {
            prop_assert_eq!(any_proof(&m, 100_000), None);
        }
    }
}

#[test]
fn known_halters_survive_every_decider() {
    for src in [
        "1RB1LB_1LA---",
        "1RB---_0RC---_1LC0LA",
        "1RB---_1LB0RC_1LC1LA",
        "1RB1LC_1RC1RB_1RD0LE_1LA1LD_---0LA",
        "1RB2LB---_2LA2RB1LB",
    ] {
        let m = parse_compact(src).unwrap();
        assert_eq!(any_proof(&m, 10_000), None, "{src}");
    }
}

#[test]
fn certificates_do_not_transfer() {
    let looper = parse_compact("0RB---_0LA---").unwrap();
    let cert = decide_cycler(&looper, 100).unwrap();
    assert!(validate_certificate(&looper, &cert).is_ok());
    let halter = parse_compact("1RB1LB_1LA---").unwrap();
    assert!(validate_certificate(&halter, &cert).is_err());
}

fn run(n: usize, k: usize, budget: u64, mode: SpaceMode) -> bblab::search::EnumerationSummary {
    let mut o = EnumerationOptions::new(n, k, budget);
    o.mode = mode;
    let t = Instant::now();
    let s = enumerate(&o).unwrap();
    assert!(t.elapsed().as_secs() < 60, "({n},{k}) took {:?}", t.elapsed());
    s
}

#[test]
fn bb_2_2() {
    for mode in [SpaceMode::Raw, SpaceMode::TreeNormalForm] {
        let s = run(2, 2, 100, mode);
        assert_eq!(s.max_steps, Some(6));
        assert!(s.undecided.is_empty());
        assert!(s.confirmed());
        for c in &s.champions {
            assert_eq!(parse_compact(c).unwrap().run(100).halted_at(), Some(6), "{c}");
        }
    }
}

#[test]
fn bb_3_2_tree() {
    let s = run(3, 2, 1000, SpaceMode::TreeNormalForm);
    assert_eq!(s.max_steps, Some(21));
    assert!(s.undecided.is_empty());
    assert_eq!(s.machines, s.halting + s.non_halting_total());
}
