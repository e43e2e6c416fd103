use bblab::ternary::{decode_tape_number, power_of_two_ternary};
use bblab::{builtin, Configuration, MachineTable};

/// Renders `pattern`'s span around the head, bracketing the head cell.
/// Labels are single characters; spaces in `pattern` are ignored.
fn check(m: &MachineTable, c: &Configuration, state: &str, pattern: &str) {
    let pattern: String = pattern.chars().filter(|c| !c.is_whitespace()).collect();
    let before = pattern.find('[').expect("pattern marks the head");
    let width = pattern.len() as i64 - 2;
    let lo = c.head - before as i64;
    let hi = lo + width - 1;
    let mut got = String::new();
    for i in lo..=hi {
        let label = m.symbol_label(c.tape.get(i));
        if i == c.head {
            got += &format!("[{label}]");
        } else {
            got += label;
        }
    }
    assert_eq!(m.state_name(c.state), state, "state at step {}", c.step);
    assert_eq!(got, pattern, "tape at step {}", c.step);
    // nothing written outside the shown span
    let (tlo, thi) = c.tape.extent();
    for i in (tlo..lo).chain(hi + 1..=thi) {
        assert_eq!(c.tape.get(i), m.blank(), "cell {i} at step {}", c.step);
    }
}

const SMALL: [(u64, &str, &str); 11] = [
    (0, "mul2_G", "###[#]##"),
    (5, "rewind", "##0[#]1#"),
    (9, "rewind", "##0[#]2#"),
    (13, "find_2", "#0#1[1]#"),
    (16, "check_halt", "#[0]#11#"),
    (17, "rewind", "#1[#]11#"),
    (23, "rewind", "#1[#]22#"),
    (63, "rewind", "#1[#]20211#"),
    (71, "find_2", "#1#11100[1]#"),
    (79, "rewind", "#2[#]111001#"),
    (333, "rewind", "#2[#]1101011202221#"),
];

const BIG: [(u64, &str, &str); 11] = [
    (0, "mul2_G_sim", "bb bb [b]b bb bb"),
    (10, "rewind_b", "bb ba [b]b ab bb"),
    (19, "rewind_sim", "bb ba b[b] aa bb"),
    (29, "find_2_sim", "bb ba bb ab a[b] bb"),
    (35, "check_halt_sim", "bb b[a] bb ab ab bb"),
    (38, "rewind_b", "bb ab [b]b ab ab bb"),
    (51, "rewind_sim", "bb ab b[b] aa aa bb"),
    (143, "rewind_sim", "bb ab b[b] aa ba aa ab ab bb"),
    (165, "find_2_sim", "bb ab bb ab ab ab ba ba a[b] bb"),
    (180, "rewind_b", "bb aa [b]b ab ab ab ba ba ab bb"),
    (
        741,
        "rewind_sim",
        "bb aa b[b] ab ab ba ab ba ab ab aa ba aa aa aa ab bb",
    ),
];

fn trace(m: &MachineTable, expected: &[(u64, &str, &str)]) {
    let steps: Vec<u64> = expected.iter().map(|e| e.0).collect();
    let snaps = m.run_trace(&steps);
    assert_eq!(snaps.len(), expected.len());
    for (c, &(step, state, pattern)) in snaps.iter().zip(expected) {
        assert_eq!(c.step, step);
        assert!(!c.halted);
        check(m, c, state, pattern);
    }
}

#[test]
fn m54_first_333_steps() {
    trace(&builtin("m54").unwrap(), &SMALL);
}

#[test]
fn m152_first_741_steps() {
    trace(&builtin("m152").unwrap(), &BIG);
}

#[test]
fn step_333_holds_two_to_the_20() {
    let m = builtin("m54").unwrap();
    let c = &m.run_trace(&[333])[0];
    let digits = (0..).map(|i| {
        let s = c.tape.get(i);
        (s != m.blank()).then(|| m.symbol_label(s).parse::<u8>().unwrap())
    });
    let x = decode_tape_number(digits.take(16)).unwrap();
    assert_eq!(x, power_of_two_ternary(20));
    assert_eq!(x.to_ternary_string(), "1222021101011");
}

#[test]
fn step_counts_between_snapshots() {
    let gaps: Vec<u64> = SMALL.windows(2).map(|w| w[1].0 - w[0].0).collect();
    assert_eq!(gaps, [5, 4, 4, 3, 1, 6, 40, 8, 8, 254]);
    let gaps: Vec<u64> = BIG.windows(2).map(|w| w[1].0 - w[0].0).collect();
    assert_eq!(gaps, [10, 9, 10, 6, 3, 13, 92, 22, 15, 561]);
}
