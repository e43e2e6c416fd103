//! Finite automata reduction.
//!
//! A configuration is read as `u [q] v`: the tape left of the head `u`, the
//! state `q`, and the tape from the head rightwards `v`. A DFA `D` reads `u`
//! from the far left; for every DFA state `a` and machine state `q` an NFA
//! entry point `E(a, q)` accepts a language `R(a, q)` of right halves. The
//! NFA is saturated until
//!
//! * the blank start is in `R(0, init)`;
//! * a right move `(q, s) -> (w, R, q')` maps `s^-1 R(a, q)` into
//!   `R(D(a, w), q')`;
//! * a left move `(q, s) -> (w, L, q')` maps `b w s^-1 R(D(a, b), q)` into
//!   `R(a, q')`.
//!
//! If afterwards no `R(a, q)` holds a word starting with a symbol `s` whose
//! cell `(q, s)` halts, the language is a non-halting invariant.

use crate::tm::{Direction, StateId, Symbol, Transition};

/// Swaps L and R in every transition.
pub(crate) fn mirrored(cells: &[Option<Transition>]) -> Vec<Option<Transition>> {
    cells
        .iter()
        .map(|c| match *c {
            Some(Transition::Move { write, dir, next }) => Some(Transition::Move {
                write,
                dir: dir.flip(),
                next,
            }),
            other => other,
        })
        .collect()
}

/// Nodes are bit positions in a `u128`; larger NFAs are not attempted.
const MAX_NODES: usize = 128;

fn bit(i: usize) -> u128 {
    1 << i
}

fn ones(mut bits: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (bits != 0).then(|| {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            i
        })
    })
}

struct Nfa {
    total: usize,
    k: usize,
    /// `edges[s * total + x]`: targets of `x` on symbol `s`.
    edges: Vec<u128>,
    /// Reflexive-transitive epsilon closure of each node.
    closure: Vec<u128>,
}

impl Nfa {
    fn add_eps(&mut self, x: usize, t: usize) -> bool {
        if self.closure[x] & bit(t) != 0 {
            return false;
        }
        let add = self.closure[t];
        for row in self.closure.iter_mut() {
            if *row & bit(x) != 0 {
                *row |= add;
            }
        }
        true
    }

    fn succ(&self, x: usize, s: usize) -> u128 {
        let row = &self.edges[s * self.total..(s + 1) * self.total];
        ones(self.closure[x]).fold(0, |acc, y| acc | row[y])
    }

    /// Nodes from which `z`, and so some complete word, is reachable.
    fn productive(&self, z: usize) -> u128 {
        let mut p = bit(z);
        loop {
            let mut next = p;
            for x in 0..self.total {
                if self.closure[x] & p != 0
                    || (0..self.k).any(|s| self.edges[s * self.total + x] & p != 0)
                {
                    next |= bit(x);
                }
            }
            if next == p {
                return p;
            }
            p = next;
        }
    }
}

/// Checks the closure conditions for one DFA (`dfa[a * k + s]`, with
/// `dfa[blank] = 0`).
pub(crate) fn far_closed(
    cells: &[Option<Transition>],
    k: usize,
    blank: Symbol,
    init: StateId,
    dfa: &[usize],
) -> bool {
    let n = cells.len() / k;
    let m = dfa.len() / k;
    let b = blank.index();
    debug_assert_eq!(dfa[b], 0);
    let mut left_moves = Vec::new();
    let mut right_moves = Vec::new();
    let mut halts = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        let (q, s) = (i / k, i % k);
        match c {
            Some(Transition::Move { write, dir: Direction::L, next }) => {
                left_moves.push((q, s, write.index(), next.index()))
            }
            Some(Transition::Move { write, dir: Direction::R, next }) => {
                right_moves.push((q, s, write.index(), next.index()))
            }
            _ => halts.push((q, s)),
        }
    }
    let lm = left_moves.len();
    let entry = |a: usize, q: usize| a * n + q;
    let z = m * n;
    let wmid = |li: usize, a: usize| z + 1 + li * m + a;
    let ymid = |li: usize, a: usize| z + 1 + lm * m + li * m + a;
    let total = z + 1 + 2 * lm * m;
    if total > MAX_NODES {
        return false;
    }

    let mut nfa = Nfa {
        total,
        k,
        edges: vec![0; k * total],
        closure: (0..total).map(bit).collect(),
    };
    nfa.edges[b * total + z] |= bit(z);
    for (li, &(_, _, w, q2)) in left_moves.iter().enumerate() {
        for a in 0..m {
            for sym in 0..k {
                nfa.edges[sym * total + entry(a, q2)] |= bit(wmid(li, dfa[a * k + sym]));
            }
            nfa.edges[w * total + wmid(li, a)] |= bit(ymid(li, a));
        }
    }
    nfa.add_eps(entry(0, init.index()), z);

    let rules: Vec<(usize, usize, usize)> = right_moves
        .iter()
        .flat_map(|&(q, s, w, q2)| (0..m).map(move |a| (entry(a, q), s, entry(dfa[a * k + w], q2))))
        .chain(
            left_moves
                .iter()
                .enumerate()
                .flat_map(|(li, &(q, s, _, _))| (0..m).map(move |a| (entry(a, q), s, ymid(li, a)))),
        )
        .collect();
    let halting = |nfa: &Nfa| {
        let p = nfa.productive(z);
        halts
            .iter()
            .any(|&(q, s)| (0..m).any(|a| nfa.succ(entry(a, q), s) & p != 0))
    };
    loop {
        let mut changed = false;
        for &(from, s, to) in &rules {
            for t in ones(nfa.succ(from, s)) {
                changed |= nfa.add_eps(to, t);
            }
        }
        // the language only grows, so a halting word now is one for good
        if halting(&nfa) {
            return false;
        }
        if !changed {
            return true;
        }
    }
}

/// Calls `f` on every DFA with `m` states over `k` symbols in canonical
/// breadth-first numbering with `dfa[blank] = 0`, until `f` returns true.
/// Returns the DFA `f` accepted.
pub(crate) fn search_dfas(
    m: usize,
    k: usize,
    blank: Symbol,
    limit: &mut usize,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        dfa: &mut Vec<usize>,
        pos: usize,
        max_used: usize,
        m: usize,
        k: usize,
        blank: usize,
        limit: &mut usize,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if *limit == 0 {
            return false;
        }
        if pos == dfa.len() {
            if max_used + 1 != m {
                return false;
            }
            *limit -= 1;
            return f(dfa);
        }
        // A state's row may only be filled once it has been referenced.
        if pos / k > max_used {
            return false;
        }
        if pos == blank {
            dfa[pos] = 0;
            return rec(dfa, pos + 1, max_used, m, k, blank, limit, f);
        }
        for v in 0..=(max_used + 1).min(m - 1) {
            dfa[pos] = v;
            if rec(dfa, pos + 1, max_used.max(v), m, k, blank, limit, f) {
                return true;
            }
        }
        false
    }
    let mut dfa = vec![0; m * k];
    rec(&mut dfa, 0, 0, m, k, blank.index(), limit, f).then_some(dfa)
}
