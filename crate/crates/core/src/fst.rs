//! The two-state `mul2` transducer that doubles a reverse-ternary number,
//! and an independent schoolbook doubling to check it against.
//!
//! ```text
//!          0:0        2:1        2:2
//!        ┌─────┐    ───────▶   ┌─────┐
//!   ──▶  │  F  │               │  G  │
//!        └─────┘    ◀───────   └─────┘
//!          1:2        0:1        1:0
//! ```
//!
//! Read from `F` the output is `2x`; read from `G` it is `2x + 1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ternary::{TernaryError, TernaryNumber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FstState {
    F,
    G,
}

/// Ternary digits, least significant first, possibly with trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TernaryWord(Vec<u8>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FstError {
    #[error("doubling needs a trailing padding 0")]
    MissingPadding,
    #[error(transparent)]
    Digit(#[from] TernaryError),
}

impl TernaryWord {
    pub fn new(digits: Vec<u8>) -> Result<Self, FstError> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(TernaryError::BadDigit(char::from(b'0' + d.min(9))).into());
        }
        Ok(TernaryWord(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The number's digits followed by `padding` zeros.
    pub fn padded(x: &TernaryNumber, padding: usize) -> Self {
        let mut d = x.digits().to_vec();
        d.extend(std::iter::repeat_n(0, padding));
        TernaryWord(d)
    }

    pub fn value(&self) -> TernaryNumber {
        TernaryNumber::from_digits(self.0.clone()).expect("digits validated")
    }
}

impl FromStr for TernaryWord {
    type Err = FstError;

    /// Parses a least-significant-first digit string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .chars()
            .map(|c| match c {
                '0'..='2' => Ok(c as u8 - b'0'),
                _ => Err(TernaryError::BadDigit(c)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TernaryWord(digits))
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// One transducer arrow: `(state, read) -> (write, next)`.
#[inline]
pub fn fst_step(state: FstState, read: u8) -> (u8, FstState) {
    match (state, read) {
        (FstState::F, 0) => (0, FstState::F),
        (FstState::F, 1) => (2, FstState::F),
        (FstState::F, 2) => (1, FstState::G),
        (FstState::G, 0) => (1, FstState::F),
        (FstState::G, 1) => (0, FstState::G),
        (FstState::G, 2) => (2, FstState::G),
        _ => unreachable!("ternary digit out of range"),
    }
}

/// Runs the transducer over `w`, one output digit per input digit. The final
/// state is discarded.
pub fn transduce(start: FstState, w: &TernaryWord) -> TernaryWord {
    let mut state = start;
    let out = w
        .0
        .iter()
        .map(|&d| {
            let (out, next) = fst_step(state, d);
            state = next;
            out
        })
        .collect();
    TernaryWord(out)
}

/// Doubles a padded reverse-ternary word by running the transducer from `F`.
pub fn double_reverse_ternary(w: &TernaryWord) -> Result<TernaryWord, FstError> {
    match w.0.last() {
        Some(0) => Ok(transduce(FstState::F, w)),
        _ => Err(FstError::MissingPadding),
    }
}

/// `2x` by digit-wise multiply and carry, without the transducer.
pub fn oracle_double(x: &TernaryNumber) -> TernaryNumber {
    let mut out = Vec::with_capacity(x.len() + 1);
    let mut carry = 0u32;
    for &d in x.digits() {
        let v = 2 * d as u32 + carry;
        out.push((v % 3) as u8);
        carry = v / 3;
    }
    while carry > 0 {
        out.push((carry % 3) as u8);
        carry /= 3;
    }
    TernaryNumber::from_digits(out).expect("digits below 3")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> TernaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn caption_example() {
        assert_eq!(transduce(FstState::F, &word("10120")), word("20211"));
        assert_eq!(word("10120").value().to_u128(), Some(64));
        assert_eq!(word("20211").value().to_u128(), Some(128));
    }

    #[test]
    fn base_cases() {
        assert_eq!(transduce(FstState::F, &word("0")), word("0"));
        assert_eq!(transduce(FstState::G, &word("0")), word("1"));
        assert_eq!(transduce(FstState::F, &word("")), word(""));
    }

    #[test]
    fn padding_required() {
        assert_eq!(double_reverse_ternary(&word("00")).unwrap(), word("00"));
        assert_eq!(
            double_reverse_ternary(&word("1012")),
            Err(FstError::MissingPadding)
        );
        assert_eq!(double_reverse_ternary(&word("")), Err(FstError::MissingPadding));
    }

    #[test]
    fn oracle_examples() {
        let x64 = TernaryNumber::from_u128(64);
        assert_eq!(oracle_double(&x64).to_reverse_string(), "20211");
        assert!(oracle_double(&TernaryNumber::zero()).is_zero());
        let p19 = crate::ternary::power_of_two_ternary(19);
        assert_eq!(oracle_double(&p19).to_reverse_string(), "1101011202221");
    }

    #[test]
    fn bad_digits_rejected() {
        assert!("0130".parse::<TernaryWord>().is_err());
        assert!(TernaryWord::new(vec![0, 3]).is_err());
    }
}
