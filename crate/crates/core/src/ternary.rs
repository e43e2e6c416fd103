//! Base-3 digit vectors and the powers-of-two scanner.
//!
//! Erdős conjectured that `2^n` has a ternary digit 2 for every `n > 8`;
//! the only known exceptions are `1`, `4` and `256`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// A natural number as base-3 digits, least significant first.
///
/// Canonical: no most-significant zeros, and zero is the single digit `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryNumber {
    digits: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TernaryError {
    #[error("invalid ternary digit {0:?}")]
    BadDigit(char),
    #[error("empty digit string")]
    Empty,
    #[error("blank embedded at digit {0}")]
    MalformedTape(usize),
}

impl TernaryNumber {
    pub fn zero() -> Self {
        TernaryNumber { digits: vec![0] }
    }

    pub fn one() -> Self {
        TernaryNumber { digits: vec![1] }
    }

    /// Canonicalises a least-significant-first digit vector.
    pub fn from_digits(mut digits: Vec<u8>) -> Result<Self, TernaryError> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(TernaryError::BadDigit(char::from(b'0' + d.min(9))));
        }
        while digits.len() > 1 && digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            digits.push(0);
        }
        Ok(TernaryNumber { digits })
    }

    /// Parses a reverse-ternary string (least significant digit first).
    pub fn from_reverse_str(s: &str) -> Result<Self, TernaryError> {
        if s.is_empty() {
            return Err(TernaryError::Empty);
        }
        let digits = s
            .chars()
            .map(|c| match c {
                '0'..='2' => Ok(c as u8 - b'0'),
                _ => Err(TernaryError::BadDigit(c)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_digits(digits)
    }

    pub fn from_u128(mut v: u128) -> Self {
        let mut digits = Vec::new();
        while v > 0 {
            digits.push((v % 3) as u8);
            v /= 3;
        }
        Self::from_digits(digits).expect("digits below 3")
    }

    /// The value, if it fits.
    pub fn to_u128(&self) -> Option<u128> {
        self.digits.iter().rev().try_fold(0u128, |acc, &d| {
            acc.checked_mul(3)?.checked_add(d as u128)
        })
    }

    /// Least-significant-first digits.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Never zero: zero itself is the single digit `0`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_zero(&self) -> bool {
        self.digits == [0]
    }

    /// Most-significant-first rendering, e.g. `100111` for 256.
    pub fn to_ternary_string(&self) -> String {
        self.digits.iter().rev().map(|d| char::from(b'0' + d)).collect()
    }

    /// Least-significant-first rendering, e.g. `111001` for 256.
    pub fn to_reverse_string(&self) -> String {
        self.digits.iter().map(|d| char::from(b'0' + d)).collect()
    }

    /// In-place doubling with carry.
    pub(crate) fn double_in_place(&mut self) {
        // d*2 + carry is at most 5, so the carry is 0 or 1
        const SUM_DIGIT: [u8; 6] = [0, 1, 2, 0, 1, 2];
        const SUM_CARRY: [u8; 6] = [0, 0, 0, 1, 1, 1];
        let mut carry = 0u8;
        for d in self.digits.iter_mut() {
            let s = (*d * 2 + carry) as usize;
            *d = SUM_DIGIT[s];
            carry = SUM_CARRY[s];
        }
        if carry != 0 {
            self.digits.push(carry);
        }
    }
}

impl fmt::Display for TernaryNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ternary_string())
    }
}

impl FromStr for TernaryNumber {
    type Err = TernaryError;

    /// Parses a most-significant-first ternary string.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rev: String = s.chars().rev().collect();
        Self::from_reverse_str(&rev)
    }
}

/// Digits of `2^n`, by `n` doublings of 1.
pub fn power_of_two_ternary(n: u64) -> TernaryNumber {
    let mut x = TernaryNumber::one();
    for _ in 0..n {
        x.double_in_place();
    }
    x
}

pub fn has_digit_two(x: &TernaryNumber) -> bool {
    x.digits.contains(&2)
}

/// Decodes the digits written on a tape, least significant first, reading
/// until the first blank. Digit symbols must be `0`, `1` or `2`; anything
/// else ends the number only if nothing but blanks follow it.
pub fn decode_tape_number<I>(cells: I) -> Result<TernaryNumber, TernaryError>
where
    I: IntoIterator<Item = Option<u8>>,
{
    let mut digits = Vec::new();
    let mut ended = false;
    for (i, cell) in cells.into_iter().enumerate() {
        match (cell, ended) {
            (Some(d), false) if d <= 2 => digits.push(d),
            (Some(d), false) => return Err(TernaryError::BadDigit(char::from(b'0' + d.min(9)))),
            (Some(_), true) => return Err(TernaryError::MalformedTape(i)),
            (None, _) => ended = true,
        }
    }
    if digits.is_empty() {
        return Err(TernaryError::Empty);
    }
    TernaryNumber::from_digits(digits)
}

/// Result of scanning `2^0 ..= 2^bound` for powers without a digit 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub bound: u64,
    /// Exponents whose power has no digit 2, ascending.
    pub digit_two_free: Vec<u64>,
    /// Per-exponent counts of digits 0, 1 and 2, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digit_counts: Option<Vec<[u32; 3]>>,
    /// Digit operations performed by the incremental doubling.
    pub digit_ops: u64,
}

impl ScanReport {
    /// Exponents above 8 with no digit 2: counterexamples to the conjecture.
    pub fn counterexamples(&self) -> impl Iterator<Item = u64> + '_ {
        self.digit_two_free.iter().copied().filter(|&n| n > 8)
    }
}

pub fn scan_erdos(bound: u64) -> ScanReport {
    scan_erdos_with(bound, false)
}

/// Walks `2^n` for `n = 0..=bound` keeping one digit vector that is doubled
/// in place.
pub fn scan_erdos_with(bound: u64, record_digit_counts: bool) -> ScanReport {
    let mut x = TernaryNumber::one();
    let mut free = Vec::new();
    let mut counts = record_digit_counts.then(Vec::new);
    let mut ops = 0u64;
    for n in 0..=bound {
        if n > 0 {
            ops += x.len() as u64;
            x.double_in_place();
        }
        if let Some(counts) = counts.as_mut() {
            let mut c = [0u32; 3];
            for &d in x.digits() {
                c[d as usize] += 1;
            }
            counts.push(c);
        }
        if !has_digit_two(&x) {
            free.push(n);
        }
    }
    ScanReport {
        bound,
        digit_two_free: free,
        digit_counts: counts,
        digit_ops: ops,
    }
}
