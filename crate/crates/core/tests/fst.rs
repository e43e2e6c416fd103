use bblab::fst::{double_reverse_ternary, oracle_double, transduce, FstState, TernaryWord};
use bblab::ternary::TernaryNumber;
use proptest::prelude::*;

/// All digit words of length `len`, least significant digit first.
fn words(len: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..3u32.pow(len as u32)).map(move |mut v| {
        (0..len)
            .map(|_| {
                let d = (v % 3) as u8;
                v /= 3;
                d
            })
            .collect()
    })
}

fn plus_one(x: &TernaryNumber) -> TernaryNumber {
    let mut d = x.digits().to_vec();
    let mut i = 0;
    loop {
        if i == d.len() {
            d.push(0);
        }
        if d[i] < 2 {
            d[i] += 1;
            break;
        }
        d[i] = 0;
        i += 1;
    }
    TernaryNumber::from_digits(d).unwrap()
}

#[test]
fn exhaustive_up_to_eight_digits() {
    let mut checked = 0;
    for len in 0..=8 {
        for digits in words(len) {
            let x = TernaryNumber::from_digits(digits.clone()).unwrap();
            let mut padded = digits;
            padded.push(0);
            let w = TernaryWord::new(padded).unwrap();
            let doubled = double_reverse_ternary(&w).unwrap();
            assert_eq!(doubled.len(), w.len());
            assert_eq!(doubled.value(), oracle_double(&x), "2 * {x}");
            let from_g = transduce(FstState::G, &w);
            assert_eq!(from_g.value(), plus_one(&oracle_double(&x)), "2 * {x} + 1");
            checked += 1;
        }
    }
    assert_eq!(checked, (0..=8).map(|l| 3u32.pow(l)).sum::<u32>());
}

#[test]
fn oracle_agrees_with_integers() {
    for v in 0..3u128.pow(8) {
        let x = TernaryNumber::from_u128(v);
        assert_eq!(oracle_double(&x).to_u128(), Some(2 * v));
        assert_eq!(plus_one(&x).to_u128(), Some(v + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn long_inputs(digits in proptest::collection::vec(0u8..3, 10_000)) {
        let x = TernaryNumber::from_digits(digits.clone()).unwrap();
        let w = TernaryWord::padded(&x, 1);
        let doubled = double_reverse_ternary(&w).unwrap();
        prop_assert_eq!(doubled.value(), oracle_double(&x));
        // the padding digit absorbs the final carry
        prop_assert_eq!(doubled.len(), x.len() + 1);
    }

    #[test]
    fn extra_padding_is_harmless(v in any::<u64>(), pad in 1usize..5) {
        let x = TernaryNumber::from_u128(v as u128);
        let w = TernaryWord::padded(&x, pad);
        let doubled = double_reverse_ternary(&w).unwrap();
        prop_assert_eq!(doubled.value().to_u128(), Some(2 * v as u128));
        prop_assert!(doubled.digits()[x.len() + 1..].iter().all(|&d| d == 0));
    }
}
