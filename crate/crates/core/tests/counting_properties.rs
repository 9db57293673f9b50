use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use toepnull::counting::{
    count_string, count_table, positive_excursion_count, transition_weights, PairClass,
};
use toepnull::kernel_structure::validate_nullity_string;
use toepnull::{NullityString, PairState, PrimeField};

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

fn gf(q: u32) -> PrimeField {
    PrimeField::new(q).unwrap()
}

/// Valid strings starting `1` that stay positive until a final `0`.
fn excursions(n: usize) -> Vec<NullityString> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<NullityString>) {
        if prefix.len() == n + 1 {
            if *prefix.last().unwrap() == 0 {
                out.push(NullityString::from(prefix.clone()));
            }
            return;
        }
        let cur = *prefix.last().unwrap();
        // cur is positive here
        for next in [cur - 1, cur, cur + 1] {
            if (next == 0) != (prefix.len() == n) {
                continue;
            }
            prefix.push(next);
            if validate_nullity_string(&NullityString::from(prefix.clone())) {
                go(prefix, n, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut vec![1], n, &mut out);
    out
}

#[test]
fn excursion_count_is_sum_over_strings() {
    for q in [2, 3, 5] {
        for n in 1..=10 {
            let start = PairState::new(0, 1).unwrap();
            let total: BigUint = excursions(n)
                .iter()
                .map(|s| count_string(start, s, gf(q)).unwrap())
                .sum();
            assert_eq!(total, positive_excursion_count(n, gf(q)).unwrap(), "q={q} n={n}");
        }
    }
}

#[test]
fn weights_cover_every_extension() {
    for q in PRIMES {
        for prev in 0usize..6 {
            for cur in prev.saturating_sub(1)..=prev + 1 {
                let state = PairState::new(prev, cur).unwrap();
                let total: u64 = transition_weights(state, gf(q)).iter().map(|w| w.1).sum();
                assert_eq!(total, u64::from(q * q), "{state}");
            }
        }
    }
    assert_eq!(PairClass::ALL.len(), 5);
}

proptest! {
    #[test]
    fn rows_are_normalized(q in prop::sample::select(PRIMES.to_vec()), n in 0usize..30) {
        let t = count_table(n, gf(q));
        for m in 0..=n {
            prop_assert_eq!(t.row_sum(m), BigUint::from(q).pow(2 * m as u32 + 1));
            prop_assert_eq!(t.get(m, m + 1), BigUint::one());
        }
    }

    #[test]
    fn table_prefixes_agree(q in prop::sample::select(PRIMES.to_vec()), n in 1usize..25, m in 0usize..25) {
        let m = m % n;
        let big = count_table(n, gf(q));
        let small = count_table(m, gf(q));
        prop_assert_eq!(big.rows()[..=m].to_vec(), small.rows().to_vec());
    }

    #[test]
    fn count_string_is_multiplicative(
        q in prop::sample::select(PRIMES.to_vec()),
        split in 1usize..6,
        tail in 1usize..6,
    ) {
        // 1, 2, .., split+1, then a plateau, then the descent to 0
        let peak = split + 1;
        let mut values: Vec<usize> = (1..=peak).collect();
        values.extend(std::iter::repeat_n(peak, tail));
        values.extend((0..peak).rev());
        let s = NullityString::from(values.clone());
        prop_assume!(validate_nullity_string(&s));
        let start = PairState::new(0, 1).unwrap();
        let whole = count_string(start, &s, gf(q)).unwrap();
        let k = split;
        let head = NullityString::from(values[..=k].to_vec());
        let rest = NullityString::from(values[k..].to_vec());
        let mid = PairState::new(values[k - 1], values[k]).unwrap();
        let product = count_string(start, &head, gf(q)).unwrap() * count_string(mid, &rest, gf(q)).unwrap();
        prop_assert_eq!(whole.clone(), product);
        prop_assert!(!whole.is_zero());
    }
}
