use proptest::prelude::*;

use invseq_core::automaton::{dfao_eval, inversion_dfao, morphism_g};
use invseq_core::digits::{count_scattered, i_direct, inv2, to_base_digits, DigitString};
use invseq_core::recurrence::{i_rec2, i_rec4, v};
use invseq_core::summatory::{s_count_digits, s_fast, SumStream, SummatoryPoint};
use invseq_core::words::{inversion_prefix, palindromes_in, scan_powers_in};
use invseq_core::MAX_INDEX;

fn pattern_10() -> DigitString {
    DigitString::binary("10").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn base_conversion_round_trips(n in any::<u64>(), k in 2u32..=36) {
        let d = to_base_digits(n, k).unwrap();
        prop_assert!(d.is_canonical());
        prop_assert_eq!(d.to_integer().unwrap(), n);
    }

    #[test]
    fn leading_zeros_do_not_change_counts(n in 0u64..1 << 40, pad in 0usize..20) {
        let w = to_base_digits(n, 2).unwrap();
        let padded = w.with_leading_zeros(pad);
        prop_assert_eq!(padded.to_integer().unwrap(), n);
        let p = pattern_10();
        prop_assert_eq!(count_scattered(&p, &padded).unwrap(), count_scattered(&p, &w).unwrap());
        prop_assert_eq!(count_scattered(&p, &w).unwrap(), u128::from(inv2(n)));
        let a = inversion_dfao();
        prop_assert_eq!(a.run(padded.digits()), a.run(w.digits()));
    }

    #[test]
    fn evaluators_agree(n in 0u64..=MAX_INDEX) {
        let i = i_direct(n);
        prop_assert_eq!(dfao_eval(&inversion_dfao(), n).1, i);
        prop_assert_eq!(morphism_g().coded_at(n).unwrap(), i);
        prop_assert_eq!(i_rec2(n), i);
        prop_assert_eq!(i_rec4(n), i);
        prop_assert_eq!(v(n).top, i);
    }

    #[test]
    fn fast_sum_matches_digit_oracle(n in 0u64..=MAX_INDEX) {
        let s = s_fast(n).unwrap();
        prop_assert_eq!(s, s_count_digits(n));
        let point = SummatoryPoint { index: n, value: s };
        prop_assert!(point.satisfies_invariants());
    }

    #[test]
    fn stream_window_matches_fast_sum(start in 0u64..1 << 50, len in 1usize..64) {
        for p in SumStream::starting_at(start).take(len) {
            prop_assert_eq!(p.value, s_fast(p.index).unwrap());
            prop_assert!(p.satisfies_invariants());
        }
    }

    #[test]
    fn base4_step_doubles(m in 0u64..(MAX_INDEX - 3) / 4) {
        prop_assert_eq!(s_fast(4 * m + 3).unwrap(), 2 * s_fast(m).unwrap());
    }
}

// Evidence can only grow with the prefix: periods and palindromes found in a
// prefix persist, with the same first positions, in every longer prefix.
#[test]
fn word_evidence_is_monotone() {
    let long = inversion_prefix(1 << 12);
    let mut prev_pal = 0;
    for len in [256usize, 512, 1024, 2048, 4096] {
        let w = &long[..len];
        let squares = scan_powers_in(w, 2).unwrap();
        let longer = scan_powers_in(&long[..(2 * len).min(long.len())], 2).unwrap();
        for (p, s) in &squares.periods {
            assert_eq!(longer.periods.get(p), Some(s), "period {p} at len {len}");
        }
        let pal = palindromes_in(w).unwrap().max_length;
        assert!(pal >= prev_pal);
        prev_pal = pal;
    }
}
