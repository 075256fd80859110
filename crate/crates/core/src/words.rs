//! Repetitions and palindromes in finite prefixes of `(i_n)`.
//!
//! Claims about the infinite word ("squares exactly when the period is 1, 2
//! or 3·2^j", "cubes exactly when the period is 3", "no 5th powers",
//! "arbitrarily long palindromes") can only be checked one-sidedly on a
//! prefix: every claimed period within a presence window must be witnessed,
//! and no other period may be witnessed at all.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digits::Sign;
use crate::error::{Error, Result};
use crate::summatory::i_value;

/// Largest prefix the scanners accept (quadratic scans above this are not desk scale).
pub const MAX_PREFIX_LEN: usize = 1 << 17;

/// `i_0 .. i_{len-1}`.
pub fn inversion_prefix(len: usize) -> Vec<Sign> {
    (0..len as u64)
        .map(|n| if i_value(n) == 1 { Sign::Plus } else { Sign::Minus })
        .collect()
}

/// Periods `p` for which a `power`-th power with period `p` occurs in the
/// prefix, with the earliest start position of one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionReport {
    pub power: usize,
    pub prefix_len: usize,
    pub periods: BTreeMap<usize, usize>,
}

#[derive(Serialize, Deserialize)]
struct PeriodEntry {
    period: usize,
    first_position: usize,
}

#[derive(Serialize, Deserialize)]
struct RepetitionJson {
    power: usize,
    prefix_len: usize,
    periods: Vec<PeriodEntry>,
}

impl Serialize for RepetitionReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepetitionJson {
            power: self.power,
            prefix_len: self.prefix_len,
            periods: self
                .periods
                .iter()
                .map(|(&period, &first_position)| PeriodEntry { period, first_position })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RepetitionReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RepetitionJson::deserialize(d)?;
        Ok(RepetitionReport {
            power: j.power,
            prefix_len: j.prefix_len,
            periods: j.periods.into_iter().map(|e| (e.period, e.first_position)).collect(),
        })
    }
}

impl RepetitionReport {
    pub fn period_set(&self) -> Vec<usize> {
        self.periods.keys().copied().collect()
    }

    /// Every witness really is a `power`-th power of its period.
    pub fn witnesses_valid(&self, word: &[Sign]) -> bool {
        self.periods.iter().all(|(&p, &s)| {
            let len = (self.power - 1) * p;
            s + len + p <= word.len() && (0..len).all(|j| word[s + j] == word[s + j + p])
        })
    }
}

/// Earliest start of a `power`-th power of period `p`, if any.
///
/// Tracks the current run of positions `t` with `w[t] = w[t+p]`; a run of
/// `(power-1)·p` such positions starting at `s` is exactly such a power.
fn earliest_power(word: &[Sign], power: usize, p: usize) -> Option<usize> {
    let need = (power - 1) * p;
    let mut run = 0;
    for t in 0..word.len().saturating_sub(p) {
        if word[t] == word[t + p] {
            run += 1;
            if run == need {
                return Some(t + 1 - need);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Scans every period up to `word.len() / power`.
pub fn scan_powers_in(word: &[Sign], power: usize) -> Result<RepetitionReport> {
    if power < 2 {
        return Err(Error::InvalidParameter("power must be at least 2".into()));
    }
    if word.len() < power {
        return Err(Error::InvalidParameter(format!(
            "prefix of length {} cannot hold a power {power}",
            word.len()
        )));
    }
    let periods = (1..=word.len() / power)
        .into_par_iter()
        .filter_map(|p| earliest_power(word, power, p).map(|s| (p, s)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(RepetitionReport {
        power,
        prefix_len: word.len(),
        periods,
    })
}

fn check_prefix_len(prefix_len: usize) -> Result<()> {
    if prefix_len > MAX_PREFIX_LEN {
        return Err(Error::ResourceLimit(format!(
            "prefix length {prefix_len} exceeds {MAX_PREFIX_LEN}"
        )));
    }
    Ok(())
}

/// Powers of the given order in the first `prefix_len` terms of `(i_n)`.
pub fn scan_powers(power: usize, prefix_len: usize) -> Result<RepetitionReport> {
    check_prefix_len(prefix_len)?;
    scan_powers_in(&inversion_prefix(prefix_len), power)
}

/// Longest palindromic factors of a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PalindromeReport {
    pub prefix_len: usize,
    pub max_length: usize,
    /// Longest odd and longest even palindrome, length → earliest start.
    pub witnesses: BTreeMap<usize, usize>,
}

#[derive(Serialize, Deserialize)]
struct PalEntry {
    length: usize,
    first_position: usize,
}

#[derive(Serialize, Deserialize)]
struct PalindromeJson {
    prefix_len: usize,
    max_length: usize,
    witnesses: Vec<PalEntry>,
}

impl Serialize for PalindromeReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PalindromeJson {
            prefix_len: self.prefix_len,
            max_length: self.max_length,
            witnesses: self
                .witnesses
                .iter()
                .map(|(&length, &first_position)| PalEntry { length, first_position })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PalindromeReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PalindromeJson::deserialize(d)?;
        Ok(PalindromeReport {
            prefix_len: j.prefix_len,
            max_length: j.max_length,
            witnesses: j.witnesses.into_iter().map(|e| (e.length, e.first_position)).collect(),
        })
    }
}

impl PalindromeReport {
    pub fn witnesses_valid(&self, word: &[Sign]) -> bool {
        self.witnesses
            .iter()
            .all(|(&len, &s)| s + len <= word.len() && word[s..s + len].iter().eq(word[s..s + len].iter().rev()))
    }
}

/// Manacher's algorithm: the longest palindrome centred at every position of
/// the word with separators between letters.
pub fn palindromes_in(word: &[Sign]) -> Result<PalindromeReport> {
    if word.is_empty() {
        return Err(Error::InvalidParameter("prefix must be non-empty".into()));
    }
    // t = # w0 # w1 # ... # w_{n-1} #, separators encoded as None
    let t: Vec<Option<Sign>> = std::iter::once(None)
        .chain(word.iter().flat_map(|&c| [Some(c), None]))
        .collect();
    let mut rad = vec![0usize; t.len()];
    let (mut center, mut right) = (0usize, 0usize);
    for i in 0..t.len() {
        let mut r = if i < right {
            rad[2 * center - i].min(right - i)
        } else {
            0
        };
        while i > r && i + r + 1 < t.len() && t[i - r - 1] == t[i + r + 1] {
            r += 1;
        }
        rad[i] = r;
        if i + r > right {
            center = i;
            right = i + r;
        }
    }
    // the palindrome around t[i] has length rad[i] in the word and starts at (i - rad[i]) / 2
    let mut best_odd: Option<(usize, usize)> = None;
    let mut best_even: Option<(usize, usize)> = None;
    for (i, &r) in rad.iter().enumerate() {
        let slot = if i % 2 == 1 { &mut best_odd } else { &mut best_even };
        if r == 0 {
            continue;
        }
        let start = (i - r) / 2;
        match slot {
            Some((len, s)) if r < *len || (r == *len && start >= *s) => {}
            _ => *slot = Some((r, start)),
        }
    }
    let witnesses: BTreeMap<usize, usize> = [best_odd, best_even].into_iter().flatten().collect();
    Ok(PalindromeReport {
        prefix_len: word.len(),
        max_length: witnesses.keys().copied().max().unwrap_or(0),
        witnesses,
    })
}

pub fn scan_palindromes(prefix_len: usize) -> Result<PalindromeReport> {
    check_prefix_len(prefix_len)?;
    palindromes_in(&inversion_prefix(prefix_len))
}

/// Periods of squares claimed to occur: `{1, 2} ∪ {3·2^j}`.
pub fn is_claimed_square_period(p: usize) -> bool {
    p == 1 || p == 2 || (p.is_multiple_of(3) && (p / 3).is_power_of_two())
}

/// Claimed square periods `≤ bound`.
pub fn claimed_square_periods(bound: usize) -> Vec<usize> {
    (1..=bound).filter(|&p| is_claimed_square_period(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::i_direct;

    // Tries every (start, period) pair directly.
    fn brute_powers(w: &[Sign], power: usize) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for p in 1..=w.len() / power {
            for s in 0..=w.len() - power * p {
                if (0..(power - 1) * p).all(|j| w[s + j] == w[s + j + p]) {
                    out.insert(p, s);
                    break;
                }
            }
        }
        out
    }

    fn brute_max_palindrome(w: &[Sign]) -> usize {
        let mut best = 0;
        for a in 0..w.len() {
            for b in a + 1..=w.len() {
                if w[a..b].iter().eq(w[a..b].iter().rev()) {
                    best = best.max(b - a);
                }
            }
        }
        best
    }

    #[test]
    fn prefix_matches_definition() {
        let w = inversion_prefix(4096);
        assert!(w.iter().enumerate().all(|(n, &s)| s == i_direct(n as u64)));
    }

    #[test]
    fn power_scan_matches_brute_force() {
        let w = inversion_prefix(600);
        for power in 2..=5 {
            let rep = scan_powers_in(&w, power).unwrap();
            assert_eq!(rep.periods, brute_powers(&w, power), "power {power}");
            assert!(rep.witnesses_valid(&w));
        }
    }

    #[test]
    fn cubes_start_at_zero() {
        let rep = scan_powers(3, 1 << 10).unwrap();
        assert_eq!(rep.period_set(), [3]);
        assert_eq!(rep.periods[&3], 0);
    }

    #[test]
    fn argument_checks() {
        assert!(scan_powers(1, 100).is_err());
        assert!(scan_powers(5, 3).is_err());
        assert!(matches!(
            scan_powers(2, MAX_PREFIX_LEN + 1),
            Err(Error::ResourceLimit(_))
        ));
        assert!(scan_palindromes(0).is_err());
    }

    #[test]
    fn palindromes_match_brute_force() {
        for len in [1usize, 2, 3, 5, 17, 64, 200] {
            let w = inversion_prefix(len);
            let rep = palindromes_in(&w).unwrap();
            assert_eq!(rep.max_length, brute_max_palindrome(&w), "len {len}");
            assert!(rep.witnesses_valid(&w));
        }
    }

    #[test]
    fn palindrome_small() {
        let rep = scan_palindromes(2).unwrap();
        assert_eq!(rep.max_length, 2);
        assert_eq!(rep.witnesses.get(&2), Some(&0));
    }

    #[test]
    fn claimed_periods() {
        assert_eq!(claimed_square_periods(50), [1, 2, 3, 6, 12, 24, 48]);
        assert!(!is_claimed_square_period(9));
        assert!(!is_claimed_square_period(0));
    }

    #[test]
    fn report_json_shape() {
        let rep = scan_powers(3, 64).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["power"], 3);
        assert_eq!(v["periods"][0]["period"], 3);
        assert_eq!(v["periods"][0]["first_position"], 0);
        let back: RepetitionReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }
}
