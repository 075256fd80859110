//! Digit-level primitives.
//!
//! Base-k digit words, scattered-subsequence and block counting, and the
//! definition-level evaluators for the Thue–Morse (`t`), Rudin–Shapiro (`r`)
//! and inversion (`i`) sequences. Everything here works straight from the
//! binary representation and serves as the reference the faster evaluators
//! are checked against.

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of {+1, -1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^count`.
    pub fn from_parity<T: Into<u128>>(count: T) -> Sign {
        if count.into() & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn try_from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Sign, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::try_from_value(v).ok_or_else(|| serde::de::Error::custom("sign must be +1 or -1"))
    }
}

/// A word over `{0, .., base-1}`, most significant digit first.
///
/// Leading zeros are allowed so that padded representations can be built;
/// [`to_base_digits`] always produces the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString {
    digits: Vec<u8>,
    base: u32,
}

impl DigitString {
    pub fn new(digits: Vec<u8>, base: u32) -> Result<Self> {
        if !(2..=256).contains(&base) {
            return Err(Error::InvalidBase(base));
        }
        if let Some(&d) = digits.iter().find(|&&d| u32::from(d) >= base) {
            return Err(Error::DigitOutOfRange { digit: d.into(), base });
        }
        Ok(DigitString { digits, base })
    }

    /// Parses a binary word such as `"1100"`.
    pub fn binary(word: &str) -> Result<Self> {
        let digits = word
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::DigitOutOfRange {
                    digit: other.to_digit(36).unwrap_or(u32::MAX),
                    base: 2,
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        DigitString::new(digits, 2)
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// No leading zero, except for the single-digit word `0`.
    pub fn is_canonical(&self) -> bool {
        match self.digits.as_slice() {
            [] => false,
            [_] => true,
            [first, ..] => *first != 0,
        }
    }

    pub fn with_leading_zeros(&self, count: usize) -> DigitString {
        let mut digits = vec![0; count];
        digits.extend_from_slice(&self.digits);
        DigitString {
            digits,
            base: self.base,
        }
    }

    pub fn to_integer(&self) -> Result<u64> {
        let base = u64::from(self.base);
        self.digits.iter().try_fold(0u64, |acc, &d| {
            acc.checked_mul(base)
                .and_then(|v| v.checked_add(u64::from(d)))
                .ok_or(Error::OutOfRange {
                    value: u128::MAX,
                    max: u64::MAX as u128,
                })
        })
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            let c = char::from_digit(d.into(), 36).unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Canonical base-`k` representation of `n`, most significant digit first.
pub fn to_base_digits(n: u64, k: u32) -> Result<DigitString> {
    if !(2..=256).contains(&k) {
        return Err(Error::InvalidBase(k));
    }
    let base = u64::from(k);
    let mut digits = Vec::new();
    let mut m = n;
    loop {
        digits.push((m % base) as u8);
        m /= base;
        if m == 0 {
            break;
        }
    }
    digits.reverse();
    Ok(DigitString { digits, base: k })
}

fn binary(n: u64) -> DigitString {
    to_base_digits(n, 2).expect("base 2 is valid")
}

/// Number of index tuples `j_1 < .. < j_t` with `word[j_s] = pattern[s]`.
pub fn count_scattered(pattern: &DigitString, word: &DigitString) -> Result<u128> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.base != word.base {
        return Err(Error::BaseMismatch {
            pattern: pattern.base,
            word: word.base,
        });
    }
    // ways[j] = number of embeddings of pattern[..j] in the word read so far
    let p = pattern.digits();
    let mut ways = vec![0u128; p.len() + 1];
    ways[0] = 1;
    for &c in word.digits() {
        for j in (1..=p.len()).rev() {
            if p[j - 1] == c {
                ways[j] = ways[j].checked_add(ways[j - 1]).ok_or(Error::CountOverflow)?;
            }
        }
    }
    Ok(ways[p.len()])
}

/// Number of (possibly overlapping) contiguous occurrences of `block` in `word`.
pub fn count_block(block: &DigitString, word: &DigitString) -> Result<u64> {
    if block.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if block.base != word.base {
        return Err(Error::BaseMismatch {
            pattern: block.base,
            word: word.base,
        });
    }
    Ok(word
        .digits()
        .windows(block.len())
        .filter(|w| *w == block.digits())
        .count() as u64)
}

/// Inversions of the binary representation: scattered occurrences of `10`.
pub fn inv2(n: u64) -> u64 {
    let pattern = DigitString {
        digits: vec![1, 0],
        base: 2,
    };
    count_scattered(&pattern, &binary(n)).expect("a 64-digit word cannot overflow") as u64
}

/// Parity of `inv2(n)` computed word-parallel.
///
/// Each zero bit contributes the number of ones above it. `above` holds, at
/// every position, the parity of the bits at or above it; restricted to the
/// zero bits that is exactly the parity of the ones above.
pub fn inv2_parity(n: u64) -> u32 {
    let mut above = n;
    above ^= above >> 1;
    above ^= above >> 2;
    above ^= above >> 4;
    above ^= above >> 8;
    above ^= above >> 16;
    above ^= above >> 32;
    (above & !n).count_ones() & 1
}

/// Sum of binary digits.
pub fn s2(n: u64) -> u64 {
    u64::from(n.count_ones())
}

/// `i_n = (-1)^{inv2(n)}`.
pub fn i_direct(n: u64) -> Sign {
    Sign::from_parity(inv2(n))
}

/// `t_n = (-1)^{s2(n)}`.
pub fn t_direct(n: u64) -> Sign {
    Sign::from_parity(s2(n))
}

/// `r_n = (-1)^{e(n)}` with `e(n)` the number of (overlapping) `11` blocks.
pub fn r_direct(n: u64) -> Sign {
    let block = DigitString {
        digits: vec![1, 1],
        base: 2,
    };
    Sign::from_parity(count_block(&block, &binary(n)).expect("block is non-empty"))
}

/// `(-1)^{count_scattered(w, binary(n))}`.
pub fn sign_of_subseq_count(w: &DigitString, n: u64) -> Result<Sign> {
    if w.base != 2 {
        return Err(Error::BaseMismatch {
            pattern: w.base,
            word: 2,
        });
    }
    count_scattered(w, &binary(n)).map(Sign::from_parity)
}
