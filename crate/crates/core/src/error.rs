use thiserror::Error;

/// Largest index accepted by the range-checked entry points (`s_fast`, sweeps, CLI).
pub const MAX_INDEX: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: base must be at least 2")]
    InvalidBase(u32),
    #[error("digit {digit} is out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("pattern must be non-empty")]
    EmptyPattern,
    #[error("base mismatch: pattern is base {pattern}, word is base {word}")]
    BaseMismatch { pattern: u32, word: u32 },
    #[error("{value} is outside the supported range (maximum {max})")]
    OutOfRange { value: u128, max: u128 },
    #[error("transfer matrix index {0} is not in 0..=3")]
    InvalidMatrixIndex(usize),
    #[error("morphism is not prolongable on seed {0:?}")]
    NotProlongable(char),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("subsequence count overflowed 128 bits")]
    CountOverflow,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(n: u64) -> Result<u64> {
    if n > MAX_INDEX {
        Err(Error::OutOfRange {
            value: n as u128,
            max: MAX_INDEX as u128,
        })
    } else {
        Ok(n)
    }
}
