//! The inversion sequence `i_n = (-1)^{inv2(n)}`, where `inv2(n)` counts the
//! occurrences of `10` as a scattered subsequence of the binary
//! representation of `n`.
//!
//! * [`digits`]: base conversion, subsequence and block counting, and the
//!   definition-level `i`, `t` (Thue–Morse) and `r` (Rudin–Shapiro).
//! * [`automaton`]: the four-state automaton and the morphisms whose codings
//!   produce `i` and `r`.
//! * [`recurrence`]: the halving and base-4 recurrences and the transfer
//!   matrices acting on `V_n = (i_n, i_{2n})`.
//! * [`summatory`]: `S(N) = Σ_{n ≤ N} i_n` (inclusive), its logarithmic-time
//!   evaluation, and exact-integer checks of its extrema and growth.
//! * [`words`]: squares, cubes, higher powers and palindromes in prefixes.
//! * [`verify`]: named verification suites over all of the above.

pub mod automaton;
pub mod digits;
pub mod emit;
pub mod error;
pub mod recurrence;
pub mod report;
pub mod summatory;
pub mod verify;
pub mod words;

pub use digits::{DigitString, Sign};
pub use error::{Error, Result, MAX_INDEX};
