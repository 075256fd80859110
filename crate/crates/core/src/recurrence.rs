//! Recurrence and matrix evaluation of `i_n`.
//!
//! `V_n = (i_n, i_{2n})` satisfies `V_{4n+r} = Γ_r V_n` for `r = 0..3`, with
//! `Γ_0 = Γ_3 = I`, `Γ_1 = [[0, 1], [-1, 0]]` and `Γ_2 = -Γ_1`. All arithmetic
//! is on small integers.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::Serialize;

use crate::digits::Sign;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TransferMatrix(pub [[i64; 2]; 2]);

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix([[1, 0], [0, 1]]);
    pub const ZERO: TransferMatrix = TransferMatrix([[0, 0], [0, 0]]);

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.0
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn scale(&self, c: i64) -> TransferMatrix {
        let [[a, b], [x, d]] = self.0;
        TransferMatrix([[c * a, c * b], [c * x, c * d]])
    }

    /// Matrix-vector product. Wraps on overflow, which only a corrupted
    /// table can reach; the canonical matrices keep entries in `{-1, 0, 1}`.
    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        let [[a, b], [c, d]] = self.0;
        [
            a.wrapping_mul(v[0]).wrapping_add(b.wrapping_mul(v[1])),
            c.wrapping_mul(v[0]).wrapping_add(d.wrapping_mul(v[1])),
        ]
    }
}

impl Add for TransferMatrix {
    type Output = TransferMatrix;

    fn add(self, rhs: TransferMatrix) -> TransferMatrix {
        let mut out = self.0;
        for (row, r) in out.iter_mut().zip(rhs.0) {
            row[0] = row[0].wrapping_add(r[0]);
            row[1] = row[1].wrapping_add(r[1]);
        }
        TransferMatrix(out)
    }
}

impl Neg for TransferMatrix {
    type Output = TransferMatrix;

    fn neg(self) -> TransferMatrix {
        self.scale(-1)
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        TransferMatrix([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }
}

impl fmt::Display for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "(({a},{b}),({c},{d}))")
    }
}

/// The four transfer matrices `Γ_0..Γ_3`.
///
/// Evaluation paths take a `GammaSet` so that a deliberately corrupted table
/// can be pushed through the same code (mutation smoke tests).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaSet(pub [TransferMatrix; 4]);

impl Default for GammaSet {
    fn default() -> Self {
        let g1 = TransferMatrix([[0, 1], [-1, 0]]);
        GammaSet([TransferMatrix::IDENTITY, g1, -g1, TransferMatrix::IDENTITY])
    }
}

impl GammaSet {
    pub fn get(&self, r: usize) -> Result<TransferMatrix> {
        self.0.get(r).copied().ok_or(Error::InvalidMatrixIndex(r))
    }

    pub fn sum(&self) -> TransferMatrix {
        self.0.iter().fold(TransferMatrix::ZERO, |acc, &m| acc + m)
    }

    /// Returns a copy with one entry overwritten.
    pub fn with_entry(mut self, r: usize, row: usize, col: usize, value: i64) -> Result<GammaSet> {
        if r > 3 {
            return Err(Error::InvalidMatrixIndex(r));
        }
        if row > 1 || col > 1 {
            return Err(Error::InvalidParameter(format!(
                "matrix entry ({row},{col}) is not in a 2x2 matrix"
            )));
        }
        self.0[r].0[row][col] = value;
        Ok(self)
    }

    /// `V_n` as a raw integer pair: Γ applied along the base-4 digits of `n`,
    /// starting from `V_0 = (1, 1)`.
    pub fn v_raw(&self, n: u64) -> [i64; 2] {
        let mut v = [1, 1];
        for d in base4_digits_msb_first(n) {
            v = self.0[d].apply(v);
        }
        v
    }
}

pub(crate) fn base4_digits_msb_first(n: u64) -> impl Iterator<Item = usize> {
    let len = if n == 0 {
        0
    } else {
        (64 - n.leading_zeros()).div_ceil(2)
    };
    (0..len).rev().map(move |j| ((n >> (2 * j)) & 3) as usize)
}

pub fn gamma(r: usize) -> Result<TransferMatrix> {
    GammaSet::default().get(r)
}

/// `V_n = (i_n, i_{2n})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PairVector {
    pub top: Sign,
    pub bottom: Sign,
}

impl PairVector {
    pub fn as_array(&self) -> [i64; 2] {
        [self.top.value(), self.bottom.value()]
    }
}

pub fn v(n: u64) -> PairVector {
    let [a, b] = GammaSet::default().v_raw(n);
    PairVector {
        top: Sign::try_from_value(a).expect("signed permutation matrices keep entries in {-1, 1}"),
        bottom: Sign::try_from_value(b).expect("signed permutation matrices keep entries in {-1, 1}"),
    }
}

/// `i_n` from `i_{2n} = i_n t_n`, `i_{2n+1} = i_n`, carrying `t_n` along.
pub fn i_rec2(n: u64) -> Sign {
    let bits = 64 - n.leading_zeros();
    let (mut i, mut t) = (Sign::Plus, Sign::Plus);
    for b in (0..bits).rev() {
        if (n >> b) & 1 == 0 {
            i = i * t;
        } else {
            t = -t;
        }
    }
    i
}

const I_BASE: [Sign; 4] = [Sign::Plus, Sign::Plus, Sign::Minus, Sign::Plus];

/// `i_n` from the base-4 relations
/// `i_{4n} = i_n, i_{4n+1} = i_{2n}, i_{4n+2} = -i_{2n}, i_{4n+3} = i_n`.
pub fn i_rec4(n: u64) -> Sign {
    let mut sign = Sign::Plus;
    let mut m = n;
    while m >= 4 {
        let q = m >> 2;
        m = match m & 3 {
            0 | 3 => q,
            1 => 2 * q,
            _ => {
                sign = -sign;
                2 * q
            }
        };
    }
    sign * I_BASE[m as usize]
}
