//! Points of a search space and the polynomial size bounds attached to them.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of bits needed to write `n` in binary (`|0| = 0`).
pub fn bit_len(n: u64) -> u32 {
    u64::BITS - n.leading_zeros()
}

/// A point of a search space: a natural number of bounded bit length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub u64);

impl PointId {
    pub fn bits(self) -> u32 {
        bit_len(self.0)
    }

    pub fn fits(self, bits: u32) -> bool {
        self.bits() <= bits
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for PointId {
    fn from(v: u64) -> Self {
        PointId(v)
    }
}

/// A polynomial in `|x|` with non-negative integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial(pub Vec<u64>);

impl Polynomial {
    pub fn constant(c: u64) -> Self {
        Polynomial(vec![c])
    }

    /// Evaluates at `n` by Horner's rule, saturating at `u64::MAX`.
    pub fn eval(&self, n: u64) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc.saturating_mul(n).saturating_add(c))
    }

    /// Evaluates at the bit length of `x`, which is how every size bound is read.
    pub fn at_len_of(&self, x: u64) -> u64 {
        self.eval(u64::from(bit_len(x)))
    }
}
