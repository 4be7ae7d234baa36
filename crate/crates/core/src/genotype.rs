//! Genotypes: fixed-length bit strings and permutations.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return invalid("bit string must have length > 0");
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![false; n])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![true; n])
    }

    /// `ones` one-bits followed by zero-bits up to length `n`.
    pub fn ones_then_zeros(ones: usize, n: usize) -> Result<Self> {
        if ones > n {
            return invalid(format!("{ones} leading ones exceed length {n}"));
        }
        Self::new((0..n).map(|i| i < ones).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    /// |x|_1
    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// |x|_0
    pub fn count_zeros(&self) -> usize {
        self.len() - self.count_ones()
    }

    pub fn leading_ones(&self) -> usize {
        self.bits.iter().take_while(|&&b| b).count()
    }

    pub fn trailing_zeros(&self) -> usize {
        self.bits.iter().rev().take_while(|&&b| !b).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    pub(crate) fn from_vec_unchecked(bits: Vec<bool>) -> Self {
        debug_assert!(!bits.is_empty());
        Self { bits }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if order.is_empty() {
            return invalid("permutation must have length > 0");
        }
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return invalid(format!("{order:?} is not a permutation of 0..{n}"));
            }
            seen[v] = true;
        }
        Ok(Self { order })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn is_bijection(&self) -> bool {
        Self::new(self.order.clone()).is_ok()
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Self::new(order.clone()).is_ok());
        Self { order }
    }

    pub(crate) fn into_vec(self) -> Vec<usize> {
        self.order
    }
}

impl std::ops::Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.order[i]
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("invalid permutation entry '{t}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(order)
    }
}

/// Uniformly random bit string: each bit is 1 with probability 1/2.
pub fn random_bitstring<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BitString> {
    if n == 0 {
        return invalid("bit string length must be > 0");
    }
    Ok(BitString::from_vec_unchecked(
        (0..n).map(|_| rng.random::<bool>()).collect(),
    ))
}

/// Uniformly random permutation of `0..n` (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Permutation> {
    if n == 0 {
        return invalid("permutation length must be > 0");
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Ok(Permutation::from_vec_unchecked(order))
}
