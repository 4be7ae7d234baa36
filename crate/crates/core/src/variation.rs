//! Mutation and crossover operators. Parents are never modified.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::genotype::{BitString, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverKind {
    None,
    OnePoint,
    Uniform,
    Order,
    Cycle,
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossoverKind::None => "none",
            CrossoverKind::OnePoint => "one-point",
            CrossoverKind::Uniform => "uniform",
            CrossoverKind::Order => "ox",
            CrossoverKind::Cycle => "cx",
        })
    }
}

impl FromStr for CrossoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(CrossoverKind::None),
            "one-point" | "onepoint" | "one_point" => Ok(CrossoverKind::OnePoint),
            "uniform" => Ok(CrossoverKind::Uniform),
            "ox" | "order" => Ok(CrossoverKind::Order),
            "cx" | "cycle" => Ok(CrossoverKind::Cycle),
            other => invalid(format!("unknown crossover '{other}'")),
        }
    }
}

/// Mutation operator. Permutation moves are applied once per offspring with
/// probability `rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    /// Flip each bit with probability 1/n.
    Bitwise,
    TwoOpt {
        rate: f64,
    },
    TwoSwap {
        rate: f64,
    },
}

/// Genotypes the engine knows how to vary.
pub trait Variable: Sized {
    fn supports_crossover(kind: CrossoverKind) -> bool;

    fn supports_mutation(kind: MutationKind) -> bool;

    /// `CrossoverKind::None` returns a copy of `a`.
    fn crossover<R: Rng + ?Sized>(
        kind: CrossoverKind,
        a: &Self,
        b: &Self,
        rng: &mut R,
    ) -> Result<Self>;

    fn mutate<R: Rng + ?Sized>(kind: MutationKind, x: &Self, rng: &mut R) -> Result<Self>;
}

impl Variable for BitString {
    fn supports_crossover(kind: CrossoverKind) -> bool {
        matches!(
            kind,
            CrossoverKind::None | CrossoverKind::OnePoint | CrossoverKind::Uniform
        )
    }

    fn supports_mutation(kind: MutationKind) -> bool {
        matches!(kind, MutationKind::Bitwise)
    }

    fn crossover<R: Rng + ?Sized>(
        kind: CrossoverKind,
        a: &Self,
        b: &Self,
        rng: &mut R,
    ) -> Result<Self> {
        match kind {
            CrossoverKind::None => Ok(a.clone()),
            CrossoverKind::OnePoint => one_point_crossover(a, b, rng),
            CrossoverKind::Uniform => uniform_crossover(a, b, rng),
            other => invalid(format!("{other} crossover does not apply to bit strings")),
        }
    }

    fn mutate<R: Rng + ?Sized>(kind: MutationKind, x: &Self, rng: &mut R) -> Result<Self> {
        match kind {
            MutationKind::Bitwise => Ok(bitwise_mutation(x, rng)),
            other => invalid(format!("{other:?} does not apply to bit strings")),
        }
    }
}

impl Variable for Permutation {
    fn supports_crossover(kind: CrossoverKind) -> bool {
        matches!(
            kind,
            CrossoverKind::None | CrossoverKind::Order | CrossoverKind::Cycle
        )
    }

    fn supports_mutation(kind: MutationKind) -> bool {
        matches!(
            kind,
            MutationKind::TwoOpt { .. } | MutationKind::TwoSwap { .. }
        )
    }

    fn crossover<R: Rng + ?Sized>(
        kind: CrossoverKind,
        a: &Self,
        b: &Self,
        rng: &mut R,
    ) -> Result<Self> {
        match kind {
            CrossoverKind::None => Ok(a.clone()),
            CrossoverKind::Order => order_crossover(a, b, rng),
            CrossoverKind::Cycle => cycle_crossover(a, b),
            other => invalid(format!("{other} crossover does not apply to permutations")),
        }
    }

    fn mutate<R: Rng + ?Sized>(kind: MutationKind, x: &Self, rng: &mut R) -> Result<Self> {
        let (rate, two_opt) = match kind {
            MutationKind::TwoOpt { rate } => (rate, true),
            MutationKind::TwoSwap { rate } => (rate, false),
            other => return invalid(format!("{other:?} does not apply to permutations")),
        };
        if x.len() < 2 || !rng.random_bool(rate.clamp(0.0, 1.0)) {
            Ok(x.clone())
        } else if two_opt {
            two_opt_mutation(x, rng)
        } else {
            two_swap_mutation(x, rng)
        }
    }
}

/// Flip each bit independently with probability 1/n.
pub fn bitwise_mutation<R: Rng + ?Sized>(x: &BitString, rng: &mut R) -> BitString {
    let n = x.len();
    let rate = 1.0 / n as f64;
    let mut child = x.clone();
    for i in 0..n {
        if rng.random_bool(rate) {
            child.flip(i);
        }
    }
    child
}

/// Child takes the first `cut` bits of `x` and the rest of `y`; `cut` is uniform in `1..=n`.
pub fn one_point_crossover<R: Rng + ?Sized>(
    x: &BitString,
    y: &BitString,
    rng: &mut R,
) -> Result<BitString> {
    same_len(x.len(), y.len())?;
    let cut = rng.random_range(1..=x.len());
    one_point_crossover_at(x, y, cut)
}

pub fn one_point_crossover_at(x: &BitString, y: &BitString, cut: usize) -> Result<BitString> {
    same_len(x.len(), y.len())?;
    if cut == 0 || cut > x.len() {
        return invalid(format!("crossover point {cut} outside 1..={}", x.len()));
    }
    let bits = x.bits()[..cut]
        .iter()
        .chain(&y.bits()[cut..])
        .copied()
        .collect();
    Ok(BitString::from_vec_unchecked(bits))
}

/// Each child bit comes from `x` or `y` with probability 1/2.
pub fn uniform_crossover<R: Rng + ?Sized>(
    x: &BitString,
    y: &BitString,
    rng: &mut R,
) -> Result<BitString> {
    same_len(x.len(), y.len())?;
    let bits = x
        .bits()
        .iter()
        .zip(y.bits())
        .map(|(&a, &b)| if rng.random::<bool>() { a } else { b })
        .collect();
    Ok(BitString::from_vec_unchecked(bits))
}

/// Order crossover (OX) with cut positions `c1 < c2` drawn uniformly over all pairs.
pub fn order_crossover<R: Rng + ?Sized>(
    p: &Permutation,
    q: &Permutation,
    rng: &mut R,
) -> Result<Permutation> {
    same_len(p.len(), q.len())?;
    let n = p.len();
    if n < 2 {
        return Ok(p.clone());
    }
    let (c1, c2) = distinct_pair(n, rng);
    order_crossover_at(p, q, c1, c2)
}

/// OX with explicit 0-based inclusive cuts: `p[c1..=c2]` stays in place and the
/// remaining slots, starting after `c2` and wrapping, are filled with `q`'s
/// elements read from position `c2 + 1` onwards (wrapping), skipping the ones
/// already copied.
pub fn order_crossover_at(
    p: &Permutation,
    q: &Permutation,
    c1: usize,
    c2: usize,
) -> Result<Permutation> {
    same_len(p.len(), q.len())?;
    let n = p.len();
    if c1 > c2 || c2 >= n {
        return invalid(format!("cut positions {c1}..={c2} invalid for length {n}"));
    }
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in c1..=c2 {
        child[i] = p[i];
        used[p[i]] = true;
    }
    let mut slot = (c2 + 1) % n;
    for offset in 0..n {
        let v = q[(c2 + 1 + offset) % n];
        if used[v] {
            continue;
        }
        child[slot] = v;
        used[v] = true;
        slot = (slot + 1) % n;
    }
    Ok(Permutation::from_vec_unchecked(child))
}

/// Cycle crossover (CX). Cycles are discovered from position 0 upwards; the
/// first, third, ... cycle is copied from `p`, the others from `q`.
pub fn cycle_crossover(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    same_len(p.len(), q.len())?;
    let n = p.len();
    let mut position_in_p = vec![0usize; n];
    for i in 0..n {
        position_in_p[p[i]] = i;
    }
    let mut child = vec![usize::MAX; n];
    let mut cycle = 0usize;
    for start in 0..n {
        if child[start] != usize::MAX {
            continue;
        }
        let from_p = cycle.is_multiple_of(2);
        let mut i = start;
        loop {
            child[i] = if from_p { p[i] } else { q[i] };
            i = position_in_p[q[i]];
            if i == start {
                break;
            }
        }
        cycle += 1;
    }
    Ok(Permutation::from_vec_unchecked(child))
}

/// Reverse `p[i..=j]` for a uniformly chosen pair `i < j`.
pub fn two_opt_mutation<R: Rng + ?Sized>(p: &Permutation, rng: &mut R) -> Result<Permutation> {
    if p.len() < 2 {
        return invalid("2-opt needs at least two positions");
    }
    let (i, j) = distinct_pair(p.len(), rng);
    two_opt_at(p, i, j)
}

pub fn two_opt_at(p: &Permutation, i: usize, j: usize) -> Result<Permutation> {
    if i >= j || j >= p.len() {
        return invalid(format!("segment {i}..={j} invalid for length {}", p.len()));
    }
    let mut order = p.clone().into_vec();
    order[i..=j].reverse();
    Ok(Permutation::from_vec_unchecked(order))
}

/// Swap two distinct uniformly chosen positions.
pub fn two_swap_mutation<R: Rng + ?Sized>(p: &Permutation, rng: &mut R) -> Result<Permutation> {
    if p.len() < 2 {
        return invalid("2-swap needs at least two positions");
    }
    let (i, j) = distinct_pair(p.len(), rng);
    two_swap_at(p, i, j)
}

pub fn two_swap_at(p: &Permutation, i: usize, j: usize) -> Result<Permutation> {
    if i == j || i >= p.len() || j >= p.len() {
        return invalid(format!(
            "swap positions {i}, {j} invalid for length {}",
            p.len()
        ));
    }
    let mut order = p.clone().into_vec();
    order.swap(i, j);
    Ok(Permutation::from_vec_unchecked(order))
}

/// Uniform pair `i < j` from `0..n`, `n >= 2`.
fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return invalid(format!("parent lengths differ: {a} vs {b}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genotype::{random_bitstring, random_permutation};
    use crate::rng::RngState;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_bit_always_flips() {
        let mut rng = RngState::new(0);
        for _ in 0..100 {
            assert_eq!(bitwise_mutation(&bits("0"), &mut rng), bits("1"));
        }
    }

    #[test]
    fn mutation_statistics_at_n_100() {
        let mut rng = RngState::new(17);
        let x = random_bitstring(100, &mut rng).unwrap();
        let trials = 1_000_000;
        let mut total = 0usize;
        let mut zero = 0usize;
        for _ in 0..trials {
            let d = bitwise_mutation(&x, &mut rng).hamming_distance(&x);
            total += d;
            zero += (d == 0) as usize;
        }
        // Hamming distance ~ Binomial(100, 1/100): mean 1, variance 0.99
        let mean = total as f64 / trials as f64;
        assert!(
            (mean - 1.0).abs() <= 3.0 * (0.99f64 / trials as f64).sqrt(),
            "{mean}"
        );
        let p0 = 0.99f64.powi(100);
        let frac = zero as f64 / trials as f64;
        assert!(
            (frac - p0).abs() <= 3.0 * (p0 * (1.0 - p0) / trials as f64).sqrt(),
            "{frac}"
        );
    }

    #[test]
    fn one_point_examples() {
        assert_eq!(
            one_point_crossover_at(&bits("111"), &bits("000"), 1).unwrap(),
            bits("100")
        );
        assert_eq!(
            one_point_crossover_at(&bits("111"), &bits("000"), 3).unwrap(),
            bits("111")
        );
        assert!(one_point_crossover_at(&bits("111"), &bits("000"), 0).is_err());
        assert!(one_point_crossover(&bits("11"), &bits("000"), &mut RngState::new(0)).is_err());
        let x = bits("10110");
        for cut in 1..=5 {
            assert_eq!(one_point_crossover_at(&x, &x, cut).unwrap(), x);
        }
    }

    #[test]
    fn uniform_crossover_support_and_balance() {
        let mut rng = RngState::new(5);
        let x = bits("10110");
        assert_eq!(uniform_crossover(&x, &x, &mut rng).unwrap(), x);
        assert!(uniform_crossover(&x, &bits("1"), &mut rng).is_err());

        let ones = bits("1");
        let zeros = bits("0");
        let trials = 1_000_000;
        let from_x = (0..trials)
            .filter(|_| uniform_crossover(&ones, &zeros, &mut rng).unwrap().get(0))
            .count();
        let frac = from_x as f64 / trials as f64;
        assert!((frac - 0.5).abs() <= 3.0 * 0.0005, "{frac}");
    }

    #[test]
    fn order_crossover_hand_trace() {
        // segment [2, 3] copied; q read from position 4 wrapping: 0, 4, (3), (2), 1
        // slots 4, 0, 1 receive 0, 4, 1
        let child =
            order_crossover_at(&perm(&[0, 1, 2, 3, 4]), &perm(&[4, 3, 2, 1, 0]), 2, 3).unwrap();
        assert_eq!(child.as_slice(), &[4, 1, 2, 3, 0]);
        let p = perm(&[3, 0, 4, 1, 2]);
        assert_eq!(order_crossover(&p, &p, &mut RngState::new(2)).unwrap(), p);
    }

    #[test]
    fn cycle_crossover_hand_trace() {
        // cycles {0,1} and {2,3}: first from p, second from q
        let child = cycle_crossover(&perm(&[0, 1, 2, 3]), &perm(&[1, 0, 3, 2])).unwrap();
        assert_eq!(child.as_slice(), &[0, 1, 3, 2]);
        let p = perm(&[2, 0, 1, 3]);
        assert_eq!(cycle_crossover(&p, &p).unwrap(), p);
        assert!(cycle_crossover(&p, &perm(&[0, 1])).is_err());
    }

    #[test]
    fn two_opt_examples() {
        let p = perm(&[0, 1, 2, 3, 4]);
        assert_eq!(two_opt_at(&p, 1, 3).unwrap().as_slice(), &[0, 3, 2, 1, 4]);
        assert_eq!(two_opt_at(&p, 0, 4).unwrap().as_slice(), &[4, 3, 2, 1, 0]);
        assert!(two_opt_mutation(&perm(&[0]), &mut RngState::new(0)).is_err());
    }

    #[test]
    fn two_swap_examples() {
        let p = perm(&[0, 1, 2, 3]);
        let swapped = two_swap_at(&p, 0, 2).unwrap();
        assert_eq!(swapped.as_slice(), &[2, 1, 0, 3]);
        assert_eq!(two_swap_at(&swapped, 0, 2).unwrap(), p);
        assert!(two_swap_mutation(&perm(&[0]), &mut RngState::new(0)).is_err());
    }

    #[test]
    fn permutation_operators_preserve_bijection() {
        let mut rng = RngState::new(31);
        for t in 0..100_000 {
            let n = 2 + t % 9;
            let p = random_permutation(n, &mut rng).unwrap();
            let q = random_permutation(n, &mut rng).unwrap();
            assert!(order_crossover(&p, &q, &mut rng).unwrap().is_bijection());
            assert!(cycle_crossover(&p, &q).unwrap().is_bijection());
            assert!(two_opt_mutation(&p, &mut rng).unwrap().is_bijection());
            assert!(two_swap_mutation(&p, &mut rng).unwrap().is_bijection());
        }
    }

    #[test]
    fn cycle_crossover_positions_come_from_a_parent() {
        let mut rng = RngState::new(3);
        for _ in 0..1000 {
            let p = random_permutation(8, &mut rng).unwrap();
            let q = random_permutation(8, &mut rng).unwrap();
            let c = cycle_crossover(&p, &q).unwrap();
            for i in 0..8 {
                assert!(c[i] == p[i] || c[i] == q[i]);
            }
        }
    }

    #[test]
    fn permutation_move_rate() {
        let mut rng = RngState::new(40);
        let p = Permutation::identity(10).unwrap();
        let trials = 200_000;
        let moved = (0..trials)
            .filter(|_| {
                Permutation::mutate(MutationKind::TwoSwap { rate: 0.05 }, &p, &mut rng).unwrap()
                    != p
            })
            .count();
        let frac = moved as f64 / trials as f64;
        assert!(
            (frac - 0.05).abs() <= 3.0 * (0.05f64 * 0.95 / trials as f64).sqrt(),
            "{frac}"
        );
        assert!(
            BitString::mutate(MutationKind::TwoOpt { rate: 1.0 }, &bits("01"), &mut rng).is_err()
        );
        assert!(!Permutation::supports_crossover(CrossoverKind::Uniform));
    }

    #[test]
    fn distinct_pairs_are_uniform() {
        let mut rng = RngState::new(12);
        let mut counts = std::collections::HashMap::new();
        let trials = 600_000;
        for _ in 0..trials {
            *counts.entry(distinct_pair(4, &mut rng)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        for c in counts.values() {
            assert!((*c as f64 / trials as f64 - p).abs() <= 3.0 * sigma);
        }
    }
}
