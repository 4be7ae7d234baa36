//! Pseudo-Boolean benchmarks with known Pareto fronts: OneJumpZeroJump,
//! OneJumpZeroJump with stepping stones, OneMinMax and
//! LeadingOnesTrailingZeroes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::genotype::{random_bitstring, BitString};
use crate::objective::ObjectiveVector;
use crate::problems::Problem;
use crate::rng::RngState;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BenchmarkKind {
    #[serde(rename = "OJZJ")]
    OneJumpZeroJump,
    #[serde(rename = "OJZJ_SS")]
    OneJumpZeroJumpSs,
    #[serde(rename = "OMM")]
    OneMinMax,
    #[serde(rename = "LOTZ")]
    LeadingOnesTrailingZeroes,
}

impl BenchmarkKind {
    pub fn label(&self) -> &'static str {
        match self {
            BenchmarkKind::OneJumpZeroJump => "OJZJ",
            BenchmarkKind::OneJumpZeroJumpSs => "OJZJ_SS",
            BenchmarkKind::OneMinMax => "OMM",
            BenchmarkKind::LeadingOnesTrailingZeroes => "LOTZ",
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ojzj" => Ok(BenchmarkKind::OneJumpZeroJump),
            "ojzj_ss" | "ojzjss" => Ok(BenchmarkKind::OneJumpZeroJumpSs),
            "omm" => Ok(BenchmarkKind::OneMinMax),
            "lotz" => Ok(BenchmarkKind::LeadingOnesTrailingZeroes),
            other => invalid(format!("unknown benchmark '{other}'")),
        }
    }
}

/// A validated benchmark instance: problem size `n`, jump width `k` and
/// stepping-stone offset `a` where they apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    kind: BenchmarkKind,
    n: usize,
    k: usize,
    a: usize,
}

impl BenchmarkSpec {
    pub fn ojzj(n: usize, k: usize) -> Result<Self> {
        if !(2 <= k && 2 * k < n) {
            return invalid(format!("OJZJ needs 2 <= k < n/2, got n={n}, k={k}"));
        }
        Ok(Self {
            kind: BenchmarkKind::OneJumpZeroJump,
            n,
            k,
            a: 0,
        })
    }

    pub fn ojzj_ss(n: usize, k: usize, a: usize) -> Result<Self> {
        if !(3 <= k && 2 * k < n) {
            return invalid(format!("OJZJ_SS needs 3 <= k < n/2, got n={n}, k={k}"));
        }
        if !(2 <= a && a < k) {
            return invalid(format!("OJZJ_SS needs 2 <= a < k, got k={k}, a={a}"));
        }
        Ok(Self {
            kind: BenchmarkKind::OneJumpZeroJumpSs,
            n,
            k,
            a,
        })
    }

    pub fn omm(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("OneMinMax needs n > 0");
        }
        Ok(Self {
            kind: BenchmarkKind::OneMinMax,
            n,
            k: 0,
            a: 0,
        })
    }

    pub fn lotz(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("LeadingOnesTrailingZeroes needs n > 0");
        }
        Ok(Self {
            kind: BenchmarkKind::LeadingOnesTrailingZeroes,
            n,
            k: 0,
            a: 0,
        })
    }

    /// Build from loose parameters; `k` and `a` are ignored where unused.
    pub fn new(kind: BenchmarkKind, n: usize, k: usize, a: usize) -> Result<Self> {
        match kind {
            BenchmarkKind::OneJumpZeroJump => Self::ojzj(n, k),
            BenchmarkKind::OneJumpZeroJumpSs => Self::ojzj_ss(n, k, a),
            BenchmarkKind::OneMinMax => Self::omm(n),
            BenchmarkKind::LeadingOnesTrailingZeroes => Self::lotz(n),
        }
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn front_size(&self) -> usize {
        match self.kind {
            BenchmarkKind::OneJumpZeroJump => self.n - 2 * self.k + 3,
            BenchmarkKind::OneJumpZeroJumpSs => self.n - 2 * self.k + 5,
            _ => self.n + 1,
        }
    }

    pub fn eval<T: Scalar>(&self, x: &BitString) -> ObjectiveVector<T> {
        match self.kind {
            BenchmarkKind::OneJumpZeroJump => ojzj_eval(x, self.k),
            BenchmarkKind::OneJumpZeroJumpSs => ojzjss_eval(x, self.k, self.a),
            BenchmarkKind::OneMinMax => omm_eval(x),
            BenchmarkKind::LeadingOnesTrailingZeroes => lotz_eval(x),
        }
    }
}

fn jump_value(ones: usize, n: usize, k: usize) -> i64 {
    if ones <= n - k || ones == n {
        (k + ones) as i64
    } else {
        (n - ones) as i64
    }
}

/// OneJumpZeroJump: `f1` rewards 1-bits except in the valley just below 1^n,
/// `f2` is the same on 0-bits.
pub fn ojzj_eval<T: Scalar>(x: &BitString, k: usize) -> ObjectiveVector<T> {
    let n = x.len();
    let ones = x.count_ones();
    ObjectiveVector::from_ints(jump_value(ones, n, k), jump_value(n - ones, n, k))
}

/// Stepping-stone branches are tested before the jump branches.
fn stepping_stone_value<T: Scalar>(ones: usize, n: usize, k: usize, a: usize) -> T {
    let n_i = n as i64;
    if ones == k - a {
        T::from_ratio(2 * k as i64 * n_i + 1, n_i)
    } else if ones == n - (k - a) {
        T::from_ratio(n_i * n_i - 1, n_i)
    } else {
        T::from_int(jump_value(ones, n, k))
    }
}

/// OneJumpZeroJump with stepping stones at `k - a` and `n - (k - a)` 1-bits;
/// `f2(x) = f1(complement of x)`.
pub fn ojzjss_eval<T: Scalar>(x: &BitString, k: usize, a: usize) -> ObjectiveVector<T> {
    let n = x.len();
    let ones = x.count_ones();
    ObjectiveVector::new(
        stepping_stone_value(ones, n, k, a),
        stepping_stone_value(n - ones, n, k, a),
    )
}

/// OneMinMax: `(number of 0-bits, number of 1-bits)`.
pub fn omm_eval<T: Scalar>(x: &BitString) -> ObjectiveVector<T> {
    let ones = x.count_ones() as i64;
    ObjectiveVector::from_ints(x.len() as i64 - ones, ones)
}

/// LeadingOnesTrailingZeroes.
pub fn lotz_eval<T: Scalar>(x: &BitString) -> ObjectiveVector<T> {
    ObjectiveVector::from_ints(x.leading_ones() as i64, x.trailing_zeros() as i64)
}

/// The analytic Pareto front, ordered by increasing f1.
pub fn pareto_front<T: Scalar>(spec: &BenchmarkSpec) -> Vec<ObjectiveVector<T>> {
    let n = spec.n as i64;
    let k = spec.k as i64;
    let mut front: Vec<ObjectiveVector<T>> = match spec.kind {
        BenchmarkKind::OneJumpZeroJump | BenchmarkKind::OneJumpZeroJumpSs => {
            let mut f: Vec<_> = std::iter::once(k)
                .chain(2 * k..=n)
                .chain(std::iter::once(n + k))
                .map(|c| ObjectiveVector::from_ints(c, n + 2 * k - c))
                .collect();
            if spec.kind == BenchmarkKind::OneJumpZeroJumpSs {
                let low = T::from_ratio(2 * k * n + 1, n);
                let high = T::from_ratio(n * n - 1, n);
                f.push(ObjectiveVector::new(low, high));
                f.push(ObjectiveVector::new(high, low));
            }
            f
        }
        BenchmarkKind::OneMinMax | BenchmarkKind::LeadingOnesTrailingZeroes => (0..=n)
            .map(|b| ObjectiveVector::from_ints(b, n - b))
            .collect(),
    };
    front.sort_by(|a, b| crate::dominance::cmp_scalar(&a.f1(), &b.f1()));
    front
}

/// Whether every point of the analytic front occurs in `found`.
pub fn front_covered<T: Scalar>(found: &[ObjectiveVector<T>], spec: &BenchmarkSpec) -> bool {
    pareto_front::<T>(spec).iter().all(|p| found.contains(p))
}

impl<T: Scalar> Problem<T> for BenchmarkSpec {
    type Genotype = BitString;

    fn name(&self) -> String {
        self.kind.label().to_string()
    }

    fn size(&self) -> usize {
        self.n
    }

    fn random_genotype(&self, rng: &mut RngState) -> BitString {
        random_bitstring(self.n, rng).expect("validated n > 0")
    }

    fn evaluate(&self, genotype: &BitString) -> ObjectiveVector<T> {
        self.eval(genotype)
    }

    fn pareto_front(&self) -> Option<Vec<ObjectiveVector<T>>> {
        Some(pareto_front(self))
    }
}
