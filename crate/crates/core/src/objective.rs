//! Bi-objective vectors and evaluated solutions.

use std::fmt;

use crate::scalar::Scalar;

/// Objective vector `(f1, f2)` in maximization orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObjectiveVector<T>(pub [T; 2]);

impl<T: Scalar> ObjectiveVector<T> {
    pub fn new(f1: T, f2: T) -> Self {
        Self([f1, f2])
    }

    pub fn from_ints(f1: i64, f2: i64) -> Self {
        Self([T::from_int(f1), T::from_int(f2)])
    }

    pub fn f1(&self) -> T {
        self.0[0]
    }

    pub fn f2(&self) -> T {
        self.0[1]
    }

    pub fn negated(&self) -> Self {
        Self([-self.0[0], -self.0[1]])
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.0[0].as_f64(), self.0[1].as_f64()]
    }
}

impl<T: fmt::Display> fmt::Display for ObjectiveVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedSolution<G, T> {
    pub genotype: G,
    pub objectives: ObjectiveVector<T>,
}

impl<G, T: Scalar> EvaluatedSolution<G, T> {
    pub fn new(genotype: G, objectives: ObjectiveVector<T>) -> Self {
        Self {
            genotype,
            objectives,
        }
    }
}

/// Population members; the engine keeps exactly `μ` of them between generations.
pub type Population<G, T> = Vec<EvaluatedSolution<G, T>>;
