//! Problem definitions seen by the engine.
//!
//! The engine always maximizes. Minimization problems hand it negated
//! objective vectors and report [`Orientation::Min`] so results can be mapped
//! back to their natural orientation.

pub mod benchmark;
pub mod practical;

use std::fmt::{Debug, Display};

use serde::{Deserialize, Serialize};

use crate::objective::ObjectiveVector;
use crate::rng::RngState;
use crate::scalar::Scalar;
use crate::variation::Variable;

pub use benchmark::{BenchmarkKind, BenchmarkSpec};
pub use practical::{
    InstanceDocument, InstanceKind, KpInstance, NkInstance, QapInstance, TspInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Max,
    Min,
}

impl Orientation {
    /// Map a vector between the problem's natural orientation and the engine's.
    pub fn to_engine<T: Scalar>(self, v: ObjectiveVector<T>) -> ObjectiveVector<T> {
        match self {
            Orientation::Max => v,
            Orientation::Min => v.negated(),
        }
    }

    pub fn from_engine<T: Scalar>(self, v: ObjectiveVector<T>) -> ObjectiveVector<T> {
        self.to_engine(v)
    }
}

pub trait Problem<T: Scalar>: Send + Sync {
    type Genotype: Variable + Clone + Debug + Display + PartialEq + Send + Sync;

    /// Short identifier, e.g. `OJZJ` or `KP`.
    fn name(&self) -> String;

    /// Number of decision variables.
    fn size(&self) -> usize;

    fn random_genotype(&self, rng: &mut RngState) -> Self::Genotype;

    /// Map an arbitrary genotype to a feasible one. Identity by default.
    fn repair(&self, genotype: Self::Genotype) -> Self::Genotype {
        genotype
    }

    /// Objective vector in engine (maximization) orientation.
    fn evaluate(&self, genotype: &Self::Genotype) -> ObjectiveVector<T>;

    fn orientation(&self) -> Orientation {
        Orientation::Max
    }

    /// Analytic Pareto front in engine orientation, when one is known.
    fn pareto_front(&self) -> Option<Vec<ObjectiveVector<T>>> {
        None
    }
}
