//! SMS-EMOA with an optional unbounded archive, with and without archive reuse.

pub mod archive;
pub mod dominance;
pub mod engine;
pub mod error;
pub mod genotype;
pub mod harness;
pub mod hypervolume;
pub mod objective;
pub mod problems;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod variation;

pub use engine::{sms_emoa_run, AlgorithmVariant, EngineConfig, RunResult, SmsEmoa, Termination};
pub use error::{Error, Result};
pub use genotype::{BitString, Permutation};
pub use objective::{EvaluatedSolution, ObjectiveVector};
pub use rng::{derive_run_seed, RngState};
pub use scalar::Scalar;

/// Exact rational objective value.
pub type Exact = num_rational::Ratio<i128>;
/// Exact bi-objective vector.
pub type Objectives = ObjectiveVector<Exact>;
/// Floating-point bi-objective vector.
pub type ObjectivesF64 = ObjectiveVector<f64>;
