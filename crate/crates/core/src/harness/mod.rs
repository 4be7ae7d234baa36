//! Experiment drivers for the runtime and hypervolume tables, result
//! persistence and plot emission.
//!
//! Each run gets its own engine and generator seeded with
//! `derive_run_seed(base_seed, run)`; runs may execute on a worker pool and
//! are merged back by run index, so aggregates never depend on scheduling.

pub mod experiments;
pub mod plot;
pub mod results;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::AlgorithmVariant;
use crate::error::{invalid, Error, Result};
use crate::problems::{BenchmarkKind, InstanceKind};

pub use experiments::{
    run_experiment, run_fronts, run_table2, run_table3, run_table4, summarize_cells,
    summarize_table4, write_outputs, CellSummary, ExperimentOutput, Manifest, ReferenceRecord,
    Significance, Table4Row, FRONT_PLOT_FILE, FRONT_POINTS_FILE,
};
pub use plot::{emit_front_plot, render_front_plot};
pub use results::{
    read_fronts, read_rows, rows_from_csv, rows_to_csv, write_fronts, write_rows, FrontRow, Metric,
    ResultRow,
};

pub const DEFAULT_BASE_SEED: u64 = 2025;

/// Generation cap of the runtime experiments; runs that reach it are censored.
pub const RUNTIME_CAP: u64 = 1_000_000;

/// Evaluation budget of the hypervolume experiments at desk scale.
pub const DESK_EVALUATIONS: u64 = 100_000;

/// Evaluation budget of the hypervolume experiments at full scale.
pub const FULL_EVALUATIONS: u64 = 10_000_000;

/// Crossover probability for the OneMinMax / LOTZ experiments.
pub const DEFAULT_CROSSOVER_PROBABILITY: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    /// Runtime on OneJumpZeroJump_SS, k=3, a=2.
    Table2,
    /// Runtime on OneJumpZeroJump, k=2.
    Table3,
    /// Final-archive hypervolume on the practical problems.
    Table4,
    /// Final non-dominated sets on the practical problems, for plotting.
    Fronts,
    /// Runtime on any benchmark.
    Custom,
}

impl ExperimentId {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentId::Table2 => "table2",
            ExperimentId::Table3 => "table3",
            ExperimentId::Table4 => "table4",
            ExperimentId::Fronts => "fronts",
            ExperimentId::Custom => "custom",
        }
    }

    /// Whether the experiment measures generations to cover a benchmark front.
    pub fn is_runtime(&self) -> bool {
        matches!(
            self,
            ExperimentId::Table2 | ExperimentId::Table3 | ExperimentId::Custom
        )
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table2" => Ok(ExperimentId::Table2),
            "table3" => Ok(ExperimentId::Table3),
            "table4" => Ok(ExperimentId::Table4),
            "fronts" => Ok(ExperimentId::Fronts),
            "custom" => Ok(ExperimentId::Custom),
            other => invalid(format!("unknown experiment '{other}'")),
        }
    }
}

/// Problem size and number of runs for one row of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizePlan {
    pub n: usize,
    pub runs: usize,
}

impl SizePlan {
    pub fn new(n: usize, runs: usize) -> Self {
        Self { n, runs }
    }
}

/// Everything needed to reproduce one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    /// Benchmark of a custom runtime experiment.
    pub benchmark: BenchmarkKind,
    pub k: usize,
    pub a: usize,
    /// Practical problems of the hypervolume experiments.
    pub kinds: Vec<InstanceKind>,
    pub sizes: Vec<SizePlan>,
    pub variants: Vec<AlgorithmVariant>,
    /// Generation cap of runtime experiments.
    pub max_generations: u64,
    /// Fitness-evaluation budget of hypervolume experiments, before scaling.
    pub evaluations: u64,
    /// One-point crossover probability on OneMinMax / LOTZ.
    pub crossover_probability: f64,
    pub seed_archive: bool,
    pub base_seed: u64,
    /// Multiplier in (0, 1] on runs and on the evaluation budget.
    pub scale: f64,
    /// A cell is censored when more than this fraction of its runs hit the cap.
    pub censor_fraction: f64,
    /// Random solutions sampled per instance for the reference point.
    pub reference_samples: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    fn base(id: ExperimentId) -> Self {
        Self {
            id,
            benchmark: BenchmarkKind::OneJumpZeroJump,
            k: 2,
            a: 0,
            kinds: Vec::new(),
            sizes: Vec::new(),
            variants: AlgorithmVariant::ALL.to_vec(),
            max_generations: RUNTIME_CAP,
            evaluations: DESK_EVALUATIONS,
            crossover_probability: DEFAULT_CROSSOVER_PROBABILITY,
            seed_archive: true,
            base_seed: DEFAULT_BASE_SEED,
            scale: 1.0,
            censor_fraction: 0.0,
            reference_samples: crate::stats::REFERENCE_SAMPLES,
            threads: None,
            out_dir: None,
        }
    }

    /// OneJumpZeroJump_SS (k=3, a=2) runtime at desk scale: 1000 runs at n=15, 200 at n=20.
    pub fn table2() -> Self {
        Self {
            benchmark: BenchmarkKind::OneJumpZeroJumpSs,
            k: 3,
            a: 2,
            sizes: vec![SizePlan::new(15, 1000), SizePlan::new(20, 200)],
            ..Self::base(ExperimentId::Table2)
        }
    }

    /// OneJumpZeroJump (k=2) runtime at desk scale: 1000 runs at n=15, 200 at n=20.
    pub fn table3() -> Self {
        Self {
            sizes: vec![SizePlan::new(15, 1000), SizePlan::new(20, 200)],
            ..Self::base(ExperimentId::Table3)
        }
    }

    /// Hypervolume on all four practical problems at size 100, 10 runs, 10^5 evaluations.
    pub fn table4() -> Self {
        Self {
            kinds: vec![
                InstanceKind::Kp,
                InstanceKind::Nk,
                InstanceKind::Tsp,
                InstanceKind::Qap,
            ],
            sizes: vec![SizePlan::new(100, 10)],
            variants: vec![
                AlgorithmVariant::ArchiveStore,
                AlgorithmVariant::ArchiveReuse,
            ],
            ..Self::base(ExperimentId::Table4)
        }
    }

    /// One run per variant and practical instance, keeping the returned sets.
    pub fn fronts() -> Self {
        Self {
            sizes: vec![SizePlan::new(100, 1)],
            ..Self::table4().with_id(ExperimentId::Fronts)
        }
    }

    /// Runtime experiment on an arbitrary benchmark.
    pub fn custom(benchmark: BenchmarkKind, k: usize, a: usize, sizes: Vec<SizePlan>) -> Self {
        Self {
            benchmark,
            k,
            a,
            sizes,
            ..Self::base(ExperimentId::Custom)
        }
    }

    pub fn for_id(id: ExperimentId) -> Self {
        match id {
            ExperimentId::Table2 => Self::table2(),
            ExperimentId::Table3 => Self::table3(),
            ExperimentId::Table4 => Self::table4(),
            ExperimentId::Fronts => Self::fronts(),
            ExperimentId::Custom => Self::custom(
                BenchmarkKind::OneJumpZeroJump,
                2,
                0,
                vec![SizePlan::new(10, 100)],
            ),
        }
    }

    /// The published protocol: runtime tables at n = 15..30 with 1000 runs;
    /// hypervolume at sizes 100, 200, 500 with 30 runs of 10^7 evaluations.
    pub fn full_scale(self) -> Self {
        match self.id {
            ExperimentId::Table2 | ExperimentId::Table3 => Self {
                sizes: [15, 20, 25, 30].map(|n| SizePlan::new(n, 1000)).to_vec(),
                ..self
            },
            ExperimentId::Table4 => Self {
                sizes: [100, 200, 500].map(|n| SizePlan::new(n, 30)).to_vec(),
                evaluations: FULL_EVALUATIONS,
                ..self
            },
            ExperimentId::Fronts => Self {
                sizes: [100, 200, 500].map(|n| SizePlan::new(n, 1)).to_vec(),
                evaluations: FULL_EVALUATIONS,
                ..self
            },
            ExperimentId::Custom => self,
        }
    }

    fn with_id(self, id: ExperimentId) -> Self {
        Self { id, ..self }
    }

    /// Same run count for every size.
    pub fn with_runs(mut self, runs: usize) -> Self {
        for s in &mut self.sizes {
            s.runs = runs;
        }
        self
    }

    pub fn with_sizes(self, sizes: Vec<SizePlan>) -> Self {
        Self { sizes, ..self }
    }

    pub fn with_variants(self, variants: Vec<AlgorithmVariant>) -> Self {
        Self { variants, ..self }
    }

    pub fn with_kinds(self, kinds: Vec<InstanceKind>) -> Self {
        Self { kinds, ..self }
    }

    pub fn with_seed(self, base_seed: u64) -> Self {
        Self { base_seed, ..self }
    }

    pub fn with_scale(self, scale: f64) -> Self {
        Self { scale, ..self }
    }

    pub fn with_evaluations(self, evaluations: u64) -> Self {
        Self {
            evaluations,
            ..self
        }
    }

    pub fn with_max_generations(self, max_generations: u64) -> Self {
        Self {
            max_generations,
            ..self
        }
    }

    pub fn with_threads(self, threads: Option<usize>) -> Self {
        Self { threads, ..self }
    }

    pub fn with_out_dir(self, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: Some(out_dir.into()),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return invalid(format!("scale must lie in (0, 1], got {}", self.scale));
        }
        if self.sizes.is_empty() {
            return invalid("experiment needs at least one problem size");
        }
        if let Some(s) = self.sizes.iter().find(|s| s.runs == 0) {
            return invalid(format!("size {} has zero runs", s.n));
        }
        if self.variants.is_empty() {
            return invalid("experiment needs at least one variant");
        }
        if !(0.0..=1.0).contains(&self.censor_fraction) {
            return invalid(format!(
                "censor fraction must lie in [0, 1], got {}",
                self.censor_fraction
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return invalid(format!(
                "crossover probability must lie in [0, 1], got {}",
                self.crossover_probability
            ));
        }
        if self.threads == Some(0) {
            return invalid("thread count must be positive");
        }
        if self.id.is_runtime() {
            if self.max_generations == 0 {
                return invalid("runtime experiments need a positive generation cap");
            }
        } else {
            if self.kinds.is_empty() {
                return invalid("hypervolume experiments need at least one problem kind");
            }
            if self.reference_samples == 0 {
                return invalid("reference point estimation needs at least one sample");
            }
            if self.variants.contains(&AlgorithmVariant::LargePop) {
                return invalid(
                    "hypervolume experiments compare the archive variants A and AR only",
                );
            }
        }
        Ok(())
    }

    /// Runs per cell after scaling, never below one.
    pub fn effective_runs(&self, plan: &SizePlan) -> usize {
        ((plan.runs as f64 * self.scale).round() as usize).max(1)
    }

    /// Evaluation budget after scaling, never below one.
    pub fn effective_evaluations(&self) -> u64 {
        ((self.evaluations as f64 * self.scale).round() as u64).max(1)
    }
}
