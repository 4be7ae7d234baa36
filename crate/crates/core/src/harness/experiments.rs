//! Runtime and hypervolume experiment runners and their aggregation.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{
    sms_emoa_run, variant_population_size, AlgorithmVariant, EngineConfig, Termination,
    PRACTICAL_POPULATION_SIZE,
};
use crate::error::{invalid, Error, Result};
use crate::harness::plot::emit_front_plot;
use crate::harness::results::{write_fronts, write_rows, FrontRow, Metric, ResultRow};
use crate::harness::{ExperimentId, ExperimentSpec, SizePlan};
use crate::problems::practical::InstancePayload;
use crate::problems::{BenchmarkKind, BenchmarkSpec, InstanceDocument, InstanceKind, Problem};
use crate::rng::{derive_run_seed, RngState};
use crate::scalar::Scalar;
use crate::stats::{estimate_reference_point, hv_report, mean_std, wilcoxon_rank_sum};
use crate::variation::{CrossoverKind, MutationKind};
use crate::Exact;

/// Mutation rate of the permutation moves (one move per offspring with this probability).
pub const PERMUTATION_MUTATION_RATE: f64 = 0.05;

/// Stream tags that keep instance and reference-point seeds apart from run seeds.
const INSTANCE_STREAM: u64 = 0x1157_a2ce;
const REFERENCE_STREAM: u64 = 0x4ef0_0001;

/// Front points written by the fronts experiment.
pub const FRONT_POINTS_FILE: &str = "front_points.csv";

/// Plot written by the fronts experiment.
pub const FRONT_PLOT_FILE: &str = "front_points.svg";

/// Mean and spread of one (problem, n, variant) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub experiment: String,
    pub problem: String,
    pub n: usize,
    pub variant: AlgorithmVariant,
    pub metric: Metric,
    pub runs: usize,
    pub mean: f64,
    pub std: f64,
    pub censored_runs: usize,
    /// More than the allowed fraction of runs hit the cap; shown as `-`.
    pub censored: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Significance {
    Dagger,
    None,
}

/// One hypervolume table row: A against AR on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table4Row {
    pub problem: String,
    pub n: usize,
    pub a_mean: f64,
    pub a_std: f64,
    pub ar_mean: f64,
    pub ar_std: f64,
    pub u: f64,
    pub p: f64,
    pub significance: Significance,
}

/// Reference point used for one instance, in natural orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRecord {
    pub problem: String,
    pub n: usize,
    pub instance_seed: u64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub cells: Vec<CellSummary>,
    pub table4: Vec<Table4Row>,
    pub fronts: Vec<FrontRow>,
    pub references: Vec<ReferenceRecord>,
    pub wall_seconds: f64,
}

/// Provenance record written next to the CSV files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub crate_version: String,
    pub spec: ExperimentSpec,
    pub row_count: usize,
    pub references: Vec<ReferenceRecord>,
    pub cells: Vec<CellSummary>,
    pub table4: Vec<Table4Row>,
    pub files: Vec<String>,
    pub wall_seconds: f64,
}

/// Seed of the generated instance of `kind` at size `n`.
pub fn instance_seed(base_seed: u64, kind: InstanceKind, n: usize) -> u64 {
    let tag = match kind {
        InstanceKind::Kp => 0,
        InstanceKind::Nk => 1,
        InstanceKind::Tsp => 2,
        InstanceKind::Qap => 3,
    };
    derive_run_seed(derive_run_seed(base_seed ^ INSTANCE_STREAM, tag), n as u64)
}

/// Evaluate `f(0..count)` on the worker pool, keeping results in index order.
fn par_runs<R, F>(count: usize, threads: Option<usize>, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(usize) -> Result<R> + Sync + Send,
{
    let work = || {
        (0..count)
            .into_par_iter()
            .map(&f)
            .collect::<Result<Vec<R>>>()
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn check_id(spec: &ExperimentSpec, allowed: &[ExperimentId]) -> Result<()> {
    spec.validate()?;
    if !allowed.contains(&spec.id) {
        return invalid(format!(
            "experiment '{}' cannot be run by this driver",
            spec.id
        ));
    }
    Ok(())
}

fn benchmark_for(spec: &ExperimentSpec, n: usize) -> Result<BenchmarkSpec> {
    match spec.id {
        ExperimentId::Table2 => BenchmarkSpec::ojzj_ss(n, spec.k, spec.a),
        ExperimentId::Table3 => BenchmarkSpec::ojzj(n, spec.k),
        _ => BenchmarkSpec::new(spec.benchmark, n, spec.k, spec.a),
    }
}

/// Engine configuration for one runtime run.
pub fn runtime_config(
    spec: &ExperimentSpec,
    problem: &BenchmarkSpec,
    variant: AlgorithmVariant,
    seed: u64,
) -> Result<EngineConfig> {
    let mu = variant_population_size(problem, variant);
    let config = EngineConfig::new(variant, mu, spec.max_generations, seed)?
        .with_seed_archive(spec.seed_archive);
    match problem.kind() {
        BenchmarkKind::OneMinMax | BenchmarkKind::LeadingOnesTrailingZeroes => {
            config.with_crossover(CrossoverKind::OnePoint, spec.crossover_probability)
        }
        _ => Ok(config),
    }
}

fn runtime_cell_with<T: Scalar>(
    spec: &ExperimentSpec,
    problem: &BenchmarkSpec,
    variant: AlgorithmVariant,
    runs: usize,
) -> Result<Vec<ResultRow>> {
    par_runs(runs, spec.threads, |run| {
        let seed = derive_run_seed(spec.base_seed, run as u64);
        let config = runtime_config(spec, problem, variant, seed)?;
        let result = sms_emoa_run::<_, T>(problem, &config)?;
        Ok(ResultRow {
            experiment: spec.id.label().to_string(),
            problem: problem.kind().label().to_string(),
            n: problem.n(),
            variant,
            run,
            seed,
            metric: Metric::Generations,
            value: result.generations_used as f64,
            covered: result.covered,
            censored: !result.covered,
        })
    })
}

/// Generations-to-coverage of `runs` seeded runs of one variant.
///
/// Integer-valued benchmarks run on `f64`, which represents every objective
/// value, difference and contribution exactly; OneJumpZeroJump_SS has
/// fractional values and runs on 64-bit rationals. Both give the same
/// trajectories as [`Exact`].
pub fn run_runtime_cell(
    spec: &ExperimentSpec,
    problem: &BenchmarkSpec,
    variant: AlgorithmVariant,
    runs: usize,
) -> Result<Vec<ResultRow>> {
    match problem.kind() {
        BenchmarkKind::OneJumpZeroJumpSs => {
            runtime_cell_with::<Ratio<i64>>(spec, problem, variant, runs)
        }
        _ => runtime_cell_with::<f64>(spec, problem, variant, runs),
    }
}

fn run_runtime(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let mut rows = Vec::new();
    for plan in &spec.sizes {
        let problem = benchmark_for(spec, plan.n)?;
        for &variant in &spec.variants {
            rows.extend(run_runtime_cell(
                spec,
                &problem,
                variant,
                spec.effective_runs(plan),
            )?);
        }
    }
    let cells = summarize_cells(&rows, spec.censor_fraction)?;
    Ok(ExperimentOutput {
        rows,
        cells,
        wall_seconds: start.elapsed().as_secs_f64(),
        ..Default::default()
    })
}

/// OneJumpZeroJump_SS runtime table.
pub fn run_table2(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    check_id(spec, &[ExperimentId::Table2])?;
    run_runtime(spec)
}

/// OneJumpZeroJump runtime table.
pub fn run_table3(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    check_id(spec, &[ExperimentId::Table3])?;
    run_runtime(spec)
}

/// Operators of the practical problems: uniform crossover and bit-wise
/// mutation for KP/NK, OX with 2-opt for TSP, CX with 2-swap for QAP;
/// crossover is always applied.
pub fn practical_config(
    kind: InstanceKind,
    variant: AlgorithmVariant,
    generations: u64,
    seed: u64,
) -> Result<EngineConfig> {
    let config = EngineConfig::new(variant, PRACTICAL_POPULATION_SIZE, generations, seed)?
        .with_termination(Termination::Budget);
    match kind {
        InstanceKind::Kp | InstanceKind::Nk => config.with_crossover(CrossoverKind::Uniform, 1.0),
        InstanceKind::Tsp => config
            .with_crossover(CrossoverKind::Order, 1.0)?
            .with_mutation(MutationKind::TwoOpt {
                rate: PERMUTATION_MUTATION_RATE,
            }),
        InstanceKind::Qap => config
            .with_crossover(CrossoverKind::Cycle, 1.0)?
            .with_mutation(MutationKind::TwoSwap {
                rate: PERMUTATION_MUTATION_RATE,
            }),
    }
}

struct PracticalRun {
    hv: f64,
    /// Returned set in natural orientation.
    front: Vec<[f64; 2]>,
}

fn practical_run<P: Problem<Exact>>(
    problem: &P,
    kind: InstanceKind,
    variant: AlgorithmVariant,
    evaluations: u64,
    seed: u64,
    reference: &crate::Objectives,
) -> Result<PracticalRun> {
    let generations = evaluations.saturating_sub(PRACTICAL_POPULATION_SIZE as u64);
    let config = practical_config(kind, variant, generations, seed)?;
    let result = sms_emoa_run::<_, Exact>(problem, &config)?;
    let orientation = problem.orientation();
    let front: Vec<crate::Objectives> = result
        .returned_objectives()
        .into_iter()
        .map(|v| orientation.from_engine(v))
        .collect();
    let hv = hv_report(&front, reference, orientation).as_f64();
    Ok(PracticalRun {
        hv,
        front: front.iter().map(|v| v.to_f64()).collect(),
    })
}

macro_rules! on_instance {
    ($payload:expr, $inst:ident => $body:expr) => {
        match $payload {
            InstancePayload::Kp($inst) => $body,
            InstancePayload::Nk($inst) => $body,
            InstancePayload::Tsp($inst) => $body,
            InstancePayload::Qap($inst) => $body,
        }
    };
}

/// Instance, reference point and per-run results of one practical instance.
fn run_practical_instance(
    spec: &ExperimentSpec,
    kind: InstanceKind,
    plan: &SizePlan,
    keep_fronts: bool,
    out: &mut ExperimentOutput,
) -> Result<()> {
    let iseed = instance_seed(spec.base_seed, kind, plan.n);
    let doc = InstanceDocument::generate(kind, plan.n, iseed)?;
    let mut ref_rng = RngState::new(derive_run_seed(iseed, REFERENCE_STREAM));
    let reference: crate::Objectives = on_instance!(&doc.payload, inst => estimate_reference_point(inst, spec.reference_samples, &mut ref_rng)?);
    let r = reference.to_f64();
    out.references.push(ReferenceRecord {
        problem: kind.label().to_string(),
        n: plan.n,
        instance_seed: iseed,
        r1: r[0],
        r2: r[1],
    });
    let runs = spec.effective_runs(plan);
    let evaluations = spec.effective_evaluations();
    for &variant in &spec.variants {
        let results = par_runs(runs, spec.threads, |run| {
            let seed = derive_run_seed(spec.base_seed, run as u64);
            on_instance!(&doc.payload, inst => practical_run(inst, kind, variant, evaluations, seed, &reference))
                .map(|r| (seed, r))
        })?;
        for (run, (seed, result)) in results.into_iter().enumerate() {
            out.rows.push(ResultRow {
                experiment: spec.id.label().to_string(),
                problem: kind.label().to_string(),
                n: plan.n,
                variant,
                run,
                seed,
                metric: Metric::Hv,
                value: result.hv,
                covered: false,
                censored: false,
            });
            if keep_fronts {
                out.fronts.extend(result.front.iter().map(|p| FrontRow {
                    experiment: spec.id.label().to_string(),
                    problem: kind.label().to_string(),
                    n: plan.n,
                    variant,
                    run,
                    f1: p[0],
                    f2: p[1],
                }));
            }
        }
    }
    Ok(())
}

fn run_practical(spec: &ExperimentSpec, keep_fronts: bool) -> Result<ExperimentOutput> {
    let start = Instant::now();
    let mut out = ExperimentOutput::default();
    for plan in &spec.sizes {
        for &kind in &spec.kinds {
            run_practical_instance(spec, kind, plan, keep_fronts, &mut out)?;
        }
    }
    out.cells = summarize_cells(&out.rows, spec.censor_fraction)?;
    out.table4 = summarize_table4(&out.rows)?;
    out.wall_seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Final-archive hypervolume of A and AR on the practical problems.
pub fn run_table4(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    check_id(spec, &[ExperimentId::Table4])?;
    run_practical(spec, false)
}

/// Returned non-dominated sets of A and AR on the practical problems.
pub fn run_fronts(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    check_id(spec, &[ExperimentId::Fronts])?;
    run_practical(spec, true)
}

/// Run the experiment `spec.id` names and write its files when `out_dir` is set.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let out = match spec.id {
        ExperimentId::Table2 => run_table2(spec)?,
        ExperimentId::Table3 => run_table3(spec)?,
        ExperimentId::Custom => {
            check_id(spec, &[ExperimentId::Custom])?;
            run_runtime(spec)?
        }
        ExperimentId::Table4 => run_table4(spec)?,
        ExperimentId::Fronts => run_fronts(spec)?,
    };
    if let Some(dir) = &spec.out_dir {
        write_outputs(spec, &out, dir)?;
    }
    Ok(out)
}

fn mean_and_std(values: &[f64]) -> Result<(f64, f64)> {
    match values {
        [] => invalid("cannot summarize an empty cell"),
        [v] => Ok((*v, 0.0)),
        _ => mean_std(values),
    }
}

/// Per-(problem, n, variant) mean and standard deviation, in order of first appearance.
pub fn summarize_cells(rows: &[ResultRow], censor_fraction: f64) -> Result<Vec<CellSummary>> {
    let mut keys: Vec<(&str, &str, usize, AlgorithmVariant, Metric)> = Vec::new();
    for r in rows {
        let key = (
            r.experiment.as_str(),
            r.problem.as_str(),
            r.n,
            r.variant,
            r.metric,
        );
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(experiment, problem, n, variant, metric)| {
            let cell: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| {
                    r.experiment == experiment
                        && r.problem == problem
                        && r.n == n
                        && r.variant == variant
                        && r.metric == metric
                })
                .collect();
            let values: Vec<f64> = cell.iter().map(|r| r.value).collect();
            let (mean, std) = mean_and_std(&values)?;
            let censored_runs = cell.iter().filter(|r| r.censored).count();
            Ok(CellSummary {
                experiment: experiment.to_string(),
                problem: problem.to_string(),
                n,
                variant,
                metric,
                runs: cell.len(),
                mean,
                std,
                censored_runs,
                censored: censored_runs as f64 > censor_fraction * cell.len() as f64,
            })
        })
        .collect()
}

/// A-versus-AR rows of the hypervolume table with the rank-sum flag.
/// Instances lacking either variant are skipped.
pub fn summarize_table4(rows: &[ResultRow]) -> Result<Vec<Table4Row>> {
    let mut instances: Vec<(&str, usize)> = Vec::new();
    for r in rows.iter().filter(|r| r.metric == Metric::Hv) {
        if !instances.contains(&(r.problem.as_str(), r.n)) {
            instances.push((r.problem.as_str(), r.n));
        }
    }
    let mut table = Vec::new();
    for (problem, n) in instances {
        let values = |v: AlgorithmVariant| -> Vec<f64> {
            let mut cell: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| {
                    r.metric == Metric::Hv && r.problem == problem && r.n == n && r.variant == v
                })
                .collect();
            cell.sort_by_key(|r| r.run);
            cell.iter().map(|r| r.value).collect()
        };
        let (a, ar) = (
            values(AlgorithmVariant::ArchiveStore),
            values(AlgorithmVariant::ArchiveReuse),
        );
        if a.is_empty() || ar.is_empty() {
            continue;
        }
        let (a_mean, a_std) = mean_and_std(&a)?;
        let (ar_mean, ar_std) = mean_and_std(&ar)?;
        let test = wilcoxon_rank_sum(&a, &ar)?;
        table.push(Table4Row {
            problem: problem.to_string(),
            n,
            a_mean,
            a_std,
            ar_mean,
            ar_std,
            u: test.u,
            p: test.p,
            significance: if test.significant() {
                Significance::Dagger
            } else {
                Significance::None
            },
        });
    }
    Ok(table)
}

fn write_serialized<S: Serialize>(rows: &[S], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Write `<id>.csv`, the summary CSVs, front files where present and
/// `<id>_manifest.json` into `dir`. Returns the paths written.
pub fn write_outputs(
    spec: &ExperimentSpec,
    out: &ExperimentOutput,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let id = spec.id.label();
    let mut files = Vec::new();

    let rows_path = dir.join(format!("{id}.csv"));
    write_rows(&out.rows, &rows_path)?;
    files.push(rows_path);

    let cells_path = dir.join(format!("{id}_cells.csv"));
    write_serialized(&out.cells, &cells_path)?;
    files.push(cells_path);

    if !out.table4.is_empty() {
        let path = dir.join(format!("{id}_hv.csv"));
        write_serialized(&out.table4, &path)?;
        files.push(path);
    }
    if spec.id == ExperimentId::Fronts {
        let path = dir.join(FRONT_POINTS_FILE);
        write_fronts(&out.fronts, &path)?;
        files.push(path);
        let svg = dir.join(FRONT_PLOT_FILE);
        emit_front_plot(&out.fronts, &svg)?;
        files.push(svg);
    }

    let manifest_path = dir.join(format!("{id}_manifest.json"));
    let manifest = Manifest {
        experiment: id.to_string(),
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.clone(),
        row_count: out.rows.len(),
        references: out.references.clone(),
        cells: out.cells.clone(),
        table4: out.table4.clone(),
        files: files
            .iter()
            .chain(std::iter::once(&manifest_path))
            .map(|p| {
                p.file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned()
            })
            .collect(),
        wall_seconds: out.wall_seconds,
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&manifest_path, json).map_err(|e| Error::io(&manifest_path, e))?;
    files.push(manifest_path);
    Ok(files)
}
