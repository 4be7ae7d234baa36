//! Command-line front end: single runs, experiments, instances, statistics,
//! hypervolume and plots.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use sms_emoa::engine::{variant_population_size, write_trace, PRACTICAL_POPULATION_SIZE};
use sms_emoa::harness::experiments::{practical_config, runtime_config};
use sms_emoa::harness::{
    emit_front_plot, read_fronts, read_rows, run_experiment, ExperimentId, ExperimentSpec,
    SizePlan, DESK_EVALUATIONS, FRONT_POINTS_FILE, RUNTIME_CAP,
};
use sms_emoa::problems::practical::InstancePayload;
use sms_emoa::problems::{
    BenchmarkKind, BenchmarkSpec, InstanceDocument, InstanceKind, Orientation, Problem,
};
use sms_emoa::stats::{hv_report, mean_std, wilcoxon_rank_sum};
use sms_emoa::{
    sms_emoa_run, AlgorithmVariant, EngineConfig, Error, Exact, ObjectiveVector, Result,
};

#[derive(Parser)]
#[command(
    name = "sms-emoa",
    version,
    about = "SMS-EMOA with archive storage and archive reuse"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one SMS-EMOA instance and print its outcome as JSON.
    Run {
        /// ojzj, ojzj_ss, omm, lotz, kp, nk, tsp or qap.
        #[arg(long)]
        problem: String,
        /// L, A or AR.
        #[arg(long, default_value = "AR")]
        variant: AlgorithmVariant,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        a: usize,
        /// Population size; defaults to the variant's experimental setting.
        #[arg(long)]
        mu: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Maximum generations.
        #[arg(long)]
        budget: Option<u64>,
        /// Write a newline-delimited JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Practical instance file; generated from the seed when absent.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Run a table experiment and write CSV files plus a JSON manifest.
    Experiment {
        /// table2, table3, table4, fronts or custom.
        #[arg(long)]
        id: ExperimentId,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Runs per cell, overriding the experiment default.
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated problem sizes, overriding the experiment default.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Use the published protocol sizes, runs and budgets.
        #[arg(long)]
        full: bool,
        /// Benchmark of a custom experiment.
        #[arg(long, default_value = "ojzj")]
        problem: BenchmarkKind,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Generate a practical instance and write it as JSON.
    Instances {
        #[arg(long)]
        kind: InstanceKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Wilcoxon rank-sum test between two result columns.
    Stats {
        /// Results CSV or a file with one number per line.
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Keep only rows of this variant from the first file.
        #[arg(long)]
        variant_a: Option<AlgorithmVariant>,
        /// Keep only rows of this variant from the second file.
        #[arg(long)]
        variant_b: Option<AlgorithmVariant>,
    },
    /// Hypervolume of a front file against a reference point.
    Hv {
        /// `f1,f2` per line, or a front-points CSV.
        #[arg(long)]
        front: PathBuf,
        /// Reference point as "r1,r2".
        #[arg(long = "ref", allow_hyphen_values = true)]
        reference: String,
        #[arg(long, default_value = "max")]
        orientation: String,
    },
    /// Plot the front points of a fronts experiment as SVG.
    Plot {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Prints to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 3,
        Error::Csv { source, .. } if source.is_io_error() => 3,
        _ => 2,
    }
}

fn parse_pair(text: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => Ok([x, y]),
            _ => Err(Error::Parse(format!(
                "'{text}' is not a pair of finite numbers"
            ))),
        },
        _ => Err(Error::Parse(format!("expected 'v1,v2', got '{text}'"))),
    }
}

fn parse_orientation(text: &str) -> Result<Orientation> {
    match text.to_ascii_lowercase().as_str() {
        "max" => Ok(Orientation::Max),
        "min" => Ok(Orientation::Min),
        other => Err(Error::InvalidArgument(format!(
            "orientation must be max or min, got '{other}'"
        ))),
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn run_one<P: Problem<Exact>>(
    problem: &P,
    config: &EngineConfig,
    trace: Option<&Path>,
) -> Result<serde_json::Value> {
    let result = sms_emoa_run::<_, Exact>(problem, config)?;
    if let (Some(path), Some(records)) = (trace, result.trace.as_ref()) {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        write_trace(records, std::io::BufWriter::new(file))?;
    }
    let orientation = problem.orientation();
    let returned: Vec<[f64; 2]> = result
        .returned_objectives()
        .into_iter()
        .map(|v| orientation.from_engine(v).to_f64())
        .collect();
    Ok(json!({
        "problem": problem.name(),
        "n": problem.size(),
        "variant": config.variant,
        "mu": config.mu,
        "seed": config.seed,
        "generations": result.generations_used,
        "evaluations": result.evaluations,
        "covered": problem.pareto_front().map(|_| result.covered),
        "coverage_generation": result.coverage_generation,
        "returned": returned,
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    problem: &str,
    variant: AlgorithmVariant,
    n: usize,
    k: usize,
    a: usize,
    mu: Option<usize>,
    seed: u64,
    budget: Option<u64>,
    trace: Option<PathBuf>,
    instance: Option<PathBuf>,
) -> Result<()> {
    let trace_path = trace.as_deref();
    let value = if let Ok(kind) = problem.parse::<BenchmarkKind>() {
        let spec = BenchmarkSpec::new(kind, n, k, a)?;
        let base = ExperimentSpec::custom(kind, k, a, vec![SizePlan::new(n, 1)])
            .with_max_generations(budget.unwrap_or(RUNTIME_CAP));
        let mut config = runtime_config(&base, &spec, variant, seed)?.with_trace(trace.is_some());
        config.mu = mu.unwrap_or_else(|| variant_population_size(&spec, variant));
        config.validate()?;
        run_one(&spec, &config, trace_path)?
    } else {
        let kind: InstanceKind = problem.parse()?;
        let doc = match &instance {
            Some(path) => InstanceDocument::read(path)?,
            None => InstanceDocument::generate(kind, n, seed)?,
        };
        if doc.kind != kind {
            return Err(Error::InvalidArgument(format!(
                "instance file holds {} but --problem is {kind}",
                doc.kind
            )));
        }
        let mu = mu.unwrap_or(PRACTICAL_POPULATION_SIZE);
        let generations = budget.unwrap_or(DESK_EVALUATIONS.saturating_sub(mu as u64));
        let mut config =
            practical_config(kind, variant, generations, seed)?.with_trace(trace.is_some());
        config.mu = mu;
        config.validate()?;
        match &doc.payload {
            InstancePayload::Kp(i) => run_one(i, &config, trace_path)?,
            InstancePayload::Nk(i) => run_one(i, &config, trace_path)?,
            InstancePayload::Tsp(i) => run_one(i, &config, trace_path)?,
            InstancePayload::Qap(i) => run_one(i, &config, trace_path)?,
        }
    };
    out!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiment(
    id: ExperimentId,
    scale: f64,
    runs: Option<usize>,
    seed: Option<u64>,
    out: PathBuf,
    sizes: Vec<usize>,
    full: bool,
    problem: BenchmarkKind,
    k: usize,
    a: usize,
    threads: Option<usize>,
) -> Result<()> {
    let mut spec = match id {
        ExperimentId::Custom => ExperimentSpec::custom(problem, k, a, vec![SizePlan::new(10, 100)]),
        other => ExperimentSpec::for_id(other),
    };
    if full {
        spec = spec.full_scale();
    }
    if !sizes.is_empty() {
        let default_runs = spec.sizes[0].runs;
        spec = spec.with_sizes(
            sizes
                .iter()
                .map(|&n| SizePlan::new(n, default_runs))
                .collect(),
        );
    }
    if let Some(r) = runs {
        spec = spec.with_runs(r);
    }
    if let Some(s) = seed {
        spec = spec.with_seed(s);
    }
    let spec = spec
        .with_scale(scale)
        .with_threads(threads)
        .with_out_dir(&out);
    let output = run_experiment(&spec)?;
    for c in &output.cells {
        let shown = if c.censored {
            "-".to_string()
        } else {
            format!("{:.2}", c.mean)
        };
        out!(
            "{} {}-{} {:<2} runs={} mean={} std={:.2} censored_runs={}",
            c.experiment,
            c.problem,
            c.n,
            c.variant,
            c.runs,
            shown,
            c.std,
            c.censored_runs
        );
    }
    for row in &output.table4 {
        out!(
            "{}-{} A={:.4e} ({:.1e}) AR={:.4e} ({:.1e}) p={:.4} {}",
            row.problem,
            row.n,
            row.a_mean,
            row.a_std,
            row.ar_mean,
            row.ar_std,
            row.p,
            if row.significance == sms_emoa::harness::Significance::Dagger {
                "dagger"
            } else {
                "none"
            }
        );
    }
    out!("wrote {} rows to {}", output.rows.len(), out.display());
    Ok(())
}

/// Values of a results CSV (optionally one variant) or of a one-number-per-line file.
fn read_column(path: &Path, variant: Option<AlgorithmVariant>) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    if text.starts_with("experiment,") {
        let rows = read_rows(path)?;
        return Ok(rows
            .into_iter()
            .filter(|r| variant.is_none_or(|v| r.variant == v))
            .map(|r| r.value)
            .collect());
    }
    if variant.is_some() {
        return Err(Error::InvalidArgument(format!(
            "{} is not a results CSV; cannot filter by variant",
            path.display()
        )));
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Error::Parse(format!("{}: '{l}' is not a number", path.display())))
        })
        .collect()
}

fn describe(values: &[f64]) -> String {
    match mean_std(values) {
        Ok((m, s)) => format!("n={} mean={m:.6} std={s:.6}", values.len()),
        Err(_) => format!("n={} values={values:?}", values.len()),
    }
}

fn cmd_stats(
    a: &Path,
    b: &Path,
    variant_a: Option<AlgorithmVariant>,
    variant_b: Option<AlgorithmVariant>,
) -> Result<()> {
    let xs = read_column(a, variant_a)?;
    let ys = read_column(b, variant_b)?;
    let test = wilcoxon_rank_sum(&xs, &ys)?;
    out!("a: {}", describe(&xs));
    out!("b: {}", describe(&ys));
    out!(
        "U={} p={:.6} method={:?} significant={}",
        test.u,
        test.p,
        test.method,
        test.significant()
    );
    Ok(())
}

fn read_front_file(path: &Path) -> Result<Vec<ObjectiveVector<f64>>> {
    let text = read_text(path)?;
    if text.starts_with("experiment,") {
        return Ok(read_fronts(path)?
            .into_iter()
            .map(|r| ObjectiveVector::new(r.f1, r.f2))
            .collect());
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_pair(l).map(|[x, y]| ObjectiveVector::new(x, y)))
        .collect()
}

fn cmd_hv(front: &Path, reference: &str, orientation: &str) -> Result<()> {
    let orientation = parse_orientation(orientation)?;
    let [r1, r2] = parse_pair(reference)?;
    let points = read_front_file(front)?;
    out!(
        "{}",
        hv_report(&points, &ObjectiveVector::new(r1, r2), orientation)
    );
    Ok(())
}

fn cmd_plot(results: &Path, out: &Path) -> Result<()> {
    let rows = read_fronts(&results.join(FRONT_POINTS_FILE))?;
    emit_front_plot(&rows, out)?;
    out!("wrote {} markers to {}", rows.len(), out.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            problem,
            variant,
            n,
            k,
            a,
            mu,
            seed,
            budget,
            trace,
            instance,
        } => cmd_run(
            &problem, variant, n, k, a, mu, seed, budget, trace, instance,
        ),
        Command::Experiment {
            id,
            scale,
            runs,
            seed,
            out,
            sizes,
            full,
            problem,
            k,
            a,
            threads,
        } => cmd_experiment(
            id, scale, runs, seed, out, sizes, full, problem, k, a, threads,
        ),
        Command::Instances { kind, n, seed, out } => {
            InstanceDocument::generate(kind, n, seed)?.write(&out)
        }
        Command::Stats {
            a,
            b,
            variant_a,
            variant_b,
        } => cmd_stats(&a, &b, variant_a, variant_b),
        Command::Hv {
            front,
            reference,
            orientation,
        } => cmd_hv(&front, &reference, &orientation),
        Command::Plot { results, out } => cmd_plot(&results, &out),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
