//! The SMS-EMOA steady-state loop and its archive variants.
//!
//! One generation creates one offspring: pick a parent (from the population,
//! or with archive reuse from the population or the archive), optionally
//! recombine with a second parent, mutate, repair and evaluate. The offspring
//! is offered to the archive before survival selection, then the worst member
//! of `P ∪ {offspring}` by non-dominated sorting and hypervolume contribution
//! is removed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::archive::{select_parent_with_reuse, Archive};
use crate::dominance::cmp_scalar;
use crate::error::{invalid, Error, Result};
use crate::hypervolume::Survival;
use crate::objective::{EvaluatedSolution, ObjectiveVector, Population};
use crate::problems::{BenchmarkKind, BenchmarkSpec, Problem};
use crate::rng::RngState;
use crate::scalar::Scalar;
use crate::variation::{CrossoverKind, MutationKind, Variable};

/// Population size used for the practical problems.
pub const PRACTICAL_POPULATION_SIZE: usize = 100;
/// Population size of the archive variants on benchmarks.
pub const ARCHIVE_POPULATION_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgorithmVariant {
    /// Large population, no archive; the population is returned.
    #[serde(rename = "L")]
    LargePop,
    /// Archive recorded but never used for selection.
    #[serde(rename = "A")]
    ArchiveStore,
    /// Archive recorded and used for parent selection.
    #[serde(rename = "AR")]
    ArchiveReuse,
}

impl AlgorithmVariant {
    pub const ALL: [AlgorithmVariant; 3] = [
        AlgorithmVariant::LargePop,
        AlgorithmVariant::ArchiveStore,
        AlgorithmVariant::ArchiveReuse,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            AlgorithmVariant::LargePop => "L",
            AlgorithmVariant::ArchiveStore => "A",
            AlgorithmVariant::ArchiveReuse => "AR",
        }
    }

    pub fn has_archive(&self) -> bool {
        !matches!(self, AlgorithmVariant::LargePop)
    }
}

impl fmt::Display for AlgorithmVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AlgorithmVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L" | "LARGE" | "LARGE_POP" => Ok(AlgorithmVariant::LargePop),
            "A" | "ARCHIVE" | "ARCHIVE_STORE" => Ok(AlgorithmVariant::ArchiveStore),
            "AR" | "REUSE" | "ARCHIVE_REUSE" => Ok(AlgorithmVariant::ArchiveReuse),
            other => invalid(format!("unknown variant '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Stop as soon as the monitored set covers the Pareto front, or at the budget.
    Coverage,
    /// Always spend the whole budget.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub variant: AlgorithmVariant,
    pub mu: usize,
    pub crossover_probability: f64,
    pub crossover: CrossoverKind,
    pub mutation: MutationKind,
    /// Maximum number of generations (offspring evaluations).
    pub max_generations: u64,
    pub termination: Termination,
    pub seed: u64,
    /// Offer the initial population to the archive.
    pub seed_archive: bool,
    /// Keep a per-generation [`TraceRecord`] log.
    pub record_trace: bool,
}

impl EngineConfig {
    /// Mutation-only configuration with coverage termination.
    pub fn new(
        variant: AlgorithmVariant,
        mu: usize,
        max_generations: u64,
        seed: u64,
    ) -> Result<Self> {
        let config = Self {
            variant,
            mu,
            crossover_probability: 0.0,
            crossover: CrossoverKind::None,
            mutation: MutationKind::Bitwise,
            max_generations,
            termination: Termination::Coverage,
            seed,
            seed_archive: true,
            record_trace: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_crossover(mut self, kind: CrossoverKind, probability: f64) -> Result<Self> {
        self.crossover = kind;
        self.crossover_probability = probability;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mutation(mut self, kind: MutationKind) -> Result<Self> {
        self.mutation = kind;
        self.validate()?;
        Ok(self)
    }

    pub fn with_termination(mut self, termination: Termination) -> Self {
        self.termination = termination;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_seed_archive(mut self, seed_archive: bool) -> Self {
        self.seed_archive = seed_archive;
        self
    }

    pub fn with_trace(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu < 1 {
            return invalid("population size must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return invalid(format!(
                "crossover probability {} outside [0, 1]",
                self.crossover_probability
            ));
        }
        if let MutationKind::TwoOpt { rate } | MutationKind::TwoSwap { rate } = self.mutation {
            if !(0.0..=1.0).contains(&rate) {
                return invalid(format!("mutation rate {rate} outside [0, 1]"));
            }
        }
        Ok(())
    }

    fn uses_crossover(&self) -> bool {
        self.crossover != CrossoverKind::None && self.crossover_probability > 0.0
    }
}

/// `n - 2k + 5` for the jump benchmarks, `n + 3` for OneMinMax and
/// LeadingOnesTrailingZeroes, and 5 for the archive variants.
pub fn variant_population_size(spec: &BenchmarkSpec, variant: AlgorithmVariant) -> usize {
    match variant {
        AlgorithmVariant::LargePop => match spec.kind() {
            BenchmarkKind::OneJumpZeroJump | BenchmarkKind::OneJumpZeroJumpSs => {
                spec.n() - 2 * spec.k() + 5
            }
            _ => spec.front_size() + 2,
        },
        _ => ARCHIVE_POPULATION_SIZE,
    }
}

/// One generation as seen from outside, in engine orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub generation: u64,
    pub offspring: [f64; 2],
    pub removed: [f64; 2],
    pub archive_size: usize,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<T> {
    pub offspring: ObjectiveVector<T>,
    pub removed: ObjectiveVector<T>,
    /// Whether the offspring entered the archive.
    pub archived: bool,
}

/// Population, archive and generation counter of one run.
#[derive(Debug, Clone)]
pub struct EngineState<G, T> {
    pub population: Population<G, T>,
    pub archive: Option<Archive<G, T>>,
    pub generation: u64,
    points: Vec<ObjectiveVector<T>>,
    survival: Survival<T>,
}

impl<G: Clone, T: Scalar> EngineState<G, T> {
    /// Random initial population of size `μ`; the archive is seeded from it
    /// when the configuration asks for it.
    pub fn initialize<P>(problem: &P, config: &EngineConfig, rng: &mut RngState) -> Self
    where
        P: Problem<T, Genotype = G>,
    {
        let population: Population<G, T> = (0..config.mu)
            .map(|_| {
                let g = problem.repair(problem.random_genotype(rng));
                let f = problem.evaluate(&g);
                EvaluatedSolution::new(g, f)
            })
            .collect();
        let archive = config.variant.has_archive().then(|| {
            let mut a = Archive::new();
            if config.seed_archive {
                for s in &population {
                    a.update(s);
                }
            }
            a
        });
        Self {
            population,
            archive,
            generation: 0,
            points: Vec::with_capacity(config.mu + 1),
            survival: Survival::new(),
        }
    }
}

/// Advance `state` by one generation.
pub fn sms_emoa_step<P, T>(
    state: &mut EngineState<P::Genotype, T>,
    problem: &P,
    config: &EngineConfig,
    rng: &mut RngState,
) -> Result<StepOutcome<T>>
where
    P: Problem<T>,
    T: Scalar,
{
    if state.population.len() != config.mu {
        return Err(Error::ContractViolation(format!(
            "population has {} members, expected {}",
            state.population.len(),
            config.mu
        )));
    }
    let reuse = config.variant == AlgorithmVariant::ArchiveReuse;
    let child = {
        let x = choose_parent(state, reuse, rng);
        if config.uses_crossover() && rng.random_bool(config.crossover_probability) {
            let y = choose_parent(state, reuse, rng);
            let mixed = P::Genotype::crossover(config.crossover, x, y, rng)?;
            P::Genotype::mutate(config.mutation, &mixed, rng)?
        } else {
            P::Genotype::mutate(config.mutation, x, rng)?
        }
    };
    let child = problem.repair(child);
    let objectives = problem.evaluate(&child);
    let offspring = EvaluatedSolution::new(child, objectives);

    let archived = match state.archive.as_mut() {
        Some(a) => a.update(&offspring),
        None => false,
    };

    state.population.push(offspring);
    state.points.clear();
    state
        .points
        .extend(state.population.iter().map(|s| s.objectives));
    let victim = state.survival.select(&state.points, rng)?;
    let removed = state.population.swap_remove(victim).objectives;
    state.generation += 1;
    Ok(StepOutcome {
        offspring: objectives,
        removed,
        archived,
    })
}

fn choose_parent<'a, G: Clone, T: Scalar>(
    state: &'a EngineState<G, T>,
    reuse: bool,
    rng: &mut RngState,
) -> &'a G {
    match (&state.archive, reuse) {
        (Some(archive), true) => {
            &select_parent_with_reuse(&state.population, archive, rng)
                .expect("non-empty population")
                .genotype
        }
        _ => &state.population[rng.random_range(0..state.population.len())].genotype,
    }
}

/// Incremental bookkeeping of which Pareto-front vectors the monitored set holds.
#[derive(Debug, Clone)]
struct CoverageTracker<T> {
    /// Sorted by increasing f1; f1 values are distinct on a front.
    front: Vec<ObjectiveVector<T>>,
    counts: Vec<u32>,
    hit: usize,
}

impl<T: Scalar> CoverageTracker<T> {
    fn new(mut front: Vec<ObjectiveVector<T>>) -> Self {
        front.sort_by(|a, b| cmp_scalar(&a.f1(), &b.f1()));
        let counts = vec![0; front.len()];
        Self {
            front,
            counts,
            hit: 0,
        }
    }

    fn locate(&self, v: &ObjectiveVector<T>) -> Option<usize> {
        let i = self
            .front
            .binary_search_by(|p| cmp_scalar(&p.f1(), &v.f1()))
            .ok()?;
        (self.front[i] == *v).then_some(i)
    }

    fn add(&mut self, v: &ObjectiveVector<T>) {
        if let Some(i) = self.locate(v) {
            if self.counts[i] == 0 {
                self.hit += 1;
            }
            self.counts[i] += 1;
        }
    }

    fn remove(&mut self, v: &ObjectiveVector<T>) {
        if let Some(i) = self.locate(v) {
            self.counts[i] -= 1;
            if self.counts[i] == 0 {
                self.hit -= 1;
            }
        }
    }

    fn covered(&self) -> bool {
        self.hit == self.front.len()
    }
}

/// Outcome of [`sms_emoa_run`].
#[derive(Debug, Clone)]
pub struct RunResult<G, T> {
    pub seed: u64,
    pub variant: AlgorithmVariant,
    pub mu: usize,
    /// Generations performed, one offspring evaluation each.
    pub generations_used: u64,
    /// `μ + generations_used`.
    pub evaluations: u64,
    /// Whether the monitored set covered the Pareto front at the end.
    pub covered: bool,
    /// First generation at which the front was covered.
    pub coverage_generation: Option<u64>,
    pub population: Population<G, T>,
    pub archive: Option<Archive<G, T>>,
    pub trace: Option<Vec<TraceRecord>>,
}

impl<G: Clone, T: Scalar> RunResult<G, T> {
    /// The set the variant returns: the archive when there is one, else the population.
    pub fn returned(&self) -> &[EvaluatedSolution<G, T>] {
        match &self.archive {
            Some(a) => a.members(),
            None => &self.population,
        }
    }

    pub fn returned_objectives(&self) -> Vec<ObjectiveVector<T>> {
        self.returned().iter().map(|s| s.objectives).collect()
    }
}

/// A single SMS-EMOA run that can be driven one generation at a time.
pub struct SmsEmoa<'p, P: Problem<T>, T: Scalar> {
    problem: &'p P,
    config: EngineConfig,
    rng: RngState,
    state: EngineState<P::Genotype, T>,
    tracker: Option<CoverageTracker<T>>,
    coverage_generation: Option<u64>,
    trace: Option<Vec<TraceRecord>>,
}

impl<'p, P: Problem<T>, T: Scalar> SmsEmoa<'p, P, T> {
    /// Validate `config` against `problem` and build the initial population.
    pub fn new(problem: &'p P, config: EngineConfig) -> Result<Self> {
        config.validate()?;
        if config.uses_crossover() && !P::Genotype::supports_crossover(config.crossover) {
            return invalid(format!(
                "{} crossover does not apply to {}",
                config.crossover,
                problem.name()
            ));
        }
        if !P::Genotype::supports_mutation(config.mutation) {
            return invalid(format!(
                "{:?} mutation does not apply to {}",
                config.mutation,
                problem.name()
            ));
        }
        let front = problem.pareto_front();
        if config.termination == Termination::Coverage && front.is_none() {
            return invalid(format!(
                "coverage termination needs an analytic Pareto front, {} has none",
                problem.name()
            ));
        }
        let mut rng = RngState::new(config.seed);
        let state = EngineState::initialize(problem, &config, &mut rng);
        let tracker = front.map(|f| {
            let mut t = CoverageTracker::new(f);
            match &state.archive {
                Some(a) => a.objectives().for_each(|v| t.add(v)),
                None => state.population.iter().for_each(|s| t.add(&s.objectives)),
            }
            t
        });
        let mut engine = Self {
            problem,
            trace: config.record_trace.then(Vec::new),
            config,
            rng,
            state,
            tracker,
            coverage_generation: None,
        };
        if engine.covered() {
            engine.coverage_generation = Some(0);
        }
        Ok(engine)
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn generation(&self) -> u64 {
        self.state.generation
    }

    pub fn population(&self) -> &[EvaluatedSolution<P::Genotype, T>] {
        &self.state.population
    }

    pub fn archive(&self) -> Option<&Archive<P::Genotype, T>> {
        self.state.archive.as_ref()
    }

    /// Whether the monitored set (archive, or population for the large-population
    /// variant) holds every Pareto-front vector. Always false without a known front.
    pub fn covered(&self) -> bool {
        self.tracker.as_ref().is_some_and(|t| t.covered())
    }

    pub fn coverage_generation(&self) -> Option<u64> {
        self.coverage_generation
    }

    pub fn step(&mut self) -> Result<StepOutcome<T>> {
        let outcome = sms_emoa_step(&mut self.state, self.problem, &self.config, &mut self.rng)?;
        if let Some(t) = self.tracker.as_mut() {
            if self.state.archive.is_some() {
                if outcome.archived {
                    t.add(&outcome.offspring);
                }
            } else {
                t.add(&outcome.offspring);
                t.remove(&outcome.removed);
            }
        }
        let covered = self.covered();
        if covered && self.coverage_generation.is_none() {
            self.coverage_generation = Some(self.state.generation);
        }
        if let Some(trace) = self.trace.as_mut() {
            trace.push(TraceRecord {
                generation: self.state.generation,
                offspring: outcome.offspring.to_f64(),
                removed: outcome.removed.to_f64(),
                archive_size: self.state.archive.as_ref().map_or(0, |a| a.len()),
                covered,
            });
        }
        Ok(outcome)
    }

    fn finished(&self) -> bool {
        self.state.generation >= self.config.max_generations
            || (self.config.termination == Termination::Coverage && self.covered())
    }

    /// Step until the termination rule fires.
    pub fn run(mut self) -> Result<RunResult<P::Genotype, T>> {
        while !self.finished() {
            self.step()?;
        }
        Ok(self.into_result())
    }

    pub fn into_result(self) -> RunResult<P::Genotype, T> {
        let covered = self.covered();
        RunResult {
            seed: self.config.seed,
            variant: self.config.variant,
            mu: self.config.mu,
            generations_used: self.state.generation,
            evaluations: self.config.mu as u64 + self.state.generation,
            covered,
            coverage_generation: self.coverage_generation,
            population: self.state.population,
            archive: self.state.archive,
            trace: self.trace,
        }
    }
}

/// Run SMS-EMOA on `problem` until coverage or budget exhaustion.
pub fn sms_emoa_run<P: Problem<T>, T: Scalar>(
    problem: &P,
    config: &EngineConfig,
) -> Result<RunResult<P::Genotype, T>> {
    SmsEmoa::new(problem, config.clone())?.run()
}

/// Newline-delimited JSON, one [`TraceRecord`] per line.
pub fn write_trace<W: std::io::Write>(records: &[TraceRecord], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(|e| Error::io("<trace>", e))?;
    }
    Ok(())
}
