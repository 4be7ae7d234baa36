use std::collections::BTreeSet;

use sms_emoa::dominance::{dominates, non_dominated_set};
use sms_emoa::engine::variant_population_size;
use sms_emoa::harness::experiments::{practical_config, runtime_config};
use sms_emoa::harness::{run_experiment, ExperimentSpec, SizePlan};
use sms_emoa::hypervolume::hv_2d;
use sms_emoa::problems::practical::{generate_kp, generate_nk, generate_qap, generate_tsp};
use sms_emoa::problems::{BenchmarkKind, BenchmarkSpec, InstanceDocument, InstanceKind, Problem};
use sms_emoa::stats::{estimate_reference_point, hv_report};
use sms_emoa::{sms_emoa_run, AlgorithmVariant, EngineConfig, Exact, ObjectiveVector, RngState};

fn key(v: &ObjectiveVector<Exact>) -> (Exact, Exact) {
    (v.f1(), v.f2())
}

fn mutually_non_dominated(points: &[ObjectiveVector<Exact>]) -> bool {
    points
        .iter()
        .all(|p| points.iter().all(|q| !dominates(p, q)))
}

fn benchmark_config(spec: &BenchmarkSpec, variant: AlgorithmVariant, seed: u64) -> EngineConfig {
    let base = ExperimentSpec::custom(
        spec.kind(),
        spec.k(),
        spec.a(),
        vec![SizePlan::new(spec.n(), 1)],
    )
    .with_max_generations(200_000);
    runtime_config(&base, spec, variant, seed).unwrap()
}

#[test]
fn every_variant_covers_every_small_benchmark() {
    let specs = [
        BenchmarkSpec::ojzj(8, 2).unwrap(),
        BenchmarkSpec::ojzj_ss(10, 3, 2).unwrap(),
        BenchmarkSpec::omm(8).unwrap(),
        BenchmarkSpec::lotz(8).unwrap(),
    ];
    for spec in &specs {
        let front: BTreeSet<_> = Problem::<Exact>::pareto_front(spec)
            .unwrap()
            .iter()
            .map(key)
            .collect();
        assert_eq!(front.len(), spec.front_size());
        for variant in AlgorithmVariant::ALL {
            let config = benchmark_config(spec, variant, 17);
            assert_eq!(config.mu, variant_population_size(spec, variant));
            let result = sms_emoa_run::<_, Exact>(spec, &config).unwrap();
            assert!(result.covered, "{} {variant:?}", spec.kind().label());
            let returned = result.returned_objectives();
            assert!(mutually_non_dominated(&returned));
            let got: BTreeSet<_> = returned.iter().map(key).collect();
            assert!(front.is_subset(&got), "{} {variant:?}", spec.kind().label());
            if variant.has_archive() {
                assert_eq!(got, front);
            }
        }
    }
}

#[test]
fn archive_dominates_the_initial_population_on_practical_problems() {
    fn check<P: Problem<Exact>>(problem: &P, kind: InstanceKind) {
        let mut rng = RngState::new(5);
        let reference = estimate_reference_point::<Exact, _>(problem, 500, &mut rng).unwrap();
        let orientation = problem.orientation();
        for variant in [
            AlgorithmVariant::ArchiveStore,
            AlgorithmVariant::ArchiveReuse,
        ] {
            let mut config = practical_config(kind, variant, 300, 11).unwrap();
            config.mu = 12;
            let zero = sms_emoa_run::<_, Exact>(
                problem,
                &EngineConfig {
                    max_generations: 0,
                    ..config.clone()
                },
            )
            .unwrap();
            let result = sms_emoa_run::<_, Exact>(problem, &config).unwrap();
            assert_eq!(result.generations_used, 300);
            assert_eq!(result.evaluations, 312);
            let returned = result.returned_objectives();
            assert!(mutually_non_dominated(&returned));
            assert_eq!(non_dominated_set(&returned).len(), returned.len());
            let natural = |v: &[ObjectiveVector<Exact>]| {
                v.iter()
                    .map(|p| orientation.from_engine(*p))
                    .collect::<Vec<_>>()
            };
            let before = hv_report(
                &natural(&zero.returned_objectives()),
                &reference,
                orientation,
            );
            let after = hv_report(&natural(&returned), &reference, orientation);
            assert!(after >= before, "{kind:?} {variant:?}");
            for p in result.population.iter() {
                assert!(returned
                    .iter()
                    .any(|q| q == &p.objectives || dominates(q, &p.objectives)));
            }
        }
    }
    check(&generate_kp(20, 1).unwrap(), InstanceKind::Kp);
    check(&generate_nk(12, 2).unwrap(), InstanceKind::Nk);
    check(&generate_tsp(10, 3).unwrap(), InstanceKind::Tsp);
    check(&generate_qap(8, 4).unwrap(), InstanceKind::Qap);
}

#[test]
fn instance_documents_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [
        InstanceKind::Kp,
        InstanceKind::Nk,
        InstanceKind::Tsp,
        InstanceKind::Qap,
    ] {
        let doc = InstanceDocument::generate(kind, 9, 77).unwrap();
        let path = dir.path().join(format!("{}.json", kind.label()));
        doc.write(&path).unwrap();
        let back = InstanceDocument::read(&path).unwrap();
        assert_eq!(back.kind, kind);
        assert_eq!(back.n, 9);
        assert_eq!(back.to_json().unwrap(), doc.to_json().unwrap());
    }
}

#[test]
fn exact_hypervolume_agrees_with_float_on_integer_fronts() {
    let spec = BenchmarkSpec::ojzj(12, 3).unwrap();
    let front: Vec<ObjectiveVector<Exact>> = Problem::<Exact>::pareto_front(&spec).unwrap();
    let exact = hv_2d(&front, &ObjectiveVector::from_ints(-1, -1)).unwrap();
    let floats: Vec<ObjectiveVector<f64>> = front
        .iter()
        .map(|p| {
            let [a, b] = p.to_f64();
            ObjectiveVector::new(a, b)
        })
        .collect();
    let float = hv_2d(&floats, &ObjectiveVector::new(-1.0, -1.0)).unwrap();
    assert_eq!(*exact.numer() as f64 / *exact.denom() as f64, float);
}

#[test]
fn experiments_do_not_depend_on_thread_count() {
    let spec = ExperimentSpec::custom(
        BenchmarkKind::LeadingOnesTrailingZeroes,
        0,
        0,
        vec![SizePlan::new(8, 6)],
    )
    .with_variants(vec![AlgorithmVariant::ArchiveReuse])
    .with_seed(123);
    let one = run_experiment(&spec.clone().with_threads(Some(1))).unwrap();
    let many = run_experiment(&spec.with_threads(Some(3))).unwrap();
    assert_eq!(one.rows, many.rows);
    assert_eq!(one.rows.len(), 6);
    assert!(one.rows.iter().all(|r| r.covered));
}
