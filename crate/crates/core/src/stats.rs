//! Summary statistics, the Wilcoxon rank-sum test and hypervolume reporting.

use std::cmp::Ordering;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::dominance::non_dominated_set;
use crate::error::{invalid, Result};
use crate::hypervolume::hv_2d;
use crate::objective::ObjectiveVector;
use crate::problems::{Orientation, Problem};
use crate::rng::RngState;
use crate::scalar::Scalar;

/// Random solutions drawn when estimating a hypervolume reference point.
pub const REFERENCE_SAMPLES: usize = 100_000;

/// Largest combined sample size for which the exact rank-sum distribution is used.
pub const EXACT_MAX_TOTAL: usize = 12;

/// Significance level for the dagger flag in result tables.
pub const ALPHA: f64 = 0.05;

/// Arithmetic mean and sample standard deviation ((n-1) denominator).
pub fn mean_std(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return invalid(format!(
            "mean_std needs at least 2 samples, got {}",
            samples.len()
        ));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Mann-Whitney U of the first sample: its rank sum minus n1(n1+1)/2.
    pub u: f64,
    /// Two-sided p-value.
    pub p: f64,
    pub method: WilcoxonMethod,
}

impl WilcoxonResult {
    pub fn significant(&self) -> bool {
        self.p < ALPHA
    }
}

/// Midranks (1-based) of the pooled sample, plus the tie group sizes.
fn midranks(xs: &[f64], ys: &[f64]) -> Result<(Vec<f64>, Vec<usize>)> {
    if xs.is_empty() || ys.is_empty() {
        return invalid("rank-sum test needs two nonempty samples");
    }
    let pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    if pooled.iter().any(|v| v.is_nan()) {
        return invalid("rank-sum test samples contain NaN");
    }
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].partial_cmp(&pooled[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && pooled[order[j]] == pooled[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &o in &order[i..j] {
            ranks[o] = rank;
        }
        ties.push(j - i);
        i = j;
    }
    Ok((ranks, ties))
}

fn u_statistic(ranks: &[f64], n1: usize) -> f64 {
    let r1: f64 = ranks[..n1].iter().sum();
    r1 - (n1 * (n1 + 1)) as f64 / 2.0
}

/// Exact two-sided test by enumerating every assignment of ranks to the first sample.
///
/// Requires tie-free samples with at most [`EXACT_MAX_TOTAL`] values in total.
pub fn wilcoxon_exact(xs: &[f64], ys: &[f64]) -> Result<WilcoxonResult> {
    let (ranks, ties) = midranks(xs, ys)?;
    let (n1, total) = (xs.len(), xs.len() + ys.len());
    if total > EXACT_MAX_TOTAL {
        return invalid(format!(
            "exact rank-sum test limited to {EXACT_MAX_TOTAL} values, got {total}"
        ));
    }
    if ties.iter().any(|&t| t > 1) {
        return invalid("exact rank-sum test requires tie-free samples");
    }
    let u = u_statistic(&ranks, n1);
    // U takes integer values 0..=n1*n2 when there are no ties
    let u_int = u.round() as usize;
    let mut counts = vec![0u64; n1 * (total - n1) + 1];
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        let rank_sum: usize = (0..total)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| b + 1)
            .sum();
        counts[rank_sum - n1 * (n1 + 1) / 2] += 1;
    }
    let all: u64 = counts.iter().sum();
    let lower: u64 = counts[..=u_int].iter().sum();
    let upper: u64 = counts[u_int..].iter().sum();
    let p = (2.0 * lower.min(upper) as f64 / all as f64).min(1.0);
    Ok(WilcoxonResult {
        u,
        p,
        method: WilcoxonMethod::Exact,
    })
}

/// Normal approximation with tie-corrected variance and continuity correction.
pub fn wilcoxon_normal(xs: &[f64], ys: &[f64]) -> Result<WilcoxonResult> {
    let (ranks, ties) = midranks(xs, ys)?;
    let (n1, n2) = (xs.len() as f64, ys.len() as f64);
    let total = n1 + n2;
    let u = u_statistic(&ranks, xs.len());
    let mean = n1 * n2 / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>();
    let correction = if total > 1.0 {
        tie_term / (total * (total - 1.0))
    } else {
        0.0
    };
    let variance = n1 * n2 / 12.0 * ((total + 1.0) - correction);
    let p = if variance <= 0.0 {
        1.0
    } else {
        let z = ((u - mean).abs() - 0.5).max(0.0) / variance.sqrt();
        let normal = Normal::standard();
        (2.0 * normal.sf(z)).min(1.0)
    };
    Ok(WilcoxonResult {
        u,
        p,
        method: WilcoxonMethod::Normal,
    })
}

/// Two-sided rank-sum test: exact for small tie-free samples, normal approximation otherwise.
pub fn wilcoxon_rank_sum(xs: &[f64], ys: &[f64]) -> Result<WilcoxonResult> {
    let (_, ties) = midranks(xs, ys)?;
    if xs.len() + ys.len() <= EXACT_MAX_TOTAL && ties.iter().all(|&t| t == 1) {
        wilcoxon_exact(xs, ys)
    } else {
        wilcoxon_normal(xs, ys)
    }
}

/// Componentwise worst objective values among the non-dominated vectors of
/// `sample_count` uniformly drawn (and repaired) solutions, in the problem's
/// natural orientation.
pub fn estimate_reference_point<T, P>(
    problem: &P,
    sample_count: usize,
    rng: &mut RngState,
) -> Result<ObjectiveVector<T>>
where
    T: Scalar,
    P: Problem<T>,
{
    if sample_count == 0 {
        return invalid("reference point estimation needs at least one sample");
    }
    let samples: Vec<ObjectiveVector<T>> = (0..sample_count)
        .map(|_| {
            let g = problem.repair(problem.random_genotype(rng));
            problem.evaluate(&g)
        })
        .collect();
    let front = non_dominated_set(&samples);
    let worst = front
        .iter()
        .copied()
        .reduce(|a, b| {
            let f1 = if b.f1() < a.f1() { b.f1() } else { a.f1() };
            let f2 = if b.f2() < a.f2() { b.f2() } else { a.f2() };
            ObjectiveVector::new(f1, f2)
        })
        .expect("nonempty sample has a nonempty front");
    Ok(problem.orientation().from_engine(worst))
}

/// Hypervolume of `front` against `reference`, both in natural orientation.
/// Points that are not strictly better than the reference in both objectives
/// are dropped.
pub fn hv_report<T: Scalar>(
    front: &[ObjectiveVector<T>],
    reference: &ObjectiveVector<T>,
    orientation: Orientation,
) -> T {
    let r = orientation.to_engine(*reference);
    let clipped: Vec<ObjectiveVector<T>> = front
        .iter()
        .map(|p| orientation.to_engine(*p))
        .filter(|p| p.f1() > r.f1() && p.f2() > r.f2())
        .collect();
    hv_2d(&clipped, &r).expect("clipped points strictly dominate the reference")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::genotype::BitString;
    use crate::problems::practical::generate_kp;
    use crate::problems::KpInstance;
    use crate::{Exact, Objectives};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn v(a: i64, b: i64) -> Objectives {
        ObjectiveVector::from_ints(a, b)
    }

    #[test]
    fn mean_std_examples() {
        let (m, s) = mean_std(&[2.0, 4.0]).unwrap();
        assert_eq!(m, 3.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(mean_std(&[7.5; 5]).unwrap(), (7.5, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((s - 1.2910).abs() < 1e-4);
        assert!(matches!(mean_std(&[1.0]), Err(Error::InvalidArgument(_))));
        assert!(mean_std(&[]).is_err());
    }

    #[test]
    fn exact_extreme_split() {
        let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.method, WilcoxonMethod::Exact);
        assert_eq!(r.u, 0.0);
        assert!((r.p - 0.1).abs() < 1e-12);
        let r = wilcoxon_rank_sum(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.u, 9.0);
        assert!((r.p - 0.1).abs() < 1e-12);
    }

    #[test]
    fn identical_samples_are_indistinguishable() {
        let xs = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let r = wilcoxon_rank_sum(&xs, &xs).unwrap();
        assert_eq!(r.method, WilcoxonMethod::Normal);
        assert!((r.p - 1.0).abs() < 1e-9);
        let r = wilcoxon_rank_sum(&[2.0, 2.0], &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(r.p, 1.0);
    }

    #[test]
    fn ties_get_midranks() {
        let (ranks, ties) = midranks(&[1.0, 2.0, 2.0], &[2.0, 5.0]).unwrap();
        assert_eq!(ranks, vec![1.0, 3.0, 3.0, 3.0, 5.0]);
        assert_eq!(ties, vec![1, 3, 1]);
        assert!(wilcoxon_exact(&[1.0, 2.0], &[2.0]).is_err());
    }

    #[test]
    fn rank_sum_rejects_bad_input() {
        assert!(matches!(
            wilcoxon_rank_sum(&[], &[1.0]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(wilcoxon_rank_sum(&[1.0], &[]).is_err());
        assert!(wilcoxon_rank_sum(&[f64::NAN], &[1.0]).is_err());
        let big: Vec<f64> = (0..13).map(f64::from).collect();
        assert!(wilcoxon_exact(&big[..7], &big[7..]).is_err());
    }

    #[test]
    fn exact_and_normal_paths_agree_on_small_samples() {
        let mut rng = RngState::new(5);
        let mut pool: Vec<f64> = (0..100).map(f64::from).collect();
        for _ in 0..100 {
            pool.shuffle(&mut rng);
            let exact = wilcoxon_exact(&pool[..6], &pool[6..12]).unwrap();
            let normal = wilcoxon_normal(&pool[..6], &pool[6..12]).unwrap();
            assert_eq!(exact.u, normal.u);
            assert!(
                (exact.p - normal.p).abs() <= 0.02,
                "{exact:?} vs {normal:?}"
            );
        }
    }

    #[test]
    fn large_shift_is_significant() {
        let xs: Vec<f64> = (0..30).map(f64::from).collect();
        let ys: Vec<f64> = (0..30).map(|i| f64::from(i) + 100.0).collect();
        let r = wilcoxon_rank_sum(&xs, &ys).unwrap();
        assert!(r.significant());
        assert!(r.p < 1e-9);
    }

    proptest! {
        #[test]
        fn rank_sum_is_symmetric(
            xs in prop::collection::vec(0i32..20, 1..15),
            ys in prop::collection::vec(0i32..20, 1..15),
        ) {
            let xs: Vec<f64> = xs.into_iter().map(f64::from).collect();
            let ys: Vec<f64> = ys.into_iter().map(f64::from).collect();
            let a = wilcoxon_rank_sum(&xs, &ys).unwrap();
            let b = wilcoxon_rank_sum(&ys, &xs).unwrap();
            prop_assert!((a.p - b.p).abs() < 1e-12);
            prop_assert!((a.u + b.u - (xs.len() * ys.len()) as f64).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&a.p));
        }

        #[test]
        fn hv_report_is_monotone(
            raw in prop::collection::vec((-5i64..15, -5i64..15), 0..10),
            extra in (-5i64..15, -5i64..15),
            min in any::<bool>(),
        ) {
            let orientation = if min { Orientation::Min } else { Orientation::Max };
            let reference = if min { v(10, 10) } else { v(0, 0) };
            let mut pts: Vec<Objectives> = raw.iter().map(|&(a, b)| v(a, b)).collect();
            let before = hv_report(&pts, &reference, orientation);
            pts.push(v(extra.0, extra.1));
            prop_assert!(hv_report(&pts, &reference, orientation) >= before);
        }

        #[test]
        fn hv_report_matches_grid_count(raw in prop::collection::vec((-3i64..8, -3i64..8), 0..8)) {
            let pts: Vec<Objectives> = raw.iter().map(|&(a, b)| v(a, b)).collect();
            let mut cells = 0i64;
            for x in 0..8 {
                for y in 0..8 {
                    if pts.iter().any(|p| p.f1() > Exact::from_int(x) && p.f2() > Exact::from_int(y)) {
                        cells += 1;
                    }
                }
            }
            prop_assert_eq!(hv_report(&pts, &v(0, 0), Orientation::Max), Exact::from_int(cells));
        }
    }

    #[test]
    fn hv_report_examples() {
        assert_eq!(
            hv_report::<Exact>(&[], &v(0, 0), Orientation::Max),
            Exact::from_int(0)
        );
        assert_eq!(
            hv_report(&[v(-1, 5), v(3, 0)], &v(0, 0), Orientation::Max),
            Exact::from_int(0)
        );
        assert_eq!(
            hv_report(&[v(-1, 5), v(2, 3), v(3, 1)], &v(0, 0), Orientation::Max),
            Exact::from_int(7)
        );
        // minimization: (2,3) and (4,1) below reference (5,5); (6,0) is clipped
        let hv = hv_report(&[v(2, 3), v(4, 1), v(6, 0)], &v(5, 5), Orientation::Min);
        assert_eq!(hv, Exact::from_int(3 * 2 + 2));
    }

    struct Constant;

    impl Problem<Exact> for Constant {
        type Genotype = BitString;
        fn name(&self) -> String {
            "CONST".into()
        }
        fn size(&self) -> usize {
            4
        }
        fn random_genotype(&self, rng: &mut RngState) -> BitString {
            crate::genotype::random_bitstring(4, rng).unwrap()
        }
        fn evaluate(&self, _: &BitString) -> Objectives {
            v(3, -2)
        }
    }

    #[test]
    fn reference_of_constant_problem() {
        let r = estimate_reference_point(&Constant, 1000, &mut RngState::new(1)).unwrap();
        assert_eq!(r, v(3, -2));
        assert!(estimate_reference_point(&Constant, 0, &mut RngState::new(1)).is_err());
    }

    #[test]
    fn reference_of_tiny_knapsacks() {
        // only the first item ever fits, so the feasible set is {empty, first item}
        let kp = KpInstance::new(vec![5, 9], vec![3, 9], vec![1, 2], 1).unwrap();
        let r = estimate_reference_point::<Exact, _>(&kp, 100, &mut RngState::new(2)).unwrap();
        assert_eq!(r, v(5, 3));
        let kp = KpInstance::new(vec![5, 1], vec![1, 5], vec![1, 1], 1).unwrap();
        let r = estimate_reference_point::<Exact, _>(&kp, 200, &mut RngState::new(2)).unwrap();
        assert_eq!(r, v(1, 1));
    }

    #[test]
    fn reference_replays_the_sample_stream() {
        let kp = generate_kp(10, 7).unwrap();
        let got = estimate_reference_point::<Exact, _>(&kp, 5000, &mut RngState::new(11)).unwrap();
        let mut rng = RngState::new(11);
        let samples: Vec<Objectives> = (0..5000)
            .map(|_| {
                let g =
                    Problem::<Exact>::repair(&kp, Problem::<Exact>::random_genotype(&kp, &mut rng));
                Problem::<Exact>::evaluate(&kp, &g)
            })
            .collect();
        let nd: Vec<&Objectives> = samples
            .iter()
            .filter(|p| !samples.iter().any(|q| crate::dominance::dominates(q, p)))
            .collect();
        let min1 = nd.iter().map(|p| p.f1()).min().unwrap();
        let min2 = nd.iter().map(|p| p.f2()).min().unwrap();
        assert_eq!(got, ObjectiveVector::new(min1, min2));
        for p in nd {
            assert!(crate::dominance::weakly_dominates(p, &got));
        }
    }

    #[test]
    fn reference_for_minimization_is_componentwise_max() {
        let tsp = crate::problems::practical::generate_tsp(8, 3).unwrap();
        let r = estimate_reference_point::<Exact, _>(&tsp, 2000, &mut RngState::seed_from_u64(4))
            .unwrap();
        let mut rng = RngState::seed_from_u64(4);
        let natural: Vec<Objectives> = (0..2000)
            .map(|_| {
                let g = Problem::<Exact>::random_genotype(&tsp, &mut rng);
                Problem::<Exact>::evaluate(&tsp, &g).negated()
            })
            .collect();
        let nd: Vec<&Objectives> = natural
            .iter()
            .filter(|p| {
                !natural
                    .iter()
                    .any(|q| q.f1() <= p.f1() && q.f2() <= p.f2() && *q != **p)
            })
            .collect();
        assert_eq!(r.f1(), nd.iter().map(|p| p.f1()).max().unwrap());
        assert_eq!(r.f2(), nd.iter().map(|p| p.f2()).max().unwrap());
    }
}
