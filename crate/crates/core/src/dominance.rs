//! Pareto dominance (maximization) and non-dominated sorting.

use std::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::objective::ObjectiveVector;
use crate::scalar::Scalar;

/// `u ⪰ v`: `u` is at least as good as `v` in every objective.
pub fn weakly_dominates<T: Scalar>(u: &ObjectiveVector<T>, v: &ObjectiveVector<T>) -> bool {
    u.0.iter().zip(&v.0).all(|(a, b)| a >= b)
}

/// `u ≻ v`: `u ⪰ v` and `u` is strictly better somewhere.
pub fn dominates<T: Scalar>(u: &ObjectiveVector<T>, v: &ObjectiveVector<T>) -> bool {
    weakly_dominates(u, v) && u.0.iter().zip(&v.0).any(|(a, b)| a > b)
}

pub fn incomparable<T: Scalar>(u: &ObjectiveVector<T>, v: &ObjectiveVector<T>) -> bool {
    !weakly_dominates(u, v) && !weakly_dominates(v, u)
}

pub(crate) fn cmp_scalar<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Partition `points` into fronts `R_1, .., R_v` of indices into `points`.
///
/// Equal vectors never dominate each other and always share a front. Indices
/// inside a front keep their input order.
pub fn non_dominated_sort<T: Scalar>(points: &[ObjectiveVector<T>]) -> Result<Vec<Vec<usize>>> {
    if points.is_empty() {
        return invalid("cannot sort an empty population");
    }
    // Decreasing f1, ties by decreasing f2: a point can only be dominated by
    // points visited before it.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        cmp_scalar(&points[b].f1(), &points[a].f1())
            .then_with(|| cmp_scalar(&points[b].f2(), &points[a].f2()))
    });

    // Within a front visited points have non-increasing f1 and non-decreasing
    // f2, so the last one has the largest f2 and decides domination.
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let p = &points[i];
        let slot = fronts.iter().position(|front| {
            let last = &points[*front.last().expect("fronts are never empty")];
            !dominates(last, p)
        });
        match slot {
            Some(f) => fronts[f].push(i),
            None => fronts.push(vec![i]),
        }
    }
    for front in &mut fronts {
        front.sort_unstable();
    }
    Ok(fronts)
}

/// Indices of the members of `points` not dominated by any other member.
pub fn non_dominated_indices<T: Scalar>(points: &[ObjectiveVector<T>]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    non_dominated_sort(points)
        .map(|mut fronts| fronts.swap_remove(0))
        .unwrap_or_default()
}

/// Distinct non-dominated vectors of `points`, sorted by increasing f1.
pub fn non_dominated_set<T: Scalar>(points: &[ObjectiveVector<T>]) -> Vec<ObjectiveVector<T>> {
    let mut set: Vec<ObjectiveVector<T>> = non_dominated_indices(points)
        .into_iter()
        .map(|i| points[i])
        .collect();
    set.sort_by(|a, b| cmp_scalar(&a.f1(), &b.f1()).then_with(|| cmp_scalar(&b.f2(), &a.f2())));
    set.dedup();
    set
}
