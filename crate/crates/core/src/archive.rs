//! Unbounded archive of mutually non-dominated solutions.

use rand::Rng;

use crate::dominance::{dominates, weakly_dominates};
use crate::objective::{EvaluatedSolution, ObjectiveVector};
use crate::scalar::Scalar;

/// Members keep insertion order; objective vectors are pairwise distinct and
/// pairwise incomparable.
#[derive(Debug, Clone)]
pub struct Archive<G, T> {
    members: Vec<EvaluatedSolution<G, T>>,
    insertions: u64,
}

impl<G, T> Default for Archive<G, T> {
    fn default() -> Self {
        Self {
            members: Vec::new(),
            insertions: 0,
        }
    }
}

impl<G: Clone, T: Scalar> Archive<G, T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[EvaluatedSolution<G, T>] {
        &self.members
    }

    /// Number of candidates accepted so far.
    pub fn insertions(&self) -> u64 {
        self.insertions
    }

    pub fn objectives(&self) -> impl Iterator<Item = &ObjectiveVector<T>> {
        self.members.iter().map(|m| &m.objectives)
    }

    /// Insert `candidate` unless some member weakly dominates it; members it
    /// strictly dominates are dropped. Returns whether it was inserted.
    pub fn update(&mut self, candidate: &EvaluatedSolution<G, T>) -> bool {
        let f = &candidate.objectives;
        if self
            .members
            .iter()
            .any(|m| weakly_dominates(&m.objectives, f))
        {
            return false;
        }
        self.members.retain(|m| !dominates(f, &m.objectives));
        self.members.push(candidate.clone());
        self.insertions += 1;
        true
    }

    pub fn into_members(self) -> Vec<EvaluatedSolution<G, T>> {
        self.members
    }
}

/// Functional form of [`Archive::update`].
pub fn archive_update<G: Clone, T: Scalar>(
    mut archive: Archive<G, T>,
    candidate: &EvaluatedSolution<G, T>,
) -> Archive<G, T> {
    archive.update(candidate);
    archive
}

/// Parent selection with archive reuse: a uniform population member with
/// probability 1/2, otherwise a uniform archive member. An empty archive
/// always yields a population member and consumes no coin flip.
///
/// Returns `None` only when the population is empty.
pub fn select_parent_with_reuse<'a, G: Clone, T: Scalar, R: Rng + ?Sized>(
    population: &'a [EvaluatedSolution<G, T>],
    archive: &'a Archive<G, T>,
    rng: &mut R,
) -> Option<&'a EvaluatedSolution<G, T>> {
    if population.is_empty() {
        return None;
    }
    if !archive.is_empty() && rng.random::<f64>() >= 0.5 {
        let i = rng.random_range(0..archive.len());
        return Some(&archive.members[i]);
    }
    Some(&population[rng.random_range(0..population.len())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::non_dominated_set;
    use crate::rng::RngState;
    use crate::Objectives;
    use proptest::prelude::*;
    use rand::Rng;

    type Sol = EvaluatedSolution<u32, crate::Exact>;

    fn sol(id: u32, a: i64, b: i64) -> Sol {
        EvaluatedSolution::new(id, Objectives::from_ints(a, b))
    }

    fn vectors(a: &Archive<u32, crate::Exact>) -> Vec<(i64, i64)> {
        a.objectives()
            .map(|v| (v.f1().to_integer() as i64, v.f2().to_integer() as i64))
            .collect()
    }

    #[test]
    fn incomparable_candidate_joins() {
        let mut a = Archive::new();
        a.update(&sol(0, 3, 1));
        assert!(a.update(&sol(1, 2, 2)));
        assert_eq!(vectors(&a), vec![(3, 1), (2, 2)]);
    }

    #[test]
    fn dominating_candidate_evicts() {
        let mut a = Archive::new();
        a.update(&sol(0, 3, 1));
        a.update(&sol(1, 2, 2));
        // (3,2) dominates both (3,1) and (2,2)
        assert!(a.update(&sol(2, 3, 2)));
        assert_eq!(vectors(&a), vec![(3, 2)]);
    }

    #[test]
    fn equal_candidate_is_rejected_and_incumbent_kept() {
        let mut a = Archive::new();
        a.update(&sol(0, 2, 2));
        assert!(!a.update(&sol(1, 2, 2)));
        assert_eq!(a.len(), 1);
        assert_eq!(a.members()[0].genotype, 0);
        let again = archive_update(a.clone(), &sol(0, 2, 2));
        assert_eq!(vectors(&again), vectors(&a));
    }

    #[test]
    fn empty_archive_falls_back_to_population() {
        let pop = vec![sol(0, 1, 1), sol(1, 2, 0)];
        let a: Archive<u32, crate::Exact> = Archive::new();
        let mut rng = RngState::new(4);
        let mut plain = RngState::new(4);
        for _ in 0..100 {
            let chosen = select_parent_with_reuse(&pop, &a, &mut rng).unwrap();
            // no coin is drawn: the stream matches a bare uniform index draw
            let expected = plain.random_range(0..pop.len());
            assert_eq!(chosen.genotype, pop[expected].genotype);
        }
    }

    #[test]
    fn archive_branch_taken_half_the_time() {
        let pop = vec![sol(0, 1, 1)];
        let mut a = Archive::new();
        a.update(&sol(1, 5, 5));
        let mut rng = RngState::new(21);
        let trials = 1_000_000;
        let from_archive = (0..trials)
            .filter(|_| {
                select_parent_with_reuse(&pop, &a, &mut rng)
                    .unwrap()
                    .genotype
                    == 1
            })
            .count();
        let frac = from_archive as f64 / trials as f64;
        assert!((frac - 0.5).abs() <= 3.0 * 0.0005, "{frac}");
    }

    #[test]
    fn archive_members_uniform_within_branch() {
        let pop = vec![sol(100, 0, 0)];
        let mut a = Archive::new();
        for (i, (x, y)) in [(1, 4), (2, 3), (3, 2), (4, 1)].into_iter().enumerate() {
            a.update(&sol(i as u32, x, y));
        }
        let mut rng = RngState::new(8);
        let mut counts = [0usize; 4];
        let mut branch = 0usize;
        while branch < 1_000_000 {
            let g = select_parent_with_reuse(&pop, &a, &mut rng)
                .unwrap()
                .genotype;
            if g != 100 {
                counts[g as usize] += 1;
                branch += 1;
            }
        }
        let sigma = (0.25f64 * 0.75 / branch as f64).sqrt();
        for c in counts {
            let frac = c as f64 / branch as f64;
            assert!((frac - 0.25).abs() <= 3.0 * sigma, "{frac}");
        }
    }

    proptest! {
        #[test]
        fn archive_holds_maximal_distinct_vectors(raw in prop::collection::vec((0i64..8, 0i64..8), 1..60)) {
            let mut a = Archive::new();
            let mut history = Vec::new();
            for (i, &(x, y)) in raw.iter().enumerate() {
                let s = sol(i as u32, x, y);
                history.push(s.objectives);
                a.update(&s);
            }
            let mut got: Vec<Objectives> = a.objectives().copied().collect();
            got.sort_by_key(|p| p.f1());
            prop_assert_eq!(got, non_dominated_set(&history));
        }
    }
}
