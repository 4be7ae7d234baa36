//! Exact two-objective hypervolume and SMS-EMOA survival selection.
//!
//! On the first non-dominated front the two boundary solutions (maximum f1,
//! maximum f2) get an infinite contribution, so no reference point is needed.
//! Dominated fronts are measured against a virtual reference point one unit
//! below the front's componentwise minimum, which gives every member a finite
//! contribution.

use std::cmp::Ordering;

use rand::Rng;

use crate::dominance::{cmp_scalar, dominates};
use crate::error::{invalid, Error, Result};
use crate::objective::ObjectiveVector;
use crate::scalar::Scalar;

/// Hypervolume contribution of one solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contribution<T> {
    Finite(T),
    /// Boundary solution of the first front. Ordered above every finite value.
    Infinite,
}

impl<T: Scalar> Contribution<T> {
    pub fn finite(&self) -> Option<T> {
        match self {
            Contribution::Finite(v) => Some(*v),
            Contribution::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Contribution::Infinite)
    }
}

impl<T: Scalar> PartialOrd for Contribution<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Contribution::Finite(a), Contribution::Finite(b)) => a.partial_cmp(b),
            (Contribution::Finite(_), Contribution::Infinite) => Some(Ordering::Less),
            (Contribution::Infinite, Contribution::Finite(_)) => Some(Ordering::Greater),
            (Contribution::Infinite, Contribution::Infinite) => Some(Ordering::Equal),
        }
    }
}

/// Per-solution contributions, aligned with the front passed in.
pub type ContributionReport<T> = Vec<Contribution<T>>;

/// Area dominated by `points` and bounded below by `reference`.
///
/// Every point must be strictly better than `reference` in both objectives.
pub fn hv_2d<T: Scalar>(
    points: &[ObjectiveVector<T>],
    reference: &ObjectiveVector<T>,
) -> Result<T> {
    if let Some(p) = points
        .iter()
        .find(|p| !(p.f1() > reference.f1() && p.f2() > reference.f2()))
    {
        return invalid(format!(
            "point {p} does not strictly dominate reference {reference}"
        ));
    }
    Ok(hv_unchecked(points, reference))
}

/// Sweep along increasing f1 over the staircase of non-dominated points.
fn hv_unchecked<T: Scalar>(points: &[ObjectiveVector<T>], reference: &ObjectiveVector<T>) -> T {
    let mut sorted: Vec<&ObjectiveVector<T>> = points.iter().collect();
    // decreasing f1, then decreasing f2
    sorted.sort_by(|a, b| cmp_scalar(&b.f1(), &a.f1()).then_with(|| cmp_scalar(&b.f2(), &a.f2())));
    let mut area = T::zero();
    let mut covered_f2 = reference.f2();
    for p in sorted {
        if p.f2() > covered_f2 {
            area = area + (p.f1() - reference.f1()) * (p.f2() - covered_f2);
            covered_f2 = p.f2();
        }
    }
    area
}

/// Distinct vectors of a front ordered by increasing f1 (hence decreasing f2),
/// with the indices of their copies. Buffers are reused across calls.
#[derive(Debug, Clone)]
struct Staircase<T> {
    /// Front indices sorted by (f1 asc, f2 desc, index).
    order: Vec<usize>,
    /// `order[starts[g]..starts[g + 1]]` are the copies of `steps[g]`.
    starts: Vec<usize>,
    steps: Vec<ObjectiveVector<T>>,
}

impl<T: Scalar> Staircase<T> {
    fn new() -> Self {
        Self {
            order: Vec::new(),
            starts: Vec::new(),
            steps: Vec::new(),
        }
    }

    fn fill(&mut self, front: &[ObjectiveVector<T>]) -> Result<()> {
        self.order.clear();
        self.order.extend(0..front.len());
        self.order.sort_unstable_by(|&a, &b| {
            cmp_scalar(&front[a].f1(), &front[b].f1())
                .then_with(|| cmp_scalar(&front[b].f2(), &front[a].f2()))
                .then(a.cmp(&b))
        });
        self.starts.clear();
        self.steps.clear();
        for (pos, &i) in self.order.iter().enumerate() {
            let p = front[i];
            if let Some(last) = self.steps.last() {
                if *last == p {
                    continue;
                }
                if !(p.f1() > last.f1() && p.f2() < last.f2()) {
                    return Err(Error::ContractViolation(format!(
                        "front contains comparable vectors {last} and {p}"
                    )));
                }
            }
            self.starts.push(pos);
            self.steps.push(p);
        }
        self.starts.push(self.order.len());
        Ok(())
    }

    fn group(&self, g: usize) -> &[usize] {
        &self.order[self.starts[g]..self.starts[g + 1]]
    }

    fn first_front<R: Rng + ?Sized>(&self, out: &mut Vec<Contribution<T>>, rng: &mut R) {
        out.clear();
        out.resize(self.order.len(), Contribution::Finite(T::zero()));
        let s = &self.steps;
        let last = s.len() - 1;
        for g in 0..s.len() {
            let members = self.group(g);
            if g == 0 || g == last {
                out[pick(members, rng)] = Contribution::Infinite;
            } else if members.len() == 1 {
                out[members[0]] =
                    Contribution::Finite((s[g].f1() - s[g - 1].f1()) * (s[g].f2() - s[g + 1].f2()));
            }
        }
    }

    fn lower_front(&self, out: &mut Vec<Contribution<T>>) {
        out.clear();
        out.resize(self.order.len(), Contribution::Finite(T::zero()));
        let s = &self.steps;
        let last = s.len() - 1;
        // f1 increases and f2 decreases along the staircase
        let reference = ObjectiveVector::new(s[0].f1() - T::one(), s[last].f2() - T::one());
        for g in 0..s.len() {
            let members = self.group(g);
            if members.len() > 1 {
                continue;
            }
            let left_f1 = if g == 0 {
                reference.f1()
            } else {
                s[g - 1].f1()
            };
            let below_f2 = if g == last {
                reference.f2()
            } else {
                s[g + 1].f2()
            };
            out[members[0]] = Contribution::Finite((s[g].f1() - left_f1) * (s[g].f2() - below_f2));
        }
    }
}

fn pick<R: Rng + ?Sized>(members: &[usize], rng: &mut R) -> usize {
    if members.len() == 1 {
        members[0]
    } else {
        members[rng.random_range(0..members.len())]
    }
}

/// Contributions on the first front.
///
/// One solution attaining the maximum f1 and one attaining the maximum f2 are
/// `Infinite` (chosen uniformly among identical copies). Interior distinct
/// vectors get the area of the rectangle spanned by their two neighbours;
/// every other copy of a repeated vector gets zero.
pub fn contributions_first_front<T: Scalar, R: Rng + ?Sized>(
    front: &[ObjectiveVector<T>],
    rng: &mut R,
) -> Result<ContributionReport<T>> {
    let mut out = Vec::new();
    if front.is_empty() {
        return Ok(out);
    }
    let mut stairs = Staircase::new();
    stairs.fill(front)?;
    stairs.first_front(&mut out, rng);
    Ok(out)
}

/// Contributions on a dominated front, measured against the virtual reference
/// point `(min f1 - 1, min f2 - 1)` of the front.
pub fn contributions_lower_front<T: Scalar>(
    front: &[ObjectiveVector<T>],
) -> Result<ContributionReport<T>> {
    let mut out = Vec::new();
    if front.is_empty() {
        return Ok(out);
    }
    let mut stairs = Staircase::new();
    stairs.fill(front)?;
    stairs.lower_front(&mut out);
    Ok(out)
}

/// Index (into `points`) of the solution removed from the last front.
///
/// `fronts` must be the output of [`crate::dominance::non_dominated_sort`] on
/// `points`. Ties for the minimum contribution are broken uniformly at random.
pub fn select_removal<T: Scalar, R: Rng + ?Sized>(
    fronts: &[Vec<usize>],
    points: &[ObjectiveVector<T>],
    rng: &mut R,
) -> Result<usize> {
    let Some(last) = fronts.last() else {
        return invalid("no fronts to select from");
    };
    let members: Vec<ObjectiveVector<T>> = last.iter().map(|&i| points[i]).collect();
    let contributions = if fronts.len() == 1 {
        contributions_first_front(&members, rng)?
    } else {
        contributions_lower_front(&members)?
    };
    let mut ties = Vec::new();
    let local = argmin_random_tie(&contributions, &mut ties, rng);
    Ok(last[local])
}

fn argmin_random_tie<T: Scalar, R: Rng + ?Sized>(
    values: &[Contribution<T>],
    ties: &mut Vec<usize>,
    rng: &mut R,
) -> usize {
    let mut best = values[0];
    ties.clear();
    ties.push(0);
    for (i, v) in values.iter().enumerate().skip(1) {
        match v.partial_cmp(&best) {
            Some(Ordering::Less) => {
                best = *v;
                ties.clear();
                ties.push(i);
            }
            Some(Ordering::Equal) => ties.push(i),
            _ => {}
        }
    }
    pick(ties, rng)
}

/// Reusable buffers for survival selection.
///
/// [`Survival::select`] gives the same answer, and consumes the random stream
/// in the same way, as [`crate::dominance::non_dominated_sort`] followed by
/// [`select_removal`], without allocating once the buffers have grown.
#[derive(Debug, Clone)]
pub struct Survival<T> {
    order: Vec<usize>,
    rank: Vec<usize>,
    tails: Vec<usize>,
    last: Vec<usize>,
    members: Vec<ObjectiveVector<T>>,
    stairs: Staircase<T>,
    contributions: Vec<Contribution<T>>,
    ties: Vec<usize>,
}

impl<T: Scalar> Default for Survival<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Survival<T> {
    pub fn new() -> Self {
        Self {
            order: Vec::new(),
            rank: Vec::new(),
            tails: Vec::new(),
            last: Vec::new(),
            members: Vec::new(),
            stairs: Staircase::new(),
            contributions: Vec::new(),
            ties: Vec::new(),
        }
    }

    /// Index (into `points`) of the solution to remove.
    pub fn select<R: Rng + ?Sized>(
        &mut self,
        points: &[ObjectiveVector<T>],
        rng: &mut R,
    ) -> Result<usize> {
        if points.is_empty() {
            return invalid("cannot select from an empty population");
        }
        self.order.clear();
        self.order.extend(0..points.len());
        // identical vectors always share a rank, so their visiting order is irrelevant
        self.order.sort_unstable_by(|&a, &b| {
            cmp_scalar(&points[b].f1(), &points[a].f1())
                .then_with(|| cmp_scalar(&points[b].f2(), &points[a].f2()))
        });
        self.rank.clear();
        self.rank.resize(points.len(), 0);
        self.tails.clear();
        for &i in &self.order {
            let p = &points[i];
            match self.tails.iter().position(|&t| !dominates(&points[t], p)) {
                Some(f) => {
                    self.rank[i] = f;
                    self.tails[f] = i;
                }
                None => {
                    self.rank[i] = self.tails.len();
                    self.tails.push(i);
                }
            }
        }
        let last_rank = self.tails.len() - 1;
        self.last.clear();
        self.last
            .extend((0..points.len()).filter(|&i| self.rank[i] == last_rank));
        self.members.clear();
        self.members.extend(self.last.iter().map(|&i| points[i]));
        self.stairs.fill(&self.members)?;
        if last_rank == 0 {
            self.stairs.first_front(&mut self.contributions, rng);
        } else {
            self.stairs.lower_front(&mut self.contributions);
        }
        let local = argmin_random_tie(&self.contributions, &mut self.ties, rng);
        Ok(self.last[local])
    }
}
