//! Seeded bi-objective instances: 0/1 knapsack, NK-landscapes, TSP and QAP.
//!
//! Instance distributions:
//! - KP: profits and weights uniform in `[10, 100]`, capacity `ceil(sum(w) / 2)`.
//! - NK: `K = 4`, neighbours drawn without replacement from the other
//!   variables, component values `j / 2^20` with `j` uniform in `[0, 2^20]`.
//! - TSP: per objective, city coordinates uniform on `[0, 10^4]^2` (integers);
//!   distances are rounded Euclidean.
//! - QAP: one distance and two flow matrices, off-diagonal entries uniform in
//!   `[1, 100]`, zero diagonals.
//!
//! TSP and QAP are minimized; their [`Problem`] impls hand negated vectors to
//! the engine.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::genotype::{random_bitstring, random_permutation, BitString, Permutation};
use crate::objective::ObjectiveVector;
use crate::problems::{Orientation, Problem};
use crate::rng::RngState;
use crate::scalar::Scalar;

pub const NK_K: usize = 4;
/// Denominator of NK component values.
pub const NK_SCALE: i64 = 1 << 20;
pub const TSP_GRID: i64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Kp,
    Nk,
    Tsp,
    Qap,
}

impl InstanceKind {
    pub fn label(&self) -> &'static str {
        match self {
            InstanceKind::Kp => "KP",
            InstanceKind::Nk => "NK",
            InstanceKind::Tsp => "TSP",
            InstanceKind::Qap => "QAP",
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            InstanceKind::Kp | InstanceKind::Nk => Orientation::Max,
            InstanceKind::Tsp | InstanceKind::Qap => Orientation::Min,
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kp" => Ok(InstanceKind::Kp),
            "nk" => Ok(InstanceKind::Nk),
            "tsp" => Ok(InstanceKind::Tsp),
            "qap" => Ok(InstanceKind::Qap),
            other => invalid(format!("unknown instance kind '{other}'")),
        }
    }
}

// ---------------------------------------------------------------- knapsack

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KpInstance {
    pub profits1: Vec<i64>,
    pub profits2: Vec<i64>,
    pub weights: Vec<i64>,
    pub capacity: i64,
}

impl KpInstance {
    pub fn new(
        profits1: Vec<i64>,
        profits2: Vec<i64>,
        weights: Vec<i64>,
        capacity: i64,
    ) -> Result<Self> {
        let n = weights.len();
        if n == 0 || profits1.len() != n || profits2.len() != n {
            return invalid("knapsack vectors must be non-empty and of equal length");
        }
        if profits1
            .iter()
            .chain(&profits2)
            .chain(&weights)
            .any(|&v| v < 1)
        {
            return invalid("knapsack profits and weights must be >= 1");
        }
        let total: i64 = weights.iter().sum();
        if !(0 < capacity && capacity < total) {
            return invalid(format!("capacity {capacity} must lie in (0, {total})"));
        }
        Ok(Self {
            profits1,
            profits2,
            weights,
            capacity,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, x: &BitString) -> i64 {
        x.bits()
            .iter()
            .zip(&self.weights)
            .filter(|(b, _)| **b)
            .map(|(_, w)| w)
            .sum()
    }

    fn profits(&self, x: &BitString) -> (i64, i64) {
        x.bits()
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .fold((0, 0), |(a, b), (i, _)| {
                (a + self.profits1[i], b + self.profits2[i])
            })
    }
}

pub fn generate_kp(n: usize, seed: u64) -> Result<KpInstance> {
    if n < 2 {
        return invalid("knapsack needs n >= 2");
    }
    let mut rng = RngState::new(seed);
    let draw = |rng: &mut RngState| {
        (0..n)
            .map(|_| rng.random_range(10..=100))
            .collect::<Vec<i64>>()
    };
    let profits1 = draw(&mut rng);
    let profits2 = draw(&mut rng);
    let weights = draw(&mut rng);
    let total: i64 = weights.iter().sum();
    let capacity = (total + 1) / 2;
    KpInstance::new(profits1, profits2, weights, capacity)
}

/// Total profits of a feasible selection. Infeasible selections must go
/// through [`kp_repair`] first.
pub fn kp_eval<T: Scalar>(x: &BitString, inst: &KpInstance) -> Result<ObjectiveVector<T>> {
    if x.len() != inst.n() {
        return invalid(format!(
            "selection length {} != {} items",
            x.len(),
            inst.n()
        ));
    }
    let w = inst.weight(x);
    if w > inst.capacity {
        return Err(Error::ContractViolation(format!(
            "selection weight {w} exceeds capacity {}",
            inst.capacity
        )));
    }
    let (p1, p2) = inst.profits(x);
    Ok(ObjectiveVector::from_ints(p1, p2))
}

/// Drop selected items in increasing order of `max(p1, p2) / w` until the
/// selection fits. Feasible inputs are returned unchanged.
pub fn kp_repair(x: &BitString, inst: &KpInstance) -> BitString {
    let mut weight = inst.weight(x);
    if weight <= inst.capacity {
        return x.clone();
    }
    let mut selected: Vec<usize> = (0..x.len()).filter(|&i| x.get(i)).collect();
    let ratio_key = |i: usize| (inst.profits1[i].max(inst.profits2[i]), inst.weights[i]);
    selected.sort_by(|&a, &b| {
        let (pa, wa) = ratio_key(a);
        let (pb, wb) = ratio_key(b);
        // pa/wa vs pb/wb without division
        (pa * wb).cmp(&(pb * wa)).then(a.cmp(&b))
    });
    let mut out = x.clone();
    for i in selected {
        if weight <= inst.capacity {
            break;
        }
        out.set(i, false);
        weight -= inst.weights[i];
    }
    out
}

impl<T: Scalar> Problem<T> for KpInstance {
    type Genotype = BitString;

    fn name(&self) -> String {
        "KP".into()
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn random_genotype(&self, rng: &mut RngState) -> BitString {
        random_bitstring(self.n(), rng).expect("n >= 1")
    }

    fn repair(&self, genotype: BitString) -> BitString {
        kp_repair(&genotype, self)
    }

    fn evaluate(&self, genotype: &BitString) -> ObjectiveVector<T> {
        debug_assert!(
            self.weight(genotype) <= self.capacity,
            "unrepaired knapsack selection"
        );
        let (p1, p2) = self.profits(genotype);
        ObjectiveVector::from_ints(p1, p2)
    }
}

// ---------------------------------------------------------- NK-landscapes

/// One NK fitness landscape. Row `i` of `tables` is indexed by the bits
/// `(x_i, x_{neighbors[i][0]}, .., x_{neighbors[i][K-1]})` read most
/// significant first; entries are numerators over [`NK_SCALE`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NkLandscape {
    pub neighbors: Vec<Vec<usize>>,
    pub tables: Vec<Vec<u32>>,
}

impl NkLandscape {
    fn validate(&self, n: usize, k: usize) -> Result<()> {
        if self.neighbors.len() != n || self.tables.len() != n {
            return invalid("NK landscape must have n neighbour rows and n tables");
        }
        for (i, row) in self.neighbors.iter().enumerate() {
            if row.len() != k {
                return invalid(format!("neighbour row {i} must have {k} entries"));
            }
            let mut seen = row.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != k || row.iter().any(|&j| j == i || j >= n) {
                return invalid(format!(
                    "neighbour row {i} must hold distinct indices other than {i}"
                ));
            }
        }
        if self.tables.iter().any(|t| t.len() != 1 << (k + 1)) {
            return invalid(format!("NK tables must have 2^{} entries", k + 1));
        }
        if self.tables.iter().flatten().any(|&v| v as i64 > NK_SCALE) {
            return invalid("NK table values must lie in [0, 1]");
        }
        Ok(())
    }

    /// Sum of component numerators.
    fn raw_sum(&self, x: &BitString) -> i64 {
        (0..x.len())
            .map(|i| {
                let idx = self.neighbors[i]
                    .iter()
                    .fold(x.get(i) as usize, |acc, &j| acc << 1 | x.get(j) as usize);
                self.tables[i][idx] as i64
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NkInstance {
    pub k: usize,
    pub landscapes: [NkLandscape; 2],
}

impl NkInstance {
    pub fn new(k: usize, landscapes: [NkLandscape; 2]) -> Result<Self> {
        let n = landscapes[0].neighbors.len();
        if n <= k {
            return invalid(format!("NK needs n > K, got n={n}, K={k}"));
        }
        for l in &landscapes {
            l.validate(n, k)?;
        }
        Ok(Self { k, landscapes })
    }

    pub fn n(&self) -> usize {
        self.landscapes[0].neighbors.len()
    }

    fn values<T: Scalar>(&self, x: &BitString) -> ObjectiveVector<T> {
        let den = self.n() as i64 * NK_SCALE;
        ObjectiveVector::new(
            T::from_ratio(self.landscapes[0].raw_sum(x), den),
            T::from_ratio(self.landscapes[1].raw_sum(x), den),
        )
    }
}

pub fn generate_nk(n: usize, seed: u64) -> Result<NkInstance> {
    generate_nk_with_k(n, NK_K, seed)
}

pub fn generate_nk_with_k(n: usize, k: usize, seed: u64) -> Result<NkInstance> {
    if n <= k {
        return invalid(format!("NK needs n > K, got n={n}, K={k}"));
    }
    let mut rng = RngState::new(seed);
    let landscape = |rng: &mut RngState| {
        let neighbors = (0..n)
            .map(|i| {
                sample(rng, n - 1, k)
                    .into_iter()
                    .map(|j| if j >= i { j + 1 } else { j })
                    .collect()
            })
            .collect();
        let tables = (0..n)
            .map(|_| {
                (0..1usize << (k + 1))
                    .map(|_| rng.random_range(0..=NK_SCALE as u32))
                    .collect()
            })
            .collect();
        NkLandscape { neighbors, tables }
    };
    let first = landscape(&mut rng);
    let second = landscape(&mut rng);
    NkInstance::new(k, [first, second])
}

/// Mean component value of each landscape.
pub fn nk_eval<T: Scalar>(x: &BitString, inst: &NkInstance) -> Result<ObjectiveVector<T>> {
    if x.len() != inst.n() {
        return invalid(format!(
            "string length {} != {} variables",
            x.len(),
            inst.n()
        ));
    }
    Ok(inst.values(x))
}

impl<T: Scalar> Problem<T> for NkInstance {
    type Genotype = BitString;

    fn name(&self) -> String {
        "NK".into()
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn random_genotype(&self, rng: &mut RngState) -> BitString {
        random_bitstring(self.n(), rng).expect("n >= 1")
    }

    fn evaluate(&self, genotype: &BitString) -> ObjectiveVector<T> {
        self.values(genotype)
    }
}

// ------------------------------------------------------------------- TSP

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TspInstance {
    pub distances: [Vec<Vec<i64>>; 2],
}

fn check_square(m: &[Vec<i64>], n: usize, what: &str) -> Result<()> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return invalid(format!("{what} must be {n}x{n}"));
    }
    if m.iter().flatten().any(|&v| v < 0) {
        return invalid(format!("{what} entries must be nonnegative"));
    }
    if (0..n).any(|i| m[i][i] != 0) {
        return invalid(format!("{what} must have a zero diagonal"));
    }
    Ok(())
}

impl TspInstance {
    pub fn new(distances: [Vec<Vec<i64>>; 2]) -> Result<Self> {
        let n = distances[0].len();
        if n < 2 {
            return invalid("TSP needs at least two cities");
        }
        for (o, m) in distances.iter().enumerate() {
            check_square(m, n, &format!("distance matrix {}", o + 1))?;
            for (i, row) in m.iter().enumerate() {
                for (j, &d) in row.iter().enumerate().take(i) {
                    if d != m[j][i] {
                        return invalid(format!("distance matrix {} is not symmetric", o + 1));
                    }
                }
            }
        }
        Ok(Self { distances })
    }

    /// Two objectives from two coordinate sets; distances are rounded Euclidean.
    pub fn from_coordinates(coords: [&[(i64, i64)]; 2]) -> Result<Self> {
        let n = coords[0].len();
        if coords[1].len() != n {
            return invalid("coordinate sets must have equal length");
        }
        let matrix = |c: &[(i64, i64)]| -> Vec<Vec<i64>> {
            (0..n)
                .map(|i| (0..n).map(|j| rounded_euclidean(c[i], c[j])).collect())
                .collect()
        };
        Self::new([matrix(coords[0]), matrix(coords[1])])
    }

    pub fn n(&self) -> usize {
        self.distances[0].len()
    }

    fn lengths(&self, tour: &[usize]) -> (i64, i64) {
        let n = tour.len();
        let leg = |m: &Vec<Vec<i64>>| (0..n).map(|i| m[tour[i]][tour[(i + 1) % n]]).sum();
        (leg(&self.distances[0]), leg(&self.distances[1]))
    }
}

fn rounded_euclidean(a: (i64, i64), b: (i64, i64)) -> i64 {
    let dx = (a.0 - b.0) as f64;
    let dy = (a.1 - b.1) as f64;
    (dx * dx + dy * dy).sqrt().round() as i64
}

pub fn generate_tsp(n: usize, seed: u64) -> Result<TspInstance> {
    if n < 2 {
        return invalid("TSP needs at least two cities");
    }
    let mut rng = RngState::new(seed);
    let coords = |rng: &mut RngState| -> Vec<(i64, i64)> {
        (0..n)
            .map(|_| {
                (
                    rng.random_range(0..=TSP_GRID),
                    rng.random_range(0..=TSP_GRID),
                )
            })
            .collect()
    };
    let first = coords(&mut rng);
    let second = coords(&mut rng);
    TspInstance::from_coordinates([&first, &second])
}

/// Closed tour lengths under both distance matrices (minimized).
pub fn tsp_eval<T: Scalar>(tour: &Permutation, inst: &TspInstance) -> Result<ObjectiveVector<T>> {
    if tour.len() != inst.n() {
        return invalid(format!("tour length {} != {} cities", tour.len(), inst.n()));
    }
    let (a, b) = inst.lengths(tour.as_slice());
    Ok(ObjectiveVector::from_ints(a, b))
}

impl<T: Scalar> Problem<T> for TspInstance {
    type Genotype = Permutation;

    fn name(&self) -> String {
        "TSP".into()
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn random_genotype(&self, rng: &mut RngState) -> Permutation {
        random_permutation(self.n(), rng).expect("n >= 2")
    }

    fn evaluate(&self, genotype: &Permutation) -> ObjectiveVector<T> {
        let (a, b) = self.lengths(genotype.as_slice());
        ObjectiveVector::from_ints(-a, -b)
    }

    fn orientation(&self) -> Orientation {
        Orientation::Min
    }
}

// ------------------------------------------------------------------- QAP

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QapInstance {
    pub distance: Vec<Vec<i64>>,
    pub flows: [Vec<Vec<i64>>; 2],
}

impl QapInstance {
    pub fn new(distance: Vec<Vec<i64>>, flows: [Vec<Vec<i64>>; 2]) -> Result<Self> {
        let n = distance.len();
        if n < 2 {
            return invalid("QAP needs at least two facilities");
        }
        check_square(&distance, n, "distance matrix")?;
        check_square(&flows[0], n, "flow matrix 1")?;
        check_square(&flows[1], n, "flow matrix 2")?;
        Ok(Self { distance, flows })
    }

    pub fn n(&self) -> usize {
        self.distance.len()
    }

    fn costs(&self, p: &[usize]) -> (i64, i64) {
        let n = p.len();
        let mut c = (0i64, 0i64);
        for i in 0..n {
            let drow = &self.distance[p[i]];
            let (f1, f2) = (&self.flows[0][i], &self.flows[1][i]);
            for j in 0..n {
                let d = drow[p[j]];
                c.0 += f1[j] * d;
                c.1 += f2[j] * d;
            }
        }
        c
    }
}

pub fn generate_qap(n: usize, seed: u64) -> Result<QapInstance> {
    if n < 2 {
        return invalid("QAP needs at least two facilities");
    }
    let mut rng = RngState::new(seed);
    let matrix = |rng: &mut RngState| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 0 } else { rng.random_range(1..=100) })
                    .collect()
            })
            .collect()
    };
    let distance = matrix(&mut rng);
    let flow1 = matrix(&mut rng);
    let flow2 = matrix(&mut rng);
    QapInstance::new(distance, [flow1, flow2])
}

/// `sum_{i,j} flow[i][j] * dist[p(i)][p(j)]` for both flow matrices (minimized).
pub fn qap_eval<T: Scalar>(p: &Permutation, inst: &QapInstance) -> Result<ObjectiveVector<T>> {
    if p.len() != inst.n() {
        return invalid(format!(
            "assignment length {} != {} facilities",
            p.len(),
            inst.n()
        ));
    }
    let (a, b) = inst.costs(p.as_slice());
    Ok(ObjectiveVector::from_ints(a, b))
}

impl<T: Scalar> Problem<T> for QapInstance {
    type Genotype = Permutation;

    fn name(&self) -> String {
        "QAP".into()
    }

    fn size(&self) -> usize {
        self.n()
    }

    fn random_genotype(&self, rng: &mut RngState) -> Permutation {
        random_permutation(self.n(), rng).expect("n >= 2")
    }

    fn evaluate(&self, genotype: &Permutation) -> ObjectiveVector<T> {
        let (a, b) = self.costs(genotype.as_slice());
        ObjectiveVector::from_ints(-a, -b)
    }

    fn orientation(&self) -> Orientation {
        Orientation::Min
    }
}

// --------------------------------------------------------- serialization

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstancePayload {
    Kp(KpInstance),
    Nk(NkInstance),
    Tsp(TspInstance),
    Qap(QapInstance),
}

impl InstancePayload {
    pub fn kind(&self) -> InstanceKind {
        match self {
            InstancePayload::Kp(_) => InstanceKind::Kp,
            InstancePayload::Nk(_) => InstanceKind::Nk,
            InstancePayload::Tsp(_) => InstanceKind::Tsp,
            InstancePayload::Qap(_) => InstanceKind::Qap,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            InstancePayload::Kp(i) => i.n(),
            InstancePayload::Nk(i) => i.n(),
            InstancePayload::Tsp(i) => i.n(),
            InstancePayload::Qap(i) => i.n(),
        }
    }
}

/// JSON document `{kind, n, seed, payload}` describing one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub kind: InstanceKind,
    pub n: usize,
    pub seed: u64,
    pub payload: InstancePayload,
}

impl InstanceDocument {
    pub fn generate(kind: InstanceKind, n: usize, seed: u64) -> Result<Self> {
        let payload = match kind {
            InstanceKind::Kp => InstancePayload::Kp(generate_kp(n, seed)?),
            InstanceKind::Nk => InstancePayload::Nk(generate_nk(n, seed)?),
            InstanceKind::Tsp => InstancePayload::Tsp(generate_tsp(n, seed)?),
            InstanceKind::Qap => InstancePayload::Qap(generate_qap(n, seed)?),
        };
        Ok(Self {
            kind,
            n,
            seed,
            payload,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.payload.kind() != doc.kind {
            return invalid(format!(
                "document kind {} does not match its {} payload",
                doc.kind,
                doc.payload.kind()
            ));
        }
        if doc.payload.n() != doc.n {
            return invalid(format!(
                "document n={} but payload has {}",
                doc.n,
                doc.payload.n()
            ));
        }
        // re-run constructor validation on the decoded arrays
        match &doc.payload {
            InstancePayload::Kp(i) => {
                KpInstance::new(
                    i.profits1.clone(),
                    i.profits2.clone(),
                    i.weights.clone(),
                    i.capacity,
                )?;
            }
            InstancePayload::Nk(i) => {
                NkInstance::new(i.k, i.landscapes.clone())?;
            }
            InstancePayload::Tsp(i) => {
                TspInstance::new(i.distances.clone())?;
            }
            InstancePayload::Qap(i) => {
                QapInstance::new(i.distance.clone(), i.flows.clone())?;
            }
        }
        Ok(doc)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Exact, Objectives};

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn v(a: i64, b: i64) -> Objectives {
        Objectives::from_ints(a, b)
    }

    #[test]
    fn kp_generator_contract() {
        let inst = generate_kp(100, 9).unwrap();
        assert_eq!(inst, generate_kp(100, 9).unwrap());
        assert_ne!(inst, generate_kp(100, 10).unwrap());
        assert!(inst
            .profits1
            .iter()
            .chain(&inst.profits2)
            .chain(&inst.weights)
            .all(|v| (10..=100).contains(v)));
        let total: i64 = inst.weights.iter().sum();
        let ratio = inst.capacity as f64 / total as f64;
        assert!(ratio >= 0.5 && ratio < 0.5 + 1.0 / total as f64);
    }

    #[test]
    fn kp_eval_examples() {
        let inst = KpInstance::new(vec![1, 2, 3], vec![3, 2, 1], vec![1, 1, 1], 2).unwrap();
        assert_eq!(kp_eval::<Exact>(&bits("110"), &inst).unwrap(), v(3, 5));
        assert_eq!(kp_eval::<Exact>(&bits("000"), &inst).unwrap(), v(0, 0));
        assert!(matches!(
            kp_eval::<Exact>(&bits("111"), &inst),
            Err(Error::ContractViolation(_))
        ));
        let fixed = kp_repair(&bits("111"), &inst);
        assert!(inst.weight(&fixed) <= 2);
        assert!(kp_eval::<Exact>(&bits("11"), &inst).is_err());
    }

    #[test]
    fn kp_repair_rule() {
        let inst = KpInstance::new(vec![10, 1], vec![10, 1], vec![2, 2], 3).unwrap();
        assert_eq!(kp_repair(&bits("11"), &inst), bits("10"));
        assert_eq!(kp_repair(&bits("01"), &inst), bits("01"));
    }

    #[test]
    fn kp_repair_always_feasible() {
        let inst = generate_kp(50, 3).unwrap();
        let mut rng = RngState::new(1);
        for _ in 0..1000 {
            let x = random_bitstring(50, &mut rng).unwrap();
            let y = kp_repair(&x, &inst);
            assert!(inst.weight(&y) <= inst.capacity);
            // only removals
            assert!((0..50).all(|i| !y.get(i) || x.get(i)));
            if inst.weight(&x) <= inst.capacity {
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn nk_hand_lookup() {
        // n = 2, K = 1: row i indexed by (x_i, x_other)
        let land = |t0: Vec<u32>, t1: Vec<u32>| NkLandscape {
            neighbors: vec![vec![1], vec![0]],
            tables: vec![t0, t1],
        };
        let half = NK_SCALE as u32 / 2;
        let inst = NkInstance::new(
            1,
            [
                land(vec![0, 1 << 18, half, NK_SCALE as u32], vec![half, 0, 0, 0]),
                land(vec![1, 2, 3, 4], vec![5, 6, 7, 8]),
            ],
        )
        .unwrap();
        // x = 10: component 0 index (1,0) = 2 -> 1/2; component 1 index (0,1) = 1 -> 0
        let f = nk_eval::<Exact>(&bits("10"), &inst).unwrap();
        assert_eq!(f.f1(), Exact::from_ratio(1, 4));
        assert_eq!(f.f2(), Exact::from_ratio(3 + 6, 2 * NK_SCALE));
        // x = 11: (1/1 + 0) / 2
        assert_eq!(
            nk_eval::<Exact>(&bits("11"), &inst).unwrap().f1(),
            Exact::from_ratio(1, 2)
        );
    }

    #[test]
    fn nk_generator_contract() {
        let inst = generate_nk(30, 4).unwrap();
        assert_eq!(inst.k, 4);
        assert_eq!(inst, generate_nk(30, 4).unwrap());
        for l in &inst.landscapes {
            l.validate(30, 4).unwrap();
        }
        let mut rng = RngState::new(2);
        let x = random_bitstring(30, &mut rng).unwrap();
        let f = nk_eval::<Exact>(&x, &inst).unwrap();
        for c in f.0 {
            assert!(c >= Exact::from_int(0) && c <= Exact::from_int(1));
        }
    }

    #[test]
    fn tsp_three_cities() {
        let c = [(0, 0), (0, 1), (1, 0)];
        let inst = TspInstance::from_coordinates([&c, &c]).unwrap();
        let tour = Permutation::identity(3).unwrap();
        // 1 + round(sqrt 2) + 1
        assert_eq!(tsp_eval::<Exact>(&tour, &inst).unwrap(), v(3, 3));
        assert_eq!(
            <TspInstance as Problem<Exact>>::evaluate(&inst, &tour),
            v(-3, -3)
        );
        assert!(tsp_eval::<Exact>(&Permutation::identity(2).unwrap(), &inst).is_err());
    }

    #[test]
    fn tsp_reversal_invariance() {
        let inst = generate_tsp(20, 5).unwrap();
        let mut rng = RngState::new(6);
        for _ in 0..100 {
            let t = random_permutation(20, &mut rng).unwrap();
            let mut r = t.as_slice().to_vec();
            r.reverse();
            let r = Permutation::new(r).unwrap();
            assert_eq!(
                tsp_eval::<Exact>(&t, &inst).unwrap(),
                tsp_eval::<Exact>(&r, &inst).unwrap()
            );
        }
        assert!(inst.distances.iter().flatten().flatten().all(|&d| d >= 0));
    }

    #[test]
    fn qap_two_facilities() {
        let d = vec![vec![0, 1], vec![1, 0]];
        let f1 = vec![vec![0, 2], vec![2, 0]];
        let f2 = vec![vec![0, 3], vec![1, 0]];
        let inst = QapInstance::new(d, [f1, f2]).unwrap();
        let id = Permutation::identity(2).unwrap();
        assert_eq!(qap_eval::<Exact>(&id, &inst).unwrap(), v(4, 4));
        assert!(QapInstance::new(vec![vec![1]], [vec![vec![0]], vec![vec![0]]]).is_err());
    }

    #[test]
    fn qap_generator_contract() {
        let inst = generate_qap(12, 8).unwrap();
        assert_eq!(inst, generate_qap(12, 8).unwrap());
        for m in std::iter::once(&inst.distance).chain(&inst.flows) {
            for (i, row) in m.iter().enumerate() {
                for (j, &d) in row.iter().enumerate() {
                    if i == j {
                        assert_eq!(d, 0);
                    } else {
                        assert!((1..=100).contains(&d));
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        for kind in [
            InstanceKind::Kp,
            InstanceKind::Nk,
            InstanceKind::Tsp,
            InstanceKind::Qap,
        ] {
            let doc = InstanceDocument::generate(kind, 12, 77).unwrap();
            let text = doc.to_json().unwrap();
            let back = InstanceDocument::from_json(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_json().unwrap(), text);
        }
    }

    #[test]
    fn json_rejects_mismatched_kind() {
        let doc = InstanceDocument::generate(InstanceKind::Kp, 5, 1).unwrap();
        let text = doc.to_json().unwrap().replacen("\"kp\"", "\"qap\"", 1);
        assert!(InstanceDocument::from_json(&text).is_err());
    }
}
