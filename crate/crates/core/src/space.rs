//! Finite filtered probability spaces.
//!
//! A [`ScenarioSpace`] is a finite set of atoms with strictly positive
//! probabilities. A [`Filtration`] is a list of partitions of the atom
//! indices, one per time `0..=T`, where time 0 is the trivial partition,
//! each partition refines the previous one and the last one separates atoms.
//! Conditioning on the information at time `t` then means restricting to a
//! cell of partition `t` and renormalizing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;

/// Inputs whose probabilities sum to within this of one are renormalized.
pub const RENORMALIZE_WINDOW: f64 = 1e-9;

/// Sums this close to one are rounding noise and are left untouched, so
/// already normalized inputs round-trip bit for bit.
pub(crate) fn is_rounding_of_one(total: f64, terms: usize) -> bool {
    (total - 1.0).abs() <= 4.0 * terms.max(2) as f64 * f64::EPSILON
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpace {
    probabilities: Vec<f64>,
}

impl ScenarioSpace {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::structure("scenario space needs at least one atom"));
        }
        for (i, &p) in probabilities.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::structure(format!(
                    "atom {i} has probability {p}; probabilities must be finite and strictly positive"
                )));
            }
        }
        let mut ordered = probabilities.clone();
        ordered.sort_by(f64::total_cmp);
        let total: f64 = ordered.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_WINDOW {
            return Err(Error::structure(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        if is_rounding_of_one(total, probabilities.len()) {
            return Ok(Self { probabilities });
        }
        let probabilities = probabilities.into_iter().map(|p| p / total).collect();
        Ok(Self { probabilities })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probability(&self, atom: usize) -> f64 {
        self.probabilities[atom]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// One partition of the atom indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn new(n_atoms: usize, cells: Vec<Vec<usize>>) -> std::result::Result<Self, String> {
        let mut cell_of = vec![usize::MAX; n_atoms];
        let mut sorted = Vec::with_capacity(cells.len());
        for (c, mut cell) in cells.into_iter().enumerate() {
            if cell.is_empty() {
                return Err(format!("cell {c} is empty"));
            }
            cell.sort_unstable();
            for &a in &cell {
                if a >= n_atoms {
                    return Err(format!(
                        "cell {c} names atom {a}, but there are only {n_atoms} atoms"
                    ));
                }
                if cell_of[a] != usize::MAX {
                    return Err(format!("atom {a} appears in cells {} and {c}", cell_of[a]));
                }
                cell_of[a] = c;
            }
            sorted.push(cell);
        }
        if let Some(a) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(format!("atom {a} is not covered by any cell"));
        }
        Ok(Self {
            cells: sorted,
            cell_of,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, atom: usize) -> usize {
        self.cell_of[atom]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    partitions: Vec<Partition>,
}

impl Filtration {
    /// Builds a filtration from raw partitions (`partitions[t][cell]` lists atom
    /// indices). Every structural invariant is checked.
    pub fn new(n_atoms: usize, partitions: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let report = check_filtration(n_atoms, &partitions);
        if let Some(v) = report.into_iter().next() {
            return Err(Error::structure(v.to_string()));
        }
        let partitions = partitions
            .into_iter()
            .map(|cells| Partition::new(n_atoms, cells).map_err(Error::structure))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { partitions })
    }

    /// Horizon `T`: the index of the last partition.
    pub fn horizon(&self) -> usize {
        self.partitions.len() - 1
    }

    pub fn partition(&self, t: usize) -> Result<&Partition> {
        self.partitions.get(t).ok_or_else(|| {
            Error::domain(format!("time {t} is beyond the horizon {}", self.horizon()))
        })
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn to_raw(&self) -> Vec<Vec<Vec<usize>>> {
        self.partitions.iter().map(|p| p.cells.clone()).collect()
    }
}

/// A scenario space together with its filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSpace {
    space: ScenarioSpace,
    filtration: Filtration,
}

impl FilteredSpace {
    pub fn new(space: ScenarioSpace, filtration: Filtration) -> Result<Self> {
        let n = space.len();
        for p in filtration.partitions() {
            if p.cell_of.len() != n {
                return Err(Error::Dimension {
                    what: "filtration".into(),
                    got: p.cell_of.len(),
                    expected: n,
                });
            }
        }
        Ok(Self { space, filtration })
    }

    /// Convenience constructor from raw probabilities and partitions.
    pub fn from_raw(probabilities: Vec<f64>, partitions: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let space = ScenarioSpace::new(probabilities)?;
        let filtration = Filtration::new(space.len(), partitions)?;
        Self::new(space, filtration)
    }

    pub fn space(&self) -> &ScenarioSpace {
        &self.space
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn n_atoms(&self) -> usize {
        self.space.len()
    }

    pub fn horizon(&self) -> usize {
        self.filtration.horizon()
    }

    pub fn n_cells(&self, t: usize) -> Result<usize> {
        Ok(self.filtration.partition(t)?.len())
    }

    pub fn cell(&self, t: usize, cell: usize) -> Result<&[usize]> {
        let p = self.filtration.partition(t)?;
        if cell >= p.len() {
            return Err(Error::domain(format!(
                "cell {cell} does not exist at time {t} ({} cells)",
                p.len()
            )));
        }
        Ok(p.cell(cell))
    }

    pub fn cell_probability(&self, t: usize, cell: usize) -> Result<f64> {
        Ok(self
            .cell(t, cell)?
            .iter()
            .map(|&a| self.space.probability(a))
            .sum())
    }

    /// Cells at time `s >= t` contained in `cell` of time `t`, ascending.
    pub fn cells_within(&self, t: usize, cell: usize, s: usize) -> Result<Vec<usize>> {
        if s < t {
            return Err(Error::domain(format!("need s >= t, got t={t}, s={s}")));
        }
        let atoms = self.cell(t, cell)?;
        let ps = self.filtration.partition(s)?;
        let mut out: Vec<usize> = atoms.iter().map(|&a| ps.cell_of(a)).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn check_payoff(&self, x: &RandomVariable) -> Result<()> {
        if x.len() != self.n_atoms() {
            return Err(Error::Dimension {
                what: "random variable".into(),
                got: x.len(),
                expected: self.n_atoms(),
            });
        }
        Ok(())
    }

    /// Regular conditional distribution of `x` on one cell of time `t`.
    ///
    /// Equal values are merged by exact equality.
    pub fn conditional_distribution(
        &self,
        x: &RandomVariable,
        t: usize,
        cell: usize,
    ) -> Result<DiscreteDistribution> {
        self.check_payoff(x)?;
        let atoms = self.cell(t, cell)?;
        let pairs: Vec<(f64, f64)> = atoms
            .iter()
            .map(|&a| (x.values[a], self.space.probability(a)))
            .collect();
        Ok(DiscreteDistribution::from_weighted(pairs))
    }

    /// Conditional distributions for every cell of time `t`, in cell order.
    pub fn conditional_distributions(
        &self,
        x: &RandomVariable,
        t: usize,
    ) -> Result<Vec<DiscreteDistribution>> {
        let n = self.n_cells(t)?;
        self.check_payoff(x)?;
        exec::try_map_cells(n, |c| self.conditional_distribution(x, t, c))
    }

    /// `E[X | F_t]` as the probability-weighted mean of each cell.
    pub fn conditional_expectation(&self, x: &RandomVariable, t: usize) -> Result<AdaptedValue> {
        self.check_payoff(x)?;
        let p = self.filtration.partition(t)?;
        let values = p
            .cells()
            .iter()
            .map(|cell| {
                let (num, den) = cell.iter().fold((0.0, 0.0), |(num, den), &a| {
                    let pa = self.space.probability(a);
                    (num + x.values[a] * pa, den + pa)
                });
                num / den
            })
            .collect();
        Ok(AdaptedValue { time: t, values })
    }

    /// Lifts a per-cell value back to a per-atom random variable.
    pub fn lift(&self, v: &AdaptedValue) -> Result<RandomVariable> {
        let p = self.filtration.partition(v.time)?;
        if v.values.len() != p.len() {
            return Err(Error::Dimension {
                what: format!("adapted value at time {}", v.time),
                got: v.values.len(),
                expected: p.len(),
            });
        }
        Ok(RandomVariable {
            values: (0..self.n_atoms())
                .map(|a| v.values[p.cell_of(a)])
                .collect(),
        })
    }

    /// True iff `x` takes a single value on every cell of time `t`.
    pub fn is_measurable(&self, x: &RandomVariable, t: usize) -> Result<bool> {
        self.check_payoff(x)?;
        let p = self.filtration.partition(t)?;
        Ok(p.cells().iter().all(|cell| {
            let v0 = x.values[cell[0]];
            cell.iter().all(|&a| x.values[a] == v0)
        }))
    }
}

/// Terminal payoff: one finite value per atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RandomVariable {
    values: Vec<f64>,
}

impl RandomVariable {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::structure(format!(
                "random variable value at atom {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination; panics if the lengths differ.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "random variables on different spaces"
        );
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }
}

/// Value of an adapted quantity at time `t`, one entry per cell of partition `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptedValue {
    pub time: usize,
    pub values: Vec<f64>,
}

impl AdaptedValue {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Finite law: strictly ascending support with positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    support: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::structure(
                "support and weights must be non-empty and of equal length",
            ));
        }
        if support.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::structure("support must be strictly ascending"));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::structure("weights must be strictly positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_WINDOW {
            return Err(Error::structure(format!("weights sum to {total}, not 1")));
        }
        Ok(Self {
            support,
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    /// Builds the law of `(value, mass)` pairs: sorts, merges equal values
    /// and normalizes the total mass to one. The result depends only on the
    /// multiset of pairs, not on their order.
    pub fn from_weighted(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        let mut support: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
        for (v, p) in pairs {
            match support.last() {
                Some(&last) if last == v => *weights.last_mut().unwrap() += p,
                _ => {
                    support.push(v);
                    weights.push(p);
                }
            }
        }
        for w in &mut weights {
            *w /= total;
        }
        Self { support, weights }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.support.len() == 1
    }

    /// `F_i = P(X <= x_i)`; the last entry is exactly 1.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let n = self.weights.len();
        let mut out: Vec<f64> = self
            .weights
            .iter()
            .map(|w| {
                acc += w;
                acc.min(1.0)
            })
            .collect();
        out[n - 1] = 1.0;
        out
    }

    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w)
            .sum()
    }

    pub fn min(&self) -> f64 {
        self.support[0]
    }

    pub fn max(&self) -> f64 {
        self.support[self.support.len() - 1]
    }
}

/// One structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoAtoms,
    NonPositiveProbability {
        atom: usize,
        probability: f64,
    },
    Normalization {
        sum: f64,
    },
    NoPartitions,
    NotAPartition {
        time: usize,
        detail: String,
    },
    InitialNotTrivial {
        cells: usize,
    },
    Refinement {
        time: usize,
        cell: usize,
        /// Cells of time `time - 1` that the offending cell intersects.
        parent_cells: Vec<usize>,
    },
    TerminalNotSeparating {
        time: usize,
        cell: usize,
    },
    PayoffLength {
        name: String,
        len: usize,
        expected: usize,
    },
    PayoffNotFinite {
        name: String,
        atom: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAtoms => write!(f, "no atoms"),
            Violation::NonPositiveProbability { atom, probability } => {
                write!(f, "atom {atom} has non-positive probability {probability}")
            }
            Violation::Normalization { sum } => write!(f, "probabilities sum to {sum}, not 1"),
            Violation::NoPartitions => write!(f, "filtration has no partitions"),
            Violation::NotAPartition { time, detail } => {
                write!(f, "time {time} is not a partition: {detail}")
            }
            Violation::InitialNotTrivial { cells } => {
                write!(f, "time 0 must be the trivial partition, found {cells} cells")
            }
            Violation::Refinement {
                time,
                cell,
                parent_cells,
            } => write!(
                f,
                "cell {cell} at time {time} does not refine time {}: it meets cells {parent_cells:?}",
                time - 1
            ),
            Violation::TerminalNotSeparating { time, cell } => {
                write!(f, "terminal partition (time {time}) does not separate atoms in cell {cell}")
            }
            Violation::PayoffLength {
                name,
                len,
                expected,
            } => write!(f, "payoff {name} has {len} values for {expected} atoms"),
            Violation::PayoffNotFinite { name, atom } => {
                write!(f, "payoff {name} is not finite at atom {atom}")
            }
        }
    }
}

fn check_filtration(n_atoms: usize, partitions: &[Vec<Vec<usize>>]) -> Vec<Violation> {
    let mut out = Vec::new();
    if partitions.is_empty() {
        out.push(Violation::NoPartitions);
        return out;
    }
    let mut parsed: Vec<Option<Partition>> = Vec::with_capacity(partitions.len());
    for (t, cells) in partitions.iter().enumerate() {
        match Partition::new(n_atoms, cells.clone()) {
            Ok(p) => parsed.push(Some(p)),
            Err(detail) => {
                out.push(Violation::NotAPartition { time: t, detail });
                parsed.push(None);
            }
        }
    }
    if let Some(Some(p0)) = parsed.first() {
        if p0.len() != 1 {
            out.push(Violation::InitialNotTrivial { cells: p0.len() });
        }
    }
    for t in 1..parsed.len() {
        if let (Some(prev), Some(cur)) = (&parsed[t - 1], &parsed[t]) {
            for (c, cell) in cur.cells().iter().enumerate() {
                let mut parents: Vec<usize> = cell.iter().map(|&a| prev.cell_of(a)).collect();
                parents.sort_unstable();
                parents.dedup();
                if parents.len() > 1 {
                    out.push(Violation::Refinement {
                        time: t,
                        cell: c,
                        parent_cells: parents,
                    });
                }
            }
        }
    }
    let last = parsed.len() - 1;
    if let Some(Some(pt)) = parsed.last() {
        for (c, cell) in pt.cells().iter().enumerate() {
            if cell.len() > 1 {
                out.push(Violation::TerminalNotSeparating {
                    time: last,
                    cell: c,
                });
            }
        }
    }
    out
}

/// Every structural problem of a raw scenario tree; empty iff it is valid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks raw inputs without failing: probabilities, partitions and named payoffs.
pub fn validate(
    probabilities: &[f64],
    partitions: &[Vec<Vec<usize>>],
    payoffs: &[(&str, &[f64])],
) -> ValidationReport {
    let mut violations = Vec::new();
    let n = probabilities.len();
    if n == 0 {
        violations.push(Violation::NoAtoms);
    }
    for (atom, &probability) in probabilities.iter().enumerate() {
        if !(probability > 0.0) || !probability.is_finite() {
            violations.push(Violation::NonPositiveProbability { atom, probability });
        }
    }
    let sum: f64 = probabilities.iter().sum();
    if n > 0 && !((sum - 1.0).abs() <= RENORMALIZE_WINDOW) {
        violations.push(Violation::Normalization { sum });
    }
    violations.extend(check_filtration(n, partitions));
    for (name, values) in payoffs {
        if values.len() != n {
            violations.push(Violation::PayoffLength {
                name: name.to_string(),
                len: values.len(),
                expected: n,
            });
        }
        if let Some(atom) = values.iter().position(|v| !v.is_finite()) {
            violations.push(Violation::PayoffNotFinite {
                name: name.to_string(),
                atom,
            });
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial() -> FilteredSpace {
        FilteredSpace::from_raw(
            vec![0.25; 4],
            vec![
                vec![vec![0, 1, 2, 3]],
                vec![vec![0, 1], vec![2, 3]],
                vec![vec![0], vec![1], vec![2], vec![3]],
            ],
        )
        .unwrap()
    }

    fn rv(v: &[f64]) -> RandomVariable {
        RandomVariable::new(v.to_vec()).unwrap()
    }

    #[test]
    fn binomial_up_cell_distribution() {
        let fs = binomial();
        let d = fs
            .conditional_distribution(&rv(&[2.0, 0.0, 0.0, -2.0]), 1, 0)
            .unwrap();
        assert_eq!(d.support(), &[0.0, 2.0]);
        assert_eq!(d.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn constant_is_degenerate() {
        let fs = binomial();
        for c in 0..2 {
            let d = fs
                .conditional_distribution(&RandomVariable::constant(4, 3.5), 1, c)
                .unwrap();
            assert_eq!(d.support(), &[3.5]);
            assert_eq!(d.weights(), &[1.0]);
        }
    }

    #[test]
    fn ties_merge_by_summing_weights() {
        // brute force: P(X=1) = 0.2 + 0.3, P(X=3) = 0.5
        let fs = FilteredSpace::from_raw(
            vec![0.2, 0.3, 0.5],
            vec![vec![vec![0, 1, 2]], vec![vec![0], vec![1], vec![2]]],
        )
        .unwrap();
        let x = rv(&[1.0, 1.0, 3.0]);
        let d = fs.conditional_distribution(&x, 0, 0).unwrap();
        assert_eq!(d.support(), &[1.0, 3.0]);
        assert!((d.weights()[0] - 0.5).abs() < 1e-15);
        assert!((d.weights()[1] - 0.5).abs() < 1e-15);
        let e = fs.conditional_expectation(&x, 0).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_cell_is_domain_error() {
        let fs = binomial();
        let x = rv(&[2.0, 0.0, 0.0, -2.0]);
        assert!(matches!(
            fs.conditional_distribution(&x, 1, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            fs.conditional_distribution(&x, 3, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn binomial_expectations() {
        let fs = binomial();
        let x = rv(&[2.0, 0.0, 0.0, -2.0]);
        assert_eq!(fs.conditional_expectation(&x, 0).unwrap().values, vec![0.0]);
        assert_eq!(
            fs.conditional_expectation(&x, 1).unwrap().values,
            vec![1.0, -1.0]
        );
    }

    #[test]
    fn renormalizes_inside_window_only() {
        let s = ScenarioSpace::new(vec![0.5, 0.5 + 5e-10]).unwrap();
        assert!((s.probabilities().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(ScenarioSpace::new(vec![0.5, 0.4]).is_err());
        assert!(ScenarioSpace::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn valid_two_level_tree_has_empty_report() {
        let r = validate(
            &[0.5, 0.5],
            &[vec![vec![0, 1]], vec![vec![0], vec![1]]],
            &[],
        );
        assert!(r.is_valid(), "{r:?}");
    }

    #[test]
    fn refinement_defect_names_both_cells() {
        let parts = vec![
            vec![vec![0, 1, 2, 3]],
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0], vec![1, 2], vec![3]],
            vec![vec![0], vec![1], vec![2], vec![3]],
        ];
        let r = validate(&[0.25; 4], &parts, &[]);
        assert_eq!(
            r.violations,
            vec![
                Violation::Refinement {
                    time: 2,
                    cell: 1,
                    parent_cells: vec![0, 1]
                },
                // the next level is a refinement of time 2, not of time 1, and that is fine
            ]
        );
        assert!(Filtration::new(4, parts).is_err());
    }

    #[test]
    fn normalization_defect() {
        let r = validate(
            &[0.45, 0.45],
            &[vec![vec![0, 1]], vec![vec![0], vec![1]]],
            &[],
        );
        assert_eq!(r.violations.len(), 1);
        assert!(matches!(r.violations[0], Violation::Normalization { .. }));
    }

    #[test]
    fn payoff_and_partition_defects_are_all_listed() {
        let r = validate(
            &[0.5, 0.5],
            &[vec![vec![0], vec![1]], vec![vec![0, 1]]],
            &[("X", &[1.0]), ("Y", &[1.0, f64::NAN])],
        );
        let kinds: Vec<_> = r.violations.iter().map(|v| v.to_string()).collect();
        assert_eq!(r.violations.len(), 5, "{kinds:?}");
    }

    #[test]
    fn lift_and_cells_within() {
        let fs = binomial();
        let v = AdaptedValue {
            time: 1,
            values: vec![7.0, -1.0],
        };
        assert_eq!(fs.lift(&v).unwrap().values(), &[7.0, 7.0, -1.0, -1.0]);
        assert_eq!(fs.cells_within(1, 1, 2).unwrap(), vec![2, 3]);
        assert_eq!(fs.cells_within(0, 0, 1).unwrap(), vec![0, 1]);
    }
}
