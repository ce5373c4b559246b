//! Dynamic coherent acceptability indices.
//!
//! For an increasing, right-continuous family `x -> psi_x` the index of `X`
//! on a cell is `sup { x >= 0 : rho^{psi_x}(X) <= 0 }` with `sup {} = 0`.
//! Since `x -> rho^{psi_x}(X)` is non-decreasing, the acceptance set is an
//! interval starting at 0 and the index is found by bisection.

use serde::{Deserialize, Serialize};

use crate::distortion::{check_family_monotone, DistortionFamily};
use crate::error::{Error, Result};
use crate::exec;
use crate::numeric::bisect_bracket;
use crate::risk::choquet_dist;
use crate::space::{DiscreteDistribution, FilteredSpace, RandomVariable};

/// An index value in `[0, +inf]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum AcceptabilityIndex {
    Finite(f64),
    Infinite,
}

impl AcceptabilityIndex {
    pub fn is_infinite(self) -> bool {
        matches!(self, AcceptabilityIndex::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            AcceptabilityIndex::Finite(v) => Some(v),
            AcceptabilityIndex::Infinite => None,
        }
    }

    /// `self <= other + tol`, with `+inf` above every finite value.
    pub fn le_within(self, other: Self, tol: f64) -> bool {
        match (self, other) {
            (_, AcceptabilityIndex::Infinite) => true,
            (AcceptabilityIndex::Infinite, AcceptabilityIndex::Finite(_)) => false,
            (AcceptabilityIndex::Finite(a), AcceptabilityIndex::Finite(b)) => a <= b + tol,
        }
    }

    pub fn eq_within(self, other: Self, tol: f64) -> bool {
        self.le_within(other, tol) && other.le_within(self, tol)
    }
}

impl std::fmt::Display for AcceptabilityIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AcceptabilityIndex::Finite(v) => write!(f, "{v}"),
            AcceptabilityIndex::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptabilityResult {
    pub time: usize,
    pub values: Vec<AcceptabilityIndex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcaiConfig {
    /// Smallest probed index; rejection there gives index 0.
    pub x_min: f64,
    /// Bracket cap; acceptance there gives `+inf`.
    pub x_max: f64,
    /// Final bracket width.
    pub tol: f64,
    /// Geometric growth of the bracket.
    pub growth: f64,
    pub probe_xs: Vec<f64>,
    pub probe_ys: Vec<f64>,
}

impl Default for DcaiConfig {
    fn default() -> Self {
        Self {
            x_min: 1e-9,
            x_max: 1e6,
            tol: 1e-9,
            growth: 4.0,
            probe_xs: vec![0.0, 0.05, 0.25, 0.5, 1.0, 2.0, 3.5, 7.0, 20.0, 100.0],
            probe_ys: (1..20).map(|i| i as f64 / 20.0).collect(),
        }
    }
}

fn ensure_family(family: &DistortionFamily, config: &DcaiConfig) -> Result<()> {
    if !family.flagged_increasing() || !family.flagged_right_continuous() {
        return Err(Error::domain(format!(
            "family `{}` is not declared increasing and right-continuous",
            family.name()
        )));
    }
    let report = check_family_monotone(family, &config.probe_xs, &config.probe_ys);
    if let Some((x1, x2, y)) = report.monotone_witness {
        return Err(Error::domain(format!(
            "family `{}` is not increasing: psi_{x1}({y}) > psi_{x2}({y})",
            family.name()
        )));
    }
    if let Some((x, y)) = report.right_continuity_witness {
        return Err(Error::domain(format!(
            "family `{}` is not right-continuous at x = {x} (probed at y = {y})",
            family.name()
        )));
    }
    Ok(())
}

/// Index of a single law.
pub fn dcai_dist(
    d: &DiscreteDistribution,
    family: &DistortionFamily,
    config: &DcaiConfig,
) -> Result<AcceptabilityIndex> {
    let rho = |x: f64| choquet_dist(d, &family.at(x));
    if rho(config.x_min) > 0.0 {
        return Ok(AcceptabilityIndex::Finite(0.0));
    }
    let mut lo = config.x_min;
    let hi = loop {
        if lo >= config.x_max {
            return Ok(AcceptabilityIndex::Infinite);
        }
        let next = (lo * config.growth).max(1.0).min(config.x_max);
        if rho(next) > 0.0 {
            break next;
        }
        lo = next;
    };
    let (accepted, _) = bisect_bracket(rho, lo, hi, config.tol)?;
    Ok(AcceptabilityIndex::Finite(accepted))
}

/// `alpha_t^Psi(X)` on every cell of time `t`.
pub fn dcai(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    family: &DistortionFamily,
    config: &DcaiConfig,
) -> Result<AcceptabilityResult> {
    if !(config.x_min > 0.0
        && config.x_min < config.x_max
        && config.tol > 0.0
        && config.growth > 1.0)
    {
        return Err(Error::domain("invalid acceptability configuration"));
    }
    ensure_family(family, config)?;
    let dists = fs.conditional_distributions(x, t)?;
    let values = exec::try_map_cells(dists.len(), |c| dcai_dist(&dists[c], family, config))?;
    Ok(AcceptabilityResult { time: t, values })
}

/// Outcome of one axiom on one fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub tolerance: f64,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

pub const AXIOM_TOL: f64 = 1e-6;

fn first_mismatch(
    a: &AcceptabilityResult,
    b: &AcceptabilityResult,
    ok: impl Fn(AcceptabilityIndex, AcceptabilityIndex) -> bool,
) -> Option<usize> {
    a.values
        .iter()
        .zip(&b.values)
        .position(|(&u, &v)| !ok(u, v))
}

fn outcome(
    axiom: &str,
    mismatch: Option<usize>,
    a: &AcceptabilityResult,
    b: &AcceptabilityResult,
) -> AxiomOutcome {
    AxiomOutcome {
        axiom: axiom.to_string(),
        passed: mismatch.is_none(),
        detail: match mismatch {
            None => String::new(),
            Some(c) => format!("cell {c}: {} vs {}", a.values[c], b.values[c]),
        },
    }
}

/// Checks monotonicity, scale invariance, locality and quasi-concavity of
/// the index on a fixture with payoffs `x` and `y`.
///
/// Monotonicity compares `x` with `max(x, y)`. Scale invariance uses the
/// constants 7 and 0.5 and a scale that varies across the cells at `t`.
/// Locality restricts `x` to each cell in turn. Quasi-concavity samples
/// `lambda` in `{0.1, ..., 0.9}`.
pub fn dcai_axiom_check(
    fs: &FilteredSpace,
    x: &RandomVariable,
    y: &RandomVariable,
    t: usize,
    family: &DistortionFamily,
    config: &DcaiConfig,
) -> Result<AxiomReport> {
    let tol = AXIOM_TOL;
    let ax = dcai(fs, x, t, family, config)?;
    let ay = dcai(fs, y, t, family, config)?;
    let mut outcomes = Vec::new();

    let upper = x.zip_with(y, f64::max);
    let au = dcai(fs, &upper, t, family, config)?;
    outcomes.push(outcome(
        "monotonicity",
        first_mismatch(&ax, &au, |u, v| u.le_within(v, tol)),
        &ax,
        &au,
    ));

    let partition = fs.filtration().partition(t)?;
    let varying: Vec<f64> = (0..fs.n_atoms())
        .map(|a| 0.5 + partition.cell_of(a) as f64 * 1.5)
        .collect();
    for (label, scale) in [
        ("scale invariance (7)", vec![7.0; fs.n_atoms()]),
        ("scale invariance (0.5)", vec![0.5; fs.n_atoms()]),
        ("scale invariance (cell-varying)", varying),
    ] {
        let scaled =
            RandomVariable::new(x.values().iter().zip(&scale).map(|(v, b)| v * b).collect())?;
        let a = dcai(fs, &scaled, t, family, config)?;
        outcomes.push(outcome(
            label,
            first_mismatch(&ax, &a, |u, v| u.eq_within(v, tol)),
            &ax,
            &a,
        ));
    }

    let mut locality = None;
    for c in 0..partition.len() {
        let restricted = RandomVariable::new(
            (0..fs.n_atoms())
                .map(|a| {
                    if partition.cell_of(a) == c {
                        x.values()[a]
                    } else {
                        0.0
                    }
                })
                .collect(),
        )?;
        let a = dcai(fs, &restricted, t, family, config)?;
        if !a.values[c].eq_within(ax.values[c], tol) {
            locality = Some(format!("cell {c}: {} vs {}", a.values[c], ax.values[c]));
            break;
        }
    }
    outcomes.push(AxiomOutcome {
        axiom: "locality".into(),
        passed: locality.is_none(),
        detail: locality.unwrap_or_default(),
    });

    let mut quasi = None;
    for i in 1..10 {
        let lambda = i as f64 / 10.0;
        let mix = x.zip_with(y, |u, v| lambda * u + (1.0 - lambda) * v);
        let am = dcai(fs, &mix, t, family, config)?;
        for c in 0..am.values.len() {
            let floor = if ax.values[c].le_within(ay.values[c], 0.0) {
                ax.values[c]
            } else {
                ay.values[c]
            };
            if !floor.le_within(am.values[c], tol) {
                quasi = Some(format!(
                    "lambda {lambda}, cell {c}: {} below {}",
                    am.values[c], floor
                ));
                break;
            }
        }
        if quasi.is_some() {
            break;
        }
    }
    outcomes.push(AxiomOutcome {
        axiom: "quasi-concavity".into(),
        passed: quasi.is_none(),
        detail: quasi.unwrap_or_default(),
    });

    Ok(AxiomReport {
        tolerance: tol,
        outcomes,
    })
}
