//! Distortion functions and their weighting measures.
//!
//! A distortion is a non-decreasing map `psi: [0,1] -> [0,1]` with
//! `psi(0) = 0` and `psi(1) = 1`; it is regular when it is also concave and
//! continuous. Concave distortions correspond one-to-one to probability
//! measures `mu` on `(0,1]` through
//!
//! ```text
//! psi_mu(y) = int_0^y int_(z,1] (1/s) mu(ds) dz
//! ```
//!
//! and back through `F_mu(y) = psi(y) - y psi'_+(y)` on `(0,1)`.
//! Finitely supported `mu` give piecewise-linear distortions with knots at the
//! support points; the closed-form families (MINVAR, MAXVAR, ...) give
//! measures that are returned as an evaluable CDF.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default spacing of the grids used by the regularity checks.
pub const DEFAULT_GRID_STEP: f64 = 1e-4;

/// Slack on the concavity midpoint test and slope comparisons.
pub const CONCAVITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Distortion {
    Identity,
    /// `y^gamma`, `gamma` in `(0, 1]`.
    PropHazard {
        gamma: f64,
    },
    /// `1 - (1-y)^(x+1)`.
    MinVar {
        x: f64,
    },
    /// `y^(1/(x+1))`.
    MaxVar {
        x: f64,
    },
    /// `(1 - (1-y)^(x+1))^(1/(x+1))`.
    MaxMinVar {
        x: f64,
    },
    /// `1 - (1 - y^(1/(x+1)))^(x+1)`.
    MinMaxVar {
        x: f64,
    },
    PiecewiseLinear(PiecewiseLinear),
}

/// Linear interpolation between knots `(x_k, y_k)` with `x_0 = 0`, `x_last = 1`.
///
/// Repeated abscissae encode a jump; such distortions are never regular and
/// only exist to exercise the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// `slopes[k]` is the slope on `(xs[k], xs[k+1])`; 0 across a jump.
    slopes: Vec<f64>,
    measure: Option<DistortionMeasure>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain(
                "a piecewise-linear distortion needs at least two knots",
            ));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = knots.into_iter().unzip();
        if xs[0] != 0.0 || ys[0] != 0.0 || *xs.last().unwrap() != 1.0 || *ys.last().unwrap() != 1.0
        {
            return Err(Error::domain(
                "knots must start at (0, 0) and end at (1, 1)",
            ));
        }
        if xs.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::domain("knot abscissae must be non-decreasing"));
        }
        if ys.windows(2).any(|w| !(w[0] <= w[1])) || ys.iter().any(|y| !(0.0..=1.0).contains(y)) {
            return Err(Error::domain(
                "knot values must be non-decreasing in [0, 1]",
            ));
        }
        let slopes = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| {
                if x[1] > x[0] {
                    (y[1] - y[0]) / (x[1] - x[0])
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self {
            xs,
            ys,
            slopes,
            measure: None,
        })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// The measure this distortion was built from, if any.
    pub fn measure(&self) -> Option<&DistortionMeasure> {
        self.measure.as_ref()
    }

    fn has_jump(&self) -> bool {
        self.xs.windows(2).any(|w| w[0] == w[1])
    }

    fn is_concave(&self) -> bool {
        self.slopes
            .windows(2)
            .all(|s| s[1] <= s[0] + CONCAVITY_SLACK * s[0].abs().max(1.0))
    }

    // index of the segment (xs[k], xs[k+1]) to the right of z
    fn segment(&self, z: f64) -> usize {
        let k = self.xs.partition_point(|&x| x <= z);
        k.saturating_sub(1).min(self.slopes.len() - 1)
    }

    fn eval(&self, y: f64) -> f64 {
        if y == 0.0 {
            return self.ys[0];
        }
        if y >= 1.0 {
            return 1.0;
        }
        let k = self.segment(y);
        (self.ys[k] + (y - self.xs[k]) * self.slopes[k]).clamp(0.0, 1.0)
    }

    fn right_derivative(&self, z: f64) -> f64 {
        self.slopes[self.segment(z)]
    }
}

impl Distortion {
    pub fn prop_hazard(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::domain(format!(
                "prop_hazard needs gamma in (0, 1], got {gamma}"
            )));
        }
        Ok(Distortion::PropHazard { gamma })
    }

    pub fn minvar(x: f64) -> Result<Self> {
        Ok(Distortion::MinVar {
            x: family_param("minvar", x)?,
        })
    }

    pub fn maxvar(x: f64) -> Result<Self> {
        Ok(Distortion::MaxVar {
            x: family_param("maxvar", x)?,
        })
    }

    pub fn maxminvar(x: f64) -> Result<Self> {
        Ok(Distortion::MaxMinVar {
            x: family_param("maxminvar", x)?,
        })
    }

    pub fn minmaxvar(x: f64) -> Result<Self> {
        Ok(Distortion::MinMaxVar {
            x: family_param("minmaxvar", x)?,
        })
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Distortion::PiecewiseLinear(PiecewiseLinear::new(knots)?))
    }

    /// `psi_mu` for a finitely supported `mu`.
    pub fn from_measure(mu: &DistortionMeasure) -> Self {
        psi_from_measure(mu)
    }

    /// `psi(y)`; `y` must lie in `[0, 1]`.
    pub fn eval(&self, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::domain(format!(
                "distortion argument {y} outside [0, 1]"
            )));
        }
        Ok(self.eval_unchecked(y))
    }

    /// `psi(y)` without the range check. Callers guarantee `y` in `[0, 1]`.
    pub fn eval_unchecked(&self, y: f64) -> f64 {
        match self {
            Distortion::Identity => y,
            Distortion::PropHazard { gamma } => y.powf(*gamma),
            Distortion::MinVar { x } => 1.0 - (1.0 - y).powf(x + 1.0),
            Distortion::MaxVar { x } => y.powf(1.0 / (x + 1.0)),
            Distortion::MaxMinVar { x } => {
                let n = x + 1.0;
                (1.0 - (1.0 - y).powf(n)).powf(1.0 / n)
            }
            Distortion::MinMaxVar { x } => {
                let n = x + 1.0;
                1.0 - (1.0 - y.powf(1.0 / n)).powf(n)
            }
            Distortion::PiecewiseLinear(pl) => pl.eval(y),
        }
    }

    /// Right derivative `psi'_+(z)` for `z` in `[0, 1)`; may be `+inf` at 0.
    pub fn right_derivative(&self, z: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&z) {
            return Err(Error::domain(format!(
                "right derivative needs z in [0, 1), got {z}"
            )));
        }
        let d = match self {
            Distortion::Identity => 1.0,
            Distortion::PropHazard { gamma } => {
                if *gamma == 1.0 {
                    1.0
                } else if z == 0.0 {
                    f64::INFINITY
                } else {
                    gamma * z.powf(gamma - 1.0)
                }
            }
            Distortion::MinVar { x } => (x + 1.0) * (1.0 - z).powf(*x),
            Distortion::MaxVar { x } => {
                let e = 1.0 / (x + 1.0);
                if *x == 0.0 {
                    1.0
                } else if z == 0.0 {
                    f64::INFINITY
                } else {
                    e * z.powf(e - 1.0)
                }
            }
            Distortion::MaxMinVar { x } => {
                if *x == 0.0 {
                    1.0
                } else if z == 0.0 {
                    f64::INFINITY
                } else {
                    let n = x + 1.0;
                    let u = 1.0 - (1.0 - z).powf(n);
                    u.powf(1.0 / n - 1.0) * (1.0 - z).powf(*x)
                }
            }
            Distortion::MinMaxVar { x } => {
                if *x == 0.0 {
                    1.0
                } else if z == 0.0 {
                    f64::INFINITY
                } else {
                    let n = x + 1.0;
                    let v = z.powf(1.0 / n);
                    (1.0 - v).powf(*x) * z.powf(1.0 / n - 1.0)
                }
            }
            Distortion::PiecewiseLinear(pl) => pl.right_derivative(z),
        };
        Ok(d)
    }

    /// `lim_{z -> 1-} psi'(z)`, the mass the induced measure puts on `{1}`.
    pub fn derivative_at_one(&self) -> f64 {
        match self {
            Distortion::Identity => 1.0,
            Distortion::PropHazard { gamma } => *gamma,
            Distortion::MinVar { x }
            | Distortion::MaxMinVar { x }
            | Distortion::MinMaxVar { x } => {
                if *x == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Distortion::MaxVar { x } => 1.0 / (x + 1.0),
            Distortion::PiecewiseLinear(pl) => *pl.slopes.last().unwrap(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Distortion::Identity => true,
            Distortion::PropHazard { gamma } => *gamma == 1.0,
            Distortion::MinVar { x }
            | Distortion::MaxVar { x }
            | Distortion::MaxMinVar { x }
            | Distortion::MinMaxVar { x } => *x == 0.0,
            Distortion::PiecewiseLinear(pl) => {
                !pl.has_jump() && pl.slopes.iter().all(|s| (s - 1.0).abs() <= CONCAVITY_SLACK)
            }
        }
    }

    /// Regular means concave and continuous. Closed-form kinds are regular
    /// whenever their parameter is in range; piecewise-linear ones are checked
    /// exactly through their slopes.
    pub fn is_regular(&self) -> bool {
        match self {
            Distortion::Identity => true,
            Distortion::PropHazard { gamma } => *gamma > 0.0 && *gamma <= 1.0,
            Distortion::MinVar { x }
            | Distortion::MaxVar { x }
            | Distortion::MaxMinVar { x }
            | Distortion::MinMaxVar { x } => x.is_finite() && *x >= 0.0,
            Distortion::PiecewiseLinear(pl) => !pl.has_jump() && pl.is_concave(),
        }
    }

    pub fn ensure_regular(&self) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "distortion {self} is not regular (concave and continuous)"
            )))
        }
    }
}

fn family_param(kind: &str, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!(
            "{kind} needs a finite parameter x >= 0, got {x}"
        )));
    }
    Ok(x)
}

impl fmt::Display for Distortion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distortion::Identity => write!(f, "identity"),
            Distortion::PropHazard { gamma } => write!(f, "prop_hazard:{gamma}"),
            Distortion::MinVar { x } => write!(f, "minvar:{x}"),
            Distortion::MaxVar { x } => write!(f, "maxvar:{x}"),
            Distortion::MaxMinVar { x } => write!(f, "maxminvar:{x}"),
            Distortion::MinMaxVar { x } => write!(f, "minmaxvar:{x}"),
            Distortion::PiecewiseLinear(pl) => match &pl.measure {
                Some(mu) => write!(f, "{mu}"),
                None => {
                    write!(f, "piecewise_linear:")?;
                    for (i, (x, y)) in pl.knots().enumerate() {
                        if i > 0 {
                            write!(f, ";")?;
                        }
                        write!(f, "{x},{y}")?;
                    }
                    Ok(())
                }
            },
        }
    }
}

/// Finitely supported probability measure on `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionMeasure {
    support: Vec<f64>,
    weights: Vec<f64>,
}

impl DistortionMeasure {
    pub fn new(support: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::domain(
                "measure needs non-empty support and matching weights",
            ));
        }
        if let Some(s) = support.iter().find(|&&s| !(s > 0.0 && s <= 1.0)) {
            return Err(Error::domain(format!(
                "measure support point {s} outside (0, 1]; mass at 0 would make psi discontinuous"
            )));
        }
        if support.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("measure support must be strictly ascending"));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::domain("measure weights must be strictly positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > crate::space::RENORMALIZE_WINDOW {
            return Err(Error::domain(format!(
                "measure weights sum to {total}, not 1"
            )));
        }
        let weights = if crate::space::is_rounding_of_one(total, weights.len()) {
            weights
        } else {
            weights.into_iter().map(|w| w / total).collect()
        };
        Ok(Self { support, weights })
    }

    /// From unsorted `(support, weight)` pairs; equal points are merged.
    pub fn from_atoms(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut support: Vec<f64> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (s, w) in atoms {
            if support.last() == Some(&s) {
                *weights.last_mut().unwrap() += w;
            } else {
                support.push(s);
                weights.push(w);
            }
        }
        Self::new(support, weights)
    }

    pub fn dirac(s: f64) -> Result<Self> {
        Self::new(vec![s], vec![1.0])
    }

    /// `((a-1)/a) delta_{1/(a+1)} + (1/a) delta_1` for `a >= 1`.
    pub fn p_prime(a: f64) -> Result<Self> {
        if !(a >= 1.0 && a.is_finite()) {
            return Err(Error::domain(format!("P' family needs a >= 1, got {a}")));
        }
        if a == 1.0 {
            return Self::dirac(1.0);
        }
        Self::new(vec![1.0 / (a + 1.0), 1.0], vec![(a - 1.0) / a, 1.0 / a])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `m_mu = (1/2) int s mu(ds)`.
    pub fn m_mu(&self) -> f64 {
        0.5 * self.atoms().map(|(s, w)| s * w).sum::<f64>()
    }

    /// `psi'_{mu,+}(z) = sum_{s_k > z} w_k / s_k`.
    pub fn density_slope(&self, z: f64) -> f64 {
        self.atoms()
            .filter(|(s, _)| *s > z)
            .map(|(s, w)| w / s)
            .sum()
    }

    /// If `mu` belongs to the P' family (per-coordinate tolerance `tol`),
    /// returns its parameter `a >= 1`.
    pub fn p_prime_parameter(&self, tol: f64) -> Option<f64> {
        match (self.support.as_slice(), self.weights.as_slice()) {
            ([s], _) if (s - 1.0).abs() <= tol => Some(1.0),
            ([s1, s2], [w1, w2]) if (s2 - 1.0).abs() <= tol => {
                let a = 1.0 / w2;
                let ok = a >= 1.0
                    && (s1 - 1.0 / (a + 1.0)).abs() <= tol
                    && (w1 - (a - 1.0) / a).abs() <= tol;
                ok.then_some(a)
            }
            _ => None,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        Some(
            self.atoms()
                .zip(other.atoms())
                .map(|((s1, w1), (s2, w2))| (s1 - s2).abs().max((w1 - w2).abs()))
                .fold(0.0, f64::max),
        )
    }
}

impl fmt::Display for DistortionMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "measure:")?;
        for (i, (s, w)) in self.atoms().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{s},{w}")?;
        }
        Ok(())
    }
}

/// Piecewise-linear `psi_mu`: knots at the support of `mu`, slope
/// `sum_{s_j >= s_k} w_j / s_j` on `(s_{k-1}, s_k)`.
pub fn psi_from_measure(mu: &DistortionMeasure) -> Distortion {
    let k = mu.len();
    let mut xs = Vec::with_capacity(k + 2);
    let mut ys = Vec::with_capacity(k + 2);
    let mut slopes = Vec::with_capacity(k + 1);
    xs.push(0.0);
    ys.push(0.0);
    // tail[j] = sum_{i >= j} w_i / s_i
    let mut tail = vec![0.0; k + 1];
    for j in (0..k).rev() {
        tail[j] = tail[j + 1] + mu.weights[j] / mu.support[j];
    }
    let mut head = 0.0;
    for j in 0..k {
        let s = mu.support[j];
        head += mu.weights[j];
        slopes.push(tail[j]);
        xs.push(s);
        // psi(s_j) = sum_{i <= j} w_i + s_j sum_{i > j} w_i / s_i
        ys.push((head + s * tail[j + 1]).min(1.0));
    }
    if *xs.last().unwrap() < 1.0 {
        xs.push(1.0);
        ys.push(1.0);
        slopes.push(0.0);
    }
    *ys.last_mut().unwrap() = 1.0;
    Distortion::PiecewiseLinear(PiecewiseLinear {
        xs,
        ys,
        slopes,
        measure: Some(mu.clone()),
    })
}

/// The measure `mu` with `psi_mu = psi`, as returned by [`measure_from_distortion`].
#[derive(Debug, Clone, PartialEq)]
pub enum InducedMeasure {
    /// Exact atoms (piecewise-linear and identity distortions).
    Discrete(DistortionMeasure),
    /// CDF `F(y) = psi(y) - y psi'_+(y)` plus an atom at 1 (smooth families).
    Analytic(AnalyticMeasure),
}

impl InducedMeasure {
    pub fn cdf(&self, y: f64) -> f64 {
        match self {
            InducedMeasure::Discrete(mu) => {
                if y >= 1.0 {
                    1.0
                } else {
                    mu.atoms().filter(|(s, _)| *s <= y).map(|(_, w)| w).sum()
                }
            }
            InducedMeasure::Analytic(a) => a.cdf(y),
        }
    }

    pub fn atom_at_one(&self) -> f64 {
        match self {
            InducedMeasure::Discrete(mu) => {
                mu.atoms().filter(|(s, _)| *s == 1.0).map(|(_, w)| w).sum()
            }
            InducedMeasure::Analytic(a) => a.atom_at_one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMeasure {
    distortion: Distortion,
}

impl AnalyticMeasure {
    pub fn distortion(&self) -> &Distortion {
        &self.distortion
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else if y >= 1.0 {
            1.0
        } else {
            let d = self.distortion.right_derivative(y).unwrap_or(f64::INFINITY);
            self.distortion.eval_unchecked(y) - y * d
        }
    }

    pub fn atom_at_one(&self) -> f64 {
        self.distortion.derivative_at_one()
    }
}

/// Inverts `psi -> psi_mu` for a concave distortion.
pub fn measure_from_distortion(psi: &Distortion) -> Result<InducedMeasure> {
    if !psi.is_regular() {
        return Err(Error::domain(format!(
            "{psi} is not concave and continuous; no measure on (0, 1] generates it"
        )));
    }
    if psi.is_identity() {
        return Ok(InducedMeasure::Discrete(DistortionMeasure::dirac(1.0)?));
    }
    match psi {
        Distortion::PiecewiseLinear(pl) => {
            let mut atoms = Vec::new();
            let n = pl.xs.len();
            for k in 1..n - 1 {
                let x = pl.xs[k];
                let w = x * (pl.slopes[k - 1] - pl.slopes[k]);
                if w > 1e-15 {
                    atoms.push((x, w));
                }
            }
            let last = pl.slopes[n - 2];
            if last > 1e-15 {
                atoms.push((1.0, last));
            }
            let (support, weights): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
            Ok(InducedMeasure::Discrete(DistortionMeasure::new(
                support, weights,
            )?))
        }
        other => Ok(InducedMeasure::Analytic(AnalyticMeasure {
            distortion: other.clone(),
        })),
    }
}

/// Family `x -> psi_x` indexed by `x > 0`.
#[derive(Clone)]
pub struct DistortionFamily {
    name: String,
    generator: Arc<dyn Fn(f64) -> Distortion + Send + Sync>,
    increasing: bool,
    right_continuous: bool,
}

impl fmt::Debug for DistortionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistortionFamily")
            .field("name", &self.name)
            .field("increasing", &self.increasing)
            .field("right_continuous", &self.right_continuous)
            .finish()
    }
}

impl DistortionFamily {
    pub fn new<F>(
        name: impl Into<String>,
        generator: F,
        increasing: bool,
        right_continuous: bool,
    ) -> Self
    where
        F: Fn(f64) -> Distortion + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            generator: Arc::new(generator),
            increasing,
            right_continuous,
        }
    }

    pub fn minvar() -> Self {
        Self::new("minvar", |x| Distortion::MinVar { x }, true, true)
    }

    pub fn maxvar() -> Self {
        Self::new("maxvar", |x| Distortion::MaxVar { x }, true, true)
    }

    pub fn maxminvar() -> Self {
        Self::new("maxminvar", |x| Distortion::MaxMinVar { x }, true, true)
    }

    pub fn minmaxvar() -> Self {
        Self::new("minmaxvar", |x| Distortion::MinMaxVar { x }, true, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at(&self, x: f64) -> Distortion {
        (self.generator)(x)
    }

    pub fn flagged_increasing(&self) -> bool {
        self.increasing
    }

    pub fn flagged_right_continuous(&self) -> bool {
        self.right_continuous
    }
}

/// Verdicts of [`check_regular`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub boundary: bool,
    pub monotone: bool,
    pub concave: bool,
    pub continuous: bool,
    /// `psi(y) > y` on the open grid; `None` for the identity.
    pub dominates_identity: Option<bool>,
    pub max_concavity_defect: f64,
}

impl RegularityReport {
    pub fn passes(&self) -> bool {
        self.boundary
            && self.monotone
            && self.concave
            && self.continuous
            && self.dominates_identity.unwrap_or(true)
    }
}

/// Grid-based regularity verdicts with spacing `step`.
///
/// Continuity is probed at 0 by comparing `psi(1e-12)` to `psi(1e-4)`: a
/// continuous distortion must shrink there (or already be below 1e-6). At
/// interior grid points the one-sided jumps over `1e-9` must stay below
/// `1e-6`.
pub fn check_regular(psi: &Distortion, step: f64) -> RegularityReport {
    let n = (1.0 / step).round().max(2.0) as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&y| psi.eval_unchecked(y)).collect();

    let boundary = vals[0] == 0.0 && (vals[n] - 1.0).abs() <= 1e-15;
    let monotone = vals.windows(2).all(|w| w[1] >= w[0] - 1e-15);
    let mut max_defect: f64 = 0.0;
    for i in 1..n {
        let defect = 0.5 * (vals[i - 1] + vals[i + 1]) - vals[i];
        max_defect = max_defect.max(defect);
    }
    let concave = max_defect <= CONCAVITY_SLACK;

    let near = psi.eval_unchecked(1e-12);
    let far = psi.eval_unchecked(1e-4);
    let at_zero = near <= 1e-6 || near <= 0.9 * far;
    let h = 1e-9;
    let interior = grid[1..n].iter().all(|&y| {
        let v = psi.eval_unchecked(y);
        (psi.eval_unchecked(y + h) - v).abs() <= 1e-6
            && (v - psi.eval_unchecked(y - h)).abs() <= 1e-6
    });
    let continuous = at_zero && interior;

    let dominates_identity = if psi.is_identity() {
        None
    } else {
        Some((1..n).all(|i| vals[i] > grid[i]))
    };
    RegularityReport {
        boundary,
        monotone,
        concave,
        continuous,
        dominates_identity,
        max_concavity_defect: max_defect,
    }
}

/// Right-continuity probe offsets: the gap at the fine offset must be tiny
/// or at least 100 times smaller than at the coarse one.
pub const RIGHT_CONT_OFFSET: f64 = 1e-6;
pub const RIGHT_CONT_COARSE_OFFSET: f64 = 1e-3;
pub const RIGHT_CONT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub monotone: bool,
    pub right_continuous: bool,
    /// First `(x1, x2, y)` with `psi_x1(y) > psi_x2(y)`.
    pub monotone_witness: Option<(f64, f64, f64)>,
    /// First `(x, y)` where the right limit does not settle.
    pub right_continuity_witness: Option<(f64, f64)>,
}

/// Checks `psi_x1 <= psi_x2` for every sampled `x1 <= x2` and probes right
/// continuity in `x` at every sampled point.
pub fn check_family_monotone(family: &DistortionFamily, xs: &[f64], ys: &[f64]) -> FamilyReport {
    let mut xs: Vec<f64> = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    let table: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| {
            let psi = family.at(x);
            ys.iter().map(|&y| psi.eval_unchecked(y)).collect()
        })
        .collect();
    let mut monotone_witness = None;
    'outer: for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            for (k, &y) in ys.iter().enumerate() {
                if table[i][k] > table[j][k] + CONCAVITY_SLACK {
                    monotone_witness = Some((xs[i], xs[j], y));
                    break 'outer;
                }
            }
        }
    }
    let mut right_continuity_witness = None;
    'rc: for (i, &x) in xs.iter().enumerate() {
        let fine = family.at(x + RIGHT_CONT_OFFSET);
        let coarse = family.at(x + RIGHT_CONT_COARSE_OFFSET);
        for (k, &y) in ys.iter().enumerate() {
            let gap_fine = (fine.eval_unchecked(y) - table[i][k]).abs();
            let gap_coarse = (coarse.eval_unchecked(y) - table[i][k]).abs();
            if gap_fine > RIGHT_CONT_TOL && gap_fine > 0.01 * gap_coarse {
                right_continuity_witness = Some((x, y));
                break 'rc;
            }
        }
    }
    FamilyReport {
        monotone: monotone_witness.is_none(),
        right_continuous: right_continuity_witness.is_none(),
        monotone_witness,
        right_continuity_witness,
    }
}
