//! Exact conditional risk evaluators.
//!
//! Every evaluator works cell by cell: it takes the conditional law of the
//! payoff on a cell of the time-`t` partition and returns one number per cell.
//! The `*_dist` functions are the per-law kernels; the wrappers without the
//! suffix map them over a [`FilteredSpace`].
//!
//! The Choquet risk is computed in its sorted-sum (discrete Stieltjes) form
//!
//! ```text
//! rho = - sum_i x_i (psi(F_i) - psi(F_{i-1})),   F_0 = 0,
//! ```
//!
//! over the ascending distinct values `x_i` with conditional CDF `F_i`. It
//! never differentiates `psi`, so distortions with infinite slope at 0 are
//! handled exactly.

use serde::{Deserialize, Serialize};

use crate::distortion::{psi_from_measure, Distortion, DistortionMeasure};
use crate::error::{Error, Result};
use crate::exec;
use crate::space::{AdaptedValue, DiscreteDistribution, FilteredSpace, RandomVariable};

/// One step of `z -> q_z^+` on a cell: the value on levels `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileStep {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

/// What to evaluate in a [`RiskQuery`].
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Distortion(Distortion),
    /// Weighted VaR for a finitely supported weighting measure.
    Measure(DistortionMeasure),
    /// AV@R at a single level.
    Level(f64),
}

/// A payoff, an evaluation time and the risk measure to apply.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskQuery {
    pub payoff: RandomVariable,
    pub time: usize,
    pub measure: MeasureSpec,
}

impl RiskQuery {
    pub fn evaluate(&self, fs: &FilteredSpace) -> Result<AdaptedValue> {
        match &self.measure {
            MeasureSpec::Distortion(psi) => choquet(fs, &self.payoff, self.time, psi),
            MeasureSpec::Measure(mu) => dwvar(fs, &self.payoff, self.time, mu),
            MeasureSpec::Level(alpha) => avar(fs, &self.payoff, self.time, *alpha),
        }
    }
}

fn per_cell<F>(fs: &FilteredSpace, x: &RandomVariable, t: usize, f: F) -> Result<AdaptedValue>
where
    F: Fn(&DiscreteDistribution) -> f64 + Send + Sync,
{
    let dists = fs.conditional_distributions(x, t)?;
    let values = exec::try_map_cells::<_, Error, _>(dists.len(), |c| Ok(f(&dists[c])))?;
    Ok(AdaptedValue { time: t, values })
}

/// Sorted-sum Choquet risk of one law. `psi` is assumed regular.
pub fn choquet_dist(d: &DiscreteDistribution, psi: &Distortion) -> f64 {
    let cum = d.cumulative();
    let mut prev = 0.0;
    let mut acc = 0.0;
    for (x, f) in d.support().iter().zip(&cum) {
        let cur = psi.eval_unchecked(*f);
        acc += x * (cur - prev);
        prev = cur;
    }
    -acc
}

/// `rho_t^psi(X)` on every cell of time `t`.
pub fn choquet(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    psi: &Distortion,
) -> Result<AdaptedValue> {
    psi.ensure_regular()?;
    per_cell(fs, x, t, |d| choquet_dist(d, psi))
}

fn check_open_level(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "quantile level must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

fn check_avar_level(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!(
            "AV@R level must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// `q_alpha^+ = sup{x : F(x) <= alpha}` for `alpha` in `(0, 1)`.
pub fn quantile_upper_dist(d: &DiscreteDistribution, alpha: f64) -> f64 {
    let cum = d.cumulative();
    let i = cum.iter().position(|&f| f > alpha).unwrap_or(cum.len() - 1);
    d.support()[i]
}

/// `q_alpha^- = inf{x : F(x) >= alpha}` for `alpha` in `(0, 1)`.
pub fn quantile_lower_dist(d: &DiscreteDistribution, alpha: f64) -> f64 {
    let cum = d.cumulative();
    let i = cum
        .iter()
        .position(|&f| f >= alpha)
        .unwrap_or(cum.len() - 1);
    d.support()[i]
}

/// The step function `z -> q_z^+`: `x_i` on `[F_{i-1}, F_i)`.
pub fn quantile_steps(d: &DiscreteDistribution) -> Vec<QuantileStep> {
    let mut lo = 0.0;
    d.support()
        .iter()
        .zip(d.cumulative())
        .map(|(&value, hi)| {
            let s = QuantileStep { lo, hi, value };
            lo = hi;
            s
        })
        .collect()
}

pub fn quantile_upper(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    alpha: f64,
) -> Result<AdaptedValue> {
    check_open_level(alpha)?;
    per_cell(fs, x, t, |d| quantile_upper_dist(d, alpha))
}

pub fn quantile_lower(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    alpha: f64,
) -> Result<AdaptedValue> {
    check_open_level(alpha)?;
    per_cell(fs, x, t, |d| quantile_lower_dist(d, alpha))
}

/// `VaR_alpha(X | F_t) = -q_alpha^+(X | F_t)`.
pub fn var(fs: &FilteredSpace, x: &RandomVariable, t: usize, alpha: f64) -> Result<AdaptedValue> {
    let mut q = quantile_upper(fs, x, t, alpha)?;
    for v in &mut q.values {
        *v = -*v;
    }
    Ok(q)
}

/// `-(1/alpha) int_(0,alpha) q_z^+ dz` by exact step integration.
pub fn avar_dist(d: &DiscreteDistribution, alpha: f64) -> f64 {
    let mut acc = 0.0;
    for step in quantile_steps(d) {
        if step.lo >= alpha {
            break;
        }
        acc += step.value * (step.hi.min(alpha) - step.lo);
    }
    -acc / alpha
}

pub fn avar(fs: &FilteredSpace, x: &RandomVariable, t: usize, alpha: f64) -> Result<AdaptedValue> {
    check_avar_level(alpha)?;
    per_cell(fs, x, t, |d| avar_dist(d, alpha))
}

/// The maximizing density of the dual AV@R representation,
///
/// ```text
/// Z* = (1/alpha) (1{X < q} + eps 1{X = q}),
/// eps = (alpha - P(X < q | F_t)) / P(X = q | F_t),
/// ```
///
/// with `q = q_alpha^+` (the cell maximum when `alpha = 1`).
pub fn avar_maximizer(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    alpha: f64,
) -> Result<RandomVariable> {
    check_avar_level(alpha)?;
    let dists = fs.conditional_distributions(x, t)?;
    let partition = fs.filtration().partition(t)?;
    let mut z = vec![0.0; fs.n_atoms()];
    for (c, d) in dists.iter().enumerate() {
        let q = if alpha < 1.0 {
            quantile_upper_dist(d, alpha)
        } else {
            d.max()
        };
        let (mut p_less, mut p_eq) = (0.0, 0.0);
        for (&v, &w) in d.support().iter().zip(d.weights()) {
            if v < q {
                p_less += w;
            } else if v == q {
                p_eq += w;
            }
        }
        let eps = if p_eq > 0.0 {
            ((alpha - p_less) / p_eq).clamp(0.0, 1.0)
        } else {
            0.0
        };
        for &a in partition.cell(c) {
            let v = x.values()[a];
            z[a] = if v < q {
                1.0 / alpha
            } else if v == q {
                eps / alpha
            } else {
                0.0
            };
        }
    }
    RandomVariable::new(z)
}

/// AV@R as `E[-X Z* | F_t]`, summed atom by atom.
pub fn avar_robust(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    alpha: f64,
) -> Result<AdaptedValue> {
    let z = avar_maximizer(fs, x, t, alpha)?;
    let weighted = x.zip_with(&z, |xv, zv| -xv * zv);
    fs.conditional_expectation(&weighted, t)
}

/// Weighted VaR `sum_k w_k AV@R_{s_k}` of one law.
pub fn dwvar_dist(d: &DiscreteDistribution, mu: &DistortionMeasure) -> f64 {
    mu.atoms().map(|(s, w)| w * avar_dist(d, s)).sum()
}

/// `-int_0^1 q_z^+ psi'_{mu,+}(z) dz`, integrated exactly over the common
/// refinement of the quantile steps and the support of `mu`.
pub fn dwvar_quantile_form_dist(d: &DiscreteDistribution, mu: &DistortionMeasure) -> f64 {
    let mut breaks: Vec<f64> = vec![0.0, 1.0];
    breaks.extend(d.cumulative());
    breaks.extend(mu.support().iter().copied());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let steps = quantile_steps(d);
    let mut acc = 0.0;
    let mut k = 0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        while k + 1 < steps.len() && steps[k].hi <= mid {
            k += 1;
        }
        acc += steps[k].value * mu.density_slope(mid) * (hi - lo);
    }
    -acc
}

pub fn dwvar(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    mu: &DistortionMeasure,
) -> Result<AdaptedValue> {
    let out = per_cell(fs, x, t, |d| dwvar_dist(d, mu))?;
    debug_assert!({
        let q = per_cell(fs, x, t, |d| dwvar_quantile_form_dist(d, mu))?;
        let scale = 1.0
            + out
                .values
                .iter()
                .chain(&q.values)
                .fold(0.0f64, |m, v| m.max(v.abs()));
        out.max_abs_diff(&q) <= 1e-9 * scale
    });
    Ok(out)
}

/// Quantile form of weighted VaR, exposed for cross-checking.
pub fn dwvar_quantile_form(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    mu: &DistortionMeasure,
) -> Result<AdaptedValue> {
    per_cell(fs, x, t, |d| dwvar_quantile_form_dist(d, mu))
}

/// `-E[min(X_1..X_k) | F_t]` for conditionally iid copies, from
/// `P(min > x) = (1 - F(x))^k` on the finite support.
pub fn min_iid_dist(d: &DiscreteDistribution, k: u32) -> f64 {
    let mut survival_prev: f64 = 1.0;
    let mut acc = 0.0;
    for (x, f) in d.support().iter().zip(d.cumulative()) {
        let survival = (1.0 - f).powi(k as i32);
        acc += x * (survival_prev - survival);
        survival_prev = survival;
    }
    -acc
}

pub fn min_iid_rho(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    k: u32,
) -> Result<AdaptedValue> {
    if k == 0 {
        return Err(Error::domain("need at least one copy (k >= 1)"));
    }
    per_cell(fs, x, t, |d| min_iid_dist(d, k))
}

/// `rho_t^{psi_mu}`, the Choquet risk of the distortion generated by `mu`.
pub fn choquet_of_measure(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    mu: &DistortionMeasure,
) -> Result<AdaptedValue> {
    choquet(fs, x, t, &psi_from_measure(mu))
}
