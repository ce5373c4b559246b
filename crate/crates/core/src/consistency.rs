//! Time-consistency predicates and the constructions that falsify them.
//!
//! Every check compares the risk at an earlier time `t` with the risk at a
//! later time `s` cell by cell and reports a signed margin per cell of the
//! time-`t` partition. The builders return small filtered spaces whose
//! expected risk values are embedded and re-verified on construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::acceptability::{dcai, AcceptabilityIndex, DcaiConfig};
use crate::distortion::{psi_from_measure, Distortion, DistortionFamily, DistortionMeasure};
use crate::error::{Error, Result};
use crate::numeric::bisect_bracket;
use crate::risk::choquet;
use crate::space::{AdaptedValue, FilteredSpace, RandomVariable};

/// Slack on the sub-martingale inequality.
pub const SUBMARTINGALE_TOL: f64 = 1e-10;
/// Threshold for strict positivity and for the `<= 0` predicates.
pub const STRICT_TOL: f64 = 1e-12;
/// Slack on comparisons of acceptability indices.
pub const DCAI_TOL: f64 = 1e-6;
/// Per-coordinate tolerance of the P' membership test.
pub const P_PRIME_TOL: f64 = 1e-12;
/// Constant in the `C / N` discretization tolerance.
pub const DISCRETIZATION_CONSTANT: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Submartingale,
    SuperStrict,
    WeakAcceptance,
    MiddleRejection,
    DcaiWeakRejection,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Submartingale,
        Property::SuperStrict,
        Property::WeakAcceptance,
        Property::MiddleRejection,
        Property::DcaiWeakRejection,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Submartingale => "submartingale",
            Property::SuperStrict => "super-strict",
            Property::WeakAcceptance => "weak-acceptance",
            Property::MiddleRejection => "middle-rejection",
            Property::DcaiWeakRejection => "dcai-weak-rejection",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown property `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holds" => Ok(Verdict::Holds),
            "violated" => Ok(Verdict::Violated),
            _ => Err(Error::Parse(format!(
                "unknown verdict `{s}` (expected holds or violated)"
            ))),
        }
    }
}

/// Margin of one time-`t` cell. Cells where the predicate's premise fails
/// are reported with `applicable = false` and never count as violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMargin {
    pub cell: usize,
    pub margin: f64,
    pub applicable: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub cell: usize,
    pub values: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub property: Property,
    pub t: usize,
    pub s: usize,
    pub tolerance: f64,
    pub cells: Vec<CellMargin>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl ConsistencyReport {
    fn assemble(
        property: Property,
        t: usize,
        s: usize,
        tolerance: f64,
        cells: Vec<(CellMargin, Witness)>,
    ) -> Self {
        let verdict = if cells.iter().all(|(c, _)| c.ok) {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        let witnesses = cells
            .iter()
            .filter(|(c, _)| !c.ok)
            .map(|(_, w)| w.clone())
            .collect();
        Self {
            property,
            t,
            s,
            tolerance,
            cells: cells.into_iter().map(|(c, _)| c).collect(),
            verdict,
            witnesses,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

fn witness(cell: usize, values: &[(&str, f64)]) -> Witness {
    Witness {
        cell,
        values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

fn ensure_order(t: usize, s: usize, strict: bool) -> Result<()> {
    if t > s || (strict && t == s) {
        let rel = if strict { "<" } else { "<=" };
        return Err(Error::domain(format!(
            "times must satisfy t {rel} s, got t = {t}, s = {s}"
        )));
    }
    Ok(())
}

/// `rho_t(X) >= E[rho_s(X) | F_t]` on every cell, up to [`SUBMARTINGALE_TOL`].
pub fn check_submartingale(
    fs: &FilteredSpace,
    x: &RandomVariable,
    psi: &Distortion,
    t: usize,
    s: usize,
) -> Result<ConsistencyReport> {
    ensure_order(t, s, false)?;
    let rt = choquet(fs, x, t, psi)?;
    let rs = choquet(fs, x, s, psi)?;
    let ers = fs.conditional_expectation(&fs.lift(&rs)?, t)?;
    let cells = (0..rt.len())
        .map(|c| {
            let margin = rt.values[c] - ers.values[c];
            (
                CellMargin {
                    cell: c,
                    margin,
                    applicable: true,
                    ok: margin >= -SUBMARTINGALE_TOL,
                },
                witness(
                    c,
                    &[("rho_t", rt.values[c]), ("expected_rho_s", ers.values[c])],
                ),
            )
        })
        .collect();
    Ok(ConsistencyReport::assemble(
        Property::Submartingale,
        t,
        s,
        SUBMARTINGALE_TOL,
        cells,
    ))
}

fn constant_on_cells(fs: &FilteredSpace, x: &RandomVariable, t: usize) -> Result<Vec<bool>> {
    let n = fs.n_cells(t)?;
    (0..n)
        .map(|c| {
            let atoms = fs.cell(t, c)?;
            let v0 = x.values()[atoms[0]];
            Ok(atoms.iter().all(|&a| x.values()[a] == v0))
        })
        .collect()
}

/// `rho_t(X) > E[-X | F_t]` on every cell where `X` is not constant, and
/// equality where it is.
pub fn check_super_strict_failure(
    fs: &FilteredSpace,
    x: &RandomVariable,
    psi: &Distortion,
    t: usize,
) -> Result<ConsistencyReport> {
    if psi.is_identity() {
        return Err(Error::domain(
            "the identity distortion is a martingale; strict failure does not apply",
        ));
    }
    let rt = choquet(fs, x, t, psi)?;
    let neg_mean = fs.conditional_expectation(&x.neg(), t)?;
    let constant = constant_on_cells(fs, x, t)?;
    let horizon = fs.horizon();
    let cells = (0..rt.len())
        .map(|c| {
            let margin = rt.values[c] - neg_mean.values[c];
            let applicable = !constant[c];
            let ok = if applicable {
                margin > STRICT_TOL
            } else {
                margin.abs() <= STRICT_TOL
            };
            (
                CellMargin {
                    cell: c,
                    margin,
                    applicable,
                    ok,
                },
                witness(
                    c,
                    &[
                        ("rho_t", rt.values[c]),
                        ("expected_neg_x", neg_mean.values[c]),
                    ],
                ),
            )
        })
        .collect();
    Ok(ConsistencyReport::assemble(
        Property::SuperStrict,
        t,
        horizon,
        STRICT_TOL,
        cells,
    ))
}

/// `rho_s(X) <= 0` on all `s`-cells inside a `t`-cell must give
/// `rho_t(X) <= 0` there.
pub fn check_weak_acceptance(
    fs: &FilteredSpace,
    x: &RandomVariable,
    psi: &Distortion,
    t: usize,
    s: usize,
) -> Result<ConsistencyReport> {
    ensure_order(t, s, true)?;
    let rt = choquet(fs, x, t, psi)?;
    let rs = choquet(fs, x, s, psi)?;
    let cells = (0..rt.len())
        .map(|c| {
            let below = fs.cells_within(t, c, s)?;
            let max_s = below
                .iter()
                .map(|&k| rs.values[k])
                .fold(f64::NEG_INFINITY, f64::max);
            let applicable = max_s <= STRICT_TOL;
            let margin = rt.values[c];
            Ok((
                CellMargin {
                    cell: c,
                    margin,
                    applicable,
                    ok: !(applicable && margin > STRICT_TOL),
                },
                witness(c, &[("rho_t", margin), ("max_rho_s", max_s)]),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConsistencyReport::assemble(
        Property::WeakAcceptance,
        t,
        s,
        STRICT_TOL,
        cells,
    ))
}

fn index_value(v: AcceptabilityIndex) -> f64 {
    v.finite().unwrap_or(f64::INFINITY)
}

/// `alpha_s(X) <= m` on all `s`-cells inside a `t`-cell must give
/// `alpha_t(X) <= m`, for every level `m` realized by `alpha_s`. It is
/// enough to test the largest one.
pub fn check_weak_rejection_dcai(
    fs: &FilteredSpace,
    x: &RandomVariable,
    family: &DistortionFamily,
    config: &DcaiConfig,
    t: usize,
    s: usize,
) -> Result<ConsistencyReport> {
    ensure_order(t, s, true)?;
    let at = dcai(fs, x, t, family, config)?;
    let a_s = dcai(fs, x, s, family, config)?;
    let cells = (0..at.values.len())
        .map(|c| {
            let below = fs.cells_within(t, c, s)?;
            let level = below.iter().map(|&k| a_s.values[k]).fold(
                AcceptabilityIndex::Finite(0.0),
                |m, v| if m.le_within(v, 0.0) { v } else { m },
            );
            let ok = at.values[c].le_within(level, DCAI_TOL);
            let (vt, vs) = (index_value(at.values[c]), index_value(level));
            let margin = if vt == vs { 0.0 } else { vt - vs };
            Ok((
                CellMargin {
                    cell: c,
                    margin,
                    applicable: true,
                    ok,
                },
                witness(c, &[("alpha_t", vt), ("max_alpha_s", vs)]),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConsistencyReport::assemble(
        Property::DcaiWeakRejection,
        t,
        s,
        DCAI_TOL,
        cells,
    ))
}

/// `Y = -rho_s(X)` lifted to atoms, so that `rho_s(Y) = rho_s(X)`.
pub fn middle_witness(
    fs: &FilteredSpace,
    x: &RandomVariable,
    psi: &Distortion,
    s: usize,
) -> Result<RandomVariable> {
    Ok(fs.lift(&choquet(fs, x, s, psi)?)?.neg())
}

/// Compares `rho_t(X)` with `rho_t(Y)` for the witness `Y` of
/// [`middle_witness`]; a negative margin is a violation.
pub fn middle_rejection_probe(
    fs: &FilteredSpace,
    x: &RandomVariable,
    psi: &Distortion,
    t: usize,
    s: usize,
) -> Result<ConsistencyReport> {
    ensure_order(t, s, true)?;
    let y = middle_witness(fs, x, psi, s)?;
    let rx = choquet(fs, x, t, psi)?;
    let ry = choquet(fs, &y, t, psi)?;
    let cells = (0..rx.len())
        .map(|c| {
            let margin = rx.values[c] - ry.values[c];
            (
                CellMargin {
                    cell: c,
                    margin,
                    applicable: true,
                    ok: margin >= -STRICT_TOL,
                },
                witness(c, &[("rho_t_x", rx.values[c]), ("rho_t_y", ry.values[c])]),
            )
        })
        .collect();
    Ok(ConsistencyReport::assemble(
        Property::MiddleRejection,
        t,
        s,
        STRICT_TOL,
        cells,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Value stated in closed form by the construction's source.
    Published,
    /// Value obtained by evaluating a closed form at specific parameters.
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::Derived => "derived",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedValue {
    pub label: String,
    pub payoff: String,
    pub time: usize,
    pub cell: usize,
    pub value: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckedValue {
    pub expected: ExpectedValue,
    pub computed: f64,
    pub ok: bool,
}

/// Parameters of the uniform construction for a measure outside P'.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousConstruction {
    pub m: f64,
    pub z0: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub name: String,
    pub space: FilteredSpace,
    pub payoffs: Vec<(String, RandomVariable)>,
    pub distortion: Distortion,
    pub expected: Vec<ExpectedValue>,
    pub construction: Option<ContinuousConstruction>,
}

impl Counterexample {
    pub fn payoff(&self, name: &str) -> Option<&RandomVariable> {
        self.payoffs.iter().find(|(n, _)| n == name).map(|(_, x)| x)
    }

    /// Recomputes every embedded value.
    pub fn self_check(&self) -> Result<Vec<CheckedValue>> {
        self.expected
            .iter()
            .map(|e| {
                let x = self
                    .payoff(&e.payoff)
                    .ok_or_else(|| Error::Internal(format!("no payoff named {}", e.payoff)))?;
                let computed = choquet(&self.space, x, e.time, &self.distortion)?.values[e.cell];
                Ok(CheckedValue {
                    expected: e.clone(),
                    computed,
                    ok: (computed - e.value).abs() <= e.tolerance,
                })
            })
            .collect()
    }

    fn verified(self) -> Result<Self> {
        if let Some(bad) = self.self_check()?.into_iter().find(|c| !c.ok) {
            return Err(Error::Internal(format!(
                "{}: {} computed {} but expected {} (tolerance {})",
                self.name,
                bad.expected.label,
                bad.computed,
                bad.expected.value,
                bad.expected.tolerance
            )));
        }
        Ok(self)
    }
}

fn expected(
    label: &str,
    payoff: &str,
    time: usize,
    cell: usize,
    value: f64,
    tolerance: f64,
    provenance: Provenance,
) -> ExpectedValue {
    ExpectedValue {
        label: label.into(),
        payoff: payoff.into(),
        time,
        cell,
        value,
        tolerance,
        provenance,
    }
}

/// Two-period binomial tree with `X2 = (2, 0, 0, -2)` and `psi(y) = sqrt(y)`,
/// together with the witness `Y = -rho_1(X2)`.
pub fn build_nonmiddle_example() -> Result<Counterexample> {
    let space = FilteredSpace::from_raw(
        vec![0.25; 4],
        vec![
            vec![vec![0, 1, 2, 3]],
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0], vec![1], vec![2], vec![3]],
        ],
    )?;
    let psi = Distortion::prop_hazard(0.5)?;
    let x2 = RandomVariable::new(vec![2.0, 0.0, 0.0, -2.0])?;
    let y = middle_witness(&space, &x2, &psi, 1)?;
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    let tol = 1e-12;
    let p = Provenance::Published;
    Counterexample {
        name: "nonmiddle".into(),
        space,
        payoffs: vec![("X2".into(), x2), ("Y".into(), y)],
        distortion: psi,
        expected: vec![
            expected("rho_1(X2) up", "X2", 1, 0, r2 - 2.0, tol, p),
            expected("rho_1(X2) down", "X2", 1, 1, r2, tol, p),
            expected("rho_0(X2)", "X2", 0, 0, r3 - 1.0, tol, p),
            expected("rho_0(Y)", "Y", 0, 0, 2.0 * r2 - 2.0, tol, p),
        ],
        construction: None,
    }
    .verified()
}

/// Four-atom tree on which `psi` generated by `P'(a)` accepts `X` at time 1
/// on both cells but rejects it at time 0.
pub fn build_weakacc_pprime(a: f64) -> Result<Counterexample> {
    if !(a > 1.0 && a.is_finite()) {
        return Err(Error::domain(format!(
            "the construction needs a > 1, got {a}"
        )));
    }
    let small = 1.0 / (4.0 * (a + 1.0));
    let large = 0.5 - small;
    let space = FilteredSpace::from_raw(
        vec![large, large, small, small],
        vec![
            vec![vec![0, 1, 2, 3]],
            vec![vec![0, 3], vec![1, 2]],
            vec![vec![0], vec![1], vec![2], vec![3]],
        ],
    )?;
    let x = RandomVariable::new(vec![2.0, 1.0, -(a + 2.0) / a, -(2.0 * a + 4.0) / a])?;
    let psi = Distortion::from_measure(&DistortionMeasure::p_prime(a)?);
    let tol = 1e-12;
    let p = Provenance::Published;
    Counterexample {
        name: format!("weakacc-pprime(a={a})"),
        space,
        payoffs: vec![("X".into(), x)],
        distortion: psi,
        expected: vec![
            expected("rho_1(X) cell 0", "X", 1, 0, 0.0, tol, p),
            expected("rho_1(X) cell 1", "X", 1, 1, 0.0, tol, p),
            expected("rho_0(X)", "X", 0, 0, (a - 1.0) / (4.0 * a), tol, p),
        ],
        construction: None,
    }
    .verified()
}

/// Root `z0` of `psi_mu(z) + z - 1` on `(m_mu, 1/2)` and the interval
/// endpoints `(a, b, c, d)` of the uniform construction.
pub fn continuous_parameters(mu: &DistortionMeasure) -> Result<(f64, f64, [f64; 4])> {
    let psi = psi_from_measure(mu);
    let m = mu.m_mu();
    let g = |z: f64| psi.eval_unchecked(z) + z - 1.0;
    let (lo, hi) = bisect_bracket(g, m, 0.5, 1e-12).map_err(|e| match e {
        Error::Internal(msg) => Error::Internal(format!(
            "no sign change of psi(z) + z - 1 on (m, 1/2): {msg}"
        )),
        other => other,
    })?;
    let z0 = 0.5 * (lo + hi);
    Ok((m, z0, [-m - z0, -m, 1.0 - m, 2.0 - m - z0]))
}

/// Uniform law on `[a, d]` discretized into `n` equiprobable midpoint atoms,
/// revealed at time 1 through the cells `[a, b) u [c, d]` and `[b, c)`.
///
/// Besides `X` the tree carries `X_shifted = X + max(rho_1(X), 0)`, which is
/// accepted on both time-1 cells of the discrete tree.
pub fn build_weakacc_continuous(mu: &DistortionMeasure, n: usize) -> Result<Counterexample> {
    if let Some(a) = mu.p_prime_parameter(P_PRIME_TOL) {
        return Err(Error::domain(format!(
            "the measure belongs to the P' family (a = {a}); the uniform construction needs a measure outside it"
        )));
    }
    if n < 2 {
        return Err(Error::domain("the discretization needs at least two atoms"));
    }
    let (m, z0, [a, b, c, d]) = continuous_parameters(mu)?;
    let psi = psi_from_measure(mu);
    let width = d - a;
    let values: Vec<f64> = (0..n)
        .map(|i| a + (i as f64 + 0.5) * width / n as f64)
        .collect();
    let (mut outer, mut inner) = (Vec::new(), Vec::new());
    for (i, &v) in values.iter().enumerate() {
        if v >= b && v < c {
            inner.push(i);
        } else {
            outer.push(i);
        }
    }
    if outer.is_empty() || inner.is_empty() {
        return Err(Error::domain(format!(
            "{n} atoms leave a time-1 cell empty"
        )));
    }
    let space = FilteredSpace::from_raw(
        vec![1.0 / n as f64; n],
        vec![
            vec![(0..n).collect()],
            vec![outer, inner],
            (0..n).map(|i| vec![i]).collect(),
        ],
    )?;
    let x = RandomVariable::new(values)?;
    let shift = choquet(&space, &x, 1, &psi)?
        .values
        .into_iter()
        .fold(0.0, f64::max);
    let shifted = x.map(|v| v + shift);
    let rho0 = -a - width * m;
    let rho1_outer = -(a + d) / 2.0 + width / 2.0 * (psi.eval_unchecked(2.0 * (b - a) / width) - m);
    let rho1_inner = -b - width / 2.0 * m;
    let tol = DISCRETIZATION_CONSTANT / n as f64;
    let p = Provenance::Derived;
    Counterexample {
        name: format!("weakacc-continuous({mu}, n={n})"),
        space,
        payoffs: vec![("X".into(), x), ("X_shifted".into(), shifted)],
        distortion: psi,
        expected: vec![
            expected("rho_1(X) outer cell", "X", 1, 0, rho1_outer, tol, p),
            expected("rho_1(X) inner cell", "X", 1, 1, rho1_inner, tol, p),
            expected("rho_0(X)", "X", 0, 0, rho0, tol, p),
        ],
        construction: Some(ContinuousConstruction {
            m,
            z0,
            a,
            b,
            c,
            d,
            n,
        }),
    }
    .verified()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub n: usize,
    /// Largest `|computed - closed form|` over the embedded values.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub points: Vec<ConvergencePoint>,
    /// `max n * error`, the smallest `C` with `error <= C / n` on every point.
    pub fitted_constant: f64,
    /// `error(n) / error(2n)` for consecutive doublings.
    pub ratios: Vec<f64>,
}

/// Discretization error of [`build_weakacc_continuous`] for each `n`.
pub fn convergence_study(mu: &DistortionMeasure, ns: &[usize]) -> Result<ConvergenceStudy> {
    let points = ns
        .iter()
        .map(|&n| {
            let ce = build_weakacc_continuous(mu, n)?;
            let error = ce
                .self_check()?
                .iter()
                .map(|c| (c.computed - c.expected.value).abs())
                .fold(0.0, f64::max);
            Ok(ConvergencePoint { n, error })
        })
        .collect::<Result<Vec<_>>>()?;
    let fitted_constant = points
        .iter()
        .map(|p| p.n as f64 * p.error)
        .fold(0.0, f64::max);
    let ratios = points
        .windows(2)
        .filter(|w| w[1].n == 2 * w[0].n)
        .map(|w| w[0].error / w[1].error)
        .collect();
    Ok(ConvergenceStudy {
        points,
        fitted_constant,
        ratios,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonWeakReport {
    /// `psi_mu(m_mu) + m_mu - 1`.
    pub value: f64,
    /// Parameter `a` when the measure belongs to P'.
    pub p_prime: Option<f64>,
    pub ok: bool,
}

/// `psi_mu(m_mu) + m_mu - 1`: zero on P' and strictly negative off it.
pub fn check_nonweak1_inequality(mu: &DistortionMeasure) -> NonWeakReport {
    let m = mu.m_mu();
    let value = psi_from_measure(mu).eval_unchecked(m) + m - 1.0;
    let p_prime = mu.p_prime_parameter(P_PRIME_TOL);
    let ok = match p_prime {
        Some(_) => value.abs() <= STRICT_TOL,
        None => value < -STRICT_TOL,
    };
    NonWeakReport { value, p_prime, ok }
}

/// Convenience: `rho_t` of a named payoff of a counterexample.
pub fn evaluate_named(ce: &Counterexample, payoff: &str, t: usize) -> Result<AdaptedValue> {
    let x = ce
        .payoff(payoff)
        .ok_or_else(|| Error::domain(format!("no payoff named {payoff}")))?;
    choquet(&ce.space, x, t, &ce.distortion)
}
