mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dynrisk::acceptability::{dcai, DcaiConfig};
use dynrisk::consistency::{
    build_nonmiddle_example, build_weakacc_continuous, build_weakacc_pprime, check_submartingale,
    check_super_strict_failure, check_weak_acceptance, check_weak_rejection_dcai,
    middle_rejection_probe, ConsistencyReport, Counterexample, Property, Verdict,
};
use dynrisk::descriptor::{parse_distortion, parse_family, parse_measure};
use dynrisk::document::{Tree, TreeDocument};
use dynrisk::risk;
use dynrisk::AdaptedValue;

use report::{render, sha256_hex, Obj, Value, REPORT_SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "dynrisk",
    version,
    about = "Dynamic distortion risk measures on scenario trees"
)]
struct Cli {
    /// Worker threads for per-cell evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Target {
    /// Scenario tree document (JSON).
    #[arg(long)]
    tree: PathBuf,
    /// Name of the payoff inside the tree.
    #[arg(long)]
    payoff: String,
    /// Evaluation time.
    #[arg(long = "t")]
    t: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Upper,
    Lower,
}

#[derive(Subcommand)]
enum Command {
    /// Conditional Choquet risk for a distortion.
    Evaluate {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        distortion: String,
    },
    /// Conditional quantile.
    Quantile {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "upper")]
        side: Side,
    },
    /// Conditional value at risk.
    Var {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        alpha: f64,
    },
    /// Conditional average value at risk (step integral and dual maximizer).
    Avar {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        alpha: f64,
    },
    /// Weighted value at risk for a finitely supported measure.
    Dwvar {
        #[command(flatten)]
        target: Target,
        /// Measure, e.g. `0.5,1` or `measure:0.25,0.5;1,0.5`.
        #[arg(long)]
        mu: String,
    },
    /// Acceptability index for a distortion family.
    Dcai {
        #[command(flatten)]
        target: Target,
        /// Family, e.g. `family:minvar`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1e6)]
        x_max: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Time-consistency check; exits nonzero when the verdict differs from the expectation.
    Check {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        payoff: String,
        #[arg(long)]
        property: String,
        #[arg(long)]
        distortion: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "t", default_value_t = 0)]
        t: usize,
        #[arg(long = "s")]
        s: Option<usize>,
        /// Expected verdict: `holds` or `violated`.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Structural validation of a tree document.
    Validate {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Rebuild a reference construction, write its tree and compare values.
    Repro {
        #[command(subcommand)]
        which: Repro,
    },
}

#[derive(Subcommand)]
enum Repro {
    /// Binomial tree that breaks middle rejection consistency.
    Nonmiddle {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Four-atom tree that breaks weak acceptance for P'(a).
    WeakaccPprime {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discretized uniform construction for a measure outside P'.
    WeakaccContinuous {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Loaded {
    tree: Tree,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text =
        std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let tree = TreeDocument::parse(text)
        .and_then(|d| d.to_tree())
        .with_context(|| format!("loading {}", path.display()))?;
    Ok(Loaded {
        tree,
        digest: sha256_hex(&bytes),
    })
}

fn envelope(command: &str, args: Obj, digest: &str, result: impl Into<Value>) -> Value {
    Obj::new()
        .with("schema_version", REPORT_SCHEMA_VERSION)
        .with(
            "command",
            Obj::new().with("name", command).with("args", args),
        )
        .with("inputs_sha256", digest)
        .with("result", result)
        .into()
}

fn target_args(t: &Target) -> Obj {
    Obj::new()
        .with("tree", t.tree.display().to_string())
        .with("payoff", t.payoff.as_str())
        .with("t", t.t)
}

fn cells(v: &AdaptedValue) -> Value {
    Value::Array(
        v.values
            .iter()
            .enumerate()
            .map(|(c, &x)| Obj::new().with("cell", c).with("value", x).into())
            .collect(),
    )
}

fn with_target<F>(command: &str, target: &Target, extra: Obj, f: F) -> Result<(Value, bool)>
where
    F: FnOnce(&Tree) -> Result<Obj>,
{
    let loaded = load(&target.tree)?;
    let mut args = target_args(target);
    args = extra.0.into_iter().fold(args, |a, (k, v)| a.with(&k, v));
    let result = f(&loaded.tree)?;
    Ok((envelope(command, args, &loaded.digest, result), true))
}

fn consistency_value(r: &ConsistencyReport, expected: Verdict) -> Obj {
    let cells: Vec<Value> = r
        .cells
        .iter()
        .map(|c| {
            Obj::new()
                .with("cell", c.cell)
                .with("margin", c.margin)
                .with("applicable", c.applicable)
                .with("ok", c.ok)
                .into()
        })
        .collect();
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            let values = w.values.iter().fold(Obj::new(), |o, (k, v)| o.with(k, *v));
            Obj::new()
                .with("cell", w.cell)
                .with("values", values)
                .into()
        })
        .collect();
    Obj::new()
        .with("property", r.property.as_str())
        .with("t", r.t)
        .with("s", r.s)
        .with("tolerance", r.tolerance)
        .with("verdict", r.verdict.to_string())
        .with("expected_verdict", expected.to_string())
        .with("expectation_met", r.verdict == expected)
        .with("cells", cells)
        .with("witnesses", witnesses)
}

/// Verdict expected when `--expect` is absent: the predicates that are
/// theorems hold, the falsifiers report violations.
fn default_expectation(p: Property) -> Verdict {
    match p {
        Property::Submartingale | Property::SuperStrict | Property::DcaiWeakRejection => {
            Verdict::Holds
        }
        Property::WeakAcceptance | Property::MiddleRejection => Verdict::Violated,
    }
}

#[allow(clippy::too_many_arguments)]
fn run_check(
    tree: &Path,
    payoff: &str,
    property: &str,
    distortion: Option<&str>,
    family: Option<&str>,
    t: usize,
    s: Option<usize>,
    expect: Option<&str>,
) -> Result<(Value, bool)> {
    let property: Property = property.parse()?;
    let expected = match expect {
        Some(e) => e.parse()?,
        None => default_expectation(property),
    };
    let loaded = load(tree)?;
    let x = loaded.tree.payoff(payoff)?;
    let fs = &loaded.tree.space;
    let need_s = || s.context("this property needs --s");
    let need_psi = || -> Result<_> {
        Ok(parse_distortion(
            distortion.context("this property needs --distortion")?,
        )?)
    };
    let report = match property {
        Property::Submartingale => check_submartingale(fs, x, &need_psi()?, t, need_s()?)?,
        Property::SuperStrict => check_super_strict_failure(fs, x, &need_psi()?, t)?,
        Property::WeakAcceptance => check_weak_acceptance(fs, x, &need_psi()?, t, need_s()?)?,
        Property::MiddleRejection => middle_rejection_probe(fs, x, &need_psi()?, t, need_s()?)?,
        Property::DcaiWeakRejection => {
            let fam = parse_family(family.context("this property needs --family")?)?;
            check_weak_rejection_dcai(fs, x, &fam, &DcaiConfig::default(), t, need_s()?)?
        }
    };
    let mut args = Obj::new()
        .with("tree", tree.display().to_string())
        .with("payoff", payoff)
        .with("property", property.as_str())
        .with("distortion", distortion.map(str::to_string))
        .with("family", family.map(str::to_string))
        .with("t", t)
        .with("s", s)
        .with("expect", expect.map(str::to_string));
    args = Obj(args
        .0
        .into_iter()
        .filter(|(_, v)| *v != Value::Null)
        .collect());
    let met = report.verdict == expected;
    Ok((
        envelope(
            "check",
            args,
            &loaded.digest,
            consistency_value(&report, expected),
        ),
        met,
    ))
}

fn repro_report(
    ce: &Counterexample,
    consistency: &ConsistencyReport,
    args: Obj,
    out: Option<&Path>,
) -> Result<(Value, bool)> {
    let doc = TreeDocument::from_counterexample(ce);
    let json = doc.to_json();
    if let Some(path) = out {
        fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    let checked = ce.self_check()?;
    let all_ok = checked.iter().all(|c| c.ok);
    let values: Vec<Value> = checked
        .iter()
        .map(|c| {
            Obj::new()
                .with("label", c.expected.label.as_str())
                .with("payoff", c.expected.payoff.as_str())
                .with("time", c.expected.time)
                .with("cell", c.expected.cell)
                .with("expected", c.expected.value)
                .with("computed", c.computed)
                .with("abs_error", (c.computed - c.expected.value).abs())
                .with("tolerance", c.expected.tolerance)
                .with("provenance", c.expected.provenance.to_string())
                .with("match", c.ok)
                .into()
        })
        .collect();
    let mut result = Obj::new()
        .with("construction", ce.name.as_str())
        .with("distortion", ce.distortion.to_string())
        .with("tree_sha256", sha256_hex(json.as_bytes()))
        .with("tree_written", out.map(|p| p.display().to_string()));
    if let Some(k) = &ce.construction {
        result = result.with(
            "parameters",
            Obj::new()
                .with("m", k.m)
                .with("z0", k.z0)
                .with("a", k.a)
                .with("b", k.b)
                .with("c", k.c)
                .with("d", k.d)
                .with("n", k.n),
        );
    }
    let expected_verdict = default_expectation(consistency.property);
    let result = result
        .with("values", values)
        .with("all_match", all_ok)
        .with(
            "consistency",
            consistency_value(consistency, expected_verdict),
        );
    let met = all_ok && consistency.verdict == expected_verdict;
    Ok((envelope("repro", args, &sha256_hex(b""), result), met))
}

fn run(cli: Cli) -> Result<(Value, bool)> {
    match cli.command {
        Command::Evaluate { target, distortion } => {
            let psi = parse_distortion(&distortion)?;
            with_target(
                "evaluate",
                &target,
                Obj::new().with("distortion", distortion.as_str()),
                |tree| {
                    let x = tree.payoff(&target.payoff)?;
                    let v = risk::choquet(&tree.space, x, target.t, &psi)?;
                    Ok(Obj::new()
                        .with("distortion", psi.to_string())
                        .with("cells", cells(&v)))
                },
            )
        }
        Command::Quantile {
            target,
            alpha,
            side,
        } => {
            let name = match side {
                Side::Upper => "upper",
                Side::Lower => "lower",
            };
            with_target(
                "quantile",
                &target,
                Obj::new().with("alpha", alpha).with("side", name),
                |tree| {
                    let x = tree.payoff(&target.payoff)?;
                    let v = match side {
                        Side::Upper => risk::quantile_upper(&tree.space, x, target.t, alpha)?,
                        Side::Lower => risk::quantile_lower(&tree.space, x, target.t, alpha)?,
                    };
                    Ok(Obj::new().with("cells", cells(&v)))
                },
            )
        }
        Command::Var { target, alpha } => {
            with_target("var", &target, Obj::new().with("alpha", alpha), |tree| {
                let x = tree.payoff(&target.payoff)?;
                Ok(Obj::new().with("cells", cells(&risk::var(&tree.space, x, target.t, alpha)?)))
            })
        }
        Command::Avar { target, alpha } => {
            with_target("avar", &target, Obj::new().with("alpha", alpha), |tree| {
                let x = tree.payoff(&target.payoff)?;
                let step = risk::avar(&tree.space, x, target.t, alpha)?;
                let dual = risk::avar_robust(&tree.space, x, target.t, alpha)?;
                Ok(Obj::new()
                    .with("cells", cells(&step))
                    .with("dual_form", cells(&dual))
                    .with("max_form_difference", step.max_abs_diff(&dual)))
            })
        }
        Command::Dwvar { target, mu } => {
            let measure = parse_measure(&mu)?;
            with_target(
                "dwvar",
                &target,
                Obj::new().with("mu", mu.as_str()),
                |tree| {
                    let x = tree.payoff(&target.payoff)?;
                    let v = risk::dwvar(&tree.space, x, target.t, &measure)?;
                    let q = risk::dwvar_quantile_form(&tree.space, x, target.t, &measure)?;
                    Ok(Obj::new()
                        .with("measure", measure.to_string())
                        .with("cells", cells(&v))
                        .with("quantile_form", cells(&q)))
                },
            )
        }
        Command::Dcai {
            target,
            family,
            x_max,
            tol,
        } => {
            let fam = parse_family(&family)?;
            let config = DcaiConfig {
                x_max,
                tol,
                ..DcaiConfig::default()
            };
            let extra = Obj::new()
                .with("family", family.as_str())
                .with("x_max", x_max)
                .with("tol", tol);
            with_target("dcai", &target, extra, |tree| {
                let x = tree.payoff(&target.payoff)?;
                let r = dcai(&tree.space, x, target.t, &fam, &config)?;
                let cells: Vec<Value> = r
                    .values
                    .iter()
                    .enumerate()
                    .map(|(c, v)| {
                        Obj::new()
                            .with("cell", c)
                            .with("value", v.finite().unwrap_or(f64::INFINITY))
                            .into()
                    })
                    .collect();
                Ok(Obj::new().with("family", fam.name()).with("cells", cells))
            })
        }
        Command::Check {
            tree,
            payoff,
            property,
            distortion,
            family,
            t,
            s,
            expect,
        } => run_check(
            &tree,
            &payoff,
            &property,
            distortion.as_deref(),
            family.as_deref(),
            t,
            s,
            expect.as_deref(),
        ),
        Command::Validate { tree } => {
            let bytes = fs::read(&tree).with_context(|| format!("reading {}", tree.display()))?;
            let text = std::str::from_utf8(&bytes)?;
            let doc = TreeDocument::parse(text)?;
            let outcome = doc.to_tree();
            let result = Obj::new()
                .with("valid", outcome.is_ok())
                .with("diagnostic", outcome.as_ref().err().map(|e| e.to_string()))
                .with("atoms", doc.atoms.len())
                .with("payoffs", doc.payoff_names());
            let args = Obj::new().with("tree", tree.display().to_string());
            Ok((
                envelope("validate", args, &sha256_hex(&bytes), result),
                outcome.is_ok(),
            ))
        }
        Command::Repro { which } => match which {
            Repro::Nonmiddle { out } => {
                let ce = build_nonmiddle_example()?;
                let probe = middle_rejection_probe(
                    &ce.space,
                    ce.payoff("X2").expect("built in"),
                    &ce.distortion,
                    0,
                    1,
                )?;
                repro_report(
                    &ce,
                    &probe,
                    Obj::new().with("construction", "nonmiddle"),
                    out.as_deref(),
                )
            }
            Repro::WeakaccPprime { a, out } => {
                let ce = build_weakacc_pprime(a)?;
                let check = check_weak_acceptance(
                    &ce.space,
                    ce.payoff("X").expect("built in"),
                    &ce.distortion,
                    0,
                    1,
                )?;
                let args = Obj::new()
                    .with("construction", "weakacc-pprime")
                    .with("a", a);
                repro_report(&ce, &check, args, out.as_deref())
            }
            Repro::WeakaccContinuous { mu, n, out } => {
                let measure = parse_measure(&mu)?;
                let ce = build_weakacc_continuous(&measure, n)?;
                let check = check_weak_acceptance(
                    &ce.space,
                    ce.payoff("X_shifted").expect("built in"),
                    &ce.distortion,
                    0,
                    1,
                )?;
                let args = Obj::new()
                    .with("construction", "weakacc-continuous")
                    .with("mu", mu.as_str())
                    .with("n", n);
                repro_report(&ce, &check, args, out.as_deref())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok((report, met)) => {
            print!("{}", render(&report));
            if met {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
