//! One-line textual descriptors for distortions, weighting measures and
//! distortion families.
//!
//! ```text
//! distortion := identity
//!             | prop_hazard:G | minvar:X | maxvar:X | maxminvar:X | minmaxvar:X
//!             | pprime:A | avar:ALPHA | measure:PAIRS
//! measure    := measure:PAIRS | avar:ALPHA | pprime:A | PAIRS
//! PAIRS      := S,W ( ; S,W )*
//! family     := family:minvar | family:maxvar | family:maxminvar | family:minmaxvar
//! ```

use crate::distortion::{Distortion, DistortionFamily, DistortionMeasure};
use crate::error::{Error, Result};

fn number(field: &str, text: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{field}: `{text}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{field}: `{text}` is not finite")));
    }
    Ok(v)
}

fn pairs(text: &str) -> Result<DistortionMeasure> {
    let mut atoms = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (s, w) = item
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("measure atom `{item}` is not of the form s,w")))?;
        atoms.push((number("support point", s)?, number("weight", w)?));
    }
    if atoms.is_empty() {
        return Err(Error::Parse("measure has no atoms".into()));
    }
    DistortionMeasure::from_atoms(atoms)
}

fn split(spec: &str) -> (&str, Option<&str>) {
    match spec.trim().split_once(':') {
        Some((head, arg)) => (head.trim(), Some(arg.trim())),
        None => (spec.trim(), None),
    }
}

fn required<'a>(head: &str, arg: Option<&'a str>) -> Result<&'a str> {
    arg.filter(|a| !a.is_empty())
        .ok_or_else(|| Error::Parse(format!("`{head}` needs an argument, as in `{head}:1`")))
}

/// Parses a weighting measure.
pub fn parse_measure(spec: &str) -> Result<DistortionMeasure> {
    match split(spec) {
        ("measure", arg) => pairs(required("measure", arg)?),
        ("avar", arg) => DistortionMeasure::dirac(number("avar level", required("avar", arg)?)?),
        ("pprime", arg) => {
            DistortionMeasure::p_prime(number("pprime parameter", required("pprime", arg)?)?)
        }
        (head, None) if head.contains(',') => pairs(head),
        _ => Err(Error::Parse(format!(
            "unrecognized measure descriptor `{}`",
            spec.trim()
        ))),
    }
}

/// Parses a distortion.
pub fn parse_distortion(spec: &str) -> Result<Distortion> {
    let (head, arg) = split(spec);
    let param =
        |name: &str| -> Result<f64> { number(&format!("{name} parameter"), required(name, arg)?) };
    match head {
        "identity" if arg.is_none() => Ok(Distortion::Identity),
        "prop_hazard" => Distortion::prop_hazard(param("prop_hazard")?),
        "minvar" => Distortion::minvar(param("minvar")?),
        "maxvar" => Distortion::maxvar(param("maxvar")?),
        "maxminvar" => Distortion::maxminvar(param("maxminvar")?),
        "minmaxvar" => Distortion::minmaxvar(param("minmaxvar")?),
        "pprime" | "avar" | "measure" => Ok(Distortion::from_measure(&parse_measure(spec)?)),
        _ => Err(Error::Parse(format!(
            "unrecognized distortion descriptor `{}`",
            spec.trim()
        ))),
    }
}

/// Parses a distortion family.
pub fn parse_family(spec: &str) -> Result<DistortionFamily> {
    match split(spec) {
        ("family", Some("minvar")) => Ok(DistortionFamily::minvar()),
        ("family", Some("maxvar")) => Ok(DistortionFamily::maxvar()),
        ("family", Some("maxminvar")) => Ok(DistortionFamily::maxminvar()),
        ("family", Some("minmaxvar")) => Ok(DistortionFamily::minmaxvar()),
        _ => Err(Error::Parse(format!(
            "unrecognized family descriptor `{}` (expected family:minvar, family:maxvar, family:maxminvar or family:minmaxvar)",
            spec.trim()
        ))),
    }
}
