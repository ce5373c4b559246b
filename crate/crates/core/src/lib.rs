//! Dynamic coherent risk measures generated by distortion functions.
//!
//! Everything here works on a finite filtered probability space: a set of
//! atoms with strictly positive probabilities and a sequence of refining
//! partitions. On such a space all the quantities below are computed exactly
//! (no sampling, no quadrature):
//!
//! * conditional Choquet risk `rho_t^psi(X)` for regular distortions,
//! * conditional quantiles, VaR, AV@R (step integration and the dual
//!   maximizer form) and weighted VaR for finitely supported weights,
//! * dynamic coherent acceptability indices for increasing distortion
//!   families,
//! * time-consistency checks together with builders for the known
//!   counterexamples.
//!
//! Per-cell evaluation and fixture sweeps run on rayon when the `parallel`
//! feature is enabled (the default) and sequentially otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptability;
pub mod consistency;
pub mod descriptor;
pub mod distortion;
pub mod document;
pub mod error;
pub mod exec;
pub mod numeric;
pub mod random;
pub mod risk;
pub mod space;

pub use acceptability::{dcai, AcceptabilityIndex, AcceptabilityResult, DcaiConfig};
pub use distortion::{Distortion, DistortionFamily, DistortionMeasure, InducedMeasure};
pub use error::{Error, Result};
pub use space::{
    AdaptedValue, DiscreteDistribution, FilteredSpace, Filtration, RandomVariable, ScenarioSpace,
};
