//! Seeded random fixtures: small filtered spaces, payoffs, regular
//! distortions and finitely supported weighting measures.
//!
//! Fixture `i` of a sweep is drawn from its own ChaCha stream, so a sweep
//! produces the same fixtures whether it is generated sequentially or in
//! parallel.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distortion::{Distortion, DistortionMeasure};
use crate::exec::{self, Mode};
use crate::space::{FilteredSpace, RandomVariable};

pub const MAX_ATOMS: usize = 12;
pub const MAX_HORIZON: usize = 3;

/// The parametric regular kinds used in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistortionKind {
    PropHazard,
    MinVar,
    MaxVar,
    MaxMinVar,
    MinMaxVar,
}

impl DistortionKind {
    pub const ALL: [DistortionKind; 5] = [
        DistortionKind::PropHazard,
        DistortionKind::MinVar,
        DistortionKind::MaxVar,
        DistortionKind::MaxMinVar,
        DistortionKind::MinMaxVar,
    ];
}

/// A filtered space with two payoffs on it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub space: FilteredSpace,
    pub x: RandomVariable,
    pub y: RandomVariable,
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn split_cell<R: Rng>(rng: &mut R, cell: &[usize]) -> Vec<Vec<usize>> {
    let parts = rng.gen_range(1..=cell.len().min(3));
    let mut atoms = cell.to_vec();
    atoms.shuffle(rng);
    let mut out = vec![Vec::new(); parts];
    for (i, a) in atoms.into_iter().enumerate() {
        let p = if i < parts {
            i
        } else {
            rng.gen_range(0..parts)
        };
        out[p].push(a);
    }
    for part in &mut out {
        part.sort_unstable();
    }
    out
}

/// Random tree with `2..=max_atoms` atoms and horizon `1..=max_horizon`.
pub fn random_filtered_space<R: Rng>(
    rng: &mut R,
    max_atoms: usize,
    max_horizon: usize,
) -> FilteredSpace {
    let n = rng.gen_range(2..=max_atoms.max(2));
    let horizon = rng.gen_range(1..=max_horizon.max(1));
    let probs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = probs.iter().sum();
    let probs = probs.into_iter().map(|p| p / total).collect();

    let mut partitions = vec![vec![(0..n).collect::<Vec<_>>()]];
    for _ in 1..horizon {
        let prev = partitions.last().unwrap();
        let next = prev.iter().flat_map(|c| split_cell(rng, c)).collect();
        partitions.push(next);
    }
    partitions.push((0..n).map(|a| vec![a]).collect());
    FilteredSpace::from_raw(probs, partitions).expect("generated tree is valid")
}

/// Payoff values: a mix of small integers (so ties occur) and reals.
pub fn random_payoff<R: Rng>(rng: &mut R, n: usize) -> RandomVariable {
    let integer = rng.gen_bool(0.3);
    let values = (0..n)
        .map(|_| {
            if integer {
                rng.gen_range(-3i32..=3) as f64
            } else {
                rng.gen_range(-5.0..5.0)
            }
        })
        .collect();
    RandomVariable::new(values).expect("finite values")
}

pub fn random_fixture<R: Rng>(rng: &mut R) -> Fixture {
    let space = random_filtered_space(rng, MAX_ATOMS, MAX_HORIZON);
    let n = space.n_atoms();
    let x = random_payoff(rng, n);
    let y = random_payoff(rng, n);
    Fixture { space, x, y }
}

/// `count` fixtures, fixture `i` drawn from stream `i` of `seed`.
pub fn fixtures(seed: u64, count: usize, mode: Mode) -> Vec<Fixture> {
    exec::map_indexed(mode, count, |i| {
        random_fixture(&mut rng_for(seed, i as u64))
    })
}

pub fn random_distortion<R: Rng>(rng: &mut R, kind: DistortionKind) -> Distortion {
    match kind {
        DistortionKind::PropHazard => Distortion::PropHazard {
            gamma: rng.gen_range(0.05..1.0),
        },
        DistortionKind::MinVar => Distortion::MinVar {
            x: rng.gen_range(0.05..6.0),
        },
        DistortionKind::MaxVar => Distortion::MaxVar {
            x: rng.gen_range(0.05..6.0),
        },
        DistortionKind::MaxMinVar => Distortion::MaxMinVar {
            x: rng.gen_range(0.05..6.0),
        },
        DistortionKind::MinMaxVar => Distortion::MinMaxVar {
            x: rng.gen_range(0.05..6.0),
        },
    }
}

/// Random measure on `(0, 1]` with `1..=max_atoms` atoms; one atom sits at
/// 1 about a third of the time.
pub fn random_measure<R: Rng>(rng: &mut R, max_atoms: usize) -> DistortionMeasure {
    let k = rng.gen_range(1..=max_atoms.max(1));
    let mut atoms: Vec<(f64, f64)> = (0..k)
        .map(|_| (rng.gen_range(0.01..1.0), rng.gen_range(0.05..1.0)))
        .collect();
    if rng.gen_bool(1.0 / 3.0) {
        atoms[0].0 = 1.0;
    }
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    atoms.dedup_by(|a, b| a.0 == b.0);
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    let atoms = atoms.into_iter().map(|(s, w)| (s, w / total)).collect();
    DistortionMeasure::from_atoms(atoms).expect("generated measure is valid")
}
