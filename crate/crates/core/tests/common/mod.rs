#![allow(dead_code)]

use dynrisk::random::rng_for;
use dynrisk::{AdaptedValue, FilteredSpace, RandomVariable};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn max_diff(a: &AdaptedValue, b: &AdaptedValue) -> f64 {
    a.max_abs_diff(b)
}

/// A random `F_t`-measurable variable with values in `[lo, hi)`.
pub fn random_adapted<R: Rng>(
    rng: &mut R,
    fs: &FilteredSpace,
    t: usize,
    lo: f64,
    hi: f64,
) -> RandomVariable {
    let cells = fs.n_cells(t).unwrap();
    let v = AdaptedValue {
        time: t,
        values: (0..cells).map(|_| rng.gen_range(lo..hi)).collect(),
    };
    fs.lift(&v).unwrap()
}

/// Tree truncated after time `t` (then fully revealed), once as is and once
/// with the atoms of every time-`t` cell shuffled; the payoff follows its
/// atom. Returns both spaces, the moved payoff and, for each time-`t` cell,
/// its index in the shuffled space.
pub fn shuffle_within_cells(
    fs: &FilteredSpace,
    x: &RandomVariable,
    t: usize,
    seed: u64,
) -> (FilteredSpace, FilteredSpace, RandomVariable, Vec<usize>) {
    let mut rng = rng_for(seed, 0);
    let n = fs.n_atoms();
    let mut to = (0..n).collect::<Vec<_>>();
    for c in 0..fs.n_cells(t).unwrap() {
        let cell = fs.cell(t, c).unwrap().to_vec();
        let mut targets = cell.clone();
        targets.shuffle(&mut rng);
        for (a, b) in cell.into_iter().zip(targets) {
            to[a] = b;
        }
    }
    let mut probs = vec![0.0; n];
    let mut values = vec![0.0; n];
    for a in 0..n {
        probs[to[a]] = fs.space().probability(a);
        values[to[a]] = x.values()[a];
    }
    // the shuffle keeps every cell up to time t; later information is replaced by full revelation
    let mut partitions: Vec<Vec<Vec<usize>>> =
        fs.filtration().to_raw().into_iter().take(t + 1).collect();
    partitions.push((0..n).map(|a| vec![a]).collect());
    let reference =
        FilteredSpace::from_raw(fs.space().probabilities().to_vec(), partitions.clone()).unwrap();
    let moved = FilteredSpace::from_raw(probs, partitions).unwrap();
    let partition = moved.filtration().partition(t).unwrap();
    let map = (0..fs.n_cells(t).unwrap())
        .map(|c| partition.cell_of(to[fs.cell(t, c).unwrap()[0]]))
        .collect();
    (reference, moved, RandomVariable::new(values).unwrap(), map)
}

pub fn binomial() -> FilteredSpace {
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

/// `sum_{j=2}^{n+1} C(n+1, j) y^j (1-y)^(n+1-j)`, the Beta(2, n) CDF.
pub fn beta2_cdf(y: f64, n: u32) -> f64 {
    let m = n + 1;
    let mut c = 1.0;
    let mut total = 0.0;
    for j in 0..=m {
        if j >= 2 {
            total += c * y.powi(j as i32) * (1.0 - y).powi((m - j) as i32);
        }
        c = c * (m - j) as f64 / (j + 1) as f64;
    }
    total
}
