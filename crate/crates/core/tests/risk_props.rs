mod common;

use dynrisk::random::{random_distortion, random_fixture, random_measure, rng_for, DistortionKind};
use dynrisk::risk::{
    avar, avar_maximizer, choquet, choquet_dist, dwvar, dwvar_quantile_form, quantile_lower,
    quantile_upper, var, MeasureSpec, RiskQuery,
};
use dynrisk::{DiscreteDistribution, Distortion, RandomVariable};
use proptest::prelude::*;

use common::shuffle_within_cells;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 300,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// `-(int_0^inf (1 - psi(F(y))) dy - int_-inf^0 psi(F(y)) dy)` for a step CDF,
/// integrated exactly between breakpoints.
fn half_line_integral(d: &DiscreteDistribution, psi: &Distortion) -> f64 {
    let mut points: Vec<f64> = d.support().to_vec();
    points.push(0.0);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let cdf = |y: f64| -> f64 {
        d.support()
            .iter()
            .zip(d.weights())
            .filter(|(s, _)| **s <= y)
            .map(|(_, w)| w)
            .sum::<f64>()
            .min(1.0)
    };
    let mut positive = 0.0;
    let mut negative = 0.0;
    for w in points.windows(2) {
        let g = psi.eval(cdf(w[0])).unwrap();
        if w[0] >= 0.0 {
            positive += (1.0 - g) * (w[1] - w[0]);
        } else {
            negative += g * (w[1] - w[0]);
        }
    }
    -(positive - negative)
}

/// Kinds whose derivative stays bounded near 0.
const BOUNDED_SLOPE: [DistortionKind; 2] = [DistortionKind::MinVar, DistortionKind::MaxMinVar];

proptest! {
    #![proptest_config(config())]

    #[test]
    fn sorted_sum_matches_half_line_integral(seed in any::<u64>(), k in 0usize..2) {
        let mut rng = rng_for(seed, 0);
        let f = random_fixture(&mut rng);
        let psi = random_distortion(&mut rng, BOUNDED_SLOPE[k]);
        for t in 0..=f.space.horizon() {
            let rho = choquet(&f.space, &f.x, t, &psi).unwrap();
            for (c, d) in f.space.conditional_distributions(&f.x, t).unwrap().iter().enumerate() {
                prop_assert!((rho.values[c] - half_line_integral(d, &psi)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn quantile_duality(seed in any::<u64>(), alpha in 0.01f64..0.99) {
        let f = random_fixture(&mut rng_for(seed, 0));
        let neg = f.x.neg();
        for t in 0..=f.space.horizon() {
            let up = quantile_upper(&f.space, &f.x, t, alpha).unwrap();
            let low = quantile_lower(&f.space, &neg, t, 1.0 - alpha).unwrap();
            let low_same = quantile_lower(&f.space, &f.x, t, alpha).unwrap();
            let v = var(&f.space, &f.x, t, alpha).unwrap();
            for c in 0..up.len() {
                prop_assert_eq!(up.values[c], -low.values[c]);
                prop_assert!(low_same.values[c] <= up.values[c]);
                prop_assert_eq!(v.values[c], -up.values[c]);
            }
        }
    }

    #[test]
    fn comonotone_additivity(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = rng_for(seed, 0);
        let f = random_fixture(&mut rng);
        let psi = random_distortion(&mut rng, DistortionKind::ALL[k]);
        let x = f.x.map(|z| z.powi(3) / 10.0);
        let y = f.x.map(|z| if z > 0.0 { 2.0 * z } else { z.floor() });
        let sum = x.zip_with(&y, |a, b| a + b);
        for t in 0..=f.space.horizon() {
            let rx = choquet(&f.space, &x, t, &psi).unwrap();
            let ry = choquet(&f.space, &y, t, &psi).unwrap();
            let rs = choquet(&f.space, &sum, t, &psi).unwrap();
            for c in 0..rs.len() {
                prop_assert!((rs.values[c] - rx.values[c] - ry.values[c]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn law_invariance_is_exact(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = rng_for(seed, 0);
        let f = random_fixture(&mut rng);
        let psi = random_distortion(&mut rng, DistortionKind::ALL[k]);
        for t in 0..=f.space.horizon() {
            let (reference, moved, xm, map) = shuffle_within_cells(&f.space, &f.x, t, seed);
            let before = choquet(&reference, &f.x, t, &psi).unwrap();
            let after = choquet(&moved, &xm, t, &psi).unwrap();
            for (c, &moved_cell) in map.iter().enumerate() {
                prop_assert_eq!(before.values[c], after.values[moved_cell]);
            }
        }
    }

    #[test]
    fn weighted_var_two_forms(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let f = random_fixture(&mut rng);
        let mu = random_measure(&mut rng, 5);
        for t in 0..=f.space.horizon() {
            let a = dwvar(&f.space, &f.x, t, &mu).unwrap();
            let b = dwvar_quantile_form(&f.space, &f.x, t, &mu).unwrap();
            prop_assert!(a.max_abs_diff(&b) <= 1e-12);
        }
    }

    #[test]
    fn avar_maximizer_is_a_density(seed in any::<u64>(), alpha in 0.05f64..1.0) {
        let f = random_fixture(&mut rng_for(seed, 0));
        for t in 0..=f.space.horizon() {
            let z = avar_maximizer(&f.space, &f.x, t, alpha).unwrap();
            prop_assert!(z.values().iter().all(|&v| v >= -1e-12 && v <= 1.0 / alpha + 1e-12));
            let mean = f.space.conditional_expectation(&z, t).unwrap();
            prop_assert!(mean.values.iter().all(|m| (m - 1.0).abs() <= 1e-12));
        }
    }

    #[test]
    fn avar_is_monotone_in_level(seed in any::<u64>()) {
        let f = random_fixture(&mut rng_for(seed, 0));
        for t in 0..=f.space.horizon() {
            let levels = [0.05, 0.2, 0.5, 0.8, 1.0];
            let values: Vec<_> = levels.iter().map(|&a| avar(&f.space, &f.x, t, a).unwrap()).collect();
            for w in values.windows(2) {
                for c in 0..w[0].len() {
                    prop_assert!(w[0].values[c] >= w[1].values[c] - 1e-12);
                }
            }
            let mean = f.space.conditional_expectation(&f.x, t).unwrap();
            prop_assert!(values[4].values.iter().zip(&mean.values).all(|(a, m)| (a + m).abs() <= 1e-12));
        }
    }
}

#[test]
fn queries_dispatch_to_the_right_evaluator() {
    let fs = common::binomial();
    let x = RandomVariable::new(vec![3.0, 1.0, -1.0, -2.0]).unwrap();
    let q = |measure| RiskQuery {
        payoff: x.clone(),
        time: 1,
        measure,
    };
    let psi = Distortion::minvar(1.0).unwrap();
    assert_eq!(
        q(MeasureSpec::Distortion(psi.clone()))
            .evaluate(&fs)
            .unwrap(),
        choquet(&fs, &x, 1, &psi).unwrap()
    );
    assert_eq!(
        q(MeasureSpec::Level(0.5)).evaluate(&fs).unwrap().values,
        vec![-1.0, 2.0]
    );
}

#[test]
fn identity_is_minus_the_mean() {
    let d = DiscreteDistribution::new(vec![-1.0, 2.0, 4.0], vec![0.25, 0.25, 0.5]).unwrap();
    assert!((choquet_dist(&d, &Distortion::Identity) + d.mean()).abs() <= 1e-15);
}

#[test]
fn levels_outside_the_unit_interval_fail() {
    let fs = common::binomial();
    let x = RandomVariable::constant(4, 1.0);
    assert!(quantile_upper(&fs, &x, 0, 0.0).is_err());
    assert!(quantile_upper(&fs, &x, 0, 1.0).is_err());
    assert!(avar(&fs, &x, 0, 0.0).is_err());
    assert!(avar(&fs, &x, 0, 1.0).is_ok());
    assert!(choquet(&fs, &x, 3, &Distortion::Identity).is_err());
}
