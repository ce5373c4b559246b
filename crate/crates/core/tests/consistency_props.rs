use dynrisk::consistency::{
    build_nonmiddle_example, build_weakacc_continuous, build_weakacc_pprime,
    check_nonweak1_inequality, check_submartingale, check_super_strict_failure,
    check_weak_acceptance, continuous_parameters, convergence_study, evaluate_named,
    middle_rejection_probe, Property, Provenance, Verdict,
};
use dynrisk::exec::Mode;
use dynrisk::random::fixtures;
use dynrisk::{Distortion, DistortionMeasure, RandomVariable};

#[test]
fn nonmiddle_is_not_strongly_time_consistent() {
    let ce = build_nonmiddle_example().unwrap();
    let x1 = evaluate_named(&ce, "X2", 1).unwrap();
    let y1 = evaluate_named(&ce, "Y", 1).unwrap();
    assert!(x1.max_abs_diff(&y1) <= 1e-15);
    let x0 = evaluate_named(&ce, "X2", 0).unwrap();
    let y0 = evaluate_named(&ce, "Y", 0).unwrap();
    assert!(y0.values[0] - x0.values[0] > 0.05, "{x0:?} {y0:?}");
    assert!(ce
        .expected
        .iter()
        .all(|e| e.provenance == Provenance::Published));
}

#[test]
fn every_counterexample_self_verifies() {
    let mut all = vec![build_nonmiddle_example().unwrap()];
    for a in [1.5, 2.0, 3.0, 5.0, 10.0] {
        all.push(build_weakacc_pprime(a).unwrap());
    }
    all.push(build_weakacc_continuous(&DistortionMeasure::dirac(0.5).unwrap(), 2000).unwrap());
    all.push(
        build_weakacc_continuous(
            &DistortionMeasure::new(vec![0.3, 0.8], vec![0.5, 0.5]).unwrap(),
            4000,
        )
        .unwrap(),
    );
    for ce in all {
        assert!(ce.self_check().unwrap().iter().all(|c| c.ok), "{}", ce.name);
    }
}

#[test]
fn pprime_weak_acceptance_is_violated() {
    for a in [1.5, 2.0, 7.0] {
        let ce = build_weakacc_pprime(a).unwrap();
        let r = check_weak_acceptance(&ce.space, ce.payoff("X").unwrap(), &ce.distortion, 0, 1)
            .unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.property, Property::WeakAcceptance);
        assert!(!r.witnesses.is_empty());
    }
}

#[test]
fn shifted_uniform_payoff_is_a_counterexample() {
    for mu in [
        DistortionMeasure::dirac(0.5).unwrap(),
        DistortionMeasure::new(vec![0.3, 0.8], vec![0.5, 0.5]).unwrap(),
    ] {
        let ce = build_weakacc_continuous(&mu, 4000).unwrap();
        let r = check_weak_acceptance(
            &ce.space,
            ce.payoff("X_shifted").unwrap(),
            &ce.distortion,
            0,
            1,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Violated, "{mu}");
    }
}

#[test]
fn builder_preconditions() {
    assert!(build_weakacc_pprime(1.0).is_err());
    assert!(build_weakacc_pprime(f64::NAN).is_err());
    assert!(build_weakacc_continuous(&DistortionMeasure::p_prime(3.0).unwrap(), 100).is_err());
    assert!(build_weakacc_continuous(&DistortionMeasure::dirac(0.5).unwrap(), 1).is_err());
    assert!(continuous_parameters(&DistortionMeasure::dirac(1.0).unwrap()).is_err());
}

#[test]
fn discretization_error_is_first_order() {
    let mu = DistortionMeasure::dirac(0.5).unwrap();
    let study = convergence_study(&mu, &[1000, 2000, 4000, 8000]).unwrap();
    for r in &study.ratios {
        assert!((2.0 / 1.5..=3.0).contains(r), "{study:?}");
    }
    for p in &study.points {
        assert!(p.error <= study.fitted_constant / p.n as f64 * (1.0 + 1e-12));
    }
}

#[test]
fn pprime_boundary_values() {
    let r = check_nonweak1_inequality(&DistortionMeasure::p_prime(3.0).unwrap());
    assert_eq!(r.p_prime, Some(3.0));
    assert!(r.ok && r.value.abs() <= 1e-12);
    let r = check_nonweak1_inequality(&DistortionMeasure::dirac(0.5).unwrap());
    assert!(r.p_prime.is_none());
    assert!((r.value + 0.25).abs() <= 1e-15);
}

#[test]
fn identity_is_a_martingale() {
    for f in fixtures(51, 100, Mode::Parallel) {
        let h = f.space.horizon();
        for t in 0..h {
            let r = check_submartingale(&f.space, &f.x, &Distortion::Identity, t, h).unwrap();
            assert!(r.cells.iter().all(|c| c.margin.abs() <= 1e-12));
        }
        assert!(check_super_strict_failure(&f.space, &f.x, &Distortion::Identity, 0).is_err());
    }
}

#[test]
fn minvar_strict_margins_are_positive() {
    let psi = Distortion::minvar(2.0).unwrap();
    for f in fixtures(52, 200, Mode::Parallel) {
        for t in 0..=f.space.horizon() {
            let r = check_super_strict_failure(&f.space, &f.x, &psi, t).unwrap();
            assert!(r.holds());
            for c in &r.cells {
                assert!(if c.applicable {
                    c.margin > 0.0
                } else {
                    c.margin.abs() <= 1e-12
                });
            }
        }
    }
}

#[test]
fn middle_rejection_holds_for_the_mean() {
    let ce = build_nonmiddle_example().unwrap();
    let x = ce.payoff("X2").unwrap();
    assert!(
        middle_rejection_probe(&ce.space, x, &Distortion::Identity, 0, 1)
            .unwrap()
            .holds()
    );
}

#[test]
fn time_order_is_enforced() {
    let ce = build_nonmiddle_example().unwrap();
    let x: &RandomVariable = ce.payoff("X2").unwrap();
    assert!(check_submartingale(&ce.space, x, &ce.distortion, 2, 1).is_err());
    assert!(check_weak_acceptance(&ce.space, x, &ce.distortion, 1, 1).is_err());
    assert!(middle_rejection_probe(&ce.space, x, &ce.distortion, 1, 0).is_err());
}

#[test]
fn names_parse_back() {
    for p in Property::ALL {
        assert_eq!(p.as_str().parse::<Property>().unwrap(), p);
    }
    assert!("sometimes".parse::<Verdict>().is_err());
}
