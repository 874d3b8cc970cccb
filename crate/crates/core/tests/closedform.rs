//! Closed-form thresholds, calibration and the multivariate normal checks.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use priorinfo::closedform::{
    calibrate_normal, calibrate_t, kappa, kappa_ratio, mvn_conflict_mc, normal_conflict_prob, regression_compose,
    sigma0n, t_scale_check, tau_lambda_sq, GammaRateVerdict, Regime, RegressionDesign, RegressionPrior, ScaleVerdict,
};
use priorinfo::distmath::{chisq_quantile, Rng};
use priorinfo::modelprior::{PriorSpec, SampleSize, SamplingModel};
use priorinfo::weakinfo::{Comparison, UniformVerdict};

#[test]
fn kappa_is_the_supremum_of_the_quantile_ratio() {
    for lambda in [1.0, 2.0, 3.0, 5.0, 10.0, 50.0] {
        let sup = (1..=999).map(|i| kappa_ratio(lambda, i as f64 / 1000.0).unwrap()).fold(0.0, f64::max);
        let k = kappa(lambda).unwrap();
        assert!(sup <= k + 1e-12);
        assert!(k - sup < 1e-6, "lambda={lambda}: K={k} sup={sup}");
    }
}

#[test]
fn kappa_curve_is_increasing() {
    let ks: Vec<f64> = (0..=400).map(|i| kappa((-2.0 + 8.0 * i as f64 / 400.0).exp()).unwrap()).collect();
    assert!(ks.windows(2).all(|w| w[1] > w[0]));
    assert!(ks.windows(2).all(|w| w[1] - w[0] < 0.01), "no jumps");
    assert!(ks[ks.len() - 1] < 1.0);
    assert!((kappa(1.0).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn finite_n_threshold_gives_uniform_weak_informativity() {
    let base = PriorSpec::normal1(0.0, 1.0).unwrap();
    for n in [5u64, 20, 100] {
        let model = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(n) };
        for lambda in [1.0, 3.0] {
            let s0 = sigma0n(SampleSize::Finite(n), 1.0, lambda).unwrap();
            let above = PriorSpec::student_t1(0.0, 1.02 * s0, lambda).unwrap();
            let v = Comparison::new(&model, &base, &above).unwrap().uniform().unwrap().verdict;
            assert_eq!(v, UniformVerdict::UniformlyWi, "n={n} lambda={lambda}");
            let below = PriorSpec::student_t1(0.0, 0.9 * s0, lambda).unwrap();
            let v = Comparison::new(&model, &base, &below).unwrap().uniform().unwrap().verdict;
            assert!(!v.is_uniform(), "n={n} lambda={lambda}: {v:?}");
        }
    }
}

#[test]
fn normal_closed_form_matches_monte_carlo() {
    let (n, s1, s2, g) = (20u64, 1.0, 2.0, 0.05);
    let value = normal_conflict_prob(SampleSize::Finite(n), s1, s2, g).unwrap();
    assert!(value < g);
    let mut rng = ChaCha8Rng::seed_from_u64(616);
    let v1 = 1.0 / n as f64 + s1;
    let v2 = 1.0 / n as f64 + s2;
    let cut = chisq_quantile(1, 1.0 - g).unwrap();
    let t0 = Normal::new(0.0, v1.sqrt()).unwrap();
    let draws = 1_000_000;
    let hits = (0..draws).filter(|_| t0.sample(&mut rng).powi(2) / v2 >= cut).count();
    let p = hits as f64 / draws as f64;
    let se = (p * (1.0 - p) / draws as f64).sqrt();
    assert!((value - p).abs() < 3.0 * se, "{value} vs MC {p} +- {se}");
}

#[test]
fn doubled_covariance_reduces_conflicts() {
    let s1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]);
    let s2 = &s1 * 2.0;
    let mut rng = Rng::new(8);
    for g in [0.01, 0.05, 0.2] {
        let e = mvn_conflict_mc(&s1, &s2, g, SampleSize::Infinite, 100_000, &mut rng).unwrap();
        assert!(e.value + 3.0 * e.stderr < g, "gamma={g}: {e:?}");
    }
}

#[test]
fn calibration_recovers_the_target() {
    for n in [SampleSize::Finite(10), SampleSize::Infinite] {
        for p in [0.1, 0.5, 0.9] {
            let r = calibrate_normal(n, 1.5, 0.05, p).unwrap();
            let reduction = 1.0 - normal_conflict_prob(n, 1.5, r.parameter, 0.05).unwrap() / 0.05;
            assert!((reduction - p).abs() < 1e-8, "{n:?} p={p}: {reduction}");
        }
    }
    for p in [0.2, 0.5] {
        let n = SampleSize::Finite(20);
        let r = calibrate_t(n, 3.0, 1.0, 0.05, p).unwrap();
        assert_eq!(r.regime, Regime::FiniteN);
        let model = SamplingModel::LocationNormal { k: 1, n };
        let cmp = Comparison::new(&model, &PriorSpec::normal1(0.0, 1.0).unwrap(), &PriorSpec::student_t1(0.0, r.parameter, 3.0).unwrap())
            .unwrap();
        assert!((cmp.reduction(0.05).unwrap() - p).abs() < 1e-3);
    }
    let asym = calibrate_t(SampleSize::Infinite, 3.0, 2.0, 0.05, 0.5).unwrap();
    assert_eq!(asym.regime, Regime::Asymptotic);
    assert!((asym.ratio - 0.49604).abs() < 1e-4);
}

#[test]
fn multivariate_t_threshold() {
    let s1 = DMatrix::from_row_slice(2, 2, &[2.0, 0.4, 0.4, 1.0]);
    let lambda = 3.0;
    let tau = tau_lambda_sq(2, lambda).unwrap();
    assert_eq!(t_scale_check(&s1, &(&s1 * tau), lambda).unwrap(), ScaleVerdict::WiAsymptotic);
    assert_eq!(t_scale_check(&s1, &(&s1 * (0.9 * tau)), lambda).unwrap(), ScaleVerdict::NotCovered);
    assert!((tau_lambda_sq(3, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn regression_composition_cases() {
    let design = RegressionDesign { n: 40, k: 2 };
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 1.0]);
    let base = RegressionPrior { alpha: 2.0, tau: 5.0, sigma: sigma.clone(), lambda: f64::INFINITY };
    assert!(regression_compose(design, &base, &base).unwrap().both_wi());
    let lambda = 4.0;
    let tau = tau_lambda_sq(2, lambda).unwrap();
    let boundary = RegressionPrior { sigma: &sigma * tau, lambda, ..base.clone() };
    assert_eq!(regression_compose(design, &base, &boundary).unwrap().coefficients, ScaleVerdict::WiAsymptotic);
    let short = RegressionPrior { sigma: &sigma * (0.9 * tau), lambda, ..base.clone() };
    assert_eq!(regression_compose(design, &base, &short).unwrap().coefficients, ScaleVerdict::NotCovered);
    let off_line = RegressionPrior { alpha: 1.0, tau: 4.0, ..base.clone() };
    assert_eq!(regression_compose(design, &base, &off_line).unwrap().variance, GammaRateVerdict::ModeLineViolation);
    assert!(regression_compose(RegressionDesign { n: 2, k: 2 }, &base, &base).is_err());
}
