//! Predictive densities and conflict P-values against Monte-Carlo and
//! enumeration oracles.

use proptest::prelude::*;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Binomial, Distribution, Normal, StudentT};

use priorinfo::conflict::{
    adjusted_density, conditional_conflict_pvalue, conflict_pvalue, conflict_pvalue_with, predictive_density, ConflictOptions,
    Lattice, Method, MethodChoice, Predictive,
};
use priorinfo::discretescan::{extreme_total_mass, Factor, LogisticFamily};
use priorinfo::distmath::tie_key;
use priorinfo::modelprior::{
    validate, volume_factor, Ancillary, LogisticDesign, PriorSpec, SampleSize, SamplingModel, SufficientStat,
};

mod common;
use common::{compositions, multinomial_oracle_pmf, oracle_pvalues};

fn lattice(model: &SamplingModel, prior: &PriorSpec) -> Lattice {
    match Predictive::new(model, prior).unwrap() {
        Predictive::Lattice(l) => l,
        other => panic!("expected a lattice, got {other:?}"),
    }
}

fn counts(v: &[u64]) -> SufficientStat {
    SufficientStat::Counts(v.to_vec())
}

#[test]
fn beta_binomial_pmf_matches_monte_carlo() {
    let model = SamplingModel::Binomial { n: SampleSize::Finite(20) };
    let prior = PriorSpec::beta(6.0, 6.0).unwrap();
    let m = predictive_density(&model, &prior, &counts(&[10])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let theta = Beta::new(6.0, 6.0).unwrap();
    let draws = 1_000_000;
    let hits = (0..draws)
        .filter(|_| Binomial::new(20, theta.sample(&mut rng)).unwrap().sample(&mut rng) == 10)
        .count();
    let p = hits as f64 / draws as f64;
    let se = (p * (1.0 - p) / draws as f64).sqrt();
    assert!((m - p).abs() < 3.0 * se, "pmf {m} vs MC {p} +- {se}");
    for t in 0..=20u64 {
        let a = predictive_density(&model, &prior, &counts(&[t])).unwrap();
        let b = predictive_density(&model, &prior, &counts(&[20 - t])).unwrap();
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn location_normal_pvalue_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 15u64;
    let model = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(n) };
    for _ in 0..20 {
        let sigma: f64 = rng.random_range(0.2..3.0);
        let mu0: f64 = rng.random_range(-1.0..1.0);
        let sd = (1.0 / n as f64 + sigma * sigma).sqrt();
        let t0 = mu0 + sd * rng.random_range(-3.0..3.0);
        let prior = PriorSpec::normal1(mu0, sigma * sigma).unwrap();
        let r = conflict_pvalue(&model, &prior, &SufficientStat::scalar(t0)).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert!(r.mc_stderr.is_none());
        let pred = Normal::new(mu0, sd).unwrap();
        let draws = 100_000;
        let hits = (0..draws).filter(|_| (pred.sample(&mut rng) - mu0).abs() >= (t0 - mu0).abs()).count();
        let p = hits as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt().max(1e-6);
        assert!((r.pvalue - p).abs() < 3.0 * se, "closed form {} vs MC {p} +- {se}", r.pvalue);
    }
}

#[test]
fn pvalue_is_one_at_the_mode() {
    let model = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(4) };
    let prior = PriorSpec::normal1(0.7, 2.0).unwrap();
    assert_eq!(conflict_pvalue(&model, &prior, &SufficientStat::scalar(0.7)).unwrap().pvalue, 1.0);
    let d = predictive_density(&model, &prior, &SufficientStat::scalar(0.7)).unwrap();
    let want = (2.0 * std::f64::consts::PI * (0.25 + 2.0)).powf(-0.5);
    assert!((d - want).abs() < 1e-14);
}

#[test]
fn monte_carlo_method_reports_stderr() {
    let model = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(4) };
    let prior = PriorSpec::normal1(0.0, 1.0).unwrap();
    let opts = ConflictOptions { method: MethodChoice::MonteCarlo, mc_samples: 20_000, seed: 3, ..Default::default() };
    let r = conflict_pvalue_with(&model, &prior, &SufficientStat::scalar(1.5), &opts).unwrap();
    assert!(matches!(r.method, Method::MonteCarlo { samples: 20_000, seed: 3 }));
    let se = r.mc_stderr.unwrap();
    let exact = conflict_pvalue(&model, &prior, &SufficientStat::scalar(1.5)).unwrap().pvalue;
    assert!((r.pvalue - exact).abs() < 4.0 * se);
    let again = conflict_pvalue_with(&model, &prior, &SufficientStat::scalar(1.5), &opts).unwrap();
    assert_eq!(r, again);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Lattice P-values are cumulative masses, 1 at the mode and ordered like
    /// the pmf.
    #[test]
    fn binomial_ladder_structure(n in 1u64..40, a in 0.2f64..20.0, b in 0.2f64..20.0) {
        let model = SamplingModel::Binomial { n: SampleSize::Finite(n) };
        let l = lattice(&model, &PriorSpec::beta(a, b).unwrap());
        prop_assert!((l.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let ladder = l.ladder();
        let top = l.pmf.iter().copied().fold(0.0, f64::max);
        for i in 0..l.len() {
            if tie_key(l.pmf[i]) == tie_key(top) {
                prop_assert!((ladder[i] - 1.0).abs() < 1e-10);
            }
            for j in 0..l.len() {
                if tie_key(l.pmf[i]) < tie_key(l.pmf[j]) {
                    prop_assert!(ladder[i] <= ladder[j]);
                }
            }
        }
    }

    #[test]
    fn multinomial_normalizes(n in 1u64..25, a in 0.3f64..30.0, b in 0.3f64..30.0) {
        let model = SamplingModel::ShiftedMultinomial { n };
        let l = lattice(&model, &PriorSpec::beta_symmetric(a, b).unwrap());
        prop_assert!((l.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn scale_normal_volume_identity(t in 1e-6f64..1e4, n in 1u64..500) {
        let model = SamplingModel::ScaleNormal { n: SampleSize::Finite(n) };
        let f = volume_factor(&model, &SufficientStat::scalar(t)).unwrap();
        prop_assert!((f * f * n as f64 / 4.0 - t).abs() <= 1e-12 * t);
    }
}

#[test]
fn volume_factor_table() {
    let sn = SamplingModel::ScaleNormal { n: SampleSize::Finite(20) };
    assert_eq!(volume_factor(&sn, &SufficientStat::scalar(5.0)).unwrap(), 1.0);
    assert!((volume_factor(&sn, &SufficientStat::scalar(1.25)).unwrap() - 0.5).abs() < 1e-15);
    assert!(volume_factor(&sn, &SufficientStat::scalar(0.0)).is_err());
    let ln = SamplingModel::LocationNormal { k: 2, n: SampleSize::Finite(3) };
    assert_eq!(volume_factor(&ln, &SufficientStat::Real(vec![0.3, -4.0])).unwrap(), 1.0);
    let prior = PriorSpec::gamma_rate(3.0, 2.0).unwrap();
    for t in [0.1, 0.8, 3.0] {
        let m = predictive_density(&sn, &prior, &SufficientStat::scalar(t)).unwrap();
        let ms = adjusted_density(&sn, &prior, &SufficientStat::scalar(t)).unwrap();
        assert!((ms - m * (4.0 * t / 20.0).sqrt()).abs() <= 1e-14 * ms);
    }
}

#[test]
fn limiting_scale_kernel_mode() {
    let model = SamplingModel::ScaleNormal { n: SampleSize::Infinite };
    let (alpha, beta) = (2.5, 1.8);
    let prior = PriorSpec::gamma_rate(alpha, beta).unwrap();
    let grid: Vec<f64> = (1..4000).map(|i| 0.001 * i as f64).collect();
    let dens: Vec<f64> = grid.iter().map(|&t| adjusted_density(&model, &prior, &SufficientStat::scalar(t)).unwrap()).collect();
    let imax = (0..grid.len()).max_by(|&a, &b| dens[a].total_cmp(&dens[b])).unwrap();
    assert!((grid[imax] - beta / (alpha + 0.5)).abs() <= 0.001);
}

#[test]
fn unsupported_pairs_are_rejected() {
    let sn = SamplingModel::ScaleNormal { n: SampleSize::Finite(5) };
    let err = validate(&sn, &PriorSpec::beta(1.0, 1.0).unwrap()).unwrap_err().to_string();
    assert!(err.contains("scale-normal") && err.contains("beta"), "{err}");
    let bin = SamplingModel::Binomial { n: SampleSize::Finite(5) };
    assert!(validate(&bin, &PriorSpec::beta(2.0, 1.0).unwrap()).is_ok());
    assert!(validate(&bin, &PriorSpec::beta_symmetric(2.0, 1.0).unwrap()).is_err());
    let lg = SamplingModel::Logistic(LogisticDesign::bioassay());
    let mixed = PriorSpec::product(vec![
        PriorSpec::normal1(0.0, 100.0).unwrap(),
        PriorSpec::student_t1(0.0, 6.25, 1.0).unwrap(),
    ])
    .unwrap();
    assert!(validate(&lg, &mixed).is_ok());
    assert!(PriorSpec::beta(0.0, 1.0).is_err());
    assert!(PriorSpec::normal1(0.0, -1.0).is_err());
}

/// Conditional pmf from the unconditional oracle, filtered on the ancillary
/// and renormalized.
fn conditional_oracle(n: u64, a: f64, b: f64, t0: [u64; 4], anc: Ancillary) -> f64 {
    let table: Vec<([u64; 4], f64)> =
        multinomial_oracle_pmf(n, a, b).into_iter().filter(|(t, _)| anc.value(t) == anc.value(&t0)).collect();
    let total: f64 = table.iter().map(|(_, m)| m).sum();
    let pmf: Vec<f64> = table.iter().map(|(_, m)| m / total).collect();
    let i = table.iter().position(|(t, _)| *t == t0).unwrap();
    oracle_pvalues(&pmf)[i]
}

#[test]
fn conditional_pvalues_match_joint_enumeration() {
    let n = 4;
    let model = SamplingModel::ShiftedMultinomial { n };
    for (a, b) in [(1.0, 1.0), (20.0, 20.0), (0.5, 3.0), (4.0, 1.5)] {
        let prior = PriorSpec::beta_symmetric(a, b).unwrap();
        for t0 in compositions(n) {
            for anc in Ancillary::ALL {
                let got = conditional_conflict_pvalue(&model, &prior, &counts(&t0), anc).unwrap().pvalue;
                let want = conditional_oracle(n, a, b, t0, anc);
                assert!((got - want).abs() < 1e-12, "{t0:?} {anc:?}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn degenerate_ancillary_leaves_the_other_pair() {
    let model = SamplingModel::ShiftedMultinomial { n: 6 };
    let prior = PriorSpec::beta_symmetric(3.0, 3.0).unwrap();
    // f1 + f2 = 0 pins f1, so only f3 out of f3 + f4 = 6 varies
    let l = priorinfo::conflict::conditional_lattice(&model, &prior, &[0, 0, 2, 4], Ancillary::U1).unwrap();
    assert_eq!(l.len(), 7);
    let got = conditional_conflict_pvalue(&model, &prior, &counts(&[0, 0, 2, 4]), Ancillary::U1).unwrap().pvalue;
    assert!((got - conditional_oracle(6, 3.0, 3.0, [0, 0, 2, 4], Ancillary::U1)).abs() < 1e-12);
}

fn sample_factor(f: Factor, sigma: f64, rng: &mut ChaCha8Rng) -> f64 {
    match f {
        Factor::Normal => sigma * rng.sample::<f64, _>(rand_distr::StandardNormal),
        Factor::StudentT(l) => sigma * StudentT::new(l).unwrap().sample(rng),
    }
}

#[test]
fn logistic_pmf_matches_monte_carlo() {
    let design = LogisticDesign::bioassay();
    let model = SamplingModel::Logistic(design.clone());
    let settings = [
        ("normal-normal", 10.0, 2.5),
        ("t-t", 10.0, 2.5),
        ("normal-t", 1.0, 0.7),
        ("t-normal", 3.0, 5.0),
        ("normal-normal", 0.4, 8.0),
    ];
    let draws = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (fam, s0, s1) in settings {
        let family: LogisticFamily = fam.parse().unwrap();
        let prior = family.prior(&design, s0, s1).unwrap();
        let l = lattice(&model, &prior);
        assert!((l.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-3);
        let mut hist = vec![0usize; l.len()];
        for _ in 0..draws {
            let b0 = sample_factor(family.intercept, s0, &mut rng);
            let b1 = sample_factor(family.slope, s1, &mut rng);
            let t: Vec<u64> = design
                .predictors()
                .iter()
                .zip(design.group_sizes())
                .map(|(x, &n)| {
                    let p = 1.0 / (1.0 + (-(b0 + b1 * x[0])).exp());
                    Binomial::new(n as u64, p).unwrap().sample(&mut rng)
                })
                .collect();
            hist[l.index_of(&t).unwrap()] += 1;
        }
        for t in [[0u64, 1, 3, 5], [0, 0, 0, 0], [5, 5, 5, 5], [2, 2, 3, 3], [0, 2, 4, 5]] {
            let i = l.index_of(&t).unwrap();
            let p = hist[i] as f64 / draws as f64;
            let se = (p * (1.0 - p) / draws as f64).sqrt().max(1.0 / draws as f64);
            assert!((l.pmf[i] - p).abs() < 3.5 * se, "{fam} ({s0}, {s1}) at {t:?}: {} vs MC {p} +- {se}", l.pmf[i]);
        }
    }
}

#[test]
fn diffuse_intercept_concentrates_on_extreme_totals() {
    let design = LogisticDesign::bioassay();
    let model = SamplingModel::Logistic(design.clone());
    let prior = LogisticFamily { intercept: Factor::Normal, slope: Factor::Normal }.prior(&design, 1e3, 2.5).unwrap();
    let mass = extreme_total_mass(&design, &lattice(&model, &prior)).unwrap();
    assert!(mass > 0.9, "extreme-total mass {mass}");
}
