//! Closed-form and semi-closed-form results for normal, t and gamma priors:
//! the normal-vs-normal probability, multivariate Monte-Carlo form, the t
//! threshold `K(lambda)`, its finite-`n` analogue, calibration formulas and
//! the checks for multivariate t and gamma-rate priors.

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::distmath::root::bisect;
use crate::distmath::special::ln_gamma;
use crate::distmath::{chisq_quantile, chisq_sf, f_quantile, QuadratureRule, Rng};
use crate::modelprior::{check_positive_definite, PriorSpec, SampleSize, SamplingModel};
use crate::weakinfo::Comparison;
use crate::{Error, Result};

/// Relative tolerance of positive semidefinite checks.
pub const PSD_TOL: f64 = 1e-10;

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in (0, 1), got {v}")))
    }
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `M1(P2 <= gamma)` for `N(mu0, sigma1_sq)` base and `N(mu0, sigma2_sq)`
/// alternative priors on a normal mean:
/// `1 - G1((1/n + s2) / (1/n + s1) * G1^{-1}(1 - gamma))`.
pub fn normal_conflict_prob(n: SampleSize, sigma1_sq: f64, sigma2_sq: f64, gamma: f64) -> Result<f64> {
    check_pos("sigma1_sq", sigma1_sq)?;
    check_pos("sigma2_sq", sigma2_sq)?;
    check_unit("gamma", gamma)?;
    let r = (n.inv() + sigma2_sq) / (n.inv() + sigma1_sq);
    if r == 1.0 {
        return Ok(gamma);
    }
    chisq_sf(1, r * chisq_quantile(1, 1.0 - gamma)?)
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Mahalanobis distances `t0' (I/n + sigma2)^{-1} t0` for `t0 ~ N(0, I/n + sigma1)`.
fn mvn_distances(sigma1: &DMatrix<f64>, sigma2: &DMatrix<f64>, n: SampleSize, samples: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    let k = sigma1.nrows();
    if sigma2.nrows() != k || sigma1.ncols() != k || sigma2.ncols() != k {
        return Err(Error::domain("covariance matrices must be square and of equal size"));
    }
    check_positive_definite(sigma1)?;
    check_positive_definite(sigma2)?;
    let eye = DMatrix::<f64>::identity(k, k) * n.inv();
    let l1 = (sigma1 + &eye).cholesky().ok_or_else(|| Error::domain("I/n + Sigma1 is not positive definite"))?.l();
    let l2 = (sigma2 + &eye).cholesky().ok_or_else(|| Error::domain("I/n + Sigma2 is not positive definite"))?.l();
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let z = DVector::from_iterator(k, (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let t0 = &l1 * z;
        let w = l2.solve_lower_triangular(&t0).expect("triangular factor is invertible");
        out.push(w.norm_squared());
    }
    Ok(out)
}

/// Monte-Carlo `M1((t0 - mu0)' (I/n + sigma2)^{-1} (t0 - mu0) >= G_k^{-1}(1 - gamma))`
/// with `t0 ~ N_k(mu0, I/n + sigma1)`; `n = inf` drops the `I/n` terms.
pub fn mvn_conflict_mc(sigma1: &DMatrix<f64>, sigma2: &DMatrix<f64>, gamma: f64, n: SampleSize, samples: usize, rng: &mut Rng) -> Result<McEstimate> {
    Ok(mvn_conflict_mc_sweep(sigma1, sigma2, &[gamma], n, samples, rng)?[0])
}

/// [`mvn_conflict_mc`] at several levels from one set of draws.
pub fn mvn_conflict_mc_sweep(
    sigma1: &DMatrix<f64>,
    sigma2: &DMatrix<f64>,
    gammas: &[f64],
    n: SampleSize,
    samples: usize,
    rng: &mut Rng,
) -> Result<Vec<McEstimate>> {
    if samples == 0 {
        return Err(Error::domain("at least one Monte-Carlo draw is required"));
    }
    let k = sigma1.nrows() as u32;
    let d = mvn_distances(sigma1, sigma2, n, samples, rng)?;
    gammas
        .iter()
        .map(|&g| {
            check_unit("gamma", g)?;
            let q = chisq_quantile(k, 1.0 - g)?;
            let hits = d.iter().filter(|&&x| x >= q).count();
            let p = hits as f64 / samples as f64;
            Ok(McEstimate { value: p, stderr: (p * (1.0 - p) / samples as f64).sqrt(), samples })
        })
        .collect()
}

/// Whether `m` is positive semidefinite: smallest eigenvalue at least
/// `-PSD_TOL` times the largest eigenvalue magnitude.
pub fn is_psd(m: &DMatrix<f64>) -> bool {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen().eigenvalues;
    let scale = eig.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    eig.min() >= -PSD_TOL * scale
}

fn same_dim(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<()> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::domain(format!("dimension mismatch: {:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(())
}

/// Normal `N_k(mu0, sigma2)` is uniformly weakly informative relative to
/// `N_k(mu0, sigma1)` for every `n` iff `sigma2 - sigma1` is PSD.
pub fn normal_dominance_check(sigma1: &DMatrix<f64>, sigma2: &DMatrix<f64>) -> Result<bool> {
    same_dim(sigma1, sigma2)?;
    Ok(is_psd(&(sigma2 - sigma1)))
}

/// `K(lambda) = (2/lambda) Gamma^2((lambda+1)/2) / Gamma^2(lambda/2)`.
pub fn kappa(lambda: f64) -> Result<f64> {
    check_pos("lambda", lambda)?;
    Ok(kappa_unchecked(lambda))
}

fn kappa_unchecked(lambda: f64) -> f64 {
    (2.0 / lambda) * (2.0 * (ln_gamma(0.5 * (lambda + 1.0)) - ln_gamma(0.5 * lambda))).exp()
}

/// `G1^{-1}(1 - gamma) / H_{1,lambda}^{-1}(1 - gamma)`, whose supremum over
/// `gamma` is `K(lambda)`.
pub fn kappa_ratio(lambda: f64, gamma: f64) -> Result<f64> {
    check_pos("lambda", lambda)?;
    check_unit("gamma", gamma)?;
    Ok(chisq_quantile(1, 1.0 - gamma)? / f_quantile(1, lambda, 1.0 - gamma)?)
}

/// Finite-`n` variance threshold of a `t_lambda` prior against `N(mu0, sigma1_sq)`:
/// the root `s` of `(1/n + sigma1_sq)^{-1/2} = E[(1/n + s/U)^{-1/2}]`, `U` the
/// t mixing variable.
pub fn sigma0n(n: SampleSize, sigma1_sq: f64, lambda: f64) -> Result<f64> {
    check_pos("sigma1_sq", sigma1_sq)?;
    check_pos("lambda", lambda)?;
    let rule = QuadratureRule::t_mixing(lambda)?;
    let inv_n = n.inv();
    let lhs = (inv_n + sigma1_sq).powf(-0.5);
    let f = |s: f64| rule.integrate(|u| (inv_n + s / u).powf(-0.5)) - lhs;
    let hi = 2.0 * kappa_unchecked(lambda) * sigma1_sq;
    let root = bisect(f, 1e-8 * sigma1_sq, hi, 1e-15)?;
    let resid = f(root).abs();
    if resid > 1e-10 {
        return Err(Error::numerical("sigma0n", format!("residual {resid:e} at {root}")));
    }
    Ok(root)
}

/// `tau^2_lambda = (2/lambda) Gamma^{2/k}((k+lambda)/2) / Gamma^{2/k}(lambda/2)`;
/// 1 in the `lambda -> inf` limit.
pub fn tau_lambda_sq(k: usize, lambda: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if lambda == f64::INFINITY {
        return Ok(1.0);
    }
    check_pos("lambda", lambda)?;
    let kf = k as f64;
    Ok((2.0 / lambda) * ((2.0 / kf) * (ln_gamma(0.5 * (kf + lambda)) - ln_gamma(0.5 * lambda))).exp())
}

/// Sufficient-condition checks that can only confirm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleVerdict {
    /// Asymptotically uniformly weakly informative.
    WiAsymptotic,
    /// The sufficient condition does not hold; no conclusion.
    NotCovered,
}

/// `t_k(mu0, sigma2, lambda)` against `N_k(mu0, sigma1)` in the limit: weakly
/// informative whenever `sigma2 - tau^2_lambda sigma1` is PSD.
pub fn t_scale_check(sigma1: &DMatrix<f64>, sigma2: &DMatrix<f64>, lambda: f64) -> Result<ScaleVerdict> {
    same_dim(sigma1, sigma2)?;
    let tau = tau_lambda_sq(sigma1.nrows(), lambda)?;
    Ok(if is_psd(&(sigma2 - sigma1 * tau)) { ScaleVerdict::WiAsymptotic } else { ScaleVerdict::NotCovered })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaRateVerdict {
    WiAsymptotic,
    NotCovered,
    ModeLineViolation,
}

/// `Gamma_rate(alpha2, beta2)` against `Gamma_rate(alpha1, beta1)` on the
/// precision of a normal scale model, in the limit.
///
/// Outside `beta1 / (2(alpha1 + 1/2)) <= beta2 <= beta1` the result is
/// not covered. Inside, the modes of the limiting adjusted densities must
/// coincide, `beta2/(alpha2 + 1/2) = beta1/(alpha1 + 1/2)` to 1e-10
/// relative; then `alpha2 <= alpha1` holds and the prior is weakly
/// informative.
pub fn gamma_rate_check(alpha1: f64, beta1: f64, alpha2: f64, beta2: f64) -> Result<GammaRateVerdict> {
    for (name, v) in [("alpha1", alpha1), ("beta1", beta1), ("alpha2", alpha2), ("beta2", beta2)] {
        check_pos(name, v)?;
    }
    let lower = beta1 / (2.0 * (alpha1 + 0.5));
    let slack = 1e-10 * beta1;
    if beta2 < lower - slack || beta2 > beta1 + slack {
        return Ok(GammaRateVerdict::NotCovered);
    }
    let m1 = beta1 / (alpha1 + 0.5);
    let m2 = beta2 / (alpha2 + 0.5);
    if (m2 - m1).abs() > 1e-10 * m1 {
        return Ok(GammaRateVerdict::ModeLineViolation);
    }
    Ok(if alpha2 <= alpha1 * (1.0 + 1e-10) { GammaRateVerdict::WiAsymptotic } else { GammaRateVerdict::NotCovered })
}

/// The `beta2` on the mode line for a given `alpha2`.
pub fn mode_line_beta(alpha1: f64, beta1: f64, alpha2: f64) -> f64 {
    beta1 * (alpha2 + 0.5) / (alpha1 + 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    FiniteN,
    Asymptotic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::FiniteN => "finite-n",
            Regime::Asymptotic => "asymptotic",
        })
    }
}

/// A variance chosen to attain a target reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationResult {
    /// The calibrated `sigma2^2`.
    pub parameter: f64,
    /// `sigma2^2 / sigma1^2`.
    pub ratio: f64,
    pub target_reduction: f64,
    pub gamma: f64,
    pub regime: Regime,
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("target reduction must lie in [0, 1], got {p}")))
    }
}

/// `G1^{-1}(1 - gamma + gamma p)`, infinite at `p = 1`.
fn upper_chisq1(gamma: f64, p: f64) -> Result<f64> {
    let q = 1.0 - gamma + gamma * p;
    if q >= 1.0 {
        Ok(f64::INFINITY)
    } else {
        chisq_quantile(1, q)
    }
}

/// Normal alternative with reduction `p`:
/// `sigma2^2 = (1/n + sigma1^2) G1^{-1}(1 - gamma + p gamma) / G1^{-1}(1 - gamma) - 1/n`.
pub fn calibrate_normal(n: SampleSize, sigma1_sq: f64, gamma: f64, p: f64) -> Result<CalibrationResult> {
    check_pos("sigma1_sq", sigma1_sq)?;
    check_unit("gamma", gamma)?;
    check_p(p)?;
    let parameter = if p == 0.0 {
        sigma1_sq
    } else {
        (n.inv() + sigma1_sq) * upper_chisq1(gamma, p)? / chisq_quantile(1, 1.0 - gamma)? - n.inv()
    };
    let regime = if n.is_infinite() { Regime::Asymptotic } else { Regime::FiniteN };
    Ok(CalibrationResult { parameter, ratio: parameter / sigma1_sq, target_reduction: p, gamma, regime })
}

/// `t_lambda(mu0, sigma2^2)` alternative to `N(mu0, sigma1^2)` with reduction
/// `p`. Asymptotically `sigma2^2 = sigma1^2 G1^{-1}(1 - gamma + gamma p) /
/// H_{1,lambda}^{-1}(1 - gamma)`; at finite `n` the reduction is inverted
/// numerically.
pub fn calibrate_t(n: SampleSize, lambda: f64, sigma1_sq: f64, gamma: f64, p: f64) -> Result<CalibrationResult> {
    check_pos("lambda", lambda)?;
    check_pos("sigma1_sq", sigma1_sq)?;
    check_unit("gamma", gamma)?;
    check_p(p)?;
    let (parameter, regime) = match n {
        SampleSize::Infinite => {
            (sigma1_sq * upper_chisq1(gamma, p)? / f_quantile(1, lambda, 1.0 - gamma)?, Regime::Asymptotic)
        }
        SampleSize::Finite(_) => {
            if p == 1.0 {
                (f64::INFINITY, Regime::FiniteN)
            } else {
                let model = SamplingModel::LocationNormal { k: 1, n };
                let base = PriorSpec::normal1(0.0, sigma1_sq)?;
                let red = |ln_s: f64| -> Result<f64> {
                    let alt = PriorSpec::student_t1(0.0, ln_s.exp(), lambda)?;
                    Comparison::new(&model, &base, &alt)?.reduction(gamma)
                };
                // reduction increases with the alternative scale
                let (mut lo, mut hi) = (sigma1_sq.ln() - 2.0, sigma1_sq.ln() + 2.0);
                let mut guard = 0;
                while red(lo)? > p {
                    lo -= 2.0;
                    guard += 1;
                    if guard > 40 {
                        return Err(Error::numerical("calibrate_t", "no lower bracket"));
                    }
                }
                while red(hi)? < p {
                    hi += 2.0;
                    guard += 1;
                    if guard > 80 {
                        return Err(Error::numerical("calibrate_t", "no upper bracket"));
                    }
                }
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if red(mid)? < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                ((0.5 * (lo + hi)).exp(), Regime::FiniteN)
            }
        }
    };
    Ok(CalibrationResult { parameter, ratio: parameter / sigma1_sq, target_reduction: p, gamma, regime })
}

/// Hierarchical prior for the normal linear model: `1/sigma^2 ~
/// Gamma_rate(alpha, tau)` and `beta | sigma^2` normal (`lambda = inf`) or
/// `t_k(beta0, sigma^2 sigma_mat, lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionPrior {
    pub alpha: f64,
    pub tau: f64,
    pub sigma: DMatrix<f64>,
    pub lambda: f64,
}

/// Size of the regression: `n` observations, `k` coefficients. The limiting
/// verdicts assume the smallest eigenvalue of `(X'X)^{-1}` tends to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegressionDesign {
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegressionVerdict {
    /// Prior on `1/sigma^2`, checked through `s^2`.
    pub variance: GammaRateVerdict,
    /// Conditional prior on `beta` given `s^2`.
    pub coefficients: ScaleVerdict,
}

impl RegressionVerdict {
    pub fn both_wi(&self) -> bool {
        self.variance == GammaRateVerdict::WiAsymptotic && self.coefficients == ScaleVerdict::WiAsymptotic
    }
}

/// Checks the variance component first and then the coefficients given
/// `s^2`; the second condition does not involve `s^2`.
pub fn regression_compose(design: RegressionDesign, base: &RegressionPrior, alt: &RegressionPrior) -> Result<RegressionVerdict> {
    if design.k == 0 || design.n <= design.k {
        return Err(Error::domain(format!("need n > k >= 1, got n = {}, k = {}", design.n, design.k)));
    }
    if base.sigma.nrows() != design.k {
        return Err(Error::domain("scale matrices must be k x k"));
    }
    check_positive_definite(&base.sigma)?;
    check_positive_definite(&alt.sigma)?;
    if !(alt.lambda > 0.0) {
        return Err(Error::domain("lambda must be positive (use infinity for a normal prior)"));
    }
    let variance = gamma_rate_check(base.alpha, base.tau, alt.alpha, alt.tau)?;
    let coefficients = t_scale_check(&base.sigma, &alt.sigma, alt.lambda)?;
    Ok(RegressionVerdict { variance, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_values() {
        assert!((kappa(1.0).unwrap() - std::f64::consts::FRAC_2_PI).abs() < 1e-12);
        assert!((kappa(3.0).unwrap() - 0.8488).abs() < 1e-4);
        assert!(kappa(1000.0).unwrap() > 0.999);
        assert!(kappa(0.0).is_err());
    }

    #[test]
    fn tau_reduces_to_kappa_and_one() {
        for l in [0.5, 1.0, 3.0, 17.0] {
            assert!((tau_lambda_sq(1, l).unwrap() - kappa(l).unwrap()).abs() < 1e-14);
            assert!((tau_lambda_sq(2, l).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_closed_form_limits() {
        for g in [0.01, 0.05, 0.5] {
            assert_eq!(normal_conflict_prob(SampleSize::Finite(7), 2.0, 2.0, g).unwrap(), g);
        }
        assert!(normal_conflict_prob(SampleSize::Infinite, 1.0, 1e12, 0.05).unwrap() < 1e-5);
    }

    #[test]
    fn gamma_rate_examples() {
        assert_eq!(gamma_rate_check(2.0, 5.0, 2.0, 5.0).unwrap(), GammaRateVerdict::WiAsymptotic);
        assert_eq!(gamma_rate_check(2.0, 5.0, 1.0, 3.0).unwrap(), GammaRateVerdict::WiAsymptotic);
        let b = mode_line_beta(2.0, 5.0, 3.0);
        assert_eq!(gamma_rate_check(2.0, 5.0, 3.0, b).unwrap(), GammaRateVerdict::NotCovered);
        assert_eq!(gamma_rate_check(2.0, 5.0, 1.0, 3.5).unwrap(), GammaRateVerdict::ModeLineViolation);
        assert_eq!(gamma_rate_check(2.0, 5.0, 0.1, 0.5).unwrap(), GammaRateVerdict::NotCovered);
    }

    #[test]
    fn calibration_round_trips() {
        let c = calibrate_normal(SampleSize::Finite(20), 1.0, 0.05, 0.3).unwrap();
        let v = normal_conflict_prob(SampleSize::Finite(20), 1.0, c.parameter, 0.05).unwrap();
        assert!((1.0 - v / 0.05 - 0.3).abs() < 1e-8);
        assert_eq!(calibrate_normal(SampleSize::Finite(3), 2.0, 0.05, 0.0).unwrap().parameter, 2.0);
        let t = calibrate_t(SampleSize::Infinite, 3.0, 1.0, 0.05, 0.5).unwrap();
        assert!((t.ratio - 0.49604).abs() < 1e-4, "{}", t.ratio);
    }

    #[test]
    fn sigma0n_limit() {
        let s = sigma0n(SampleSize::Finite(1_000_000), 1.0, 3.0).unwrap();
        assert!((s - kappa(3.0).unwrap()).abs() < 1e-3);
    }
}
