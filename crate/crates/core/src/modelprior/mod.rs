//! Sampling models, prior families, sufficient statistics and the volume
//! factor that turns `m_T` into `m*_T`.

mod config;

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

pub use config::{MatrixParam, ModelConfig, PriorConfig, VectorParam};

/// Sample size, possibly the `n -> inf` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSize {
    Finite(u64),
    Infinite,
}

impl SampleSize {
    /// `1/n`, zero in the limit.
    pub fn inv(self) -> f64 {
        match self {
            SampleSize::Finite(n) => 1.0 / n as f64,
            SampleSize::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SampleSize::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            SampleSize::Finite(n) => Some(n),
            SampleSize::Infinite => None,
        }
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Finite(n) => write!(f, "{n}"),
            SampleSize::Infinite => f.write_str("inf"),
        }
    }
}

/// Grouped binary-response design with centered predictors.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticDesign {
    /// `q` rows of `k` centered predictor values.
    predictors: Vec<Vec<f64>>,
    group_sizes: Vec<u32>,
}

impl LogisticDesign {
    /// Builds a design from raw predictor rows, centering every column.
    pub fn new(raw: Vec<Vec<f64>>, group_sizes: Vec<u32>) -> Result<Self> {
        let q = raw.len();
        if q == 0 || q != group_sizes.len() {
            return Err(Error::config(
                "model.group_sizes",
                format!("{} predictor rows but {} group sizes", q, group_sizes.len()),
            ));
        }
        let k = raw[0].len();
        if k == 0 || raw.iter().any(|r| r.len() != k) {
            return Err(Error::config("model.predictors", "rows must share a nonzero length"));
        }
        if group_sizes.contains(&0) {
            return Err(Error::config("model.group_sizes", "every group needs at least one trial"));
        }
        let mut predictors = raw;
        for j in 0..k {
            let mean = predictors.iter().map(|r| r[j]).sum::<f64>() / q as f64;
            for r in predictors.iter_mut() {
                r[j] -= mean;
            }
        }
        Self::from_centered(predictors, group_sizes)
    }

    /// Builds a design from already-centered predictors.
    pub fn from_centered(predictors: Vec<Vec<f64>>, group_sizes: Vec<u32>) -> Result<Self> {
        if predictors.iter().flatten().any(|&x| x.abs() < 1e-12 || !x.is_finite()) {
            return Err(Error::config("model.predictors", "centered predictors must be finite and nonzero"));
        }
        Ok(Self { predictors, group_sizes })
    }

    /// One dose-type predictor: log-transformed, centered and scaled to
    /// sample standard deviation 1/2 across the distinct dose levels.
    pub fn from_doses(doses: &[f64], group_sizes: Vec<u32>) -> Result<Self> {
        if doses.len() < 2 || doses.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::config("model.doses", "need at least two positive doses"));
        }
        let logs: Vec<f64> = doses.iter().map(|d| d.ln()).collect();
        let m = logs.len() as f64;
        let mean = logs.iter().sum::<f64>() / m;
        let sd = (logs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt();
        let rows = logs.iter().map(|x| vec![0.5 * (x - mean) / sd]).collect();
        Self::new(rows, group_sizes)
    }

    /// Four-dose bioassay with five animals per dose (Racine et al.).
    pub fn bioassay() -> Self {
        Self::from_doses(&BIOASSAY_DOSES, vec![5; 4]).expect("bioassay design is valid")
    }

    pub fn predictors(&self) -> &[Vec<f64>] {
        &self.predictors
    }

    pub fn group_sizes(&self) -> &[u32] {
        &self.group_sizes
    }

    pub fn groups(&self) -> usize {
        self.group_sizes.len()
    }

    /// Number of coefficients including the intercept.
    pub fn coefficients(&self) -> usize {
        self.predictors[0].len() + 1
    }

    /// Number of points `prod(n_i + 1)` of the response lattice.
    pub fn lattice_size(&self) -> usize {
        self.group_sizes.iter().map(|&n| n as usize + 1).product()
    }
}

/// Dose levels of the bioassay example.
pub const BIOASSAY_DOSES: [f64; 4] = [0.422, 0.744, 0.948, 2.069];
/// Observed deaths out of five at each dose of the bioassay example.
pub const BIOASSAY_DEATHS: [u64; 4] = [0, 1, 3, 5];

/// Which statistical model generates the data.
#[derive(Debug, Clone, PartialEq)]
pub enum SamplingModel {
    /// `N_k(mu, I)` sample of size `n`; `T` is the sample mean.
    LocationNormal { k: usize, n: SampleSize },
    /// `N(0, sigma^2)` sample; `T` is the mean of squares.
    ScaleNormal { n: SampleSize },
    /// `T ~ Binomial(n, theta)`.
    Binomial { n: SampleSize },
    /// Grouped logistic regression; `T` is the vector of group successes.
    Logistic(LogisticDesign),
    /// Four-cell multinomial with cell probabilities
    /// `(1-theta)/6, (1+theta)/6, (2-theta)/6, (2+theta)/6`.
    ShiftedMultinomial { n: u64 },
}

impl SamplingModel {
    pub fn name(&self) -> &'static str {
        match self {
            SamplingModel::LocationNormal { .. } => "location-normal",
            SamplingModel::ScaleNormal { .. } => "scale-normal",
            SamplingModel::Binomial { .. } => "binomial",
            SamplingModel::Logistic(_) => "logistic",
            SamplingModel::ShiftedMultinomial { .. } => "shifted-multinomial",
        }
    }

    /// Whether `M_T` is a lattice distribution.
    pub fn is_discrete(&self) -> bool {
        match self {
            SamplingModel::Binomial { n } => !n.is_infinite(),
            SamplingModel::Logistic(_) | SamplingModel::ShiftedMultinomial { .. } => true,
            _ => false,
        }
    }

    fn check(&self) -> Result<()> {
        let bad_n = |n: &SampleSize| matches!(n, SampleSize::Finite(0));
        match self {
            SamplingModel::LocationNormal { k, n } => {
                if *k == 0 {
                    return Err(Error::config("model.k", "dimension must be at least 1"));
                }
                if bad_n(n) {
                    return Err(Error::config("model.n", "sample size must be at least 1"));
                }
            }
            SamplingModel::ScaleNormal { n } | SamplingModel::Binomial { n } => {
                if bad_n(n) {
                    return Err(Error::config("model.n", "sample size must be at least 1"));
                }
            }
            SamplingModel::ShiftedMultinomial { n } => {
                if *n == 0 {
                    return Err(Error::config("model.n", "sample size must be at least 1"));
                }
            }
            SamplingModel::Logistic(_) => {}
        }
        Ok(())
    }
}

/// Support of a Beta prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaSupport {
    /// `theta ~ Beta(alpha, beta)` on `[0, 1]`.
    Unit,
    /// `theta = 2B - 1` with `B ~ Beta(alpha, beta)`, on `[-1, 1]`.
    Symmetric,
}

/// A proper prior from one of the supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    /// `N_k(mu0, sigma)`.
    Normal { mu0: DVector<f64>, sigma: DMatrix<f64> },
    /// `t_k(mu0, sigma, lambda)`: `mu0 + sigma^{1/2} z` with `z` a standard
    /// `k`-variate t.
    StudentT { mu0: DVector<f64>, sigma: DMatrix<f64>, lambda: f64 },
    /// `1/sigma^2 ~ Gamma_rate(alpha, beta)`.
    GammaRatePrecision { alpha: f64, beta: f64 },
    Beta { alpha: f64, beta: f64, support: BetaSupport },
    /// Independent one-dimensional factors, one per coefficient.
    Product(Vec<PriorSpec>),
}

impl PriorSpec {
    pub fn normal(mu0: Vec<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let p = PriorSpec::Normal { mu0: DVector::from_vec(mu0), sigma };
        p.check()?;
        Ok(p)
    }

    /// `N(mean, variance)`.
    pub fn normal1(mean: f64, variance: f64) -> Result<Self> {
        Self::normal(vec![mean], DMatrix::from_element(1, 1, variance))
    }

    pub fn student_t(mu0: Vec<f64>, sigma: DMatrix<f64>, lambda: f64) -> Result<Self> {
        let p = PriorSpec::StudentT { mu0: DVector::from_vec(mu0), sigma, lambda };
        p.check()?;
        Ok(p)
    }

    /// `t_1(mean, scale_sq, lambda)`; `lambda = 1` is the Cauchy.
    pub fn student_t1(mean: f64, scale_sq: f64, lambda: f64) -> Result<Self> {
        Self::student_t(vec![mean], DMatrix::from_element(1, 1, scale_sq), lambda)
    }

    pub fn gamma_rate(alpha: f64, beta: f64) -> Result<Self> {
        let p = PriorSpec::GammaRatePrecision { alpha, beta };
        p.check()?;
        Ok(p)
    }

    /// Beta on `[0, 1]`.
    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        let p = PriorSpec::Beta { alpha, beta, support: BetaSupport::Unit };
        p.check()?;
        Ok(p)
    }

    /// Beta rescaled to `[-1, 1]`.
    pub fn beta_symmetric(alpha: f64, beta: f64) -> Result<Self> {
        let p = PriorSpec::Beta { alpha, beta, support: BetaSupport::Symmetric };
        p.check()?;
        Ok(p)
    }

    pub fn product(factors: Vec<PriorSpec>) -> Result<Self> {
        let p = PriorSpec::Product(factors);
        p.check()?;
        Ok(p)
    }

    pub fn name(&self) -> &'static str {
        match self {
            PriorSpec::Normal { .. } => "normal",
            PriorSpec::StudentT { .. } => "student-t",
            PriorSpec::GammaRatePrecision { .. } => "gamma-rate-precision",
            PriorSpec::Beta { .. } => "beta",
            PriorSpec::Product(_) => "product",
        }
    }

    /// Dimension of the parameter the prior lives on.
    pub fn dim(&self) -> usize {
        match self {
            PriorSpec::Normal { mu0, .. } | PriorSpec::StudentT { mu0, .. } => mu0.len(),
            PriorSpec::Product(f) => f.len(),
            _ => 1,
        }
    }

    /// Re-validates every parameter.
    pub fn check(&self) -> Result<()> {
        let pos = |v: f64, key: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(key, format!("must be positive and finite, got {v}")))
            }
        };
        match self {
            PriorSpec::Normal { mu0, sigma } => check_location_scale(mu0, sigma),
            PriorSpec::StudentT { mu0, sigma, lambda } => {
                pos(*lambda, "prior.lambda")?;
                check_location_scale(mu0, sigma)
            }
            PriorSpec::GammaRatePrecision { alpha, beta } | PriorSpec::Beta { alpha, beta, .. } => {
                pos(*alpha, "prior.alpha")?;
                pos(*beta, "prior.beta")
            }
            PriorSpec::Product(factors) => {
                if factors.is_empty() {
                    return Err(Error::config("prior.factors", "product needs at least one factor"));
                }
                for (i, f) in factors.iter().enumerate() {
                    let one_d = matches!(f, PriorSpec::Normal { .. } | PriorSpec::StudentT { .. }) && f.dim() == 1;
                    if !one_d {
                        return Err(Error::config(
                            format!("prior.factors[{i}]"),
                            "product factors must be one-dimensional normal or t priors",
                        ));
                    }
                    f.check()?;
                }
                Ok(())
            }
        }
    }
}

fn check_location_scale(mu0: &DVector<f64>, sigma: &DMatrix<f64>) -> Result<()> {
    let k = mu0.len();
    if k == 0 || sigma.nrows() != k || sigma.ncols() != k {
        return Err(Error::config(
            "prior.cov",
            format!("covariance must be {k}x{k}, got {}x{}", sigma.nrows(), sigma.ncols()),
        ));
    }
    if mu0.iter().chain(sigma.iter()).any(|v| !v.is_finite()) {
        return Err(Error::config("prior", "parameters must be finite"));
    }
    check_positive_definite(sigma).map_err(|e| match e {
        Error::Domain(reason) => Error::config("prior.cov", reason),
        other => other,
    })
}

/// Symmetric positive definite check: symmetric to 1e-12 relative and smallest
/// eigenvalue above `1e-12` times the largest.
pub fn check_positive_definite(m: &DMatrix<f64>) -> Result<()> {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    if (m - m.transpose()).amax() > 1e-12 * scale {
        return Err(Error::domain("matrix is not symmetric"));
    }
    let eig = m.clone().symmetric_eigen().eigenvalues;
    let max = eig.max();
    let min = eig.min();
    if !(max > 0.0) || min <= 1e-12 * max {
        return Err(Error::domain(format!("matrix is not positive definite (eigenvalues in [{min:e}, {max:e}])")));
    }
    Ok(())
}

/// Which maximal ancillary a conditional check uses (shifted multinomial).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ancillary {
    /// `U1 = (f1 + f2, f3 + f4)`.
    U1,
    /// `U2 = (f1 + f4, f2 + f3)`.
    U2,
}

impl Ancillary {
    pub const ALL: [Ancillary; 2] = [Ancillary::U1, Ancillary::U2];

    /// First component of the ancillary for the given counts.
    pub fn value(self, counts: &[u64]) -> u64 {
        match self {
            Ancillary::U1 => counts[0] + counts[1],
            Ancillary::U2 => counts[0] + counts[3],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ancillary::U1 => "U1",
            Ancillary::U2 => "U2",
        }
    }
}

/// Observed value of the minimal sufficient statistic.
#[derive(Debug, Clone, PartialEq)]
pub enum SufficientStat {
    Real(Vec<f64>),
    Counts(Vec<u64>),
}

impl SufficientStat {
    pub fn scalar(t: f64) -> Self {
        SufficientStat::Real(vec![t])
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            SufficientStat::Real(v) => Some(v),
            SufficientStat::Counts(_) => None,
        }
    }

    pub fn as_counts(&self) -> Option<&[u64]> {
        match self {
            SufficientStat::Counts(v) => Some(v),
            SufficientStat::Real(_) => None,
        }
    }
}

/// Checks that `t` lies in the sufficient-statistic space of `model`.
pub fn check_stat(model: &SamplingModel, t: &SufficientStat) -> Result<()> {
    let range = |msg: String| Err(Error::domain(msg));
    match (model, t) {
        (SamplingModel::LocationNormal { k, .. }, SufficientStat::Real(v)) => {
            if v.len() != *k || v.iter().any(|x| !x.is_finite()) {
                return range(format!("location statistic must be {k} finite values"));
            }
        }
        (SamplingModel::ScaleNormal { .. }, SufficientStat::Real(v)) => {
            if v.len() != 1 || !(v[0] > 0.0) || !v[0].is_finite() {
                return range("scale statistic must be one positive value".into());
            }
        }
        (SamplingModel::Binomial { n: SampleSize::Finite(n) }, SufficientStat::Counts(v)) => {
            if v.len() != 1 || v[0] > *n {
                return range(format!("binomial count must be in 0..={n}"));
            }
        }
        (SamplingModel::Binomial { n: SampleSize::Infinite }, SufficientStat::Real(v)) => {
            if v.len() != 1 || !(0.0..=1.0).contains(&v[0]) {
                return range("limiting binomial statistic t/n must be in [0, 1]".into());
            }
        }
        (SamplingModel::Logistic(d), SufficientStat::Counts(v)) => {
            if v.len() != d.groups() || v.iter().zip(d.group_sizes()).any(|(&t, &n)| t > n as u64) {
                return range("logistic counts must satisfy 0 <= t_i <= n_i for every group".into());
            }
        }
        (SamplingModel::ShiftedMultinomial { n }, SufficientStat::Counts(v)) => {
            if v.len() != 4 || v.iter().sum::<u64>() != *n {
                return range(format!("multinomial needs 4 counts summing to {n}"));
            }
        }
        _ => return range(format!("statistic type does not match the {} model", model.name())),
    }
    Ok(())
}

/// Factor by which `m_T(t)` is multiplied to obtain `m*_T(t)`.
///
/// `(4t/n)^{1/2}` for the scale-normal model (`t^{1/2}` in the `n -> inf`
/// limit, where the constant cancels from every P-value) and 1 otherwise.
pub fn volume_factor(model: &SamplingModel, t: &SufficientStat) -> Result<f64> {
    check_stat(model, t)?;
    Ok(match model {
        SamplingModel::ScaleNormal { n } => {
            let t = t.as_real().expect("checked")[0];
            match n {
                SampleSize::Finite(n) => (4.0 * t / *n as f64).sqrt(),
                SampleSize::Infinite => t.sqrt(),
            }
        }
        _ => 1.0,
    })
}

/// Confirms that the model and prior can be combined.
pub fn validate(model: &SamplingModel, prior: &PriorSpec) -> Result<()> {
    model.check()?;
    prior.check()?;
    let unsupported = || Error::Unsupported { model: model.name().into(), prior: prior.name().into() };
    match (model, prior) {
        (SamplingModel::LocationNormal { k, .. }, PriorSpec::Normal { .. } | PriorSpec::StudentT { .. }) => {
            if prior.dim() != *k {
                return Err(Error::config("prior.mean", format!("prior dimension {} != model dimension {k}", prior.dim())));
            }
        }
        (SamplingModel::ScaleNormal { .. }, PriorSpec::GammaRatePrecision { .. }) => {}
        (SamplingModel::Binomial { .. }, PriorSpec::Beta { support: BetaSupport::Unit, .. }) => {}
        (SamplingModel::ShiftedMultinomial { .. }, PriorSpec::Beta { support: BetaSupport::Symmetric, .. }) => {}
        (SamplingModel::Logistic(d), PriorSpec::Product(f)) => {
            if f.len() != d.coefficients() {
                return Err(Error::config(
                    "prior.factors",
                    format!("design has {} coefficients but the prior has {} factors", d.coefficients(), f.len()),
                ));
            }
        }
        _ => return Err(unsupported()),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bioassay_design_is_standardized() {
        let d = BIOASSAY_DOSES;
        let x: Vec<f64> = LogisticDesign::bioassay().predictors().iter().map(|r| r[0]).collect();
        assert!(x.iter().sum::<f64>().abs() < 1e-14);
        let sd = (x.iter().map(|v| v * v).sum::<f64>() / 3.0).sqrt();
        assert!((sd - 0.5).abs() < 1e-14);
        // order of the doses is preserved
        assert!(x.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(d.len(), x.len());
        assert!((x[0] + 0.5623).abs() < 1e-4);
    }

    #[test]
    fn volume_factor_cases() {
        let loc = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(7) };
        assert_eq!(volume_factor(&loc, &SufficientStat::scalar(-3.0)).unwrap(), 1.0);
        let sc = SamplingModel::ScaleNormal { n: SampleSize::Finite(20) };
        assert_eq!(volume_factor(&sc, &SufficientStat::scalar(5.0)).unwrap(), 1.0);
        assert!((volume_factor(&sc, &SufficientStat::scalar(1.25)).unwrap() - 0.5).abs() < 1e-15);
        assert!(volume_factor(&sc, &SufficientStat::scalar(0.0)).is_err());
    }

    #[test]
    fn validate_pairs() {
        let bin = SamplingModel::Binomial { n: SampleSize::Finite(20) };
        assert!(validate(&bin, &PriorSpec::beta(1.0, 1.0).unwrap()).is_ok());
        let sc = SamplingModel::ScaleNormal { n: SampleSize::Finite(20) };
        let err = validate(&sc, &PriorSpec::beta(1.0, 1.0).unwrap()).unwrap_err();
        assert!(err.to_string().contains("scale-normal") && err.to_string().contains("beta"));
        let lg = SamplingModel::Logistic(LogisticDesign::bioassay());
        let prior = PriorSpec::product(vec![
            PriorSpec::normal1(0.0, 100.0).unwrap(),
            PriorSpec::student_t1(0.0, 6.25, 1.0).unwrap(),
        ])
        .unwrap();
        assert!(validate(&lg, &prior).is_ok());
    }

    #[test]
    fn rejects_bad_priors() {
        assert!(PriorSpec::normal1(0.0, -1.0).is_err());
        assert!(PriorSpec::beta(0.0, 1.0).is_err());
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(PriorSpec::normal(vec![0.0, 0.0], indefinite).is_err());
        assert!(PriorSpec::product(vec![PriorSpec::beta(1.0, 1.0).unwrap()]).is_err());
    }
}
