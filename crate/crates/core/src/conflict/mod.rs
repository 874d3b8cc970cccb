//! Prior predictives `m_T`, adjusted densities `m*_T` and prior-data conflict
//! P-values `M_T(m*_T(t) <= m*_T(t0))`, optionally conditional on an ancillary.

pub mod lattice;
pub mod line;
mod logistic;
mod multi;

use std::fmt;

use rand::Rng as _;
use serde::Serialize;

use crate::distmath::{tie_key, Rng};
use crate::modelprior::{
    check_stat, validate, volume_factor, Ancillary, BetaSupport, PriorSpec, SampleSize, SamplingModel, SufficientStat,
};
use crate::{Error, Result};

pub use lattice::{betabinom_pmf, pvalue_ladder, Lattice, LatticeShape};
pub use line::{conflict_region, line_pvalue, IntervalSet, LevelSets, LinePredictive};
pub use logistic::{logistic_lattice, LogisticQuadrature};
pub use multi::{Elliptical, MixtureK, Radial};

/// How a P-value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Method {
    ClosedForm,
    Enumeration,
    Quadrature,
    MonteCarlo { samples: usize, seed: u64 },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::ClosedForm => f.write_str("closed-form"),
            Method::Enumeration => f.write_str("enumeration"),
            Method::Quadrature => f.write_str("quadrature"),
            Method::MonteCarlo { samples, seed } => write!(f, "monte-carlo(samples={samples}, seed={seed})"),
        }
    }
}

/// Requested computation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Enumeration,
    Quadrature,
    MonteCarlo,
}

impl std::str::FromStr for MethodChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "enum" | "enumeration" => Ok(MethodChoice::Enumeration),
            "quad" | "quadrature" => Ok(MethodChoice::Quadrature),
            "mc" | "monte-carlo" => Ok(MethodChoice::MonteCarlo),
            other => Err(Error::config("method", format!("unknown method {other:?}; use auto, enum, quad or mc"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConflictOptions {
    pub method: MethodChoice,
    pub mc_samples: usize,
    pub seed: u64,
    pub logistic: LogisticQuadrature,
}

impl Default for ConflictOptions {
    fn default() -> Self {
        Self { method: MethodChoice::Auto, mc_samples: 100_000, seed: 0, logistic: LogisticQuadrature::default() }
    }
}

/// Result of one conflict check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConflictReport {
    pub pvalue: f64,
    pub density_at_t0: f64,
    pub method: Method,
    pub mc_stderr: Option<f64>,
}

/// The prior predictive distribution of `T` for a validated model and prior.
#[derive(Debug)]
pub enum Predictive {
    Lattice(Lattice),
    Line(Box<dyn LinePredictive>),
    Elliptical(Elliptical),
    Mixture(MixtureK),
}

impl Predictive {
    pub fn new(model: &SamplingModel, prior: &PriorSpec) -> Result<Self> {
        Self::with_quadrature(model, prior, &LogisticQuadrature::default())
    }

    pub fn with_quadrature(model: &SamplingModel, prior: &PriorSpec, quad: &LogisticQuadrature) -> Result<Self> {
        use line::{BetaLine, InverseGammaLine, NormalLine, NormalScaleMixture, ScaleNormalLine, StudentLine};
        validate(model, prior)?;
        Ok(match (model, prior) {
            (SamplingModel::LocationNormal { k, n }, PriorSpec::Normal { mu0, sigma }) => {
                let cov = sigma + nalgebra::DMatrix::identity(*k, *k) * n.inv();
                if *k == 1 {
                    Predictive::Line(Box::new(NormalLine { mu: mu0[0], var: cov[(0, 0)] }))
                } else {
                    Predictive::Elliptical(Elliptical::new(mu0.clone(), cov, Radial::Normal)?)
                }
            }
            (SamplingModel::LocationNormal { k, n }, PriorSpec::StudentT { mu0, sigma, lambda }) => match (k, n) {
                (1, SampleSize::Infinite) => {
                    Predictive::Line(Box::new(StudentLine { mu: mu0[0], scale: sigma[(0, 0)].sqrt(), lambda: *lambda }))
                }
                (1, SampleSize::Finite(_)) => {
                    Predictive::Line(Box::new(NormalScaleMixture::new(mu0[0], n.inv(), sigma[(0, 0)], *lambda)?))
                }
                (_, SampleSize::Infinite) => {
                    Predictive::Elliptical(Elliptical::new(mu0.clone(), sigma.clone(), Radial::StudentT(*lambda))?)
                }
                (_, SampleSize::Finite(_)) => {
                    Predictive::Mixture(MixtureK::new(mu0.clone(), sigma.clone(), *lambda, n.inv())?)
                }
            },
            (SamplingModel::ScaleNormal { n }, PriorSpec::GammaRatePrecision { alpha, beta }) => match n {
                SampleSize::Finite(n) => {
                    Predictive::Line(Box::new(ScaleNormalLine { n: *n as f64, alpha: *alpha, beta: *beta }))
                }
                SampleSize::Infinite => Predictive::Line(Box::new(InverseGammaLine { alpha: *alpha, beta: *beta })),
            },
            (SamplingModel::Binomial { n }, PriorSpec::Beta { alpha, beta, .. }) => match n {
                SampleSize::Finite(n) => Predictive::Lattice(Lattice {
                    shape: LatticeShape::Grid(vec![*n]),
                    pmf: betabinom_pmf(*n, *alpha, *beta),
                }),
                SampleSize::Infinite => Predictive::Line(Box::new(BetaLine { a: *alpha, b: *beta })),
            },
            (SamplingModel::ShiftedMultinomial { n }, PriorSpec::Beta { alpha, beta, support: BetaSupport::Symmetric }) => {
                Predictive::Lattice(lattice::multinomial_lattice(*n, *alpha, *beta))
            }
            (SamplingModel::Logistic(d), PriorSpec::Product(f)) => Predictive::Lattice(logistic_lattice(d, f, quad)?),
            _ => unreachable!("validate admitted an unsupported pair"),
        })
    }

    /// `m_T(t)` (a pmf value on lattices).
    pub fn density(&self, t: &SufficientStat) -> Result<f64> {
        Ok(match self {
            Predictive::Lattice(l) => l.pmf[lattice_index(l, t)?],
            Predictive::Line(d) => {
                let x = line_point(d.as_ref(), t)?;
                d.ln_density(x).exp()
            }
            Predictive::Elliptical(e) => e.ln_density(real_point(t, e.dim())?).exp(),
            Predictive::Mixture(m) => m.ln_density(real_point(t, m.dim())?).exp(),
        })
    }

    /// Draws one value of `T`.
    pub fn sample(&self, rng: &mut Rng) -> SufficientStat {
        match self {
            Predictive::Lattice(l) => {
                let u: f64 = rng.random();
                let mut cum = 0.0;
                let mut pick = l.len() - 1;
                for (i, &m) in l.pmf.iter().enumerate() {
                    cum += m;
                    if u < cum {
                        pick = i;
                        break;
                    }
                }
                SufficientStat::Counts(l.point(pick))
            }
            Predictive::Line(d) => SufficientStat::scalar(d.sample(rng)),
            Predictive::Elliptical(e) => SufficientStat::Real(e.sample(rng)),
            Predictive::Mixture(m) => SufficientStat::Real(m.sample(rng)),
        }
    }

    /// `M_T(m*(T) <= m*(t0))` by the best deterministic method available.
    fn exact_pvalue(&self, t0: &SufficientStat) -> Result<(f64, f64, Method)> {
        match self {
            Predictive::Lattice(l) => {
                let i = lattice_index(l, t0)?;
                Ok((l.ladder()[i], l.pmf[i], Method::Enumeration))
            }
            Predictive::Line(d) => {
                let x = line_point(d.as_ref(), t0)?;
                let method = if d.symmetric_center().is_some() { Method::ClosedForm } else { Method::Quadrature };
                Ok((line_pvalue(d.as_ref(), x), d.ln_density(x).exp(), method))
            }
            Predictive::Elliptical(e) => {
                let x = real_point(t0, e.dim())?;
                Ok((e.pvalue(x), e.ln_density(x).exp(), Method::ClosedForm))
            }
            Predictive::Mixture(_) => Err(Error::Unsupported {
                model: "location-normal (k > 1, finite n)".into(),
                prior: "student-t (needs Monte Carlo)".into(),
            }),
        }
    }

    /// Monte-Carlo P-value with its standard error.
    pub fn mc_pvalue(&self, t0: &SufficientStat, samples: usize, rng: &mut Rng) -> Result<(f64, f64)> {
        let key = |t: &SufficientStat| -> Result<f64> {
            Ok(match self {
                Predictive::Lattice(_) => tie_key(self.density(t)?),
                Predictive::Line(d) => d.ln_adjusted(line_point(d.as_ref(), t)?),
                Predictive::Elliptical(e) => e.ln_density(real_point(t, e.dim())?),
                Predictive::Mixture(m) => m.ln_density(real_point(t, m.dim())?),
            })
        };
        let k0 = key(t0)?;
        let mut hits = 0usize;
        for _ in 0..samples {
            let t = self.sample(rng);
            if key(&t)? <= k0 {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        Ok((p, (p * (1.0 - p) / samples as f64).sqrt()))
    }
}

fn lattice_index(l: &Lattice, t: &SufficientStat) -> Result<usize> {
    let c = t.as_counts().ok_or_else(|| Error::domain("lattice predictive needs integer counts"))?;
    l.index_of(c).ok_or_else(|| Error::domain(format!("{c:?} is outside the lattice")))
}

fn line_point(d: &dyn LinePredictive, t: &SufficientStat) -> Result<f64> {
    let x = match t.as_real() {
        Some([x]) => *x,
        _ => return Err(Error::domain("one real value expected")),
    };
    let (lo, hi) = d.support();
    if !(x >= lo && x <= hi) || !x.is_finite() {
        return Err(Error::domain(format!("t = {x} is outside the support ({lo}, {hi})")));
    }
    Ok(x)
}

fn real_point(t: &SufficientStat, k: usize) -> Result<&[f64]> {
    match t.as_real() {
        Some(v) if v.len() == k => Ok(v),
        _ => Err(Error::domain(format!("{k} real values expected"))),
    }
}

/// `m_T(t)` for the model and prior.
pub fn predictive_density(model: &SamplingModel, prior: &PriorSpec, t: &SufficientStat) -> Result<f64> {
    check_stat(model, t)?;
    Predictive::new(model, prior)?.density(t)
}

/// `m*_T(t) = m_T(t)` times the volume factor.
pub fn adjusted_density(model: &SamplingModel, prior: &PriorSpec, t: &SufficientStat) -> Result<f64> {
    Ok(predictive_density(model, prior, t)? * volume_factor(model, t)?)
}

/// Conflict P-value by the best available method.
pub fn conflict_pvalue(model: &SamplingModel, prior: &PriorSpec, t0: &SufficientStat) -> Result<ConflictReport> {
    conflict_pvalue_with(model, prior, t0, &ConflictOptions::default())
}

pub fn conflict_pvalue_with(
    model: &SamplingModel,
    prior: &PriorSpec,
    t0: &SufficientStat,
    opts: &ConflictOptions,
) -> Result<ConflictReport> {
    check_stat(model, t0)?;
    let pred = Predictive::with_quadrature(model, prior, &opts.logistic)?;
    report(&pred, t0, opts)
}

/// Conflict check for an already built predictive.
pub fn report(pred: &Predictive, t0: &SufficientStat, opts: &ConflictOptions) -> Result<ConflictReport> {
    let use_mc = match (opts.method, pred) {
        (MethodChoice::MonteCarlo, _) | (MethodChoice::Auto, Predictive::Mixture(_)) => true,
        (MethodChoice::Auto, _) => false,
        (MethodChoice::Enumeration, Predictive::Lattice(_)) => false,
        (MethodChoice::Quadrature, Predictive::Line(_) | Predictive::Elliptical(_)) => false,
        (MethodChoice::Quadrature, Predictive::Lattice(_)) => false,
        (choice, _) => {
            return Err(Error::config("method", format!("{choice:?} is not available for this model and prior")));
        }
    };
    if use_mc {
        let samples = opts.mc_samples.max(1);
        let mut rng = Rng::new(opts.seed);
        let (p, se) = pred.mc_pvalue(t0, samples, &mut rng)?;
        return Ok(ConflictReport {
            pvalue: p,
            density_at_t0: pred.density(t0)?,
            method: Method::MonteCarlo { samples, seed: opts.seed },
            mc_stderr: Some(se),
        });
    }
    let (pvalue, density_at_t0, method) = pred.exact_pvalue(t0)?;
    let method = match (pred, opts.method) {
        (Predictive::Lattice(_), _) if matches!(method, Method::Enumeration) && is_quadrature_lattice(pred) => {
            Method::Quadrature
        }
        _ => method,
    };
    Ok(ConflictReport { pvalue: pvalue.clamp(0.0, 1.0), density_at_t0, method, mc_stderr: None })
}

fn is_quadrature_lattice(pred: &Predictive) -> bool {
    // logistic pmfs are the only grid lattices with more than one axis
    matches!(pred, Predictive::Lattice(Lattice { shape: LatticeShape::Grid(s), .. }) if s.len() > 1)
}

/// Conditional predictive lattice given the ancillary observed in `t0`.
pub fn conditional_lattice(model: &SamplingModel, prior: &PriorSpec, t0: &[u64], anc: Ancillary) -> Result<Lattice> {
    validate(model, prior)?;
    let (SamplingModel::ShiftedMultinomial { n }, PriorSpec::Beta { alpha, beta, .. }) = (model, prior) else {
        return Err(Error::Unsupported { model: model.name().into(), prior: "ancillary conditioning".into() });
    };
    check_stat(model, &SufficientStat::Counts(t0.to_vec()))?;
    lattice::multinomial_conditional_lattice(*n, *alpha, *beta, anc, anc.value(t0))
}

/// `M_T(m*(t) <= m*(t0) | U(T) = U(t0))` for one maximal ancillary.
pub fn conditional_conflict_pvalue(
    model: &SamplingModel,
    prior: &PriorSpec,
    t0: &SufficientStat,
    anc: Ancillary,
) -> Result<ConflictReport> {
    let counts = t0.as_counts().ok_or_else(|| Error::domain("conditioning needs integer counts"))?;
    let l = conditional_lattice(model, prior, counts, anc)?;
    let i = l.index_of(counts).ok_or_else(|| Error::domain("counts inconsistent with the ancillary"))?;
    Ok(ConflictReport {
        pvalue: l.ladder()[i].clamp(0.0, 1.0),
        density_at_t0: l.pmf[i],
        method: Method::Enumeration,
        mc_stderr: None,
    })
}

/// Conditional checks against every maximal ancillary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AncillaryReport {
    pub u1: ConflictReport,
    pub u2: ConflictReport,
}

impl AncillaryReport {
    /// Smallest conditional P-value; evidence under either ancillary counts.
    pub fn min_pvalue(&self) -> f64 {
        self.u1.pvalue.min(self.u2.pvalue)
    }
}

pub fn ancillary_conflict(model: &SamplingModel, prior: &PriorSpec, t0: &SufficientStat) -> Result<AncillaryReport> {
    Ok(AncillaryReport {
        u1: conditional_conflict_pvalue(model, prior, t0, Ancillary::U1)?,
        u2: conditional_conflict_pvalue(model, prior, t0, Ancillary::U2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelprior::LogisticDesign;

    #[test]
    fn location_normal_closed_form() {
        let m = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(10) };
        let p = PriorSpec::normal1(1.0, 0.4).unwrap();
        let r = conflict_pvalue(&m, &p, &SufficientStat::scalar(1.0)).unwrap();
        assert_eq!(r.pvalue, 1.0);
        assert_eq!(r.method, Method::ClosedForm);
        let d = predictive_density(&m, &p, &SufficientStat::scalar(1.0)).unwrap();
        assert!((d - (2.0 * std::f64::consts::PI * 0.5).powf(-0.5)).abs() < 1e-14);
        let r = conflict_pvalue(&m, &p, &SufficientStat::scalar(2.0)).unwrap();
        let expect = 1.0 - crate::distmath::chisq_cdf(1, 1.0 / 0.5).unwrap();
        assert!((r.pvalue - expect).abs() < 1e-12);
    }

    #[test]
    fn bioassay_observed_pvalues() {
        let m = SamplingModel::Logistic(LogisticDesign::bioassay());
        let t0 = SufficientStat::Counts(crate::modelprior::BIOASSAY_DEATHS.to_vec());
        let normal =
            PriorSpec::product(vec![PriorSpec::normal1(0.0, 100.0).unwrap(), PriorSpec::normal1(0.0, 6.25).unwrap()])
                .unwrap();
        let r = conflict_pvalue(&m, &normal, &t0).unwrap();
        assert!((r.pvalue - 0.1073).abs() < 0.002, "{}", r.pvalue);
        assert_eq!(r.method, Method::Quadrature);
    }

    #[test]
    fn method_override_validation() {
        let m = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(10) };
        let p = PriorSpec::normal1(0.0, 1.0).unwrap();
        let opts = ConflictOptions { method: MethodChoice::Enumeration, ..Default::default() };
        assert!(conflict_pvalue_with(&m, &p, &SufficientStat::scalar(0.3), &opts).is_err());
        let opts = ConflictOptions { method: MethodChoice::MonteCarlo, mc_samples: 20_000, seed: 3, ..Default::default() };
        let r = conflict_pvalue_with(&m, &p, &SufficientStat::scalar(1.5), &opts).unwrap();
        let exact = conflict_pvalue(&m, &p, &SufficientStat::scalar(1.5)).unwrap().pvalue;
        assert!((r.pvalue - exact).abs() < 4.0 * r.mc_stderr.unwrap());
    }

    #[test]
    fn degenerate_ancillary_leaves_one_binomial() {
        // f1 + f2 = 0 pins f1, so only f3 ~ Bin(n, (3 - 2B)/4) varies
        let m = SamplingModel::ShiftedMultinomial { n: 5 };
        let p = PriorSpec::beta_symmetric(2.0, 3.0).unwrap();
        let l = conditional_lattice(&m, &p, &[0, 0, 2, 3], Ancillary::U1).unwrap();
        assert_eq!(l.len(), 6);
        let gl = crate::distmath::QuadratureRule::gauss_legendre_on(0.0, 1.0, 40).unwrap();
        for f3 in 0..=5u64 {
            let want = gl.integrate(|b| {
                let q = (3.0 - 2.0 * b) / 4.0;
                let dens = 12.0 * b * (1.0 - b) * (1.0 - b);
                let c = crate::distmath::special::ln_choose(5.0, f3 as f64).exp();
                dens * c * q.powi(f3 as i32) * (1.0 - q).powi(5 - f3 as i32)
            });
            let i = l.index_of(&[0, 0, f3, 5 - f3]).unwrap();
            assert!((l.pmf[i] - want).abs() < 1e-13);
        }
        let top = (0..6).max_by(|&a, &b| l.pmf[a].total_cmp(&l.pmf[b])).unwrap();
        let r = conditional_conflict_pvalue(&m, &p, &SufficientStat::Counts(l.point(top)), Ancillary::U1).unwrap();
        assert!((r.pvalue - 1.0).abs() < 1e-12);
    }
}
