//! Serializable mirrors of [`SamplingModel`] and [`PriorSpec`].
//!
//! ```toml
//! [model]
//! kind = "logistic"
//! doses = [0.422, 0.744, 0.948, 2.069]
//! group_sizes = [5, 5, 5, 5]
//!
//! [base]
//! kind = "product"
//! factors = [
//!   { kind = "normal", mean = 0.0, cov = 100.0 },
//!   { kind = "student-t", mean = 0.0, cov = 6.25, lambda = 1.0 },
//! ]
//! ```
//!
//! Sample sizes are integers or the string `"inf"`. Scalar `mean`/`cov`
//! entries describe one-dimensional priors; vectors and nested arrays give the
//! k-dimensional forms.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BetaSupport, LogisticDesign, PriorSpec, SampleSize, SamplingModel};
use crate::{Error, Result};

impl Serialize for SampleSize {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SampleSize::Finite(n) => s.serialize_u64(*n),
            SampleSize::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SampleSize {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(SampleSize::Finite(n)),
            Raw::Text(s) if s.eq_ignore_ascii_case("inf") => Ok(SampleSize::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("sample size must be an integer or \"inf\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorParam {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl VectorParam {
    fn into_vec(self) -> Vec<f64> {
        match self {
            VectorParam::Scalar(x) => vec![x],
            VectorParam::Vector(v) => v,
        }
    }

    fn from_vector(v: &DVector<f64>) -> Self {
        if v.len() == 1 {
            VectorParam::Scalar(v[0])
        } else {
            VectorParam::Vector(v.iter().copied().collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixParam {
    Scalar(f64),
    Rows(Vec<Vec<f64>>),
}

impl MatrixParam {
    pub fn into_matrix(self, key: &str) -> Result<DMatrix<f64>> {
        match self {
            MatrixParam::Scalar(v) => Ok(DMatrix::from_element(1, 1, v)),
            MatrixParam::Rows(rows) => {
                let k = rows.len();
                if k == 0 || rows.iter().any(|r| r.len() != k) {
                    return Err(Error::config(key, "matrix must be square and nonempty"));
                }
                Ok(DMatrix::from_row_iterator(k, k, rows.into_iter().flatten()))
            }
        }
    }

    fn from_matrix(m: &DMatrix<f64>) -> Self {
        if m.nrows() == 1 {
            MatrixParam::Scalar(m[(0, 0)])
        } else {
            MatrixParam::Rows(m.row_iter().map(|r| r.iter().copied().collect()).collect())
        }
    }
}

fn default_k() -> usize {
    1
}

/// Model section of a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    LocationNormal {
        #[serde(default = "default_k")]
        k: usize,
        n: SampleSize,
    },
    ScaleNormal {
        n: SampleSize,
    },
    Binomial {
        n: SampleSize,
    },
    Logistic {
        /// Positive doses, log-transformed and standardized.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        doses: Option<Vec<f64>>,
        /// Raw predictor rows, centered on load.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        predictors: Option<Vec<Vec<f64>>>,
        group_sizes: Vec<u32>,
    },
    ShiftedMultinomial {
        n: u64,
    },
}

impl ModelConfig {
    pub fn build(self) -> Result<SamplingModel> {
        Ok(match self {
            ModelConfig::LocationNormal { k, n } => SamplingModel::LocationNormal { k, n },
            ModelConfig::ScaleNormal { n } => SamplingModel::ScaleNormal { n },
            ModelConfig::Binomial { n } => SamplingModel::Binomial { n },
            ModelConfig::ShiftedMultinomial { n } => SamplingModel::ShiftedMultinomial { n },
            ModelConfig::Logistic { doses, predictors, group_sizes } => match (doses, predictors) {
                (Some(d), None) => SamplingModel::Logistic(LogisticDesign::from_doses(&d, group_sizes)?),
                (None, Some(p)) => SamplingModel::Logistic(LogisticDesign::new(p, group_sizes)?),
                _ => return Err(Error::config("model", "logistic needs exactly one of `doses` or `predictors`")),
            },
        })
    }

    /// Describes an existing model. Logistic designs are written with their
    /// centered predictors, which reload to the same design.
    pub fn describe(model: &SamplingModel) -> Self {
        match model {
            SamplingModel::LocationNormal { k, n } => ModelConfig::LocationNormal { k: *k, n: *n },
            SamplingModel::ScaleNormal { n } => ModelConfig::ScaleNormal { n: *n },
            SamplingModel::Binomial { n } => ModelConfig::Binomial { n: *n },
            SamplingModel::ShiftedMultinomial { n } => ModelConfig::ShiftedMultinomial { n: *n },
            SamplingModel::Logistic(d) => ModelConfig::Logistic {
                doses: None,
                predictors: Some(d.predictors().to_vec()),
                group_sizes: d.group_sizes().to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SupportConfig {
    #[default]
    Unit,
    Symmetric,
}

/// Prior section of a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PriorConfig {
    Normal {
        mean: VectorParam,
        cov: MatrixParam,
    },
    StudentT {
        mean: VectorParam,
        cov: MatrixParam,
        lambda: f64,
    },
    GammaRate {
        alpha: f64,
        beta: f64,
    },
    Beta {
        alpha: f64,
        beta: f64,
        #[serde(default)]
        support: SupportConfig,
    },
    Product {
        factors: Vec<PriorConfig>,
    },
}

impl PriorConfig {
    /// Builds and validates the prior; `key` prefixes error locations.
    pub fn build(self, key: &str) -> Result<PriorSpec> {
        let rekey = |e: Error| match e {
            Error::Config { key: k, reason } => {
                let tail = k.strip_prefix("prior").unwrap_or(&k);
                Error::config(format!("{key}{tail}"), reason)
            }
            other => other,
        };
        let spec = match self {
            PriorConfig::Normal { mean, cov } => {
                PriorSpec::Normal { mu0: DVector::from_vec(mean.into_vec()), sigma: cov.into_matrix(&format!("{key}.cov"))? }
            }
            PriorConfig::StudentT { mean, cov, lambda } => PriorSpec::StudentT {
                mu0: DVector::from_vec(mean.into_vec()),
                sigma: cov.into_matrix(&format!("{key}.cov"))?,
                lambda,
            },
            PriorConfig::GammaRate { alpha, beta } => PriorSpec::GammaRatePrecision { alpha, beta },
            PriorConfig::Beta { alpha, beta, support } => PriorSpec::Beta {
                alpha,
                beta,
                support: match support {
                    SupportConfig::Unit => BetaSupport::Unit,
                    SupportConfig::Symmetric => BetaSupport::Symmetric,
                },
            },
            PriorConfig::Product { factors } => {
                let built = factors
                    .into_iter()
                    .enumerate()
                    .map(|(i, f)| f.build(&format!("{key}.factors[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                PriorSpec::Product(built)
            }
        };
        spec.check().map_err(rekey)?;
        Ok(spec)
    }

    pub fn describe(prior: &PriorSpec) -> Self {
        match prior {
            PriorSpec::Normal { mu0, sigma } => {
                PriorConfig::Normal { mean: VectorParam::from_vector(mu0), cov: MatrixParam::from_matrix(sigma) }
            }
            PriorSpec::StudentT { mu0, sigma, lambda } => PriorConfig::StudentT {
                mean: VectorParam::from_vector(mu0),
                cov: MatrixParam::from_matrix(sigma),
                lambda: *lambda,
            },
            PriorSpec::GammaRatePrecision { alpha, beta } => PriorConfig::GammaRate { alpha: *alpha, beta: *beta },
            PriorSpec::Beta { alpha, beta, support } => PriorConfig::Beta {
                alpha: *alpha,
                beta: *beta,
                support: match support {
                    BetaSupport::Unit => SupportConfig::Unit,
                    BetaSupport::Symmetric => SupportConfig::Symmetric,
                },
            },
            PriorSpec::Product(f) => PriorConfig::Product { factors: f.iter().map(PriorConfig::describe).collect() },
        }
    }
}
