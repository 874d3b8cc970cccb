//! Run configuration: model and priors plus per-command sections.
//!
//! ```toml
//! gamma = 0.05
//! seed = 1
//! observed = [0, 1, 3, 5]
//!
//! [model]      # see modelprior's config schema
//! [base]
//! [alt]
//!
//! [scan]
//! kind = "logistic"            # beta-binomial | logistic | multinomial
//! family = "normal-normal"     # logistic only
//! reduction = true             # logistic only: reduction field and contours
//! a = { name = "sigma0", lo = 0.25, hi = 10.0, steps = 50 }
//! b = { name = "sigma1", lo = 0.25, hi = 10.0, steps = 50 }
//!
//! [calibrate]
//! family = "t"
//! lambda = 3.0
//! sigma1_sq = 1.0
//! p = 0.5
//! n = "inf"
//!
//! [regress]
//! n = 50
//! k = 2
//! base = { alpha = 2.0, tau = 5.0, sigma = [[1.0, 0.0], [0.0, 1.0]] }
//! alt = { alpha = 1.0, tau = 3.0, sigma = [[2.0, 0.0], [0.0, 2.0]], lambda = 3.0 }
//! ```

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conflict::MethodChoice;
use crate::modelprior::{check_stat, MatrixParam, ModelConfig, PriorConfig, PriorSpec, SampleSize, SamplingModel, SufficientStat};
use crate::{Error, Result};

/// Built-in configurations selectable by name with `--config`.
pub const PRESETS: [(&str, &str); 6] = [
    ("bioassay_normal", include_str!("../../presets/bioassay_normal.toml")),
    ("bioassay_cauchy", include_str!("../../presets/bioassay_cauchy.toml")),
    ("beta_binomial", include_str!("../../presets/beta_binomial.toml")),
    ("multinomial_ancillary", include_str!("../../presets/multinomial_ancillary.toml")),
    ("normal_vs_t", include_str!("../../presets/normal_vs_t.toml")),
    ("regression", include_str!("../../presets/regression.toml")),
];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed: Option<Observed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<PriorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt: Option<PriorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrate: Option<CalibrateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regress: Option<RegressConfig>,
}

/// Observed statistic: a count, a real, or a vector of either.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observed {
    Count(u64),
    Real(f64),
    Counts(Vec<u64>),
    Reals(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    BetaBinomial,
    Logistic,
    Multinomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub kind: ScanKind,
    pub a: AxisConfig,
    pub b: AxisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub reduction: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contours: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u2: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateConfig {
    #[serde(default = "default_family")]
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default = "one")]
    pub sigma1_sq: f64,
    #[serde(default = "half")]
    pub p: f64,
    /// Absent means the limiting regime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<SampleSize>,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        Self { family: default_family(), lambda: None, sigma1_sq: 1.0, p: 0.5, n: None }
    }
}

fn default_family() -> String {
    "normal".into()
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressPriorConfig {
    pub alpha: f64,
    pub tau: f64,
    pub sigma: MatrixParam,
    /// t degrees of freedom for the coefficients; absent or `inf` is normal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressConfig {
    pub n: usize,
    pub k: usize,
    pub base: RegressPriorConfig,
    pub alt: RegressPriorConfig,
}

pub(crate) fn matrix(m: &MatrixParam, key: &str) -> Result<DMatrix<f64>> {
    m.clone().into_matrix(key)
}

pub(crate) fn parse_sample_size(s: &str) -> Result<SampleSize> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(SampleSize::Infinite);
    }
    s.parse::<u64>()
        .ok()
        .filter(|&n| n > 0)
        .map(SampleSize::Finite)
        .ok_or_else(|| Error::config("n", format!("expected a positive integer or inf, got {s:?}")))
}

/// Parses `AxB` into step counts.
pub(crate) fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::config("grid", format!("expected AxB with positive integers, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

impl RunConfig {
    /// Loads a TOML file, or a preset when no such file exists.
    pub fn load(name: &str) -> Result<Self> {
        let text = match std::fs::read_to_string(name) {
            Ok(t) => t,
            Err(e) => match PRESETS.iter().find(|(k, _)| *k == name) {
                Some((_, t)) => (*t).to_string(),
                None => {
                    let names: Vec<&str> = PRESETS.iter().map(|(k, _)| *k).collect();
                    return Err(Error::config(
                        "config",
                        format!("cannot read {name:?} ({e}) and it is not a preset ({})", names.join(", ")),
                    ));
                }
            },
        };
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    /// Canonical TOML text and its SHA-256 in hex.
    pub fn canonical(&self) -> Result<(String, String)> {
        let text = toml::to_string(self).map_err(|e| Error::config("config", e.to_string()))?;
        let hash = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        Ok((text, hash))
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.unwrap_or(0.05)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn mc_samples(&self) -> usize {
        self.mc_samples.unwrap_or(100_000)
    }

    pub fn method_choice(&self) -> Result<MethodChoice> {
        self.method.as_deref().unwrap_or("auto").parse()
    }

    pub fn model(&self) -> Result<SamplingModel> {
        self.model.clone().ok_or_else(|| Error::config("model", "missing [model] section"))?.build()
    }

    pub fn base(&self) -> Result<PriorSpec> {
        self.base.clone().ok_or_else(|| Error::config("base", "missing [base] section"))?.build("base")
    }

    pub fn alt(&self) -> Result<PriorSpec> {
        self.alt.clone().ok_or_else(|| Error::config("alt", "missing [alt] section"))?.build("alt")
    }

    pub fn observed(&self, model: &SamplingModel) -> Result<SufficientStat> {
        let obs = self.observed.clone().ok_or_else(|| Error::config("observed", "missing observed statistic"))?;
        let t = match (model.is_discrete(), obs) {
            (true, Observed::Count(c)) => SufficientStat::Counts(vec![c]),
            (true, Observed::Counts(v)) => SufficientStat::Counts(v),
            (true, _) => return Err(Error::config("observed", "this model needs nonnegative integer counts")),
            (false, Observed::Count(c)) => SufficientStat::scalar(c as f64),
            (false, Observed::Real(x)) => SufficientStat::scalar(x),
            (false, Observed::Counts(v)) => SufficientStat::Real(v.into_iter().map(|c| c as f64).collect()),
            (false, Observed::Reals(v)) => SufficientStat::Real(v),
        };
        check_stat(model, &t).map_err(|e| Error::config("observed", e.to_string()))?;
        Ok(t)
    }

    /// Switches the model to its limiting form.
    pub(crate) fn make_asymptotic(&mut self) -> Result<()> {
        let Some(m) = &mut self.model else {
            return Ok(());
        };
        match m {
            ModelConfig::LocationNormal { n, .. } | ModelConfig::ScaleNormal { n } | ModelConfig::Binomial { n } => {
                *n = SampleSize::Infinite;
                Ok(())
            }
            _ => Err(Error::config("model", "--asymptotic needs a normal or binomial model")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_round_trip() {
        for (name, _) in PRESETS {
            let cfg = RunConfig::load(name).unwrap();
            let (text, hash) = cfg.canonical().unwrap();
            assert_eq!(RunConfig::parse(&text).unwrap(), cfg, "{name}");
            assert_eq!(hash.len(), 64);
        }
    }

    #[test]
    fn grid_and_sample_size() {
        assert_eq!(parse_grid("50x40").unwrap(), (50, 40));
        assert!(parse_grid("50").is_err());
        assert!(parse_grid("0x3").is_err());
        assert_eq!(parse_sample_size("inf").unwrap(), SampleSize::Infinite);
        assert!(parse_sample_size("0").is_err());
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = RunConfig::parse("gama = 0.1").unwrap_err();
        assert!(e.to_string().contains("gama"), "{e}");
    }
}
