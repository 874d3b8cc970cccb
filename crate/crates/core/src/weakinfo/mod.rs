//! Weak informativity of an alternative prior relative to a base prior.
//!
//! For a level `gamma`, `x_gamma` is the `gamma`-quantile of the base P-value
//! `P1(T)` under the base predictive `M1`. The alternative is weakly
//! informative at level `gamma` when `M1(P2(T) <= x_gamma) <= x_gamma`, and the
//! reduction is `1 - M1(P2(T) <= x_gamma) / x_gamma`.

use rayon::prelude::*;
use serde::Serialize;

use crate::conflict::lattice::{achievable_levels, mass_at_or_below};
use crate::conflict::{conflict_region, Lattice, LevelSets, LinePredictive, LogisticQuadrature, Predictive};
use crate::distmath::{tie_key, Rng};
use crate::modelprior::{validate, PriorSpec, SamplingModel, SufficientStat};
use crate::{Error, Result};

/// Absolute slack on continuous inequality checks.
pub const CONTINUOUS_TOL: f64 = 1e-9;

/// Verdict at a single level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelVerdict {
    Wi,
    NotWi,
    /// Monte-Carlo margin within three standard errors.
    Indeterminate,
}

/// Outcome of the uniform check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum UniformVerdict {
    UniformlyWi,
    /// Weakly informative at every level up to `gamma0`.
    UniformlyWiAtLevel { gamma0: f64 },
    NotUniformlyWi,
    Indeterminate,
}

impl UniformVerdict {
    pub fn is_uniform(&self) -> bool {
        matches!(self, UniformVerdict::UniformlyWi)
    }
}

/// Combined classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    WeaklyInformativeAtLevel,
    NotWiAtLevel,
    UniformlyWi,
    UniformlyWiAtLevel { gamma0: f64 },
    NotUniformlyWi,
    Indeterminate,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::WeaklyInformativeAtLevel => f.write_str("wi-at-level"),
            Classification::NotWiAtLevel => f.write_str("not-wi-at-level"),
            Classification::UniformlyWi => f.write_str("uniformly-wi"),
            Classification::UniformlyWiAtLevel { gamma0 } => write!(f, "uniformly-wi-at-level({gamma0:.6})"),
            Classification::NotUniformlyWi => f.write_str("not-uniformly-wi"),
            Classification::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

/// What a verdict was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Evidence {
    /// Exhaustive lattice enumeration; `levels` achievable base P-values checked.
    Lattice { points: usize, levels: usize },
    /// Deterministic grids for a continuous predictive.
    Grid { t0_points: usize, gamma_points: usize, near_ties: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

/// `M1(P2 <= x)` with an optional Monte-Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConflictProb {
    pub value: f64,
    pub stderr: Option<f64>,
}

/// Result of the uniform check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformCheck {
    pub verdict: UniformVerdict,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WiVerdict {
    pub gamma: f64,
    pub x_gamma: f64,
    pub conflict_prob: f64,
    pub conflict_prob_stderr: Option<f64>,
    /// `None` when `x_gamma = 0`.
    pub reduction: Option<f64>,
    pub level: LevelVerdict,
    pub uniform: Option<UniformCheck>,
    pub evidence: Evidence,
}

impl WiVerdict {
    pub fn classification(&self) -> Classification {
        match self.level {
            LevelVerdict::NotWi => Classification::NotWiAtLevel,
            LevelVerdict::Indeterminate => Classification::Indeterminate,
            LevelVerdict::Wi => match self.uniform.as_ref().map(|u| u.verdict) {
                None => Classification::WeaklyInformativeAtLevel,
                Some(UniformVerdict::UniformlyWi) => Classification::UniformlyWi,
                Some(UniformVerdict::UniformlyWiAtLevel { gamma0 }) => Classification::UniformlyWiAtLevel { gamma0 },
                Some(UniformVerdict::NotUniformlyWi) => Classification::NotUniformlyWi,
                Some(UniformVerdict::Indeterminate) => Classification::Indeterminate,
            },
        }
    }
}

/// Settings for Monte-Carlo paths and logistic quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct WiOptions {
    pub mc_samples: usize,
    pub seed: u64,
    pub logistic: LogisticQuadrature,
}

impl Default for WiOptions {
    fn default() -> Self {
        Self { mc_samples: 100_000, seed: 0, logistic: LogisticQuadrature::default() }
    }
}

/// Base and alternative predictives, built once and queried at many levels.
#[derive(Debug)]
pub struct Comparison {
    kind: Kind,
}

#[derive(Debug)]
enum Kind {
    Lattice(LatticePair),
    Line { base: Box<dyn LinePredictive>, alt: Box<dyn LinePredictive> },
    Sampled(SampledPair),
}

impl Comparison {
    pub fn new(model: &SamplingModel, base: &PriorSpec, alt: &PriorSpec) -> Result<Self> {
        Self::with_options(model, base, alt, &WiOptions::default())
    }

    pub fn with_options(model: &SamplingModel, base: &PriorSpec, alt: &PriorSpec, opts: &WiOptions) -> Result<Self> {
        validate(model, base)?;
        validate(model, alt)?;
        let b = Predictive::with_quadrature(model, base, &opts.logistic)?;
        let a = Predictive::with_quadrature(model, alt, &opts.logistic)?;
        Self::from_predictives(b, a, opts)
    }

    pub fn from_predictives(base: Predictive, alt: Predictive, opts: &WiOptions) -> Result<Self> {
        let kind = match (base, alt) {
            (Predictive::Lattice(b), Predictive::Lattice(a)) => Kind::Lattice(LatticePair::new(b, a)?),
            (Predictive::Line(b), Predictive::Line(a)) => Kind::Line { base: b, alt: a },
            (b @ (Predictive::Elliptical(_) | Predictive::Mixture(_)), a @ (Predictive::Elliptical(_) | Predictive::Mixture(_))) => {
                Kind::Sampled(SampledPair::new(b, a, opts.mc_samples, opts.seed)?)
            }
            _ => return Err(Error::domain("base and alternative predictives live on different spaces")),
        };
        Ok(Self { kind })
    }

    /// Two lattice pmfs on the same points, such as conditional predictives.
    pub fn from_lattices(base: Lattice, alt: Lattice) -> Result<Self> {
        Ok(Self { kind: Kind::Lattice(LatticePair::new(base, alt)?) })
    }

    /// The `gamma`-quantile of `P1(T)` under `M1`.
    pub fn x_gamma(&self, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        Ok(match &self.kind {
            Kind::Lattice(p) => p.x_gamma(gamma),
            Kind::Line { base, .. } => {
                if base.is_flat() {
                    1.0
                } else {
                    gamma
                }
            }
            Kind::Sampled(_) => gamma,
        })
    }

    /// `M1(P2(T) <= x)`.
    pub fn conflict_prob_at(&self, x: f64) -> ConflictProb {
        match &self.kind {
            Kind::Lattice(p) => ConflictProb { value: p.conflict_prob_at(x), stderr: None },
            Kind::Line { base, alt } => {
                ConflictProb { value: conflict_region(alt.as_ref(), x).mass(base.as_ref()), stderr: None }
            }
            Kind::Sampled(s) => s.conflict_prob_at(x),
        }
    }

    pub fn conflict_prob(&self, gamma: f64) -> Result<ConflictProb> {
        Ok(self.conflict_prob_at(self.x_gamma(gamma)?))
    }

    pub fn reduction(&self, gamma: f64) -> Result<f64> {
        let x = self.x_gamma(gamma)?;
        if x <= 0.0 {
            return Err(Error::domain("reduction is undefined when x_gamma = 0"));
        }
        Ok(1.0 - self.conflict_prob_at(x).value / x)
    }

    fn evidence(&self) -> Evidence {
        match &self.kind {
            Kind::Lattice(p) => Evidence::Lattice { points: p.m1.len(), levels: p.levels.len() },
            Kind::Line { .. } => Evidence::Grid { t0_points: 0, gamma_points: 1, near_ties: 0 },
            Kind::Sampled(s) => Evidence::MonteCarlo { samples: s.samples, seed: s.seed },
        }
    }

    /// Verdict at level `gamma`, without the uniform check.
    pub fn verdict(&self, gamma: f64) -> Result<WiVerdict> {
        let x = self.x_gamma(gamma)?;
        let e = self.conflict_prob_at(x);
        let level = level_verdict(&self.kind, e, x);
        Ok(WiVerdict {
            gamma,
            x_gamma: x,
            conflict_prob: e.value,
            conflict_prob_stderr: e.stderr,
            reduction: (x > 0.0).then(|| 1.0 - e.value / x),
            level,
            uniform: None,
            evidence: self.evidence(),
        })
    }

    /// Verdict at level `gamma` together with the uniform check.
    pub fn full_verdict(&self, gamma: f64) -> Result<WiVerdict> {
        let mut v = self.verdict(gamma)?;
        let u = self.uniform()?;
        v.evidence = u.evidence.clone();
        v.uniform = Some(u);
        Ok(v)
    }

    /// Uniform weak informativity and, failing that, the largest `gamma0`
    /// up to which it holds.
    pub fn uniform(&self) -> Result<UniformCheck> {
        match &self.kind {
            Kind::Lattice(p) => Ok(p.uniform()),
            Kind::Line { base, alt } => Ok(line_uniform(base.as_ref(), alt.as_ref())),
            Kind::Sampled(s) => Ok(s.uniform()),
        }
    }

    /// The tail-mass domination `M1(S) <= M2(S)` for `S = {m2* <= m2*(t0)}` at
    /// each `t0` (continuous pairs only); returns `(P2(t0), M1(S))` per point.
    pub fn tail_mass_pairs(&self, t0: &[f64]) -> Result<Vec<(f64, f64)>> {
        let Kind::Line { base, alt } = &self.kind else {
            return Err(Error::domain("the tail-mass check applies to one-dimensional continuous predictives"));
        };
        let ls = LevelSets::new(alt.as_ref());
        Ok(t0
            .par_iter()
            .map(|&t| {
                let s = ls.below(alt.ln_adjusted(t));
                (s.mass(alt.as_ref()), s.mass(base.as_ref()))
            })
            .collect())
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("gamma must lie in (0, 1), got {gamma}")))
    }
}

fn level_verdict(kind: &Kind, e: ConflictProb, x: f64) -> LevelVerdict {
    match kind {
        Kind::Lattice(_) => {
            if tie_key(e.value) <= tie_key(x) {
                LevelVerdict::Wi
            } else {
                LevelVerdict::NotWi
            }
        }
        Kind::Line { .. } => {
            if e.value <= x + CONTINUOUS_TOL {
                LevelVerdict::Wi
            } else {
                LevelVerdict::NotWi
            }
        }
        Kind::Sampled(_) => {
            let se = e.stderr.unwrap_or(0.0);
            if e.value + 3.0 * se < x {
                LevelVerdict::Wi
            } else if e.value - 3.0 * se > x {
                LevelVerdict::NotWi
            } else {
                LevelVerdict::Indeterminate
            }
        }
    }
}

// ---------------------------------------------------------------- lattices

#[derive(Debug)]
struct LatticePair {
    m1: Vec<f64>,
    p1: Vec<f64>,
    p2: Vec<f64>,
    /// Achievable base P-values, ascending.
    levels: Vec<f64>,
}

impl LatticePair {
    fn new(base: Lattice, alt: Lattice) -> Result<Self> {
        if base.shape != alt.shape {
            return Err(Error::domain("base and alternative lattices differ"));
        }
        let p1 = base.ladder();
        let p2 = alt.ladder();
        let levels = achievable_levels(&p1);
        Ok(Self { m1: base.pmf, p1, p2, levels })
    }

    fn x_gamma(&self, gamma: f64) -> f64 {
        let g = tie_key(gamma);
        for &v in &self.levels {
            if tie_key(mass_at_or_below(&self.m1, &self.p1, v)) >= g {
                return v;
            }
        }
        *self.levels.last().expect("nonempty lattice")
    }

    fn conflict_prob_at(&self, x: f64) -> f64 {
        mass_at_or_below(&self.m1, &self.p2, x)
    }

    /// Definition-based check over every achievable base level `v`:
    /// `M1(P2 <= v) <= v`.
    fn uniform(&self) -> UniformCheck {
        let ok: Vec<bool> = self.levels.iter().map(|&v| tie_key(self.conflict_prob_at(v)) <= tie_key(v)).collect();
        let verdict = match ok.iter().position(|b| !b) {
            None => UniformVerdict::UniformlyWi,
            Some(0) => UniformVerdict::NotUniformlyWi,
            Some(f) => UniformVerdict::UniformlyWiAtLevel { gamma0: self.levels[f - 1] },
        };
        UniformCheck { verdict, evidence: Evidence::Lattice { points: self.m1.len(), levels: self.levels.len() } }
    }
}

// ------------------------------------------------------- continuous lines

/// Number of `t0` points in the tail-mass grid.
pub const T0_GRID: usize = 512;

/// Level grid `{0.001, ..., 0.999}`.
pub fn gamma_grid() -> Vec<f64> {
    (1..1000).map(|i| i as f64 / 1000.0).collect()
}

/// Tail-mass grid: `mu +- 10 max(scale1, scale2)` for location predictives on
/// the real line, else 512 quantiles of `M2` over `[1e-6, 1 - 1e-6]`.
pub fn t0_grid(base: &dyn LinePredictive, alt: &dyn LinePredictive) -> Vec<f64> {
    let (lo, hi) = alt.support();
    if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
        let mu = alt.symmetric_center().or_else(|| alt.breakpoints().first().copied()).unwrap_or(0.0);
        let half = 10.0 * base.scale().max(alt.scale());
        return (0..T0_GRID).map(|i| mu - half + 2.0 * half * i as f64 / (T0_GRID - 1) as f64).collect();
    }
    (0..T0_GRID)
        .map(|i| {
            let p = 1e-6 + (1.0 - 2e-6) * i as f64 / (T0_GRID - 1) as f64;
            line_quantile(alt, p)
        })
        .collect()
}

fn line_quantile(d: &dyn LinePredictive, p: f64) -> f64 {
    let (mut lo, mut hi) = d.support();
    let s = d.scale();
    if !lo.is_finite() {
        lo = hi.min(0.0) - s;
        while d.cdf(lo) > p {
            lo -= 2.0 * (hi.min(0.0) - lo).max(s);
        }
    }
    if !hi.is_finite() {
        hi = lo.max(0.0) + s;
        while d.cdf(hi) < p {
            hi += 2.0 * (hi - lo.max(0.0)).max(s);
        }
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        if d.cdf(m) < p {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

fn line_uniform(base: &dyn LinePredictive, alt: &dyn LinePredictive) -> UniformCheck {
    let conflict_prob = |g: f64| conflict_region(alt, g).mass(base);
    let grid = gamma_grid();
    let margins: Vec<f64> = grid.par_iter().map(|&g| conflict_prob(g) - g).collect();

    // tail-mass domination on the t0 grid
    let ls = LevelSets::new(alt);
    let t0 = t0_grid(base, alt);
    let tails: Vec<(f64, f64)> = t0
        .par_iter()
        .map(|&t| {
            let s = ls.below(alt.ln_adjusted(t));
            (s.mass(alt), s.mass(base))
        })
        .collect();

    let near_ties = margins.iter().filter(|m| m.abs() <= CONTINUOUS_TOL).count()
        + tails.iter().filter(|(a, b)| (b - a).abs() <= CONTINUOUS_TOL).count();
    let evidence = Evidence::Grid { t0_points: t0.len(), gamma_points: grid.len(), near_ties };

    let mut first_fail = f64::INFINITY;
    for (&g, &m) in grid.iter().zip(&margins) {
        if m > CONTINUOUS_TOL {
            first_fail = g;
            break;
        }
    }
    for &(g2, m1) in &tails {
        if m1 > g2 + CONTINUOUS_TOL && g2 > 0.0 {
            first_fail = first_fail.min(g2);
        }
    }
    if first_fail == f64::INFINITY {
        return UniformCheck { verdict: UniformVerdict::UniformlyWi, evidence };
    }
    // largest passing grid level below the first failure
    let lo = grid
        .iter()
        .zip(&margins)
        .take_while(|(g, _)| **g < first_fail)
        .filter(|(_, m)| **m <= CONTINUOUS_TOL)
        .map(|(g, _)| *g)
        .last();
    let Some(mut lo) = lo else {
        return UniformCheck { verdict: UniformVerdict::NotUniformlyWi, evidence };
    };
    let mut hi = first_fail;
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if conflict_prob(mid) - mid <= CONTINUOUS_TOL {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    UniformCheck { verdict: UniformVerdict::UniformlyWiAtLevel { gamma0: lo }, evidence }
}

// ------------------------------------------------------ Monte-Carlo pairs

/// Multivariate pairs: `P2` is evaluated at draws from `M1`, exactly for
/// elliptical alternatives and against draws from `M2` otherwise.
#[derive(Debug)]
struct SampledPair {
    /// `P2(t)` at each base draw, sorted ascending.
    p2_at_base: Vec<f64>,
    samples: usize,
    seed: u64,
}

impl SampledPair {
    fn new(base: Predictive, alt: Predictive, samples: usize, seed: u64) -> Result<Self> {
        let root = Rng::new(seed);
        let mut r1 = root.substream(1);
        let draws: Vec<Vec<f64>> = (0..samples)
            .map(|_| match base.sample(&mut r1) {
                SufficientStat::Real(v) => v,
                SufficientStat::Counts(_) => unreachable!("continuous predictive"),
            })
            .collect();
        let mut p2: Vec<f64> = match &alt {
            Predictive::Elliptical(e) => draws.iter().map(|t| e.pvalue(t)).collect(),
            Predictive::Mixture(m) => {
                let mut r2 = root.substream(2);
                let mut ref_dens: Vec<f64> = (0..samples)
                    .map(|_| match alt.sample(&mut r2) {
                        SufficientStat::Real(v) => m.ln_density(&v),
                        SufficientStat::Counts(_) => unreachable!("continuous predictive"),
                    })
                    .collect();
                ref_dens.sort_by(f64::total_cmp);
                draws
                    .iter()
                    .map(|t| {
                        let d = m.ln_density(t);
                        ref_dens.partition_point(|&r| r <= d) as f64 / samples as f64
                    })
                    .collect()
            }
            _ => return Err(Error::domain("Monte-Carlo comparison needs multivariate predictives")),
        };
        p2.sort_by(f64::total_cmp);
        Ok(Self { p2_at_base: p2, samples, seed })
    }

    fn conflict_prob_at(&self, x: f64) -> ConflictProb {
        let k = self.p2_at_base.partition_point(|&p| p <= x);
        let p = k as f64 / self.samples as f64;
        ConflictProb { value: p, stderr: Some((p * (1.0 - p) / self.samples as f64).sqrt()) }
    }

    fn uniform(&self) -> UniformCheck {
        let mut any_indeterminate = false;
        let mut first_fail = None;
        let grid = gamma_grid();
        for &g in &grid {
            let e = self.conflict_prob_at(g);
            let se = e.stderr.unwrap_or(0.0);
            if e.value - 3.0 * se > g {
                first_fail = Some(g);
                break;
            }
            if e.value + 3.0 * se >= g {
                any_indeterminate = true;
            }
        }
        let verdict = match first_fail {
            None if any_indeterminate => UniformVerdict::Indeterminate,
            None => UniformVerdict::UniformlyWi,
            Some(g) if g <= grid[0] => UniformVerdict::NotUniformlyWi,
            Some(g) => UniformVerdict::UniformlyWiAtLevel { gamma0: g - 0.001 },
        };
        UniformCheck { verdict, evidence: Evidence::MonteCarlo { samples: self.samples, seed: self.seed } }
    }
}

// ------------------------------------------------------------ free functions

/// `x_gamma` for the base prior.
pub fn x_gamma(model: &SamplingModel, base: &PriorSpec, gamma: f64) -> Result<f64> {
    Comparison::new(model, base, base)?.x_gamma(gamma)
}

/// `M1(P2(T) <= x_gamma)`.
pub fn conflict_probability(model: &SamplingModel, base: &PriorSpec, alt: &PriorSpec, gamma: f64) -> Result<ConflictProb> {
    Comparison::new(model, base, alt)?.conflict_prob(gamma)
}

/// `1 - M1(P2(T) <= x_gamma) / x_gamma`.
pub fn reduction(model: &SamplingModel, base: &PriorSpec, alt: &PriorSpec, gamma: f64) -> Result<f64> {
    Comparison::new(model, base, alt)?.reduction(gamma)
}

/// Verdict at `gamma` with the uniform check.
pub fn check(model: &SamplingModel, base: &PriorSpec, alt: &PriorSpec, gamma: f64) -> Result<WiVerdict> {
    Comparison::new(model, base, alt)?.full_verdict(gamma)
}

pub fn is_uniformly_wi(model: &SamplingModel, base: &PriorSpec, alt: &PriorSpec) -> Result<UniformCheck> {
    Comparison::new(model, base, alt)?.uniform()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelprior::SampleSize;

    fn loc(n: u64) -> SamplingModel {
        SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(n) }
    }

    #[test]
    fn base_against_itself_is_reflexive() {
        let m = loc(20);
        let p = PriorSpec::normal1(0.0, 1.0).unwrap();
        let c = Comparison::new(&m, &p, &p).unwrap();
        for g in [0.01, 0.05, 0.5] {
            assert!((c.conflict_prob(g).unwrap().value - g).abs() < 1e-12);
            assert!(c.reduction(g).unwrap().abs() < 1e-10);
        }
        assert_eq!(c.uniform().unwrap().verdict, UniformVerdict::UniformlyWi);
    }

    #[test]
    fn wider_normal_is_uniformly_wi_and_narrower_is_not() {
        let m = loc(20);
        let base = PriorSpec::normal1(0.0, 1.0).unwrap();
        let wide = PriorSpec::normal1(0.0, 2.0).unwrap();
        let narrow = PriorSpec::normal1(0.0, 0.5).unwrap();
        assert_eq!(is_uniformly_wi(&m, &base, &wide).unwrap().verdict, UniformVerdict::UniformlyWi);
        assert_eq!(is_uniformly_wi(&m, &base, &narrow).unwrap().verdict, UniformVerdict::NotUniformlyWi);
    }

    #[test]
    fn beta_binomial_x_gamma() {
        let m = SamplingModel::Binomial { n: SampleSize::Finite(20) };
        let base = PriorSpec::beta(6.0, 6.0).unwrap();
        let x = x_gamma(&m, &base, 0.05).unwrap();
        assert!((x - 0.0588).abs() < 5e-4, "{x}");
        let flat = PriorSpec::beta(1.0, 1.0).unwrap();
        let v = check(&m, &base, &flat, 0.05).unwrap();
        assert_eq!(v.classification(), Classification::UniformlyWi);
        assert!(v.conflict_prob <= 0.0588);
    }

    #[test]
    fn flat_base_in_the_limit() {
        let m = SamplingModel::Binomial { n: SampleSize::Infinite };
        let flat = PriorSpec::beta(1.0, 1.0).unwrap();
        let other = PriorSpec::beta(3.0, 2.0).unwrap();
        let c = Comparison::new(&m, &flat, &other).unwrap();
        assert_eq!(c.x_gamma(0.05).unwrap(), 1.0);
        let c = Comparison::new(&m, &other, &flat).unwrap();
        assert_eq!(c.conflict_prob(0.05).unwrap().value, 0.0);
    }
}
