//! Grid scans over alternative-prior hyperparameters for the discrete
//! applications: beta-binomial, grouped logistic regression and the shifted
//! multinomial with ancillaries.

mod contour;
mod logistic;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::conflict::lattice::multinomial_conditional_lattice;
use crate::conflict::Method;
use crate::modelprior::{ModelConfig, PriorConfig};
use crate::modelprior::{Ancillary, PriorSpec, SampleSize, SamplingModel};
use crate::weakinfo::{Comparison, LevelVerdict, UniformVerdict, WiVerdict};
use crate::{Error, Result};

pub use contour::{marching_squares, Polyline};
pub use logistic::{
    extreme_total_mass, logistic_reduction, logistic_scan, logistic_slice, plateau_center, Factor, LogisticFamily,
    Slice, SliceAxis, PLATEAU_DELTA,
};

/// Evenly spaced values of one named hyperparameter, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let name = name.into();
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(Error::domain(format!("axis {name}: need 0 < lo <= hi, got [{lo}, {hi}]")));
        }
        if steps == 0 || (steps == 1 && hi != lo) {
            return Err(Error::domain(format!("axis {name}: {steps} steps cannot span [{lo}, {hi}]")));
        }
        Ok(Self { name, lo, hi, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.hi } else { self.lo + h * i as f64 }).collect()
    }
}

/// Classification of one scan cell at the scan's level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellClass {
    UniformlyWi,
    WiAtLevel,
    NotWi,
    Indeterminate,
}

impl CellClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CellClass::UniformlyWi => "uniformly-wi",
            CellClass::WiAtLevel => "wi-at-level",
            CellClass::NotWi => "not-wi",
            CellClass::Indeterminate => "indeterminate",
        }
    }

    /// Weakly informative at the scan level (uniform cells included).
    pub fn is_wi(self) -> bool {
        matches!(self, CellClass::UniformlyWi | CellClass::WiAtLevel)
    }

    pub fn from_verdict(v: &WiVerdict) -> Self {
        match v.level {
            LevelVerdict::NotWi => CellClass::NotWi,
            LevelVerdict::Indeterminate => CellClass::Indeterminate,
            LevelVerdict::Wi => match v.uniform.as_ref().map(|u| u.verdict) {
                Some(UniformVerdict::UniformlyWi) => CellClass::UniformlyWi,
                _ => CellClass::WiAtLevel,
            },
        }
    }
}

impl std::fmt::Display for CellClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub a: f64,
    pub b: f64,
    pub class: CellClass,
    /// `M1(P2 <= x_gamma)`; the largest over ancillaries when conditioning.
    pub conflict_prob: f64,
    /// Last level at which the uniform check still held, when it fails.
    pub gamma0: Option<f64>,
    pub method: Method,
    pub seed: u64,
}

/// Classified grid of alternative priors, row-major with `a` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionScan {
    pub axes: [Axis; 2],
    pub cells: Vec<Cell>,
    pub gamma: f64,
    /// Base-prior `x_gamma`, one entry per conditioning event.
    pub x_gamma: Vec<(String, f64)>,
    pub base: PriorSpec,
    pub model: SamplingModel,
    pub seed: u64,
}

impl RegionScan {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.axes[1].steps + j]
    }

    pub fn classes(&self) -> Vec<Vec<CellClass>> {
        self.cells.chunks(self.axes[1].steps).map(|r| r.iter().map(|c| c.class).collect()).collect()
    }

    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }

    /// CSV with a commented provenance header. Values use shortest
    /// round-trip formatting, so identical scans give identical bytes.
    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut s = provenance_header("region scan", &self.model, &self.base, self.gamma, &self.x_gamma, self.seed, config_hash);
        let _ = writeln!(s, "{},{},classification,method,pvalue_evidence,seed", self.axes[0].name, self.axes[1].name);
        for c in &self.cells {
            let _ = writeln!(s, "{},{},{},{},{},{}", c.a, c.b, c.class, method_tag(&c.method), c.conflict_prob, c.seed);
        }
        s
    }
}

/// Reductions `1 - M1(P2 <= x_gamma)/x_gamma` over a grid, row-major with `a` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionField {
    pub axes: [Axis; 2],
    pub values: Vec<f64>,
    pub gamma: f64,
    pub x_gamma: f64,
    pub base: PriorSpec,
    pub model: SamplingModel,
    pub method: Method,
}

impl ReductionField {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axes[1].steps + j]
    }

    pub fn to_csv(&self, seed: u64, config_hash: &str) -> String {
        let xg = [("base".to_string(), self.x_gamma)];
        let mut s = provenance_header("reduction field", &self.model, &self.base, self.gamma, &xg, seed, config_hash);
        let _ = writeln!(s, "{},{},reduction,method,pvalue_evidence", self.axes[0].name, self.axes[1].name);
        let (av, bv) = (self.axes[0].values(), self.axes[1].values());
        for (i, a) in av.iter().enumerate() {
            for (j, b) in bv.iter().enumerate() {
                let r = self.value(i, j);
                let conflict_prob = self.x_gamma * (1.0 - r);
                let _ = writeln!(s, "{a},{b},{r},{},{conflict_prob}", method_tag(&self.method));
            }
        }
        s
    }

    /// Contours of the reduction at each level, as polylines in axis units.
    pub fn contours(&self, levels: &[f64]) -> Vec<Polyline> {
        let (av, bv) = (self.axes[0].values(), self.axes[1].values());
        levels.iter().flat_map(|&l| marching_squares(&av, &bv, &self.values, l)).collect()
    }

    pub fn contours_csv(&self, levels: &[f64], seed: u64, config_hash: &str) -> String {
        let xg = [("base".to_string(), self.x_gamma)];
        let mut s = provenance_header("reduction contours", &self.model, &self.base, self.gamma, &xg, seed, config_hash);
        let _ = writeln!(s, "level,polyline,vertex,{},{}", self.axes[0].name, self.axes[1].name);
        for (id, p) in self.contours(levels).iter().enumerate() {
            for (v, (x, y)) in p.points.iter().enumerate() {
                let _ = writeln!(s, "{},{id},{v},{x},{y}", p.level);
            }
        }
        s
    }
}

fn method_tag(m: &Method) -> String {
    match m {
        Method::ClosedForm => "closed-form".into(),
        Method::Enumeration => "enumeration".into(),
        Method::Quadrature => "quadrature".into(),
        Method::MonteCarlo { samples, .. } => format!("monte-carlo({samples})"),
    }
}

fn provenance_header(
    what: &str,
    model: &SamplingModel,
    base: &PriorSpec,
    gamma: f64,
    x_gamma: &[(String, f64)],
    seed: u64,
    config_hash: &str,
) -> String {
    let model = serde_json::to_string(&ModelConfig::describe(model)).unwrap_or_default();
    let base = serde_json::to_string(&PriorConfig::describe(base)).unwrap_or_default();
    let xs: Vec<String> = x_gamma.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!(
        "# priorinfo {what}\n# seed={seed} config_sha256={config_hash}\n# model={model}\n# base={base}\n# gamma={gamma} x_gamma: {}\n",
        xs.join(" ")
    )
}

/// Per-cell seed derived from the scan seed and the cell index (SplitMix64).
pub fn cell_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Evaluates `f` on every grid cell in parallel; results come back in index order.
pub(crate) fn grid_map<T, F>(axes: &[Axis; 2], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, f64, f64) -> Result<T> + Sync,
{
    let (av, bv) = (axes[0].values(), axes[1].values());
    let nb = bv.len();
    (0..av.len() * nb).into_par_iter().map(|i| f(i, av[i / nb], bv[i % nb])).collect()
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("gamma must lie in (0, 1), got {gamma}")))
    }
}

/// Beta(alpha, beta) alternatives against a Beta base for a binomial count.
/// `n = inf` compares the priors' own density ladders.
pub fn betabinom_scan(n: SampleSize, base: &PriorSpec, gamma: f64, alpha: &Axis, beta: &Axis, seed: u64) -> Result<RegionScan> {
    check_gamma(gamma)?;
    if n == SampleSize::Finite(0) {
        return Err(Error::domain("n must be at least 1"));
    }
    let model = SamplingModel::Binomial { n };
    let x0 = Comparison::new(&model, base, base)?.x_gamma(gamma)?;
    let method = if n.is_infinite() { Method::ClosedForm } else { Method::Enumeration };
    let axes = [alpha.clone(), beta.clone()];
    let cells = grid_map(&axes, |i, a, b| {
        let alt = PriorSpec::beta(a, b)?;
        let v = Comparison::new(&model, base, &alt)?.full_verdict(gamma)?;
        Ok(cell_from(a, b, &v, method, cell_seed(seed, i)))
    })?;
    Ok(RegionScan { axes, cells, gamma, x_gamma: vec![("base".into(), x0)], base: base.clone(), model, seed })
}

fn gamma0_of(v: &WiVerdict) -> Option<f64> {
    match v.uniform.as_ref().map(|u| u.verdict) {
        Some(UniformVerdict::UniformlyWiAtLevel { gamma0 }) => Some(gamma0),
        _ => None,
    }
}

pub(crate) fn cell_from(a: f64, b: f64, v: &WiVerdict, method: Method, seed: u64) -> Cell {
    Cell { a, b, class: CellClass::from_verdict(v), conflict_prob: v.conflict_prob, gamma0: gamma0_of(v), method, seed }
}

/// Boundaries along the symmetric slice `Beta(a, a)`, `a` above the base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricBoundaries {
    /// Largest `a` that is still uniformly weakly informative.
    pub uniform: f64,
    /// Largest `a` that is still weakly informative at the level.
    pub level: f64,
}

/// Bisects the two boundaries of `Beta(a, a)` against a base on `[lo, hi]`,
/// assuming each property holds at `lo` and fails at `hi`.
pub fn betabinom_symmetric_boundaries(n: u64, base: &PriorSpec, gamma: f64, lo: f64, hi: f64, tol: f64) -> Result<SymmetricBoundaries> {
    check_gamma(gamma)?;
    let model = SamplingModel::Binomial { n: SampleSize::Finite(n) };
    let verdict = |a: f64| -> Result<WiVerdict> { Comparison::new(&model, base, &PriorSpec::beta(a, a)?)?.full_verdict(gamma) };
    let search = |pred: &dyn Fn(&WiVerdict) -> bool| -> Result<f64> {
        let (mut l, mut h) = (lo, hi);
        if !pred(&verdict(l)?) || pred(&verdict(h)?) {
            return Err(Error::numerical("symmetric boundary", format!("property does not change sign on [{lo}, {hi}]")));
        }
        while h - l > tol {
            let m = 0.5 * (l + h);
            if pred(&verdict(m)?) {
                l = m;
            } else {
                h = m;
            }
        }
        Ok(0.5 * (l + h))
    };
    let uniform = search(&|v| CellClass::from_verdict(v) == CellClass::UniformlyWi)?;
    let level = search(&|v| v.level == LevelVerdict::Wi)?;
    Ok(SymmetricBoundaries { uniform, level })
}

/// Conditional checks of `Beta(a, b)` on `[-1, 1]` against a base for the
/// shifted multinomial, given the observed values of both maximal
/// ancillaries. A cell is weakly informative only if it is so under both.
pub fn multinomial_ancillary_scan(
    n: u64,
    u1: u64,
    u2: u64,
    base: &PriorSpec,
    gamma: f64,
    alpha: &Axis,
    beta: &Axis,
    seed: u64,
) -> Result<RegionScan> {
    check_gamma(gamma)?;
    if u1 > n || u2 > n {
        return Err(Error::domain(format!("ancillary values ({u1}, {u2}) must not exceed n = {n}")));
    }
    let (ba, bb) = match base {
        PriorSpec::Beta { alpha, beta, .. } => (*alpha, *beta),
        other => return Err(Error::Unsupported { model: "shifted-multinomial".into(), prior: other.name().into() }),
    };
    let model = SamplingModel::ShiftedMultinomial { n };
    let obs = [(Ancillary::U1, u1), (Ancillary::U2, u2)];
    let base_lattices = obs
        .iter()
        .map(|&(anc, u)| multinomial_conditional_lattice(n, ba, bb, anc, u))
        .collect::<Result<Vec<_>>>()?;
    let x_gamma = obs
        .iter()
        .zip(&base_lattices)
        .map(|(&(anc, _), l)| Ok((anc.name().to_string(), Comparison::from_lattices(l.clone(), l.clone())?.x_gamma(gamma)?)))
        .collect::<Result<Vec<_>>>()?;
    let axes = [alpha.clone(), beta.clone()];
    let cells = grid_map(&axes, |i, a, b| {
        let verdicts = obs
            .iter()
            .zip(&base_lattices)
            .map(|(&(anc, u), bl)| {
                let alt = multinomial_conditional_lattice(n, a, b, anc, u)?;
                Comparison::from_lattices(bl.clone(), alt)?.full_verdict(gamma)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(combine_ancillaries(a, b, &verdicts, cell_seed(seed, i)))
    })?;
    Ok(RegionScan { axes, cells, gamma, x_gamma, base: base.clone(), model, seed })
}

fn combine_ancillaries(a: f64, b: f64, verdicts: &[WiVerdict], seed: u64) -> Cell {
    let classes: Vec<CellClass> = verdicts.iter().map(CellClass::from_verdict).collect();
    let class = if classes.contains(&CellClass::NotWi) {
        CellClass::NotWi
    } else if classes.contains(&CellClass::Indeterminate) {
        CellClass::Indeterminate
    } else if classes.iter().all(|&c| c == CellClass::UniformlyWi) {
        CellClass::UniformlyWi
    } else {
        CellClass::WiAtLevel
    };
    let conflict_prob = verdicts.iter().map(|v| v.conflict_prob).fold(0.0, f64::max);
    let gamma0 = verdicts.iter().filter_map(gamma0_of).reduce(f64::min);
    Cell { a, b, class, conflict_prob, gamma0, method: Method::Enumeration, seed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values_hit_endpoints() {
        let a = Axis::new("a", 0.5, 2.0, 4).unwrap();
        assert_eq!(a.values(), vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(Axis::new("a", 3.0, 3.0, 1).unwrap().values(), vec![3.0]);
        assert!(Axis::new("a", 0.0, 1.0, 3).is_err());
        assert!(Axis::new("a", 1.0, 2.0, 1).is_err());
    }

    #[test]
    fn cell_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| cell_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_eq!(cell_seed(42, 3), cell_seed(42, 3));
    }

    #[test]
    fn small_betabinom_scan_is_nested_and_reflexive() {
        let base = PriorSpec::beta(6.0, 6.0).unwrap();
        let ax = Axis::new("alpha", 2.0, 10.0, 5).unwrap();
        let s = betabinom_scan(SampleSize::Finite(20), &base, 0.05, &ax, &ax, 1).unwrap();
        assert_eq!(s.cells.len(), 25);
        assert!(s.cell(2, 2).class.is_wi());
        let csv = s.to_csv("abc");
        assert!(csv.contains("alpha,alpha,classification"));
        assert_eq!(csv, betabinom_scan(SampleSize::Finite(20), &base, 0.05, &ax, &ax, 1).unwrap().to_csv("abc"));
    }
}
