//! Scans over independent intercept and slope scalings for grouped logistic
//! regression.

use std::str::FromStr;

use serde::Serialize;

use super::{cell_from, cell_seed, check_gamma, grid_map, Axis, ReductionField, RegionScan};
use crate::conflict::{logistic_lattice, Lattice, LatticeShape, LogisticQuadrature, Method};
use crate::modelprior::{LogisticDesign, PriorSpec, SamplingModel};
use crate::weakinfo::Comparison;
use crate::{Error, Result};

/// Family of one coefficient's prior, centred at 0 with scale `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Factor {
    Normal,
    StudentT(f64),
}

impl Factor {
    pub fn prior(self, sigma: f64) -> Result<PriorSpec> {
        match self {
            Factor::Normal => PriorSpec::normal1(0.0, sigma * sigma),
            Factor::StudentT(l) => PriorSpec::student_t1(0.0, sigma * sigma, l),
        }
    }
}

/// Alternative family: intercept factor with scale `sigma0`, every slope
/// with scale `sigma1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogisticFamily {
    pub intercept: Factor,
    pub slope: Factor,
}

impl LogisticFamily {
    pub fn prior(&self, design: &LogisticDesign, sigma0: f64, sigma1: f64) -> Result<PriorSpec> {
        let mut f = vec![self.intercept.prior(sigma0)?];
        for _ in 1..design.coefficients() {
            f.push(self.slope.prior(sigma1)?);
        }
        PriorSpec::product(f)
    }

    /// Sets the degrees of freedom of every t factor.
    pub fn with_lambda(self, lambda: f64) -> Self {
        let set = |f: Factor| match f {
            Factor::StudentT(_) => Factor::StudentT(lambda),
            other => other,
        };
        Self { intercept: set(self.intercept), slope: set(self.slope) }
    }
}

impl FromStr for LogisticFamily {
    type Err = Error;

    /// `normal-normal`, `t-t`, `normal-t` or `t-normal`; t factors are Cauchy
    /// until [`LogisticFamily::with_lambda`] says otherwise.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |p: &str| match p {
            "normal" => Ok(Factor::Normal),
            "t" => Ok(Factor::StudentT(1.0)),
            _ => Err(Error::config("family", format!("unknown factor {p:?} in {s:?}"))),
        };
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| Error::config("family", format!("expected <intercept>-<slope>, got {s:?}")))?;
        Ok(Self { intercept: parse(a)?, slope: parse(b)? })
    }
}

fn base_lattice(design: &LogisticDesign, base: &PriorSpec, quad: &LogisticQuadrature) -> Result<Lattice> {
    match base {
        PriorSpec::Product(f) => logistic_lattice(design, f, quad),
        other => Err(Error::Unsupported { model: "logistic".into(), prior: other.name().into() }),
    }
}

fn alt_lattice(design: &LogisticDesign, fam: &LogisticFamily, s0: f64, s1: f64, quad: &LogisticQuadrature) -> Result<Lattice> {
    base_lattice(design, &fam.prior(design, s0, s1)?, quad)
}

/// Classifies `family(sigma0, sigma1)` against `base` on the exact lattice.
pub fn logistic_scan(
    design: &LogisticDesign,
    base: &PriorSpec,
    family: LogisticFamily,
    gamma: f64,
    sigma0: &Axis,
    sigma1: &Axis,
    quad: &LogisticQuadrature,
    seed: u64,
) -> Result<RegionScan> {
    check_gamma(gamma)?;
    let m1 = base_lattice(design, base, quad)?;
    let x0 = Comparison::from_lattices(m1.clone(), m1.clone())?.x_gamma(gamma)?;
    let axes = [sigma0.clone(), sigma1.clone()];
    let cells = grid_map(&axes, |i, a, b| {
        let alt = alt_lattice(design, &family, a, b, quad)?;
        let v = Comparison::from_lattices(m1.clone(), alt)?.full_verdict(gamma)?;
        Ok(cell_from(a, b, &v, Method::Quadrature, cell_seed(seed, i)))
    })?;
    Ok(RegionScan {
        axes,
        cells,
        gamma,
        x_gamma: vec![("base".into(), x0)],
        base: base.clone(),
        model: SamplingModel::Logistic(design.clone()),
        seed,
    })
}

/// Reduction `1 - M1(P2 <= x_gamma)/x_gamma` of `family(sigma0, sigma1)` over a grid; `x_gamma` comes
/// from the base once.
pub fn logistic_reduction(
    design: &LogisticDesign,
    base: &PriorSpec,
    family: LogisticFamily,
    gamma: f64,
    sigma0: &Axis,
    sigma1: &Axis,
    quad: &LogisticQuadrature,
) -> Result<ReductionField> {
    check_gamma(gamma)?;
    let m1 = base_lattice(design, base, quad)?;
    let x = Comparison::from_lattices(m1.clone(), m1.clone())?.x_gamma(gamma)?;
    let axes = [sigma0.clone(), sigma1.clone()];
    let values = grid_map(&axes, |_, a, b| {
        let alt = alt_lattice(design, &family, a, b, quad)?;
        Ok(1.0 - Comparison::from_lattices(m1.clone(), alt)?.conflict_prob_at(x).value / x)
    })?;
    Ok(ReductionField {
        axes,
        values,
        gamma,
        x_gamma: x,
        base: base.clone(),
        model: SamplingModel::Logistic(design.clone()),
        method: Method::Quadrature,
    })
}

/// Which scaling a slice holds fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceAxis {
    /// Vary `sigma1` with `sigma0` fixed.
    FixSigma0,
    /// Vary `sigma0` with `sigma1` fixed.
    FixSigma1,
}

/// Reduction along a one-dimensional slice and its maximizers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Slice {
    pub fixed: SliceAxis,
    pub fixed_value: f64,
    pub points: Vec<f64>,
    pub reductions: Vec<f64>,
    /// Grid point with the largest reduction (first on ties).
    pub raw_argmax: f64,
    pub raw_max: f64,
    /// See [`plateau_center`] with [`PLATEAU_DELTA`].
    pub plateau_center: f64,
}

/// Reductions within this distance of the slice maximum count as optimal.
pub const PLATEAU_DELTA: f64 = 0.002;

/// Centre of the near-optimal set `{x : y(x) >= max y - delta}`.
///
/// Reduction slices are step functions of the scaling with several plateaus
/// of almost equal height, so the raw argmax jumps between them as the grid
/// changes. The midpoint of the outermost near-optimal points is stable.
pub fn plateau_center(xs: &[f64], ys: &[f64], delta: f64) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty(), "empty slice");
    let top = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut near = xs.iter().zip(ys).filter(|(_, &y)| y >= top - delta).map(|(&x, _)| x);
    let first = near.next().expect("the maximum itself qualifies");
    let last = near.next_back().unwrap_or(first);
    0.5 * (first + last)
}

/// Reduction along a slice of `family` with one scaling held at `fixed_value`.
#[allow(clippy::too_many_arguments)]
pub fn logistic_slice(
    design: &LogisticDesign,
    base: &PriorSpec,
    family: LogisticFamily,
    gamma: f64,
    fixed: SliceAxis,
    fixed_value: f64,
    axis: &Axis,
    quad: &LogisticQuadrature,
) -> Result<Slice> {
    let fixed_axis = Axis::new("fixed", fixed_value, fixed_value, 1)?;
    let field = match fixed {
        SliceAxis::FixSigma0 => logistic_reduction(design, base, family, gamma, &fixed_axis, axis, quad)?,
        SliceAxis::FixSigma1 => logistic_reduction(design, base, family, gamma, axis, &fixed_axis, quad)?,
    };
    let points = axis.values();
    let reductions = field.values;
    let (imax, raw_max) =
        reductions.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, &r)| if r > b.1 { (i, r) } else { b });
    let plateau_center = plateau_center(&points, &reductions, PLATEAU_DELTA);
    Ok(Slice { fixed, fixed_value, raw_argmax: points[imax], raw_max, plateau_center, points, reductions })
}

/// Predictive mass on the two extreme totals, all failures or all successes.
pub fn extreme_total_mass(design: &LogisticDesign, lattice: &Lattice) -> Result<f64> {
    if !matches!(&lattice.shape, LatticeShape::Grid(s) if s.len() == design.groups()) {
        return Err(Error::domain("lattice does not match the design"));
    }
    let total: u64 = design.group_sizes().iter().map(|&n| n as u64).sum();
    Ok((0..lattice.len())
        .filter(|&i| {
            let s: u64 = lattice.point(i).iter().sum();
            s == 0 || s == total
        })
        .map(|i| lattice.pmf[i])
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing() {
        let f: LogisticFamily = "normal-t".parse().unwrap();
        assert_eq!(f, LogisticFamily { intercept: Factor::Normal, slope: Factor::StudentT(1.0) });
        assert_eq!(f.with_lambda(3.0).slope, Factor::StudentT(3.0));
        assert!("normal".parse::<LogisticFamily>().is_err());
        assert!("cauchy-t".parse::<LogisticFamily>().is_err());
    }

    #[test]
    fn plateau_centre() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(plateau_center(&xs, &[0.1, 0.5, 0.4995, 0.2, 0.4999, 0.0], 0.002), 3.5);
        assert_eq!(plateau_center(&xs, &[0.1, 0.5, 0.3, 0.2, 0.1, 0.0], 0.002), 2.0);
    }
}
