//! Multivariate location predictives.

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::distmath::special::{ln_gamma, log_sum_exp};
use crate::distmath::{chisq_quantile, f_quantile, f_sf_real, reg_inc_gamma_upper, QuadratureRule, Rng};
use crate::{Error, Result};

/// Radial law of an elliptical predictive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radial {
    Normal,
    StudentT(f64),
}

/// `N_k(mean, scale)` or `t_k(mean, scale, lambda)`: P-values depend on `t`
/// only through the Mahalanobis distance.
#[derive(Debug, Clone)]
pub struct Elliptical {
    mean: DVector<f64>,
    chol: DMatrix<f64>,
    ln_det: f64,
    radial: Radial,
}

impl Elliptical {
    pub fn new(mean: DVector<f64>, scale: DMatrix<f64>, radial: Radial) -> Result<Self> {
        let chol = scale
            .cholesky()
            .ok_or_else(|| Error::numerical("elliptical predictive", "scale matrix is not positive definite"))?
            .l();
        let ln_det = 2.0 * chol.diagonal().iter().map(|d| d.ln()).sum::<f64>();
        Ok(Self { mean, chol, ln_det, radial })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn radial(&self) -> Radial {
        self.radial
    }

    /// `(t - mean)' scale^{-1} (t - mean)`.
    pub fn mahalanobis(&self, t: &[f64]) -> f64 {
        let diff = DVector::from_column_slice(t) - &self.mean;
        let z = self.chol.solve_lower_triangular(&diff).expect("triangular factor is invertible");
        z.norm_squared()
    }

    pub fn ln_density(&self, t: &[f64]) -> f64 {
        let k = self.dim() as f64;
        let d = self.mahalanobis(t);
        match self.radial {
            Radial::Normal => -0.5 * k * (2.0 * std::f64::consts::PI).ln() - 0.5 * self.ln_det - 0.5 * d,
            Radial::StudentT(l) => {
                ln_gamma(0.5 * (l + k)) - ln_gamma(0.5 * l) - 0.5 * k * (l * std::f64::consts::PI).ln()
                    - 0.5 * self.ln_det
                    - 0.5 * (l + k) * (d / l).ln_1p()
            }
        }
    }

    /// Probability that the Mahalanobis distance is at least `d`.
    pub fn radial_sf(&self, d: f64) -> f64 {
        let k = self.dim() as f64;
        match self.radial {
            Radial::Normal => reg_inc_gamma_upper(0.5 * k, 0.5 * d),
            Radial::StudentT(l) => f_sf_real(k, l, d / k),
        }
    }

    /// Conflict P-value at `t`.
    pub fn pvalue(&self, t: &[f64]) -> f64 {
        self.radial_sf(self.mahalanobis(t))
    }

    /// Mahalanobis radius `q` with `P(t) <= x` iff `mahalanobis(t) >= q`.
    pub fn radius_for_level(&self, x: f64) -> Result<f64> {
        if x >= 1.0 {
            return Ok(0.0);
        }
        if x <= 0.0 {
            return Ok(f64::INFINITY);
        }
        let k = self.dim() as u32;
        match self.radial {
            Radial::Normal => chisq_quantile(k, 1.0 - x),
            Radial::StudentT(l) => Ok(k as f64 * f_quantile(k, l, 1.0 - x)?),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let k = self.dim();
        let z = DVector::from_iterator(k, (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let mut x = &self.chol * z;
        if let Radial::StudentT(l) = self.radial {
            let u = Gamma::new(0.5 * l, 2.0 / l).expect("valid").sample(rng);
            x /= u.sqrt();
        }
        (x + &self.mean).iter().copied().collect()
    }
}

/// Finite-`n` predictive of a `k`-variate sample mean under a `t_k` prior:
/// `N_k(mu0, I/n + sigma/u)` mixed over the t mixing variable `u`.
#[derive(Debug, Clone)]
pub struct MixtureK {
    mean: DVector<f64>,
    /// Eigenvectors of `sigma` as columns.
    vecs: DMatrix<f64>,
    vals: DVector<f64>,
    lambda: f64,
    inv_n: f64,
    rule: QuadratureRule,
}

impl MixtureK {
    pub fn new(mean: DVector<f64>, sigma: DMatrix<f64>, lambda: f64, inv_n: f64) -> Result<Self> {
        let eig = sigma.symmetric_eigen();
        let rule = QuadratureRule::t_mixing(lambda)?;
        Ok(Self { mean, vecs: eig.eigenvectors, vals: eig.eigenvalues, lambda, inv_n, rule })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn ln_density(&self, t: &[f64]) -> f64 {
        let k = self.dim();
        let diff = DVector::from_column_slice(t) - &self.mean;
        let z = self.vecs.transpose() * diff;
        let ln2pi = (2.0 * std::f64::consts::PI).ln();
        let terms: Vec<f64> = self
            .rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .map(|(u, w)| {
                let mut quad = 0.0;
                let mut ln_det = 0.0;
                for j in 0..k {
                    let v = self.inv_n + self.vals[j] / u;
                    quad += z[j] * z[j] / v;
                    ln_det += v.ln();
                }
                w.ln() - 0.5 * (k as f64 * ln2pi + ln_det + quad)
            })
            .collect();
        log_sum_exp(&terms)
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let k = self.dim();
        let u = Gamma::new(0.5 * self.lambda, 2.0 / self.lambda).expect("valid").sample(rng);
        let mut out = self.mean.clone();
        for j in 0..k {
            let s = (self.vals[j] / u).sqrt() * rng.sample::<f64, _>(StandardNormal);
            out += self.vecs.column(j) * s;
        }
        for x in out.iter_mut() {
            *x += self.inv_n.sqrt() * rng.sample::<f64, _>(StandardNormal);
        }
        out.iter().copied().collect()
    }
}
