//! Prior predictive of grouped logistic regression by tensor-product quadrature.

use nalgebra::DMatrix;

use super::lattice::{Lattice, LatticeShape};
use crate::distmath::special::{ln_choose, ln_gamma};
use crate::distmath::{normal_ln_pdf, QuadratureRule};
use crate::modelprior::{LogisticDesign, PriorSpec};
use crate::{Error, Result};

/// Resolution of the per-coefficient quadrature rules.
///
/// Normal factors `N(mu, s^2)` integrate over `mu +- span * s` with composite
/// Gauss-Legendre panels, at least 12 and no wider than `panel_width`
/// coefficient units. t
/// factors substitute `beta = mu + s sqrt(lambda) tan(phi)` and use panels on
/// `(-pi/2, pi/2)` whose count grows with `s sqrt(lambda) / panel_width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticQuadrature {
    pub panel_width: f64,
    pub points_per_panel: usize,
    pub span: f64,
    /// Cap on panels per coefficient, reached only for very diffuse priors.
    pub max_panels: usize,
}

impl Default for LogisticQuadrature {
    fn default() -> Self {
        Self { panel_width: 2.5, points_per_panel: 8, span: 9.0, max_panels: 400 }
    }
}

impl LogisticQuadrature {
    /// Nodes in coefficient units with weights that include the prior density.
    pub fn factor_rule(&self, prior: &PriorSpec) -> Result<QuadratureRule> {
        let m = self.points_per_panel;
        match prior {
            PriorSpec::Normal { mu0, sigma } if mu0.len() == 1 => {
                let (mu, s) = (mu0[0], sigma[(0, 0)].sqrt());
                let half = self.span * s;
                let panels = ((2.0 * half / self.panel_width).ceil() as usize).clamp(12, self.max_panels);
                let mut rule = QuadratureRule::composite_gauss_legendre(mu - half, mu + half, panels, m)?;
                for (x, w) in rule.nodes.iter().zip(rule.weights.iter_mut()) {
                    *w *= (normal_ln_pdf((x - mu) / s) - s.ln()).exp();
                }
                Ok(rule)
            }
            PriorSpec::StudentT { mu0, sigma, lambda } if mu0.len() == 1 => {
                let (mu, s, l) = (mu0[0], sigma[(0, 0)].sqrt(), *lambda);
                let c = s * l.sqrt();
                let panels =
                    ((std::f64::consts::PI * c / self.panel_width).ceil() as usize).clamp(10, self.max_panels);
                let h = std::f64::consts::FRAC_PI_2;
                let mut rule = QuadratureRule::composite_gauss_legendre(-h, h, panels, m)?;
                let ln_norm = ln_gamma(0.5 * (l + 1.0)) - ln_gamma(0.5 * l) - 0.5 * std::f64::consts::PI.ln();
                for (x, w) in rule.nodes.iter_mut().zip(rule.weights.iter_mut()) {
                    *w *= (ln_norm + (l - 1.0) * x.cos().ln()).exp();
                    *x = mu + c * x.tan();
                }
                Ok(rule)
            }
            other => Err(Error::Unsupported { model: "logistic".into(), prior: format!("{} factor", other.name()) }),
        }
    }
}

/// Group-success pmf on the full lattice `prod(n_i + 1)`.
pub fn logistic_lattice(design: &LogisticDesign, factors: &[PriorSpec], quad: &LogisticQuadrature) -> Result<Lattice> {
    if factors.len() != design.coefficients() {
        return Err(Error::config("prior.factors", "one prior factor per coefficient is required"));
    }
    let rules = factors.iter().map(|f| quad.factor_rule(f)).collect::<Result<Vec<_>>>()?;
    let q = design.groups();
    let sizes: Vec<u64> = design.group_sizes().iter().map(|&n| n as u64).collect();
    let h = q / 2;
    let (left, right) = sizes.split_at(h);
    let (l1, l2) = (radix_len(left), radix_len(right));

    // binomial coefficients for each group
    let ln_coef: Vec<Vec<f64>> =
        sizes.iter().map(|&n| (0..=n).map(|t| ln_choose(n as f64, t as f64)).collect()).collect();

    let dims: Vec<usize> = rules.iter().map(|r| r.len()).collect();
    let total: usize = dims.iter().product();
    const CHUNK: usize = 512;
    let mut acc = DMatrix::<f64>::zeros(l1, l2);
    let mut a = DMatrix::<f64>::zeros(l1, CHUNK);
    let mut b_t = DMatrix::<f64>::zeros(CHUNK, l2);
    let mut right_buf = vec![0.0; l2];
    let mut idx = vec![0usize; dims.len()];
    let mut group_pmfs: Vec<Vec<f64>> = sizes.iter().map(|&n| vec![0.0; n as usize + 1]).collect();
    let preds = design.predictors();

    let mut done = 0;
    while done < total {
        let width = CHUNK.min(total - done);
        for c in 0..width {
            let mut w = 1.0;
            for (j, &i) in idx.iter().enumerate() {
                w *= rules[j].weights[i];
            }
            for g in 0..q {
                let mut eta = rules[0].nodes[idx[0]];
                for (j, x) in preds[g].iter().enumerate() {
                    eta += rules[j + 1].nodes[idx[j + 1]] * x;
                }
                // ln p = -softplus(-eta), ln(1-p) = -softplus(eta)
                let (lp, lq) = (-softplus(-eta), -softplus(eta));
                let n = sizes[g];
                for t in 0..=n {
                    group_pmfs[g][t as usize] = (ln_coef[g][t as usize] + t as f64 * lp + (n - t) as f64 * lq).exp();
                }
            }
            fill_outer(&group_pmfs[..h], w, a.column_mut(c).as_mut_slice());
            fill_outer(&group_pmfs[h..], 1.0, &mut right_buf);
            for (j, &v) in right_buf.iter().enumerate() {
                b_t[(c, j)] = v;
            }
            advance(&mut idx, &dims);
        }
        if width < CHUNK {
            a.columns_mut(width, CHUNK - width).fill(0.0);
            b_t.rows_mut(width, CHUNK - width).fill(0.0);
        }
        acc.gemm(1.0, &a, &b_t, 1.0);
        done += width;
    }

    let mut pmf = Vec::with_capacity(l1 * l2);
    for i in 0..l1 {
        for j in 0..l2 {
            pmf.push(acc[(i, j)].max(0.0));
        }
    }
    let mass: f64 = pmf.iter().sum();
    if !mass.is_finite() || (mass - 1.0).abs() > 1e-3 {
        return Err(Error::numerical("logistic quadrature", format!("predictive mass {mass} differs from 1 by more than 1e-3")));
    }
    Ok(Lattice { shape: LatticeShape::Grid(sizes), pmf })
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn radix_len(sizes: &[u64]) -> usize {
    sizes.iter().map(|&n| n as usize + 1).product()
}

/// Writes `w * prod_g pmf_g[t_g]` over the mixed-radix lattice of `pmfs`,
/// last group fastest.
fn fill_outer(pmfs: &[Vec<f64>], w: f64, out: &mut [f64]) {
    out[0] = w;
    let mut len = 1;
    for p in pmfs {
        let r = p.len();
        for i in (0..len).rev() {
            let base = out[i];
            for (t, &pt) in p.iter().enumerate().rev() {
                out[i * r + t] = base * pt;
            }
        }
        len *= r;
    }
}

fn advance(idx: &mut [usize], dims: &[usize]) {
    for j in (0..idx.len()).rev() {
        idx[j] += 1;
        if idx[j] < dims[j] {
            return;
        }
        idx[j] = 0;
    }
}
