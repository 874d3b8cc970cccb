//! Quadrature rules.
//!
//! Gauss-Legendre rules (plain and composite) handle bounded integrals and the
//! logistic prior integrals. The gamma-weight rule integrates against
//! `Gamma_rate(a, b)` with a double-exponential (exp-sinh) trapezoid rule.

use std::f64::consts::FRAC_PI_2;

use super::special::ln_gamma;
use crate::{Error, Result};

/// Which family a [`QuadratureRule`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussLegendre,
    GammaWeight,
}

/// Nodes and strictly positive weights. For [`RuleKind::GammaWeight`] the
/// weights already include the gamma density, so `sum(w_i g(u_i))`
/// approximates `E[g(U)]`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum(w_i f(x_i))`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Gauss-Legendre rule with `n` nodes on `[-1, 1]`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("Gauss-Legendre needs at least 2 nodes, got {n}")));
        }
        let (nodes, weights) = legendre_nodes(n);
        Ok(Self { nodes, weights, kind: RuleKind::GaussLegendre })
    }

    /// Gauss-Legendre rule mapped to `[a, b]`.
    pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> Result<Self> {
        let mut r = Self::gauss_legendre(n)?;
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in r.nodes.iter_mut().zip(r.weights.iter_mut()) {
            *x = mid + half * *x;
            *w *= half;
        }
        Ok(r)
    }

    /// `panels` equal-width copies of an `m`-point rule covering `[a, b]`.
    pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, m: usize) -> Result<Self> {
        if panels == 0 || !(b > a) {
            return Err(Error::domain(format!("bad composite rule: [{a}, {b}] with {panels} panels")));
        }
        let base = Self::gauss_legendre(m)?;
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * m);
        let mut weights = Vec::with_capacity(panels * m);
        for p in 0..panels {
            let lo = a + width * p as f64;
            let mid = lo + 0.5 * width;
            for (&x, &w) in base.nodes.iter().zip(&base.weights) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Ok(Self { nodes, weights, kind: RuleKind::GaussLegendre })
    }

    /// Rule for `E[g(U)]` with `U ~ Gamma_rate(shape, rate)`, using `n` nodes.
    ///
    /// Nodes are `u = (shape/rate) exp(pi/2 sinh s)` on an equispaced `s` grid
    /// whose ends are where the transformed integrand weight has fallen by
    /// `e^-46` from its peak. Weights are renormalized to sum to one.
    pub fn gamma_weight(shape: f64, rate: f64, n: usize) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) || !shape.is_finite() || !rate.is_finite() {
            return Err(Error::domain(format!("gamma weight needs positive parameters, got ({shape}, {rate})")));
        }
        if n < 2 {
            return Err(Error::domain("gamma weight rule needs at least 2 nodes"));
        }
        let ln_c = (shape / rate).ln();
        let ln_norm = shape * rate.ln() - ln_gamma(shape);
        let ln_w = |s: f64| {
            let ln_u = ln_c + FRAC_PI_2 * s.sinh();
            // density times du/ds, with du/ds = u * pi/2 * cosh(s)
            ln_norm + shape * ln_u - rate * ln_u.exp() + (FRAC_PI_2 * s.cosh()).ln()
        };
        let (lo, hi) = significant_range(&ln_w, -12.0, 8.0, 46.0);
        if !(hi > lo) {
            return Err(Error::numerical("gamma_weight", format!("degenerate range for shape {shape}")));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let s = lo + h * i as f64;
            nodes.push((ln_c + FRAC_PI_2 * s.sinh()).exp());
            weights.push(h * ln_w(s).exp());
        }
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.5) {
            return Err(Error::numerical("gamma_weight", format!("weights sum to {total}")));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self { nodes, weights, kind: RuleKind::GammaWeight })
    }

    /// The `Gamma_rate(lambda/2, lambda/2)` mixing rule of a Student-t with
    /// `lambda` degrees of freedom, at 200 nodes.
    pub fn t_mixing(lambda: f64) -> Result<Self> {
        Self::gamma_weight(0.5 * lambda, 0.5 * lambda, 200)
    }
}

/// Interval of `s` in `[lo, hi]` where `f(s) > max f - drop`, found on a fine
/// scan and then tightened by bisection on each edge.
fn significant_range(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, drop: f64) -> (f64, f64) {
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let vals: Vec<f64> = (0..=steps).map(|i| f(lo + h * i as f64)).collect();
    let peak = vals.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let cut = peak - drop;
    let first = vals.iter().position(|&v| v > cut).unwrap_or(0);
    let last = vals.iter().rposition(|&v| v > cut).unwrap_or(steps);
    let edge = |inside: f64, outside: f64| {
        let (mut a, mut b) = (inside, outside);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if f(m) > cut {
                a = m;
            } else {
                b = m;
            }
        }
        b
    };
    let left = if first == 0 { lo } else { edge(lo + h * first as f64, lo + h * (first - 1) as f64) };
    let right = if last == steps { hi } else { edge(lo + h * last as f64, lo + h * (last + 1) as f64) };
    (left, right)
}

/// Legendre roots and weights by Newton iteration on the three-term recurrence.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            dp = nf * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
