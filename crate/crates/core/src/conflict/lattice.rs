//! Lattice prior predictives and their P-value ladders.

use crate::distmath::special::{ln_beta, ln_choose};
use crate::distmath::tie_key;
use crate::modelprior::Ancillary;
use crate::{Error, Result};

/// Points of a discrete sufficient-statistic space.
#[derive(Debug, Clone, PartialEq)]
pub enum LatticeShape {
    /// Every `t` with `0 <= t_i <= sizes[i]`, last coordinate fastest.
    Grid(Vec<u64>),
    /// An explicit list of points.
    Points(Vec<Vec<u64>>),
}

/// A prior predictive pmf over a finite lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub shape: LatticeShape,
    pub pmf: Vec<f64>,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pmf.is_empty()
    }

    pub fn index_of(&self, t: &[u64]) -> Option<usize> {
        match &self.shape {
            LatticeShape::Grid(sizes) => {
                if t.len() != sizes.len() || t.iter().zip(sizes).any(|(a, b)| a > b) {
                    return None;
                }
                Some(t.iter().zip(sizes).fold(0usize, |acc, (&ti, &s)| acc * (s as usize + 1) + ti as usize))
            }
            LatticeShape::Points(pts) => pts.iter().position(|p| p.as_slice() == t),
        }
    }

    pub fn point(&self, mut i: usize) -> Vec<u64> {
        match &self.shape {
            LatticeShape::Grid(sizes) => {
                let mut out = vec![0; sizes.len()];
                for (slot, &s) in out.iter_mut().zip(sizes).rev() {
                    let r = s as usize + 1;
                    *slot = (i % r) as u64;
                    i /= r;
                }
                out
            }
            LatticeShape::Points(pts) => pts[i].clone(),
        }
    }

    pub fn ladder(&self) -> Vec<f64> {
        pvalue_ladder(&self.pmf)
    }
}

/// `P(t) = sum of m(s) over m(s) <= m(t)` for every lattice point, with ties
/// decided on 12-significant-digit keys. Masses are summed in ascending key
/// order, so equal keys always receive the identical P-value.
pub fn pvalue_ladder(pmf: &[f64]) -> Vec<f64> {
    let keys: Vec<f64> = pmf.iter().map(|&m| tie_key(m)).collect();
    let mut order: Vec<usize> = (0..pmf.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    let mut out = vec![0.0; pmf.len()];
    let mut cum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && keys[order[j]] == keys[order[i]] {
            cum += pmf[order[j]];
            j += 1;
        }
        for &idx in &order[i..j] {
            out[idx] = cum;
        }
        i = j;
    }
    out
}

/// Mass under `weights` of the points whose P-value is at most `level`.
pub fn mass_at_or_below(weights: &[f64], pvalues: &[f64], level: f64) -> f64 {
    let lk = tie_key(level);
    weights.iter().zip(pvalues).filter(|(_, &p)| tie_key(p) <= lk).map(|(w, _)| w).sum::<f64>() + 0.0
}

/// Distinct achievable P-values of a ladder, ascending.
pub fn achievable_levels(pvalues: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = pvalues.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| tie_key(*a) == tie_key(*b));
    v
}

/// Beta-binomial pmf of `T ~ Binomial(n, theta)`, `theta ~ Beta(a, b)`.
pub fn betabinom_pmf(n: u64, a: f64, b: f64) -> Vec<f64> {
    let nf = n as f64;
    let norm = ln_beta(a, b);
    (0..=n)
        .map(|t| {
            let t = t as f64;
            (ln_choose(nf, t) + ln_beta(t + a, nf - t + b) - norm).exp()
        })
        .collect()
}

/// `ln E[B^p (1-B)^q (1+2B)^c (1+2(1-B))^d]` for `B ~ Beta(alpha, beta)`,
/// expanded into positive terms.
fn ln_moment(alpha: f64, beta: f64, p: u64, q: u64, c: u64, d: u64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let norm = ln_beta(alpha, beta);
    let mut terms = Vec::with_capacity(((c + 1) * (d + 1)) as usize);
    for j in 0..=c {
        let cj = ln_choose(c as f64, j as f64) + j as f64 * ln2;
        for i in 0..=d {
            let di = ln_choose(d as f64, i as f64) + i as f64 * ln2;
            terms.push(cj + di + ln_beta(alpha + (p + j) as f64, beta + (q + i) as f64) - norm);
        }
    }
    crate::distmath::special::log_sum_exp(&terms)
}

fn compositions(n: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for f1 in 0..=n {
        for f2 in 0..=n - f1 {
            for f3 in 0..=n - f1 - f2 {
                out.push(vec![f1, f2, f3, n - f1 - f2 - f3]);
            }
        }
    }
    out
}

/// Unconditional prior predictive of the shifted multinomial counts with
/// `theta = 2B - 1`, `B ~ Beta(alpha, beta)`. Cell probabilities in terms of
/// `B` are `(1-B)/3, B/3, (1+2(1-B))/6, (1+2B)/6`.
pub fn multinomial_lattice(n: u64, alpha: f64, beta: f64) -> Lattice {
    let (ln3, ln6) = (3f64.ln(), 6f64.ln());
    let pts = compositions(n);
    let pmf = pts
        .iter()
        .map(|f| {
            let ln_coef = crate::distmath::ln_gamma(n as f64 + 1.0)
                - f.iter().map(|&x| crate::distmath::ln_gamma(x as f64 + 1.0)).sum::<f64>();
            (ln_coef - (f[0] + f[1]) as f64 * ln3 - (f[2] + f[3]) as f64 * ln6
                + ln_moment(alpha, beta, f[1], f[0], f[3], f[2]))
            .exp()
        })
        .collect();
    Lattice { shape: LatticeShape::Points(pts), pmf }
}

/// Prior predictive of the counts given one maximal ancillary.
///
/// Given `U1 = (s, n - s)` with `s = f1 + f2`, `f1 ~ Bin(s, 1 - B)` and
/// `f3 ~ Bin(n - s, (1 + 2(1-B))/4)` independently. Given `U2 = (r, n - r)`
/// with `r = f1 + f4`, `f1 ~ Bin(r, 2(1-B)/3)` and `f2 ~ Bin(n - r, 2B/3)`.
pub fn multinomial_conditional_lattice(n: u64, alpha: f64, beta: f64, anc: Ancillary, u: u64) -> Result<Lattice> {
    if u > n {
        return Err(Error::domain(format!("ancillary value {u} exceeds n = {n}")));
    }
    let (ln2, ln3, ln4) = (std::f64::consts::LN_2, 3f64.ln(), 4f64.ln());
    let mut pts = Vec::new();
    let mut pmf = Vec::new();
    match anc {
        Ancillary::U1 => {
            let (s, rest) = (u, n - u);
            for f1 in 0..=s {
                for f3 in 0..=rest {
                    let f = [f1, s - f1, f3, rest - f3];
                    let ln = ln_choose(s as f64, f1 as f64) + ln_choose(rest as f64, f3 as f64)
                        - rest as f64 * ln4
                        + ln_moment(alpha, beta, f[1], f[0], f[3], f[2]);
                    pts.push(f.to_vec());
                    pmf.push(ln.exp());
                }
            }
        }
        Ancillary::U2 => {
            let (r, rest) = (u, n - u);
            for f1 in 0..=r {
                for f2 in 0..=rest {
                    let f = [f1, f2, rest - f2, r - f1];
                    let ln = ln_choose(r as f64, f1 as f64) + ln_choose(rest as f64, f2 as f64)
                        + (f1 + f2) as f64 * ln2
                        - n as f64 * ln3
                        + ln_moment(alpha, beta, f[1], f[0], f[3], f[2]);
                    pts.push(f.to_vec());
                    pmf.push(ln.exp());
                }
            }
        }
    }
    Ok(Lattice { shape: LatticeShape::Points(pts), pmf })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_ties_share_a_value() {
        let pmf = [0.1, 0.2, 0.1, 0.6];
        let p = pvalue_ladder(&pmf);
        assert_eq!(p[0], p[2]);
        assert!((p[0] - 0.2).abs() < 1e-15);
        assert!((p[1] - 0.4).abs() < 1e-15);
        assert!((p[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn betabinom_is_symmetric_and_normalized() {
        let m = betabinom_pmf(20, 6.0, 6.0);
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for t in 0..=20 {
            assert_eq!(tie_key(m[t]), tie_key(m[20 - t]));
        }
        let p = pvalue_ladder(&m);
        for t in 0..=20 {
            assert_eq!(p[t], p[20 - t]);
        }
    }

    #[test]
    fn grid_index_round_trip() {
        let l = Lattice { shape: LatticeShape::Grid(vec![2, 3, 1]), pmf: vec![0.0; 24] };
        for i in 0..24 {
            assert_eq!(l.index_of(&l.point(i)), Some(i));
        }
        assert_eq!(l.index_of(&[3, 0, 0]), None);
    }

    #[test]
    fn multinomial_pmfs_normalize() {
        let m = multinomial_lattice(18, 20.0, 20.0);
        assert!((m.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for anc in Ancillary::ALL {
            for u in [0, 7, 18] {
                let c = multinomial_conditional_lattice(18, 3.0, 0.7, anc, u).unwrap();
                assert!((c.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{anc:?} {u}");
                assert!(c.shape != LatticeShape::Grid(vec![]));
            }
        }
    }
}
