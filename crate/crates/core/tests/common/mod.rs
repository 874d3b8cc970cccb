//! Brute-force oracles shared by the integration tests. They avoid lgamma
//! and the library's lattice code entirely.
#![allow(dead_code)]

use priorinfo::distmath::tie_key;

/// `prod_{r<m} (a + r)`.
pub fn rising(a: f64, m: u64) -> f64 {
    (0..m).map(|r| a + r as f64).product()
}

pub fn choose(n: u64, k: u64) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

pub fn binomial_oracle_pmf(n: u64, a: f64, b: f64) -> Vec<f64> {
    (0..=n).map(|t| choose(n, t) * rising(a, t) * rising(b, n - t) / rising(a + b, n)).collect()
}

/// `E[theta^j]` for `theta = 2B - 1`, `B ~ Beta(a, b)`.
pub fn shifted_moment(a: f64, b: f64, j: usize) -> f64 {
    (0..=j)
        .map(|m| {
            let sign = if (j - m).is_multiple_of(2) { 1.0 } else { -1.0 };
            choose(j as u64, m as u64) * 2f64.powi(m as i32) * sign * rising(a, m as u64) / rising(a + b, m as u64)
        })
        .sum()
}

/// Four-cell counts summing to `n`, first cell slowest.
pub fn compositions(n: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n - a {
            for c in 0..=n - a - b {
                out.push([a, b, c, n - a - b - c]);
            }
        }
    }
    out
}

pub fn multinomial_oracle_pmf(n: u64, a: f64, b: f64) -> Vec<([u64; 4], f64)> {
    // cell probabilities (c0 + c1 theta) / 6
    let cells = [(1.0, -1.0), (1.0, 1.0), (2.0, -1.0), (2.0, 1.0)];
    compositions(n)
        .into_iter()
        .map(|t| {
            let mut poly = vec![1.0];
            for (&(c0, c1), &m) in cells.iter().zip(&t) {
                for _ in 0..m {
                    let mut next = vec![0.0; poly.len() + 1];
                    for (i, &p) in poly.iter().enumerate() {
                        next[i] += p * c0 / 6.0;
                        next[i + 1] += p * c1 / 6.0;
                    }
                    poly = next;
                }
            }
            let coef = rising(1.0, n) / t.iter().map(|&m| rising(1.0, m)).product::<f64>();
            let e: f64 = poly.iter().enumerate().map(|(j, p)| p * shifted_moment(a, b, j)).sum();
            (t, coef * e)
        })
        .collect()
}

pub fn oracle_pvalues(pmf: &[f64]) -> Vec<f64> {
    pmf.iter()
        .map(|&m0| pmf.iter().filter(|&&m| tie_key(m) <= tie_key(m0)).sum())
        .collect()
}

pub fn oracle_x_gamma(base_pmf: &[f64], gamma: f64) -> f64 {
    let p = oracle_pvalues(base_pmf);
    let mut levels: Vec<f64> = p.iter().map(|&v| tie_key(v)).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    for v in levels {
        let mass: f64 = base_pmf.iter().zip(&p).filter(|(_, &q)| tie_key(q) <= v).map(|(m, _)| m).sum();
        if tie_key(mass) >= tie_key(gamma) {
            return v;
        }
    }
    1.0
}

pub fn oracle_conflict_prob(base_pmf: &[f64], alt_pmf: &[f64], gamma: f64) -> f64 {
    let x = oracle_x_gamma(base_pmf, gamma);
    let p2 = oracle_pvalues(alt_pmf);
    base_pmf.iter().zip(&p2).filter(|(_, &q)| tie_key(q) <= tie_key(x)).map(|(m, _)| m).sum()
}

/// Two values within 1e-13 relative that sit on either side of a 12-digit
/// rounding midpoint. Beta(1/2, 1/2) predictives have dyadic masses, and some
/// of their sums land exactly on such a midpoint, where last-digit rounding
/// error alone decides the key.
pub fn straddles_midpoint(a: f64, b: f64) -> bool {
    if (a - b).abs() > 1e-13 * a.abs().max(b.abs()) || a.signum() != b.signum() {
        return false;
    }
    let scale = 10f64.powi(11 - a.abs().log10().floor() as i32);
    let mid = (a.abs().max(b.abs()) * scale).floor() + 0.5;
    let (lo, hi) = (a.abs().min(b.abs()) * scale, a.abs().max(b.abs()) * scale);
    lo <= mid && mid <= hi
}

/// Equal 12-digit keys, allowing for [`straddles_midpoint`].
pub fn keys_agree(a: f64, b: f64) -> bool {
    tie_key(a) == tie_key(b) || straddles_midpoint(a, b)
}
