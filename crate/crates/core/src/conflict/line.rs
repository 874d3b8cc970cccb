//! One-dimensional continuous prior predictives and their level sets.
//!
//! A P-value is the mass of `{t : m*(t) <= m*(t0)}`. Every predictive here has
//! a log adjusted density that is monotone between known breakpoints, so a
//! level set is a union of at most one interval per monotone piece, each
//! found by bisection.

use rand::Rng as _;
use rand_distr::{Beta as BetaDist, Distribution, Gamma, StandardNormal};

use crate::distmath::{
    beta_cdf_unchecked, beta_ln_pdf, f_cdf_real, f_ln_pdf, f_sf_real, normal_cdf, normal_ln_pdf, normal_sf,
    reg_inc_gamma, reg_inc_gamma_upper, student_t_cdf_unchecked, student_t_ln_pdf, QuadratureRule, Rng,
};
use crate::distmath::special::{ln_gamma, log_sum_exp};

/// A continuous prior predictive on an interval of the real line.
pub trait LinePredictive: Send + Sync + std::fmt::Debug {
    /// Open support `(lo, hi)`; ends may be infinite.
    fn support(&self) -> (f64, f64);
    fn cdf(&self, x: f64) -> f64;
    fn sf(&self, x: f64) -> f64;
    /// `ln m_T(x)`.
    fn ln_density(&self, x: f64) -> f64;
    /// `ln m*_T(x)`, the log density times the volume factor. Additive
    /// constants are allowed to differ from the true value only when the
    /// predictive reports so through [`LinePredictive::adjusted_is_exact`].
    fn ln_adjusted(&self, x: f64) -> f64 {
        self.ln_density(x)
    }
    fn adjusted_is_exact(&self) -> bool {
        true
    }
    /// Interior points where `m*` changes monotonicity, ascending.
    fn breakpoints(&self) -> Vec<f64>;
    /// Typical spread, used to grow brackets on unbounded pieces.
    fn scale(&self) -> f64;
    /// Center of symmetry when `m*` is symmetric and unimodal.
    fn symmetric_center(&self) -> Option<f64> {
        None
    }
    /// Whether `m*` is constant on the whole support.
    fn is_flat(&self) -> bool {
        false
    }
    fn sample(&self, rng: &mut Rng) -> f64;
}

#[derive(Debug, Clone, Copy)]
enum Trend {
    Up,
    Down,
    Flat,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    trend: Trend,
}

/// Union of disjoint intervals, ascending.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalSet(pub Vec<(f64, f64)>);

impl IntervalSet {
    /// Probability of the set under `d`, using the survival function on
    /// upper tails and the cdf on lower tails.
    pub fn mass(&self, d: &dyn LinePredictive) -> f64 {
        let (lo, hi) = d.support();
        let mut total = 0.0;
        for &(a, b) in &self.0 {
            total += if a <= lo {
                if b >= hi {
                    1.0
                } else {
                    d.cdf(b)
                }
            } else if b >= hi {
                d.sf(a)
            } else {
                interval_mass(d, a, b)
            };
        }
        total.clamp(0.0, 1.0)
    }
}

fn interval_mass(d: &dyn LinePredictive, a: f64, b: f64) -> f64 {
    let lower = d.cdf(b) - d.cdf(a);
    if lower > 0.5 {
        lower
    } else {
        (d.sf(a) - d.sf(b)).max(lower.min(1.0)).max(0.0)
    }
}

/// Level-set machinery for one predictive.
#[derive(Debug)]
pub struct LevelSets<'a> {
    d: &'a dyn LinePredictive,
    pieces: Vec<Piece>,
}

impl<'a> LevelSets<'a> {
    pub fn new(d: &'a dyn LinePredictive) -> Self {
        let (lo, hi) = d.support();
        let mut cuts = vec![lo];
        cuts.extend(d.breakpoints().into_iter().filter(|&x| x > lo && x < hi));
        cuts.push(hi);
        let s = d.scale();
        let pieces = cuts
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let trend = if d.is_flat() {
                    Trend::Flat
                } else {
                    let (p, q) = interior_pair(a, b, s);
                    let (fp, fq) = (d.ln_adjusted(p), d.ln_adjusted(q));
                    if fq > fp {
                        Trend::Up
                    } else if fq < fp {
                        Trend::Down
                    } else {
                        Trend::Flat
                    }
                };
                Piece { a, b, trend }
            })
            .collect();
        Self { d, pieces }
    }

    /// `{x : ln m*(x) <= c}`.
    pub fn below(&self, c: f64) -> IntervalSet {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for p in &self.pieces {
            let part = match p.trend {
                Trend::Flat => {
                    let (x, _) = interior_pair(p.a, p.b, self.d.scale());
                    (self.d.ln_adjusted(x) <= c).then_some((p.a, p.b))
                }
                Trend::Up => self.crossing(p, c, true).map(|r| (p.a, r)),
                Trend::Down => self.crossing(p, c, false).map(|r| (r, p.b)),
            };
            if let Some((a, b)) = part {
                if b <= a {
                    continue;
                }
                match out.last_mut() {
                    Some(last) if last.1 >= a => last.1 = last.1.max(b),
                    _ => out.push((a, b)),
                }
            }
        }
        IntervalSet(out)
    }

    /// On a monotone piece, the boundary of `{ln m* <= c}`. For an increasing
    /// piece the set is `[a, r]`, for a decreasing one `[r, b]`. `None` when
    /// the piece contributes nothing.
    fn crossing(&self, p: &Piece, c: f64, up: bool) -> Option<f64> {
        let f = |x: f64| self.d.ln_adjusted(x);
        // "high" end is where the density is largest on this piece
        let (low_end, high_end) = if up { (p.a, p.b) } else { (p.b, p.a) };
        let (mid, _) = interior_pair(p.a, p.b, self.d.scale());
        let inside_high = approach(low_end, high_end, mid, self.d.scale(), |x| f(x) > c);
        let Some(x_hi) = inside_high else {
            // density never exceeds c on the piece
            return Some(if up { p.b } else { p.a });
        };
        let inside_low = approach(high_end, low_end, mid, self.d.scale(), |x| f(x) <= c);
        let x_lo = inside_low?;
        // bisect between x_lo (<= c) and x_hi (> c)
        let (mut u, mut v) = (x_lo, x_hi);
        for _ in 0..200 {
            let m = 0.5 * (u + v);
            if m == u || m == v {
                break;
            }
            if f(m) <= c {
                u = m;
            } else {
                v = m;
            }
        }
        Some(u)
    }

    /// Largest `c` with `M({ln m* <= c}) <= gamma` under `mass_of`, i.e. the
    /// level `r_gamma` such that `P(t) <= gamma` iff `ln m*(t) <= r_gamma`.
    pub fn threshold_level(&self, gamma: f64) -> f64 {
        let mass = |c: f64| self.below(c).mass(self.d);
        let mut top = self.peak_level();
        let mut step = 1.0;
        while mass(top) <= gamma {
            top += step;
            step *= 2.0;
            if step > 1e6 {
                return f64::INFINITY;
            }
        }
        let mut bottom = top - 1.0;
        let mut step = 1.0;
        while mass(bottom) > gamma {
            step *= 2.0;
            bottom = top - step;
            if step > 1e7 {
                return f64::NEG_INFINITY;
            }
        }
        for _ in 0..200 {
            let m = 0.5 * (bottom + top);
            if m == bottom || m == top || top - bottom < 1e-13 * m.abs().max(1.0) {
                break;
            }
            if mass(m) <= gamma {
                bottom = m;
            } else {
                top = m;
            }
        }
        bottom
    }

    /// A finite value at or near the top of `ln m*`.
    fn peak_level(&self) -> f64 {
        let (lo, hi) = self.d.support();
        let s = self.d.scale();
        let mut probes: Vec<f64> = self.d.breakpoints();
        for p in &self.pieces {
            let (x, y) = interior_pair(p.a, p.b, s);
            probes.push(x);
            probes.push(y);
        }
        probes
            .into_iter()
            .filter(|&x| x > lo && x < hi)
            .map(|x| self.d.ln_adjusted(x))
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Two ordered interior points of `(a, b)` used to probe monotone direction.
fn interior_pair(a: f64, b: f64, s: f64) -> (f64, f64) {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => (a + 0.25 * (b - a), a + 0.75 * (b - a)),
        (false, true) => (b - 2.0 * s, b - s),
        (true, false) => (a + s, a + 2.0 * s),
        (false, false) => (-s, s),
    }
}

/// Walks from `start` toward the support end `end` until `pred` holds, and
/// returns the first point found. `end` itself is never evaluated.
fn approach(end_from: f64, end: f64, start: f64, s: f64, mut pred: impl FnMut(f64) -> bool) -> Option<f64> {
    let _ = end_from;
    if pred(start) {
        return Some(start);
    }
    if end.is_finite() {
        let mut gap = end - start;
        for _ in 0..1100 {
            gap *= 0.5;
            let x = end - gap;
            if x == end {
                break;
            }
            if pred(x) {
                return Some(x);
            }
        }
    } else {
        let dir = end.signum();
        let mut step = s;
        for _ in 0..1100 {
            let x = start + dir * step;
            if !x.is_finite() {
                break;
            }
            if pred(x) {
                return Some(x);
            }
            step *= 2.0;
        }
    }
    None
}

/// `P(t0) = M(m*(t) <= m*(t0))`.
pub fn line_pvalue(d: &dyn LinePredictive, t0: f64) -> f64 {
    if d.is_flat() {
        return 1.0;
    }
    if let Some(mu) = d.symmetric_center() {
        let r = (t0 - mu).abs();
        return (2.0 * d.sf(mu + r)).min(1.0);
    }
    let ls = LevelSets::new(d);
    ls.below(d.ln_adjusted(t0)).mass(d)
}

/// The set `{t : P2(t) <= gamma}` for the predictive `d2`.
pub fn conflict_region(d2: &dyn LinePredictive, gamma: f64) -> IntervalSet {
    let (lo, hi) = d2.support();
    if d2.is_flat() {
        // P2 is identically 1
        return if gamma >= 1.0 { IntervalSet(vec![(lo, hi)]) } else { IntervalSet::default() };
    }
    if let Some(mu) = d2.symmetric_center() {
        // P2(t) <= gamma iff |t - mu| >= q with 2 sf(mu + q) = gamma
        let q = crate::distmath::root::threshold_halfline(|r| 2.0 * d2.sf(mu + r) <= gamma);
        if !q.is_finite() {
            return IntervalSet::default();
        }
        if q == 0.0 {
            return IntervalSet(vec![(lo, hi)]);
        }
        return IntervalSet(vec![(lo, mu - q), (mu + q, hi)]);
    }
    let ls = LevelSets::new(d2);
    let c = ls.threshold_level(gamma);
    if c == f64::NEG_INFINITY {
        return IntervalSet::default();
    }
    ls.below(c)
}

// ------------------------------------------------------------------ families

/// `N(mu, var)`.
#[derive(Debug, Clone)]
pub struct NormalLine {
    pub mu: f64,
    pub var: f64,
}

impl LinePredictive for NormalLine {
    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn cdf(&self, x: f64) -> f64 {
        normal_cdf((x - self.mu) / self.var.sqrt())
    }
    fn sf(&self, x: f64) -> f64 {
        normal_sf((x - self.mu) / self.var.sqrt())
    }
    fn ln_density(&self, x: f64) -> f64 {
        let sd = self.var.sqrt();
        normal_ln_pdf((x - self.mu) / sd) - sd.ln()
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![self.mu]
    }
    fn scale(&self) -> f64 {
        self.var.sqrt()
    }
    fn symmetric_center(&self) -> Option<f64> {
        Some(self.mu)
    }
    fn sample(&self, rng: &mut Rng) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mu + self.var.sqrt() * z
    }
}

/// Location `t_lambda(mu, scale^2)`.
#[derive(Debug, Clone)]
pub struct StudentLine {
    pub mu: f64,
    pub scale: f64,
    pub lambda: f64,
}

impl LinePredictive for StudentLine {
    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn cdf(&self, x: f64) -> f64 {
        student_t_cdf_unchecked(self.lambda, (x - self.mu) / self.scale)
    }
    fn sf(&self, x: f64) -> f64 {
        student_t_cdf_unchecked(self.lambda, -(x - self.mu) / self.scale)
    }
    fn ln_density(&self, x: f64) -> f64 {
        student_t_ln_pdf(self.lambda, (x - self.mu) / self.scale) - self.scale.ln()
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![self.mu]
    }
    fn scale(&self) -> f64 {
        self.scale
    }
    fn symmetric_center(&self) -> Option<f64> {
        Some(self.mu)
    }
    fn sample(&self, rng: &mut Rng) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        let u = Gamma::new(0.5 * self.lambda, 2.0 / self.lambda).expect("valid").sample(rng);
        self.mu + self.scale * z / u.sqrt()
    }
}

/// `N(mu, 1/n + s2/u)` mixed over `u ~ Gamma_rate(lambda/2, lambda/2)`: the
/// prior predictive of a sample mean under a `t_lambda(mu, s2)` prior.
#[derive(Debug, Clone)]
pub struct NormalScaleMixture {
    pub mu: f64,
    sds: Vec<f64>,
    ln_w: Vec<f64>,
    w: Vec<f64>,
    lambda: f64,
    inv_n: f64,
    s2: f64,
}

impl NormalScaleMixture {
    pub fn new(mu: f64, inv_n: f64, s2: f64, lambda: f64) -> crate::Result<Self> {
        let rule = QuadratureRule::t_mixing(lambda)?;
        let sds = rule.nodes.iter().map(|u| (inv_n + s2 / u).sqrt()).collect();
        let ln_w = rule.weights.iter().map(|w| w.ln()).collect();
        Ok(Self { mu, sds, ln_w, w: rule.weights, lambda, inv_n, s2 })
    }
}

impl LinePredictive for NormalScaleMixture {
    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn cdf(&self, x: f64) -> f64 {
        let z = x - self.mu;
        self.w.iter().zip(&self.sds).map(|(w, s)| w * normal_cdf(z / s)).sum()
    }
    fn sf(&self, x: f64) -> f64 {
        let z = x - self.mu;
        self.w.iter().zip(&self.sds).map(|(w, s)| w * normal_sf(z / s)).sum()
    }
    fn ln_density(&self, x: f64) -> f64 {
        let z = x - self.mu;
        let terms: Vec<f64> =
            self.ln_w.iter().zip(&self.sds).map(|(lw, s)| lw + normal_ln_pdf(z / s) - s.ln()).collect();
        log_sum_exp(&terms)
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![self.mu]
    }
    fn scale(&self) -> f64 {
        (self.inv_n + self.s2).sqrt()
    }
    fn symmetric_center(&self) -> Option<f64> {
        Some(self.mu)
    }
    fn sample(&self, rng: &mut Rng) -> f64 {
        let u = Gamma::new(0.5 * self.lambda, 2.0 / self.lambda).expect("valid").sample(rng);
        let z: f64 = rng.sample(StandardNormal);
        self.mu + (self.inv_n + self.s2 / u).sqrt() * z
    }
}

/// Mean of `n` squared `N(0, sigma^2)` draws with `1/sigma^2 ~ Gamma_rate(alpha, beta)`:
/// `alpha T / beta ~ F(n, 2 alpha)`.
#[derive(Debug, Clone)]
pub struct ScaleNormalLine {
    pub n: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl LinePredictive for ScaleNormalLine {
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn cdf(&self, x: f64) -> f64 {
        f_cdf_real(self.n, 2.0 * self.alpha, self.alpha * x / self.beta)
    }
    fn sf(&self, x: f64) -> f64 {
        f_sf_real(self.n, 2.0 * self.alpha, self.alpha * x / self.beta)
    }
    fn ln_density(&self, x: f64) -> f64 {
        let k = self.alpha / self.beta;
        f_ln_pdf(self.n, 2.0 * self.alpha, k * x) + k.ln()
    }
    fn ln_adjusted(&self, x: f64) -> f64 {
        self.ln_density(x) + 0.5 * (4.0 * x / self.n).ln()
    }
    fn breakpoints(&self) -> Vec<f64> {
        if self.n > 1.0 {
            vec![self.beta * (self.n - 1.0) / (self.n * (self.alpha + 0.5))]
        } else {
            Vec::new()
        }
    }
    fn scale(&self) -> f64 {
        let mode = self.beta / (self.alpha + 0.5);
        mode.max(1e-300)
    }
    fn sample(&self, rng: &mut Rng) -> f64 {
        let prec = Gamma::new(self.alpha, 1.0 / self.beta).expect("valid").sample(rng);
        let chi = Gamma::new(0.5 * self.n, 2.0).expect("valid").sample(rng);
        chi / (self.n * prec)
    }
}

/// Limit of [`ScaleNormalLine`] as `n -> inf`: `1/T ~ Gamma_rate(alpha, beta)`,
/// `m*(t)` proportional to `t^{-alpha-1/2} e^{-beta/t}`.
#[derive(Debug, Clone)]
pub struct InverseGammaLine {
    pub alpha: f64,
    pub beta: f64,
}

impl LinePredictive for InverseGammaLine {
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            reg_inc_gamma_upper(self.alpha, self.beta / x)
        }
    }
    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            reg_inc_gamma(self.alpha, self.beta / x)
        }
    }
    fn ln_density(&self, x: f64) -> f64 {
        self.alpha * self.beta.ln() - ln_gamma(self.alpha) - (self.alpha + 1.0) * x.ln() - self.beta / x
    }
    fn ln_adjusted(&self, x: f64) -> f64 {
        self.ln_density(x) + 0.5 * x.ln()
    }
    fn adjusted_is_exact(&self) -> bool {
        false
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![self.beta / (self.alpha + 0.5)]
    }
    fn scale(&self) -> f64 {
        self.beta / (self.alpha + 0.5)
    }
    fn sample(&self, rng: &mut Rng) -> f64 {
        1.0 / Gamma::new(self.alpha, 1.0 / self.beta).expect("valid").sample(rng)
    }
}

/// Beta(a, b) on `[0, 1]`, the `n -> inf` limit of the binomial proportion.
#[derive(Debug, Clone)]
pub struct BetaLine {
    pub a: f64,
    pub b: f64,
}

impl LinePredictive for BetaLine {
    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn cdf(&self, x: f64) -> f64 {
        beta_cdf_unchecked(self.a, self.b, x)
    }
    fn sf(&self, x: f64) -> f64 {
        beta_cdf_unchecked(self.b, self.a, 1.0 - x)
    }
    fn ln_density(&self, x: f64) -> f64 {
        beta_ln_pdf(self.a, self.b, x)
    }
    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = (self.a, self.b);
        if (a - 1.0) * (b - 1.0) > 0.0 {
            vec![(a - 1.0) / (a + b - 2.0)]
        } else {
            Vec::new()
        }
    }
    fn scale(&self) -> f64 {
        0.25
    }
    fn symmetric_center(&self) -> Option<f64> {
        (self.a == self.b && self.a > 1.0).then_some(0.5)
    }
    fn is_flat(&self) -> bool {
        self.a == 1.0 && self.b == 1.0
    }
    fn sample(&self, rng: &mut Rng) -> f64 {
        BetaDist::new(self.a, self.b).expect("valid").sample(rng)
    }
}
