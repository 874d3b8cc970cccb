//! Distribution functions used throughout the crate.
//!
//! Functions that can receive user input return [`Result`]; the unchecked
//! `*_unchecked` style helpers are kept private to the crate's hot loops.

use std::f64::consts::{PI, SQRT_2};

use super::root::threshold_halfline;
use super::special::{inc_beta_pair, ln_gamma, reg_inc_gamma, reg_inc_gamma_upper};
use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn check_prob(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("probability {p} is not in (0, 1)")))
    }
}

fn check_nonneg(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("argument {x} must be nonnegative")))
    }
}

fn check_dof(k: f64, what: &str) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} degrees of freedom {k} must be positive")))
    }
}

/// Inverts a continuous distribution on `[0, inf)` given its cdf and survival
/// function. The survival function is used above the median so that upper
/// quantiles keep full relative precision.
pub(crate) fn quantile_halfline(cdf: impl Fn(f64) -> f64, sf: impl Fn(f64) -> f64, p: f64) -> f64 {
    if p <= 0.5 {
        threshold_halfline(|x| cdf(x) >= p)
    } else {
        let q = 1.0 - p;
        threshold_halfline(|x| sf(x) <= q)
    }
}

// ---------------------------------------------------------------- normal

pub fn normal_pdf(z: f64) -> f64 {
    normal_ln_pdf(z).exp()
}

pub fn normal_ln_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// Standard normal cdf.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * super::special::erfc(-z / SQRT_2)
}

/// Standard normal survival function `1 - Phi(z)`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * super::special::erfc(z / SQRT_2)
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> Result<f64> {
    check_prob(p)?;
    Ok(normal_quantile_unchecked(p))
}

pub(crate) fn normal_quantile_unchecked(p: f64) -> f64 {
    if p == 0.5 {
        0.0
    } else if p < 0.5 {
        -threshold_halfline(|x| normal_sf(x) <= p)
    } else {
        threshold_halfline(|x| normal_sf(x) <= 1.0 - p)
    }
}

// ---------------------------------------------------------------- chi-squared

/// `G_k(x)`, the chi-squared(k) distribution function.
pub fn chisq_cdf(k: u32, x: f64) -> Result<f64> {
    check_dof(k as f64, "chi-squared")?;
    check_nonneg(x)?;
    Ok(reg_inc_gamma(0.5 * k as f64, 0.5 * x))
}

/// `1 - G_k(x)`.
pub fn chisq_sf(k: u32, x: f64) -> Result<f64> {
    check_dof(k as f64, "chi-squared")?;
    check_nonneg(x)?;
    Ok(reg_inc_gamma_upper(0.5 * k as f64, 0.5 * x))
}

/// `G_k^{-1}(p)`.
pub fn chisq_quantile(k: u32, p: f64) -> Result<f64> {
    check_dof(k as f64, "chi-squared")?;
    check_prob(p)?;
    let a = 0.5 * k as f64;
    Ok(2.0 * quantile_halfline(|x| reg_inc_gamma(a, x), |x| reg_inc_gamma_upper(a, x), p))
}

// ---------------------------------------------------------------- F

fn f_split(d1: f64, d2: f64, x: f64) -> (f64, f64) {
    let num = d1 * x;
    let den = num + d2;
    (num / den, d2 / den)
}

/// Distribution function of F(d1, d2).
pub fn f_cdf(d1: u32, d2: f64, x: f64) -> Result<f64> {
    check_dof(d1 as f64, "numerator")?;
    check_dof(d2, "denominator")?;
    check_nonneg(x)?;
    Ok(f_cdf_real(d1 as f64, d2, x))
}

/// Survival function of F(d1, d2).
pub fn f_sf(d1: u32, d2: f64, x: f64) -> Result<f64> {
    check_dof(d1 as f64, "numerator")?;
    check_dof(d2, "denominator")?;
    check_nonneg(x)?;
    Ok(f_sf_real(d1 as f64, d2, x))
}

/// Quantile of F(d1, d2).
pub fn f_quantile(d1: u32, d2: f64, p: f64) -> Result<f64> {
    check_dof(d1 as f64, "numerator")?;
    check_dof(d2, "denominator")?;
    check_prob(p)?;
    let d1 = d1 as f64;
    Ok(quantile_halfline(|x| f_cdf_real(d1, d2, x), |x| f_sf_real(d1, d2, x), p))
}

/// F cdf with real numerator degrees, as needed by scale-normal predictives.
pub(crate) fn f_cdf_real(d1: f64, d2: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let (u, v) = f_split(d1, d2, x);
    inc_beta_pair(0.5 * d1, 0.5 * d2, u, v)
}

pub(crate) fn f_sf_real(d1: f64, d2: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let (u, v) = f_split(d1, d2, x);
    inc_beta_pair(0.5 * d2, 0.5 * d1, v, u)
}

/// Log density of F(d1, d2).
pub(crate) fn f_ln_pdf(d1: f64, d2: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let h1 = 0.5 * d1;
    let h2 = 0.5 * d2;
    ln_gamma(h1 + h2) - ln_gamma(h1) - ln_gamma(h2) + h1 * (d1 / d2).ln() + (h1 - 1.0) * x.ln()
        - (h1 + h2) * (d1 * x / d2).ln_1p()
}

// ---------------------------------------------------------------- Student t

/// Cdf of the standard Student t with `lambda > 0` degrees of freedom.
pub fn student_t_cdf(lambda: f64, x: f64) -> Result<f64> {
    check_dof(lambda, "Student t")?;
    Ok(student_t_cdf_unchecked(lambda, x))
}

pub(crate) fn student_t_cdf_unchecked(lambda: f64, x: f64) -> f64 {
    if x.is_infinite() {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let x2 = x * x;
    let den = lambda + x2;
    // P(|T| > |x|) = I_{lambda/(lambda+x^2)}(lambda/2, 1/2)
    let tail = 0.5 * inc_beta_pair(0.5 * lambda, 0.5, lambda / den, x2 / den);
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Log density of the standard Student t.
pub(crate) fn student_t_ln_pdf(lambda: f64, x: f64) -> f64 {
    ln_gamma(0.5 * (lambda + 1.0))
        - ln_gamma(0.5 * lambda)
        - 0.5 * (lambda * PI).ln()
        - 0.5 * (lambda + 1.0) * (x * x / lambda).ln_1p()
}

// ---------------------------------------------------------------- gamma / beta

/// Cdf of Gamma with the given shape and rate.
pub fn gamma_cdf(shape: f64, rate: f64, x: f64) -> Result<f64> {
    if !(shape > 0.0 && rate > 0.0) {
        return Err(Error::domain(format!("gamma parameters ({shape}, {rate}) must be positive")));
    }
    check_nonneg(x)?;
    Ok(reg_inc_gamma(shape, rate * x))
}

/// Cdf of Beta(a, b) on `[0, 1]`.
pub fn beta_cdf(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!("beta parameters ({a}, {b}) must be positive")));
    }
    Ok(beta_cdf_unchecked(a, b, x))
}

pub(crate) fn beta_cdf_unchecked(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        inc_beta_pair(a, b, x, 1.0 - x)
    }
}

pub(crate) fn beta_ln_pdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return f64::NEG_INFINITY;
    }
    (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - super::special::ln_beta(a, b)
}
