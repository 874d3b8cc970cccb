//! Special functions, distribution primitives, quadrature and randomness.

mod dist;
mod quad;
mod rng;
pub mod root;
pub mod special;

pub use dist::{
    beta_cdf, chisq_cdf, chisq_quantile, chisq_sf, f_cdf, f_quantile, f_sf, gamma_cdf, normal_cdf,
    normal_ln_pdf, normal_pdf, normal_quantile, normal_sf, student_t_cdf,
};
pub(crate) use dist::{
    beta_cdf_unchecked, beta_ln_pdf, f_cdf_real, f_ln_pdf, f_sf_real,
    student_t_cdf_unchecked, student_t_ln_pdf,
};
pub use quad::{QuadratureRule, RuleKind};
pub use rng::Rng;
pub use special::{ln_beta, ln_gamma, reg_inc_beta, reg_inc_gamma, reg_inc_gamma_upper};

/// Rounds to 12 significant digits; discrete ties and level comparisons are
/// decided on these keys.
pub fn tie_key(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - e);
    if scale.is_finite() && scale > 0.0 {
        (x * scale).round() / scale
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::tie_key;

    #[test]
    fn tie_key_merges_float_noise() {
        let a = 0.1 + 0.2;
        assert_eq!(tie_key(a), tie_key(0.3));
        assert_ne!(tie_key(0.3), tie_key(0.300000001));
        assert_eq!(tie_key(0.0), 0.0);
        assert_eq!(tie_key(1.0 - 1e-16), tie_key(1.0));
    }
}
