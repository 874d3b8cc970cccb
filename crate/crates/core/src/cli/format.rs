/// `x` to 6 significant digits; scientific notation outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        let dec = (5 - e).max(0) as usize;
        format!("{x:.dec$}")
    } else {
        format!("{x:.5e}")
    }
}

#[cfg(test)]
mod tests {
    use super::sig6;

    #[test]
    fn six_digits() {
        assert_eq!(sig6(std::f64::consts::FRAC_2_PI), "0.636620");
        assert_eq!(sig6(2.5464), "2.54640");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(-0.000123456789), "-0.000123457");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(f64::INFINITY), "inf");
    }
}
