//! Bracketed scalar root finding.

use crate::{Error, Result};

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol * max(1, |x|)` or after 400
/// halvings. Errors if the endpoints do not bracket a root.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::numerical(
            "bisect",
            format!("no sign change on [{lo}, {hi}]: f = ({flo}, {fhi})"),
        ));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol * mid.abs().max(1.0) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest `x >= 0` (to relative precision ~1e-15) with `pred(x)` true, for a
/// predicate that is false below some threshold and true above it.
///
/// The bracket grows by doubling from 1, then shrinks by halving while the
/// lower end is still 0, then bisects at the geometric midpoint whenever the
/// bracket spans more than a factor of four. That keeps tiny quantiles
/// accurate in relative terms.
pub fn threshold_halfline<P: FnMut(f64) -> bool>(mut pred: P) -> f64 {
    let mut hi = 1.0;
    let mut guard = 0;
    while !pred(hi) {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 || !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    for _ in 0..2200 {
        let mid = if lo == 0.0 {
            0.5 * hi
        } else if hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        if mid < f64::MIN_POSITIVE {
            return 0.0;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn threshold_small_and_large() {
        let t = threshold_halfline(|x| x >= 3.7e-9);
        assert!((t / 3.7e-9 - 1.0).abs() < 1e-14);
        let t = threshold_halfline(|x| x >= 1234.5);
        assert!((t / 1234.5 - 1.0).abs() < 1e-14);
    }
}
