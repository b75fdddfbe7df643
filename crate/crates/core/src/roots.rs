//! Bracketing root finder and golden-section search.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Root of `f` on `[lo, hi]` by bisection, to absolute width `tol`.
///
/// Requires a sign change between the endpoints; an exact zero at either end
/// is returned as is.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoRoot(format!(
            "no sign change on [{}, {}] (f = {}, {})",
            lo.as_f64(),
            hi.as_f64(),
            fa.as_f64(),
            fb.as_f64()
        )));
    }
    let mut fa = fa;
    // 200 halvings exhaust the mantissa of any supported scalar
    for _ in 0..200 {
        let mid = T::lit(0.5) * (a + b);
        if b - a <= tol || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(T::lit(0.5) * (a + b))
}

/// Maximizer and maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
