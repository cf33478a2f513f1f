//! Bracketed scalar root finding.
//!
//! Brent's hybrid: bisection steps guarantee the bracket shrinks, secant and
//! inverse quadratic steps accelerate once the iterate is close.

use crate::error::{f, Error, Result};
use crate::scalar::{c, Scalar};

/// Absolute tolerance on the root location used by the equilibrium solvers.
pub const ROOT_XTOL: f64 = 1e-14;

const MAX_ITER: usize = 200;

/// Finds a root of `func` inside `[lo, hi]`.
///
/// `func(lo)` and `func(hi)` must have opposite signs (or one of them be
/// zero). The returned abscissa is within `xtol` (widened to a few ulps of
/// the root when `xtol` is below the scalar's resolution) of a sign change.
pub fn find_root<T, F>(mut func: F, lo: T, hi: T, xtol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = func(a);
    let mut fb = func(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo: f(lo), hi: f(hi) });
    }

    let two = c::<T>(2.0);
    let half = c::<T>(0.5);
    let mut cc = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            cc = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = cc;
            cc = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + half * xtol;
        let m = half * (cc - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == cc {
                // secant
                p = two * m * s;
                q = T::one() - s;
            } else {
                // inverse quadratic interpolation
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            let min1 = c::<T>(3.0) * m * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol {
            b + d
        } else if m > T::zero() {
            b + tol
        } else {
            b - tol
        };
        fb = func(b);
    }
    Ok(b)
}
