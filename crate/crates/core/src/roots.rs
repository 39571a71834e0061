//! Bracketing root finders and a golden-section minimizer.
//!
//! All routines are iteration-bounded so that they terminate for any scalar
//! precision, including `f32` where the requested tolerance may be below one ulp.

use crate::Real;

const MAX_ITER: usize = 400;

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs (or one is zero).
///
/// Returns `None` when the endpoints do not bracket a root.
pub fn bisect<T: Real>(mut f: impl FnMut(T) -> T, mut lo: T, mut hi: T, tol: T) -> Option<T> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Some(lo);
    }
    if f_hi == T::zero() {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    for _ in 0..MAX_ITER {
        let mid = lo + (hi - lo) * T::half();
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(lo + (hi - lo) * T::half())
}

/// Bisection on a boolean predicate that is `true` at `lo` and `false` at `hi`.
///
/// Returns the last point known to satisfy the predicate.
pub fn bisect_predicate<T: Real>(mut pred: impl FnMut(T) -> bool, mut lo: T, mut hi: T, tol: T) -> T {
    for _ in 0..MAX_ITER {
        let mid = lo + (hi - lo) * T::half();
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Brent's method (zeroin) for a bracketed root.
pub fn brent<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T) -> Option<T> {
    let two = T::two();
    let eps = T::epsilon();
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Some(a);
    }
    if fb == T::zero() {
        return Some(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + T::half() * tol;
        let xm = T::half() * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Some(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = T::lit(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1 * xm.signum() };
        fb = f(b);
    }
    Some(b)
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`; the endpoints themselves are not evaluated.
pub fn golden_min<T: Real>(mut f: impl FnMut(T) -> T, mut a: T, mut b: T, tol: T) -> (T, T) {
    let resp = T::lit(0.381_966_011_250_105_1);
    let mut x1 = a + resp * (b - a);
    let mut x2 = b - resp * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..MAX_ITER {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + resp * (b - a);
            if x1 == x2 {
                break;
            }
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - resp * (b - a);
            if x1 == x2 {
                break;
            }
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimizes `f` over `[a, b]` by a uniform scan of `points` nodes followed by a
/// golden-section polish around the best node. Endpoints are included.
pub fn scan_min<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, points: usize, tol: T) -> (T, T) {
    let n = points.max(3);
    let step = (b - a) / T::from_usize_lossy(n - 1);
    let mut best = (a, f(a));
    let mut best_i = 0;
    for i in 1..n {
        let x = if i == n - 1 { b } else { a + step * T::from_usize_lossy(i) };
        let v = f(x);
        if v < best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = if best_i == 0 { a } else { a + step * T::from_usize_lossy(best_i - 1) };
    let hi = if best_i + 1 >= n { b } else { a + step * T::from_usize_lossy(best_i + 1) };
    let polished = golden_min(&mut f, lo, hi, tol);
    if polished.1 < best.1 {
        polished
    } else {
        best
    }
}
