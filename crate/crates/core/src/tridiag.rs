//! Symmetric tridiagonal eigensolvers: implicit QL, Sturm bisection and inverse iteration.
//!
//! `diag` has length n and `off` length n − 1, with `off[i]` coupling rows i and i + 1.

use crate::error::{Error, Result};
use crate::Real;

const QL_MAX_SWEEPS: usize = 60;
const BISECT_MAX_ITER: usize = 256;

/// All eigenvalues in ascending order (implicit QL with Wilkinson shifts).
pub fn eigenvalues<T: Real>(diag: &[T], off: &[T]) -> Result<Vec<T>> {
    let mut d = diag.to_vec();
    let mut e = padded(off, d.len());
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(d)
}

/// Eigenpairs in ascending order; `vectors[j]` is the unit eigenvector of `values[j]`.
pub fn eigenpairs<T: Real>(diag: &[T], off: &[T]) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = padded(off, n);
    let mut z: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    Ok((order.iter().map(|&j| d[j]).collect(), order.iter().map(|&j| z[j].clone()).collect()))
}

fn padded<T: Real>(off: &[T], n: usize) -> Vec<T> {
    let mut e = off.to_vec();
    e.resize(n, T::zero());
    e
}

fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], mut z: Option<&mut Vec<Vec<T>>>) -> Result<()> {
    let n = d.len();
    let two = T::two();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::Oracle(format!("QL iteration did not converge for eigenvalue {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut(i + 1);
                    for (a, b) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count<T: Real>(diag: &[T], off: &[T], x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = T::one();
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 { T::zero() } else { off[i - 1] * off[i - 1] / q };
        q = d - x - coupling;
        if q == T::zero() {
            q = -tiny;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin<T: Real>(diag: &[T], off: &[T]) -> (T, T) {
    let n = diag.len();
    let (mut lo, mut hi) = (diag[0], diag[0]);
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { T::zero() };
        let right = if i + 1 < n { off[i].abs() } else { T::zero() };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The `index`-th smallest eigenvalue (0-based) by Sturm bisection, to the full
/// precision of `T`.
pub fn eigenvalue_bisect<T: Real>(diag: &[T], off: &[T], index: usize) -> Result<T> {
    if index >= diag.len() {
        return Err(crate::error::domain("eigenvalue index", T::from_usize_lossy(index), "[0, n)"));
    }
    let (mut lo, mut hi) = gershgorin(diag, off);
    let pad = (hi - lo).abs() * T::epsilon() + T::min_positive_value();
    lo = lo - pad;
    hi = hi + pad;
    for _ in 0..BISECT_MAX_ITER {
        let mid = (lo + hi) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) * T::half())
}

/// Unit eigenvector for an accurate eigenvalue estimate `lambda` by inverse iteration.
pub fn inverse_iteration<T: Real>(diag: &[T], off: &[T], lambda: T) -> Vec<T> {
    let n = diag.len();
    let scale = diag.iter().chain(off.iter()).fold(T::zero(), |m, x| m.max(x.abs())).max(T::one());
    let floor = scale * T::epsilon();
    let mut x: Vec<T> = (0..n).map(|i| T::one() + T::lit(1e-3) * T::from_usize_lossy(i % 7)).collect();
    normalize(&mut x);
    for _ in 0..3 {
        x = shifted_solve(diag, off, lambda, &x, floor);
        normalize(&mut x);
    }
    x
}

fn normalize<T: Real>(x: &mut [T]) {
    let norm = x.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
    if norm > T::zero() {
        x.iter_mut().for_each(|v| *v = *v / norm);
    }
}

/// Solves (A − λI) x = b by Gaussian elimination with partial pivoting; zero pivots are
/// replaced by `floor`.
fn shifted_solve<T: Real>(diag: &[T], off: &[T], lambda: T, b: &[T], floor: T) -> Vec<T> {
    let n = diag.len();
    if n == 1 {
        let p = diag[0] - lambda;
        return vec![b[0] / if p.abs() < floor { floor } else { p }];
    }
    // Row i of U holds (u0, u1, u2) at columns i, i + 1, i + 2.
    let mut u = vec![[T::zero(); 3]; n];
    let mut rhs = b.to_vec();
    let mut cur = [diag[0] - lambda, off[0], T::zero()];
    for i in 0..n - 1 {
        let below = [off[i], diag[i + 1] - lambda, if i + 2 < n { off[i + 1] } else { T::zero() }];
        // `cur` spans columns i..i+2, `below` spans columns i..i+2 as well.
        let (mut top, mut bot) = (cur, below);
        let (mut rt, mut rb) = (rhs[i], rhs[i + 1]);
        if bot[0].abs() > top[0].abs() {
            std::mem::swap(&mut top, &mut bot);
            std::mem::swap(&mut rt, &mut rb);
        }
        if top[0].abs() < floor {
            top[0] = floor;
        }
        let m = bot[0] / top[0];
        u[i] = top;
        rhs[i] = rt;
        rhs[i + 1] = rb - m * rt;
        cur = [bot[1] - m * top[1], bot[2] - m * top[2], T::zero()];
    }
    if cur[0].abs() < floor {
        cur[0] = floor;
    }
    u[n - 1] = cur;
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut v = rhs[i];
        if i + 1 < n {
            v = v - u[i][1] * x[i + 1];
        }
        if i + 2 < n {
            v = v - u[i][2] * x[i + 2];
        }
        x[i] = v / u[i][0];
    }
    x
}
