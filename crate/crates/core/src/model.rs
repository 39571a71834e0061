//! Classical cost functions, entropies and the effective potential landscape.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::roots::{bisect, bisect_predicate, golden_min};
use crate::Real;

/// Number of cells in the angular stationary-point scan.
pub const SCAN_CELLS: usize = 2048;
const Q_TOL: f64 = 1e-13;
const K_STAR_TOL: f64 = 1e-9;

/// Classical cost function f(q) per spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec<T> {
    /// f(q) = −c (q − q_min)² (q − (3 q_max − q_min)/2): a double root (local minimum)
    /// at `q_min` and a local maximum at `q_max`.
    Cubic { q_min: T, q_max: T, c: T },
    /// f(q) = q^p.
    Monomial { p: u32 },
}

impl<T: Real> PotentialSpec<T> {
    /// Unit-strength cubic potential.
    pub fn cubic(q_min: T, q_max: T) -> Result<Self> {
        Self::cubic_with_strength(q_min, q_max, T::one())
    }

    pub fn cubic_with_strength(q_min: T, q_max: T, c: T) -> Result<Self> {
        let spec = PotentialSpec::Cubic { q_min, q_max, c };
        spec.validate()?;
        Ok(spec)
    }

    pub fn monomial(p: u32) -> Result<Self> {
        let spec = PotentialSpec::Monomial { p };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the parameter invariants. The degenerate boundary
    /// q_max = (2 + q_min)/3, where f(q_min) = f(1), is accepted.
    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::Cubic { q_min, q_max, c } => {
                if !(q_min >= T::zero() && q_min < T::one()) {
                    return Err(Error::InvalidPotential(format!("q_min = {q_min} must lie in [0, 1)")));
                }
                if !(q_max > q_min && q_max < T::one()) {
                    return Err(Error::InvalidPotential(format!(
                        "q_max = {q_max} must lie in (q_min, 1) with q_min = {q_min}"
                    )));
                }
                let bound = (T::two() + q_min) / T::lit(3.0);
                if q_max > bound + T::epsilon() * T::lit(8.0) {
                    return Err(Error::InvalidPotential(format!(
                        "q_max = {q_max} exceeds (2 + q_min)/3 = {bound}; q = 1 would not be the global minimum"
                    )));
                }
                if !(c > T::zero()) || !c.is_finite() {
                    return Err(Error::InvalidPotential(format!("strength c = {c} must be positive")));
                }
                Ok(())
            }
            PotentialSpec::Monomial { p } => {
                if p < 3 {
                    return Err(Error::InvalidPotential(format!("monomial power p = {p} must be at least 3")));
                }
                Ok(())
            }
        }
    }

    /// Converts the parameters to another scalar type.
    pub fn cast<U: Real>(&self) -> PotentialSpec<U> {
        match *self {
            PotentialSpec::Cubic { q_min, q_max, c } => PotentialSpec::Cubic {
                q_min: U::lit(q_min.to_f64_lossy()),
                q_max: U::lit(q_max.to_f64_lossy()),
                c: U::lit(c.to_f64_lossy()),
            },
            PotentialSpec::Monomial { p } => PotentialSpec::Monomial { p },
        }
    }

    /// True when f(q_min) = f(1) to within a relative 1e−9, so q = 1 is not a strict global minimum.
    pub fn is_degenerate(&self) -> bool {
        match *self {
            PotentialSpec::Cubic { q_min, q_max, .. } => {
                let bound = (T::two() + q_min) / T::lit(3.0);
                (bound - q_max).abs() <= T::lit(1e-9)
            }
            PotentialSpec::Monomial { .. } => false,
        }
    }

    /// f(q) without domain checks.
    #[inline]
    pub fn f(&self, q: T) -> T {
        match *self {
            PotentialSpec::Cubic { q_min, q_max, c } => {
                let b = (T::lit(3.0) * q_max - q_min) * T::half();
                let d = q - q_min;
                -c * d * d * (q - b)
            }
            PotentialSpec::Monomial { p } => q.powi(p as i32),
        }
    }

    /// f'(q).
    #[inline]
    pub fn df(&self, q: T) -> T {
        match *self {
            PotentialSpec::Cubic { q_min, q_max, c } => -T::lit(3.0) * c * (q - q_min) * (q - q_max),
            PotentialSpec::Monomial { p } => T::from_usize_lossy(p as usize) * q.powi(p as i32 - 1),
        }
    }

    /// f(q) on the physical range |q| ≤ 1.
    pub fn potential(&self, q: T) -> Result<T> {
        if !(q.abs() <= T::one()) {
            return Err(domain("q", q, "[-1, 1]"));
        }
        Ok(self.f(q))
    }

    /// f'(q) on the physical range |q| ≤ 1.
    pub fn derivative(&self, q: T) -> Result<T> {
        if !(q.abs() <= T::one()) {
            return Err(domain("q", q, "[-1, 1]"));
        }
        Ok(self.df(q))
    }
}

/// Inverse temperature; infinity is a distinct value rather than a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Beta<T> {
    pub fn finite(beta: T) -> Result<Self> {
        if !(beta >= T::zero()) || !beta.is_finite() {
            return Err(domain("beta", beta, "[0, inf)"));
        }
        Ok(Beta::Finite(beta))
    }

    pub fn value(&self) -> Option<T> {
        match *self {
            Beta::Finite(b) => Some(b),
            Beta::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Beta::Infinite)
    }
}

/// Algorithm control point: annealing parameter `s` and inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealPoint<T> {
    pub s: T,
    pub beta: Beta<T>,
}

impl<T: Real> AnnealPoint<T> {
    pub fn new(s: T, beta: Beta<T>) -> Result<Self> {
        if !(s >= T::zero() && s <= T::one()) {
            return Err(domain("s", s, "[0, 1]"));
        }
        if let Beta::Finite(b) = beta {
            Beta::finite(b)?;
        }
        Ok(AnnealPoint { s, beta })
    }

    pub fn zero_temperature(s: T) -> Result<Self> {
        Self::new(s, Beta::Infinite)
    }

    pub fn thermal(s: T, beta: T) -> Result<Self> {
        Self::new(s, Beta::finite(beta)?)
    }
}

/// Which of the two potential wells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Well {
    /// Metastable well at smaller magnetization.
    Left,
    /// Ground-state well at larger magnetization.
    Right,
}

impl fmt::Display for Well {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Well::Left => "left",
            Well::Right => "right",
        })
    }
}

/// Position and value of a stationary point of U(k, ·).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationary<T> {
    pub q: T,
    pub u: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryKind {
    Minimum,
    Maximum,
}

/// Wells and barrier of U(k, ·) at fixed `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape<T> {
    pub k: T,
    pub s: T,
    /// Minimum with the smallest q.
    pub left_min: Stationary<T>,
    /// Highest maximum between the two wells; `None` for a single-well landscape.
    pub barrier_top: Option<Stationary<T>>,
    /// Minimum with the largest q, when distinct from the left one.
    pub right_min: Option<Stationary<T>>,
    /// All interior and band-edge stationary points, ascending in q.
    pub stationary: Vec<(Stationary<T>, StationaryKind)>,
}

impl<T: Real> Landscape<T> {
    pub fn has_two_wells(&self) -> bool {
        self.right_min.is_some()
    }

    pub fn well(&self, well: Well) -> Option<Stationary<T>> {
        match well {
            Well::Left => Some(self.left_min),
            Well::Right => self.right_min,
        }
    }

    /// Band half-width 1 − 2k.
    pub fn band(&self) -> T {
        T::one() - T::two() * self.k
    }
}

fn check_k<T: Real>(k: T) -> Result<()> {
    if !(k >= T::zero() && k <= T::half()) {
        return Err(domain("k", k, "[0, 1/2]"));
    }
    Ok(())
}

fn check_s<T: Real>(s: T) -> Result<()> {
    if !(s >= T::zero() && s <= T::one()) {
        return Err(domain("s", s, "[0, 1]"));
    }
    Ok(())
}

/// sqrt((1−2k)² − q²), clamped at zero for rounding just outside the band.
#[inline]
pub(crate) fn transverse<T: Real>(k: T, q: T) -> T {
    let e = T::one() - T::two() * k;
    ((e - q) * (e + q)).max(T::zero()).sqrt()
}

/// U(k, q, s) without domain checks.
#[inline]
pub fn effective_potential_unchecked<T: Real>(spec: &PotentialSpec<T>, k: T, q: T, s: T) -> T {
    s * spec.f(q) - T::half() * (T::one() - s) * transverse(k, q)
}

/// U(k, q, s) = s f(q) − ½(1−s) sqrt((1−2k)² − q²).
pub fn effective_potential<T: Real>(spec: &PotentialSpec<T>, k: T, q: T, s: T) -> Result<T> {
    check_k(k)?;
    check_s(s)?;
    let e = T::one() - T::two() * k;
    if !(q.abs() <= e) {
        return Err(domain("q", q, "the band |q| <= 1 - 2k"));
    }
    Ok(effective_potential_unchecked(spec, k, q, s))
}

/// Position-dependent mass m(q) = [½(1−s) sqrt((1−2k)² − q²)]⁻¹; infinite at the band edge.
pub fn effective_mass<T: Real>(k: T, q: T, s: T) -> Result<T> {
    check_k(k)?;
    check_s(s)?;
    let e = T::one() - T::two() * k;
    if !(q.abs() <= e) {
        return Err(domain("q", q, "the band |q| <= 1 - 2k"));
    }
    Ok(T::one() / (T::half() * (T::one() - s) * transverse(k, q)))
}

/// Binary entropy Q_k = −k ln k − (1−k) ln(1−k) of the spin sector with K = kN.
pub fn entropy_k<T: Real>(k: T) -> Result<T> {
    check_k(k)?;
    Ok(binary_entropy(k))
}

#[inline]
pub fn binary_entropy<T: Real>(k: T) -> T {
    let xlnx = |x: T| if x <= T::zero() { T::zero() } else { x * x.ln() };
    -xlnx(k) - xlnx(T::one() - k)
}

/// Entropy of classical configurations with magnetization q.
pub fn entropy_classical<T: Real>(q: T) -> Result<T> {
    if !(q.abs() <= T::one()) {
        return Err(domain("q", q, "[-1, 1]"));
    }
    Ok(binary_entropy((T::one() - q.abs()) * T::half()))
}

/// Stationary points of U(k, ·, s) and the resulting well structure.
///
/// The scan runs over q = (1−2k) sin θ, where dU/dθ stays finite at the band edges.
pub fn landscape<T: Real>(spec: &PotentialSpec<T>, k: T, s: T) -> Result<Landscape<T>> {
    check_k(k)?;
    check_s(s)?;
    Ok(landscape_unchecked(spec, k, s))
}

pub(crate) fn landscape_unchecked<T: Real>(spec: &PotentialSpec<T>, k: T, s: T) -> Landscape<T> {
    let e = T::one() - T::two() * k;
    let u_at = |q: T| effective_potential_unchecked(spec, k, q, s);
    if e <= T::epsilon() {
        let min = Stationary { q: T::zero(), u: u_at(T::zero()) };
        return Landscape {
            k,
            s,
            left_min: min,
            barrier_top: None,
            right_min: None,
            stationary: vec![(min, StationaryKind::Minimum)],
        };
    }
    let half_pi = T::FRAC_PI_2();
    let kin = T::half() * (T::one() - s);
    let g = |theta: T| {
        let (sn, cs) = theta.sin_cos();
        e * cs * s * spec.df(e * sn) + kin * e * sn
    };
    let n = SCAN_CELLS;
    let h = T::PI() / T::from_usize_lossy(n);
    let theta = |i: usize| {
        if i == n {
            half_pi
        } else {
            -half_pi + h * T::from_usize_lossy(i)
        }
    };
    // At s = 1 only the sign of dU/dθ just inside each edge matters.
    let at_one = s >= T::one();
    let inside = |d: T| if d == T::zero() { d } else { d.signum() * T::epsilon() };
    let (edge_lo, edge_hi) = if at_one {
        (inside(spec.df(-e)), inside(spec.df(e)))
    } else {
        (-kin * e, kin * e)
    };
    let gv = |t: T| {
        if t >= half_pi {
            edge_hi
        } else if t <= -half_pi {
            edge_lo
        } else {
            g(t)
        }
    };
    let mut vals: Vec<T> = (0..=n).map(|i| g(theta(i))).collect();
    vals[0] = edge_lo;
    vals[n] = edge_hi;

    let tol = T::lit(Q_TOL);
    let mut found: Vec<(T, StationaryKind)> = Vec::new();
    let kind_of = |before: T, after: T| {
        if before < T::zero() && after > T::zero() {
            Some(StationaryKind::Minimum)
        } else if before > T::zero() && after < T::zero() {
            Some(StationaryKind::Maximum)
        } else {
            None
        }
    };

    // Exact zeros on nodes, including the band edges at s = 1.
    let prev_nonzero = |i: usize| (0..i).rev().map(|j| vals[j]).find(|v| *v != T::zero());
    let next_nonzero = |i: usize| (i + 1..=n).map(|j| vals[j]).find(|v| *v != T::zero());
    for i in 0..=n {
        if vals[i] != T::zero() {
            continue;
        }
        if i > 0 && vals[i - 1] == T::zero() {
            continue;
        }
        let before = prev_nonzero(i);
        let after = next_nonzero(i);
        let kind = match (before, after) {
            (Some(b), Some(a)) => kind_of(b, a),
            (None, Some(a)) => kind_of(-a, a).filter(|k| *k == StationaryKind::Minimum),
            (Some(b), None) => kind_of(b, -b).filter(|k| *k == StationaryKind::Minimum),
            (None, None) => None,
        };
        if let Some(kind) = kind {
            found.push((theta(i), kind));
        }
    }

    for i in 0..n {
        let (a, b) = (vals[i], vals[i + 1]);
        if a == T::zero() || b == T::zero() {
            continue;
        }
        if let Some(kind) = kind_of(a, b) {
            if let Some(root) = bisect(gv, theta(i), theta(i + 1), tol) {
                found.push((root, kind));
            }
            continue;
        }
        // A min/max pair closer than one cell leaves no sign change on the grid.
        let interior = i > 0 && i + 1 < n;
        if !interior {
            continue;
        }
        let dip = a > T::zero() && a < vals[i - 1] && b <= vals[i + 2] && a <= b;
        let bump = a < T::zero() && a > vals[i - 1] && b >= vals[i + 2] && a >= b;
        if !(dip || bump) {
            continue;
        }
        let sign = if dip { T::one() } else { -T::one() };
        let (lo, hi) = (theta(i - 1), theta(i + 1));
        let (t_ext, v_ext) = golden_min(|t| sign * g(t), lo, hi, tol);
        if v_ext >= T::zero() {
            continue;
        }
        let (first, second) = if dip {
            (StationaryKind::Maximum, StationaryKind::Minimum)
        } else {
            (StationaryKind::Minimum, StationaryKind::Maximum)
        };
        if let Some(r) = bisect(g, lo, t_ext, tol) {
            found.push((r, first));
        }
        if let Some(r) = bisect(g, t_ext, hi, tol) {
            found.push((r, second));
        }
    }
    if at_one && edge_lo > T::zero() {
        found.push((-half_pi, StationaryKind::Minimum));
    }
    if at_one && edge_hi < T::zero() {
        found.push((half_pi, StationaryKind::Minimum));
    }

    found.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
    let stationary: Vec<(Stationary<T>, StationaryKind)> = found
        .into_iter()
        .map(|(t, kind)| {
            let q = if t >= half_pi {
                e
            } else if t <= -half_pi {
                -e
            } else {
                e * t.sin()
            };
            (Stationary { q, u: u_at(q) }, kind)
        })
        .collect();

    let minima: Vec<Stationary<T>> = stationary
        .iter()
        .filter(|(_, k)| *k == StationaryKind::Minimum)
        .map(|(p, _)| *p)
        .collect();
    let left_min = match minima.first() {
        Some(m) => *m,
        None => {
            // Flat landscape: every point is stationary.
            let q = T::zero();
            Stationary { q, u: u_at(q) }
        }
    };
    let right_min = if minima.len() > 1 { minima.last().copied() } else { None };
    let barrier_top = right_min.and_then(|r| {
        stationary
            .iter()
            .filter(|(p, kind)| *kind == StationaryKind::Maximum && p.q > left_min.q && p.q < r.q)
            .map(|(p, _)| *p)
            .fold(None, |best: Option<Stationary<T>>, p| match best {
                Some(b) if b.u >= p.u => Some(b),
                _ => Some(p),
            })
    });
    let right_min = if barrier_top.is_some() { right_min } else { None };
    Landscape { k, s, left_min, barrier_top, right_min, stationary }
}

/// Largest k at which the right well exists, or `None` if it is absent already at k = 0.
pub fn k_star<T: Real>(spec: &PotentialSpec<T>, s: T) -> Result<Option<T>> {
    check_s(s)?;
    if !landscape_unchecked(spec, T::zero(), s).has_two_wells() {
        return Ok(None);
    }
    let k = bisect_predicate(
        |k| landscape_unchecked(spec, k, s).has_two_wells(),
        T::zero(),
        T::half(),
        T::lit(K_STAR_TOL),
    );
    Ok(Some(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference_spec() -> PotentialSpec<f64> {
        PotentialSpec::cubic(0.0, 0.533).unwrap()
    }

    #[test]
    fn cubic_values() {
        let f = reference_spec();
        assert_eq!(f.potential(0.0).unwrap(), 0.0);
        assert!(f.derivative(0.533).unwrap().abs() < 1e-15);
        // -(1)^2 (1 - 0.7995)
        assert!((f.potential(1.0).unwrap() + 0.2005).abs() < 1e-12);
        assert!(f.potential(1.0 + 1e-9).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(PotentialSpec::cubic(0.0, 0.0).is_err());
        assert!(PotentialSpec::cubic(0.5, 0.9).is_err());
        assert!(PotentialSpec::cubic(-0.1, 0.3).is_err());
        assert!(PotentialSpec::cubic_with_strength(0.0, 0.3, 0.0).is_err());
        assert!(PotentialSpec::<f64>::monomial(2).is_err());
        let edge = PotentialSpec::cubic(0.88f64, 2.88 / 3.0).unwrap();
        assert!(edge.is_degenerate());
        assert!((edge.f(0.88) - edge.f(1.0)).abs() < 1e-15);
        assert!(!reference_spec().is_degenerate());
    }

    #[test]
    fn effective_potential_examples() {
        let f = reference_spec();
        assert_eq!(effective_potential(&f, 0.0, 0.0, 0.0).unwrap(), -0.5);
        for k in [0.0, 0.1, 0.3] {
            let e = 1.0 - 2.0 * k;
            for q in [e, -e] {
                let u = effective_potential(&f, k, q, 0.7).unwrap();
                assert!((u - 0.7 * f.f(q)).abs() < 1e-15);
            }
        }
        let u0 = effective_potential(&f, 0.0, 0.2, 1.0).unwrap();
        let u1 = effective_potential(&f, 0.3, 0.2, 1.0).unwrap();
        assert_eq!(u0, u1);
        assert!(effective_potential(&f, 0.3, 0.5, 0.5).is_err());
        assert!(effective_potential(&f, 0.6, 0.0, 0.5).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_k(0.0f64).unwrap(), 0.0);
        assert!((entropy_k(0.5f64).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((entropy_k(0.25f64).unwrap() - 0.562_335_144_618_9).abs() < 1e-12);
        assert_eq!(entropy_classical(1.0f64).unwrap(), 0.0);
        assert!((entropy_classical(0.0f64).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((entropy_classical(0.88f64).unwrap() - 0.227).abs() < 1e-3);
        assert!(entropy_k(0.51f64).is_err());
        assert!(entropy_classical(1.5f64).is_err());
    }

    #[test]
    fn pure_driver_single_well() {
        let l = landscape(&reference_spec(), 0.0, 0.0).unwrap();
        assert!(l.left_min.q.abs() < 1e-12);
        assert!(l.barrier_top.is_none() && l.right_min.is_none());
    }

    #[test]
    fn classical_limit_landmarks() {
        let f = PotentialSpec::cubic(0.0f64, 0.467).unwrap();
        let l = landscape(&f, 0.0, 1.0).unwrap();
        assert!(l.left_min.q.abs() < 1e-9);
        assert!((l.barrier_top.unwrap().q - 0.467).abs() < 1e-9);
        assert_eq!(l.right_min.unwrap().q, 1.0);
    }

    #[test]
    fn k_star_at_reference_point() {
        let k = k_star(&reference_spec(), 0.85).unwrap().unwrap();
        assert!((k - 0.152).abs() < 3e-3, "k* = {k}");
        let l = landscape(&reference_spec(), k - 1e-6, 0.85).unwrap();
        assert!(l.has_two_wells());
        assert!(!landscape(&reference_spec(), k + 1e-8, 0.85).unwrap().has_two_wells());
    }

    #[test]
    fn k_star_classical_edge() {
        // At s = 1 the right well sits on the band edge while 1 - 2k > q_max.
        let k = k_star(&reference_spec(), 1.0).unwrap().unwrap();
        assert!((k - (1.0 - 0.533) / 2.0).abs() < 1e-8, "k* = {k}");
    }

    #[test]
    fn near_edge_right_well_survives() {
        let f = PotentialSpec::cubic(0.88, 0.955).unwrap();
        for s in [0.9995, 0.9999, 0.99999] {
            let l = landscape(&f, 0.0, s).unwrap();
            let r = l.right_min.expect("right well");
            assert!(r.q > 0.955 && r.q < 1.0);
        }
    }

    #[test]
    fn stationary_points_are_roots() {
        let f = reference_spec();
        let s = 0.85;
        for k in [0.0, 0.05, 0.1, 0.15] {
            let l = landscape(&f, k, s).unwrap();
            for (p, _) in &l.stationary {
                let e = 1.0 - 2.0 * k;
                let h = 1e-7;
                if p.q.abs() + h < e {
                    let d = (effective_potential_unchecked(&f, k, p.q + h, s)
                        - effective_potential_unchecked(&f, k, p.q - h, s))
                        / (2.0 * h);
                    assert!(d.abs() < 1e-6, "k={k} q={} dU={d}", p.q);
                }
            }
        }
    }

    #[test]
    fn mass_bounded_near_edge() {
        for k in [0.0, 0.2] {
            let e: f64 = 1.0 - 2.0 * k;
            let mut prev: Option<f64> = None;
            for j in 4..14 {
                let q = e - 10f64.powi(-j);
                let m: f64 = effective_mass(k, q, 0.6).unwrap() * (e - q).sqrt();
                assert!(m.is_finite());
                if let Some(p) = prev {
                    assert!(((m - p) / p).abs() < 1e-3);
                }
                prev = Some(m);
            }
        }
    }

    #[test]
    fn landscape_in_f32() {
        let f = PotentialSpec::<f32>::cubic(0.0, 0.533).unwrap();
        let l = landscape(&f, 0.0, 0.85).unwrap();
        assert!(l.has_two_wells());
    }

    proptest! {
        #[test]
        fn entropy_identity(q in 0.0f64..=1.0) {
            let a = entropy_classical(q).unwrap();
            let b = entropy_k((1.0 - q) / 2.0).unwrap();
            prop_assert!((a - b).abs() <= 1e-15);
        }

        #[test]
        fn entropy_increasing(k in 0.0f64..0.5, dk in 1e-6f64..0.01) {
            let k2 = (k + dk).min(0.5);
            prop_assert!(entropy_k(k2).unwrap() >= entropy_k(k).unwrap());
        }

        #[test]
        fn potential_nondecreasing_in_k(q in -0.5f64..0.5, s in 0.0f64..1.0, k in 0.0f64..0.2, dk in 0.0f64..0.05) {
            let f = reference_spec();
            let lo = effective_potential(&f, k, q, s).unwrap();
            let hi = effective_potential(&f, k + dk, q, s).unwrap();
            prop_assert!(hi >= lo - 1e-15);
        }

        #[test]
        fn wells_ordered(k in 0.0f64..0.5, s in 0.0f64..=1.0, q_min in 0.0f64..0.9, frac in 0.05f64..0.95) {
            let q_max = q_min + frac * ((2.0 + q_min) / 3.0 - q_min);
            let f = PotentialSpec::cubic(q_min, q_max).unwrap();
            let l = landscape(&f, k, s).unwrap();
            let e = 1.0 - 2.0 * k;
            prop_assert!(l.left_min.q.abs() <= e);
            if let (Some(t), Some(r)) = (l.barrier_top, l.right_min) {
                prop_assert!(l.left_min.q < t.q && t.q < r.q && r.q <= e);
                prop_assert!(t.u >= l.left_min.u && t.u >= r.u);
            }
        }
    }
}
