//! Quasiclassical momentum, turning points, barrier action and tunneling period.

use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::model::{
    effective_potential_unchecked, landscape_unchecked, transverse, AnnealPoint, Landscape, PotentialSpec,
    Stationary, Well, SCAN_CELLS,
};
use crate::quad::adaptive;
use crate::roots::bisect;
use crate::Real;

const ROOT_TOL: f64 = 1e-14;
const ABS_TOL: f64 = 1e-14;
const REL_TOL: f64 = 1e-12;
const MAX_PANELS: usize = 400;

/// A classically forbidden interval under the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSegment<T> {
    pub q_l: T,
    pub q_r: T,
}

/// Outcome of a barrier-action evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierAction<T> {
    Tunneling { sigma: T, segment: BarrierSegment<T> },
    /// The energy is at or above the barrier top; there is nothing to tunnel through.
    OverBarrier,
    /// No kinetic term (s = 1): the action is infinite.
    Divergent,
}

impl<T: Real> BarrierAction<T> {
    /// Per-spin action; zero over the barrier, `None` when divergent.
    pub fn sigma(&self) -> Option<T> {
        match *self {
            BarrierAction::Tunneling { sigma, .. } => Some(sigma),
            BarrierAction::OverBarrier => Some(T::zero()),
            BarrierAction::Divergent => None,
        }
    }

    pub fn is_over_barrier(&self) -> bool {
        matches!(self, BarrierAction::OverBarrier)
    }
}

/// Sector and energy at an annealing point, with the turning points cached.
#[derive(Debug, Clone, PartialEq)]
pub struct WkbState<T> {
    pub spec: PotentialSpec<T>,
    pub k: T,
    pub energy: T,
    pub point: AnnealPoint<T>,
    pub turning_points: Vec<T>,
}

impl<T: Real> WkbState<T> {
    pub fn new(spec: PotentialSpec<T>, k: T, energy: T, point: AnnealPoint<T>) -> Result<Self> {
        let turning_points = turning_points(&spec, k, energy, &point)?;
        Ok(WkbState { spec, k, energy, point, turning_points })
    }

    /// u(q) = 2(s f(q) − E) / ((1−s) sqrt((1−2k)² − q²)).
    pub fn u(&self, q: T) -> T {
        let s = self.point.s;
        let r = transverse(self.k, q);
        T::two() * (s * self.spec.f(q) - self.energy) / ((T::one() - s) * r)
    }

    /// Complex momentum: arccos u in the allowed region, i·arccosh u under the barrier.
    /// Imaginary parts are reported as non-negative magnitudes.
    pub fn momentum(&self, q: T) -> Result<Complex<T>> {
        let e = T::one() - T::two() * self.k;
        if !(q.abs() < e) {
            return Err(domain("q", q, "the open band |q| < 1 - 2k"));
        }
        if self.point.s >= T::one() {
            return Err(domain("s", self.point.s, "[0, 1) for a finite momentum"));
        }
        let u = self.u(q);
        Ok(if u.abs() <= T::one() {
            Complex::new(u.acos(), T::zero())
        } else if u > T::one() {
            Complex::new(T::zero(), u.acosh())
        } else {
            Complex::new(T::PI(), (-u).acosh())
        })
    }
}

fn check_inputs<T: Real>(k: T, point: &AnnealPoint<T>) -> Result<()> {
    if !(k >= T::zero() && k <= T::half()) {
        return Err(domain("k", k, "[0, 1/2]"));
    }
    if !(point.s >= T::zero() && point.s <= T::one()) {
        return Err(domain("s", point.s, "[0, 1]"));
    }
    Ok(())
}

/// All q in the open band where |u(q)| = 1, ascending.
///
/// Roots of u = 1 (U = E) are bracketed on the monotone pieces between stationary
/// points; roots of u = −1 (the upper band edge) come from an angular scan.
pub fn turning_points<T: Real>(spec: &PotentialSpec<T>, k: T, energy: T, point: &AnnealPoint<T>) -> Result<Vec<T>> {
    check_inputs(k, point)?;
    let s = point.s;
    let e = T::one() - T::two() * k;
    if s >= T::one() || e <= T::zero() {
        return Ok(Vec::new());
    }
    let land = landscape_unchecked(spec, k, s);
    let tol = T::lit(ROOT_TOL);
    let lower = |q: T| effective_potential_unchecked(spec, k, q, s) - energy;
    let mut knots = vec![-e];
    knots.extend(land.stationary.iter().map(|(p, _)| p.q).filter(|q| q.abs() < e));
    knots.push(e);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (lower(a), lower(b));
        if fa == T::zero() {
            if a.abs() < e {
                roots.push(a);
            }
        } else if fb != T::zero() && fa.signum() != fb.signum() {
            if let Some(r) = bisect(lower, a, b, tol) {
                roots.push(r);
            }
        }
    }
    if let Some(&last) = knots.last() {
        if lower(last) == T::zero() && last.abs() < e {
            roots.push(last);
        }
    }

    let upper = |theta: T| {
        let q = e * theta.sin();
        s * spec.f(q) + T::half() * (T::one() - s) * transverse(k, q) - energy
    };
    let n = SCAN_CELLS;
    let h = T::PI() / T::from_usize_lossy(n);
    let mut prev_t = -T::FRAC_PI_2();
    let mut prev = upper(prev_t);
    for i in 1..=n {
        let t = if i == n { T::FRAC_PI_2() } else { -T::FRAC_PI_2() + h * T::from_usize_lossy(i) };
        let v = upper(t);
        if prev != T::zero() && v != T::zero() && prev.signum() != v.signum() {
            if let Some(r) = bisect(upper, prev_t, t, tol) {
                let q = e * r.sin();
                if q.abs() < e {
                    roots.push(q);
                }
            }
        } else if v == T::zero() && i < n {
            roots.push(e * t.sin());
        }
        prev_t = t;
        prev = v;
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    roots.dedup_by(|a, b| (*a - *b).abs() <= tol);
    Ok(roots)
}

/// Per-spin tunneling action σ = ∫ arccosh u(q) dq across the barrier separating the wells.
pub fn barrier_action<T: Real>(spec: &PotentialSpec<T>, k: T, energy: T, point: &AnnealPoint<T>) -> Result<BarrierAction<T>> {
    check_inputs(k, point)?;
    if point.s >= T::one() {
        return Ok(BarrierAction::Divergent);
    }
    let land = landscape_unchecked(spec, k, point.s);
    action_in(spec, &land, energy)
}

/// Tunneling period T(E) = −∂σ/∂E at fixed k, per spin.
///
/// Infinite when E sits at the bottom of the metastable well.
pub fn period<T: Real>(spec: &PotentialSpec<T>, k: T, energy: T, point: &AnnealPoint<T>) -> Result<T> {
    check_inputs(k, point)?;
    if point.s >= T::one() {
        return Err(domain("s", point.s, "[0, 1) for a finite period"));
    }
    let land = landscape_unchecked(spec, k, point.s);
    period_in(spec, &land, energy)
}

pub(crate) struct Barrier<T> {
    left: Stationary<T>,
    top: Stationary<T>,
    right: Stationary<T>,
}

pub(crate) fn barrier_of<T: Real>(land: &Landscape<T>) -> Result<Barrier<T>> {
    match (land.barrier_top, land.right_min) {
        (Some(top), Some(right)) => Ok(Barrier { left: land.left_min, top, right }),
        _ => Err(Error::MissingWell(Well::Right, land.k.to_f64_lossy(), land.s.to_f64_lossy())),
    }
}

/// Forbidden interval at energy `energy`; `None` at or above the barrier top.
pub(crate) fn segment_in<T: Real>(spec: &PotentialSpec<T>, land: &Landscape<T>, energy: T) -> Result<Option<BarrierSegment<T>>> {
    let b = barrier_of(land)?;
    if energy >= b.top.u {
        return Ok(None);
    }
    for (well, bottom) in [(Well::Left, b.left), (Well::Right, b.right)] {
        if energy < bottom.u {
            return Err(Error::BelowWell {
                energy: energy.to_f64_lossy(),
                bottom: bottom.u.to_f64_lossy(),
                well,
            });
        }
    }
    let (k, s) = (land.k, land.s);
    let g = |q: T| effective_potential_unchecked(spec, k, q, s) - energy;
    let tol = T::lit(ROOT_TOL);
    let q_l = bisect(g, b.left.q, b.top.q, tol).unwrap_or(b.left.q);
    let q_r = bisect(g, b.top.q, b.right.q, tol).unwrap_or(b.right.q);
    Ok(Some(BarrierSegment { q_l, q_r }))
}

/// u − 1 = 2(U − E)/((1−s) r), evaluated without cancellation against 1.
#[inline]
fn excess<T: Real>(spec: &PotentialSpec<T>, k: T, s: T, energy: T, q: T) -> (T, T) {
    let r = transverse(k, q);
    let kin = (T::one() - s) * r;
    let u_minus_e = s * spec.f(q) - T::half() * kin - energy;
    (T::two() * u_minus_e / kin, kin)
}

/// Integrates `h(q)` over the segment with q = q_TP ± t² near each turning point.
fn integrate_segment<T: Real>(seg: BarrierSegment<T>, mut h: impl FnMut(T) -> T) -> T {
    let mid = (seg.q_l + seg.q_r) * T::half();
    let span = (mid - seg.q_l).max(T::zero()).sqrt();
    let (abs_tol, rel_tol) = (T::lit(ABS_TOL), T::lit(REL_TOL));
    let left = adaptive(|t: T| T::two() * t * h(seg.q_l + t * t), T::zero(), span, abs_tol, rel_tol, MAX_PANELS);
    let right = adaptive(|t: T| T::two() * t * h(seg.q_r - t * t), T::zero(), span, abs_tol, rel_tol, MAX_PANELS);
    left.value + right.value
}

pub(crate) fn action_in<T: Real>(spec: &PotentialSpec<T>, land: &Landscape<T>, energy: T) -> Result<BarrierAction<T>> {
    if land.s >= T::one() {
        return Ok(BarrierAction::Divergent);
    }
    let Some(seg) = segment_in(spec, land, energy)? else {
        return Ok(BarrierAction::OverBarrier);
    };
    let (k, s) = (land.k, land.s);
    let sigma = integrate_segment(seg, |q| {
        let (d, _) = excess(spec, k, s, energy, q);
        if d <= T::zero() {
            T::zero()
        } else {
            (d + (d * (T::two() + d)).sqrt()).ln_1p()
        }
    });
    Ok(BarrierAction::Tunneling { sigma: sigma.max(T::zero()), segment: seg })
}

pub(crate) fn period_in<T: Real>(spec: &PotentialSpec<T>, land: &Landscape<T>, energy: T) -> Result<T> {
    let b = barrier_of(land)?;
    if energy >= b.top.u {
        return Err(Error::AboveBarrier {
            energy: energy.to_f64_lossy(),
            top: b.top.u.to_f64_lossy(),
        });
    }
    if energy <= b.left.u || energy <= b.right.u {
        if energy < b.left.u.max(b.right.u) {
            segment_in(spec, land, energy)?;
        }
        return Ok(T::infinity());
    }
    let Some(seg) = segment_in(spec, land, energy)? else {
        return Err(Error::AboveBarrier {
            energy: energy.to_f64_lossy(),
            top: b.top.u.to_f64_lossy(),
        });
    };
    let (k, s) = (land.k, land.s);
    Ok(integrate_segment(seg, |q| {
        let (d, kin) = excess(spec, k, s, energy, q);
        let root = (d.max(T::zero()) * (T::two() + d)).sqrt();
        if root <= T::zero() {
            T::zero()
        } else {
            T::two() / (kin * root)
        }
    }))
}
