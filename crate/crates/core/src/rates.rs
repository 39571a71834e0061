//! Entropy-weighted escape exponents: free energies of the wells, the optimal
//! thermally assisted tunneling action, the classical over-barrier action and the
//! critical line.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{binary_entropy, k_star, landscape_unchecked, AnnealPoint, Beta, Landscape, PotentialSpec, Well};
use crate::roots::{bisect, bisect_predicate, brent, golden_min};
use crate::wkb::{action_in, period_in};
use crate::Real;

/// Grid sizes for the optimizations. Every count is clamped to at least 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    /// k nodes on [0, k*] for the tunneling optimum.
    pub k_points: usize,
    /// Energy nodes per k between the admissible floor and the barrier top.
    pub e_points: usize,
    /// k nodes for the well free energies.
    pub fe_k_points: usize,
    /// Freezing-point candidates in (s_QPT, 1) for the schedule optimum.
    pub s_points: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { k_points: 512, e_points: 24, fe_k_points: 256, s_points: 32 }
    }
}

impl Resolution {
    fn k(&self) -> usize {
        self.k_points.max(8)
    }
    fn e(&self) -> usize {
        self.e_points.max(8)
    }
    fn fe(&self) -> usize {
        self.fe_k_points.max(8)
    }
    pub(crate) fn s(&self) -> usize {
        self.s_points.max(8)
    }
}

/// Entropy-optimal state of one well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyWell<T> {
    pub well: Well,
    pub k_min: T,
    /// Well-bottom energy per spin at `k_min`.
    pub energy: T,
    /// βE − Q_k per spin; `None` at infinite β.
    pub free_energy: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mechanism {
    QuantumTunneling,
    ClassicalOverBarrier,
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mechanism::QuantumTunneling => "quantum",
            Mechanism::ClassicalOverBarrier => "classical",
        })
    }
}

/// Where the optimum was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimizer<T> {
    /// Tunneling at sector k and energy E.
    Tunneling { k: T, energy: T },
    /// Passage over the barrier top q at sector k.
    Saddle { k: T, q: T },
}

impl<T: Real> Optimizer<T> {
    pub fn k(&self) -> T {
        match *self {
            Optimizer::Tunneling { k, .. } | Optimizer::Saddle { k, .. } => k,
        }
    }
}

/// Per-spin escape exponent: the rate is e^{−Nσ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult<T> {
    pub sigma: T,
    pub mechanism: Mechanism,
    pub optimizer: Optimizer<T>,
    /// The energy sits on the floor E_R(k) > E_L(k) set by the target well.
    pub constrained: bool,
}

#[derive(Debug, Clone)]
struct Slice<T> {
    k: T,
    entropy: T,
    land: Landscape<T>,
    floor: T,
    top: T,
    top_q: T,
    constrained_floor: bool,
    /// (E, σ) on the energy grid, excluding the barrier top.
    grid: Vec<(T, T)>,
}

/// Cached analysis of one potential at one value of s.
///
/// Building it evaluates the landscapes and the β-independent action grid once;
/// every β-dependent query reuses them.
#[derive(Debug, Clone)]
pub struct Rates<T> {
    spec: PotentialSpec<T>,
    s: T,
    res: Resolution,
    k_star: Option<T>,
    left: Vec<(T, T)>,
    right: Vec<(T, T)>,
    slices: Vec<Slice<T>>,
}

fn node<T: Real>(lo: T, hi: T, i: usize, n: usize) -> T {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)
    }
}

impl<T: Real> Rates<T> {
    pub fn new(spec: &PotentialSpec<T>, s: T, res: Resolution) -> Result<Self> {
        spec.validate()?;
        if !(s >= T::zero() && s <= T::one()) {
            return Err(crate::error::domain("s", s, "[0, 1]"));
        }
        let k_star = k_star(spec, s)?;
        let n = res.fe();
        let left: Vec<(T, T)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let k = node(T::zero(), T::half(), i, n);
                (k, landscape_unchecked(spec, k, s).left_min.u)
            })
            .collect();
        let right: Vec<(T, T)> = match k_star {
            Some(ks) => (0..n)
                .into_par_iter()
                .filter_map(|i| {
                    let k = node(T::zero(), ks, i, n);
                    landscape_unchecked(spec, k, s).right_min.map(|r| (k, r.u))
                })
                .collect(),
            None => Vec::new(),
        };
        let slices = match (k_star, s < T::one()) {
            (Some(ks), true) => {
                let nk = res.k();
                let ne = res.e();
                (0..nk)
                    .into_par_iter()
                    .filter_map(|i| slice(spec, s, node(T::zero(), ks, i, nk), ne))
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(Rates { spec: *spec, s, res, k_star, left, right, slices })
    }

    pub fn spec(&self) -> &PotentialSpec<T> {
        &self.spec
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn k_star(&self) -> Option<T> {
        self.k_star
    }

    fn well_energy(&self, well: Well, k: T) -> Option<T> {
        let land = landscape_unchecked(&self.spec, k, self.s);
        land.well(well).map(|p| p.u)
    }

    fn missing(&self, well: Well) -> Error {
        Error::MissingWell(well, 0.0, self.s.to_f64_lossy())
    }

    /// Minimizes βE_w(k) − Q_k over the admissible k range of the well.
    pub fn well_free_energy(&self, beta: Beta<T>, well: Well) -> Result<FreeEnergyWell<T>> {
        let grid = match well {
            Well::Left => &self.left,
            Well::Right => &self.right,
        };
        let Some(&(_, e0)) = grid.first() else {
            return Err(self.missing(well));
        };
        let beta = match beta {
            Beta::Infinite => {
                return Ok(FreeEnergyWell { well, k_min: T::zero(), energy: e0, free_energy: None });
            }
            Beta::Finite(b) => b,
        };
        let value = |k: T, e: T| beta * e - binary_entropy(k);
        let (i_best, &(k_grid, e_grid)) = grid
            .iter()
            .enumerate()
            .min_by(|a, b| {
                value(a.1 .0, a.1 .1)
                    .partial_cmp(&value(b.1 .0, b.1 .1))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty grid");
        let mut best = (k_grid, e_grid, value(k_grid, e_grid));
        let lo = grid[i_best.saturating_sub(1)].0;
        let hi = grid[(i_best + 1).min(grid.len() - 1)].0;
        if hi > lo {
            let objective = |k: T| match self.well_energy(well, k) {
                Some(e) => value(k, e),
                None => T::infinity(),
            };
            let (k, v) = golden_min(objective, lo, hi, T::lit(1e-11));
            if v < best.2 {
                if let Some(e) = self.well_energy(well, k) {
                    best = (k, e, v);
                }
            }
        }
        Ok(FreeEnergyWell { well, k_min: best.0, energy: best.1, free_energy: Some(best.2) })
    }

    fn finite_free_energy(&self, beta: T, well: Well) -> Result<T> {
        Ok(self
            .well_free_energy(Beta::Finite(beta), well)?
            .free_energy
            .expect("finite beta"))
    }

    /// F_R − F_L at finite β.
    pub fn free_energy_gap(&self, beta: T) -> Result<T> {
        Ok(self.finite_free_energy(beta, Well::Right)? - self.finite_free_energy(beta, Well::Left)?)
    }

    fn require_two_wells(&self) -> Result<()> {
        if self.slices.is_empty() {
            if self.s >= T::one() {
                return Err(crate::error::domain("s", self.s, "[0, 1) for tunneling"));
            }
            return Err(self.missing(Well::Right));
        }
        Ok(())
    }

    /// Zero-temperature tunneling action from the metastable well bottom at k = 0.
    pub fn zero_temperature_action(&self) -> Result<RateResult<T>> {
        zero_temperature_action(&self.spec, self.s)
    }

    /// Optimal thermally assisted escape exponent, measured from the metastable free-energy minimum.
    pub fn optimal_quantum_action(&self, beta: Beta<T>) -> Result<RateResult<T>> {
        let beta = match beta {
            Beta::Infinite => return self.zero_temperature_action(),
            Beta::Finite(b) => b,
        };
        self.require_two_wells()?;
        let f_left = self.finite_free_energy(beta, Well::Left)?;
        let shift = |sl: &Slice<T>| -sl.entropy - f_left;

        // Grid search over (k, E) using the cached actions.
        let mut best_q: Option<(usize, usize, T)> = None;
        let mut best_c: Option<(usize, T)> = None;
        for (i, sl) in self.slices.iter().enumerate() {
            let c = beta * sl.top + shift(sl);
            if best_c.map_or(true, |b| c < b.1) {
                best_c = Some((i, c));
            }
            for (j, &(e, sigma)) in sl.grid.iter().enumerate() {
                let v = sigma + beta * e + shift(sl);
                if best_q.map_or(true, |b| v < b.2) {
                    best_q = Some((i, j, v));
                }
            }
        }
        let (ci, cv) = best_c.expect("non-empty slices");
        let classical = self.polish_classical(beta, f_left, ci, cv);

        let mut quantum = None;
        if let Some((i, _, v)) = best_q {
            if v < classical.0 {
                quantum = Some(self.polish_quantum(beta, f_left, i));
            }
        }
        match quantum {
            Some(q) if q.sigma < classical.0 => Ok(q),
            _ => Ok(RateResult {
                sigma: classical.0,
                mechanism: Mechanism::ClassicalOverBarrier,
                optimizer: Optimizer::Saddle { k: classical.1, q: classical.2 },
                constrained: false,
            }),
        }
    }

    /// Lowest βU_top(k) − Q_k − F_L along the barrier ridge: (σ, k, q_top).
    fn polish_classical(&self, beta: T, f_left: T, i: usize, v: T) -> (T, T, T) {
        let sl = &self.slices[i];
        let mut best = (v, sl.k, sl.top_q);
        let lo = self.slices[i.saturating_sub(1)].k;
        let hi = self.slices[(i + 1).min(self.slices.len() - 1)].k;
        if hi > lo {
            let ridge = |k: T| {
                landscape_unchecked(&self.spec, k, self.s)
                    .barrier_top
                    .map_or(T::infinity(), |t| beta * t.u - binary_entropy(k) - f_left)
            };
            let (k, val) = golden_min(ridge, lo, hi, T::lit(1e-11));
            if val < best.0 {
                if let Some(t) = landscape_unchecked(&self.spec, k, self.s).barrier_top {
                    best = (val, k, t.q);
                }
            }
        }
        best
    }

    fn polish_quantum(&self, beta: T, f_left: T, i: usize) -> RateResult<T> {
        let n_e = self.res.e();
        let at = |k: T| -> Option<(T, T, bool, bool)> {
            let sl = slice(&self.spec, self.s, k, n_e)?;
            Some(optimize_energy(&self.spec, &sl, beta, f_left, false))
        };
        let sl = &self.slices[i];
        let mut best = {
            let (v, e, interior, constrained) = optimize_energy(&self.spec, sl, beta, f_left, false);
            (v, sl.k, e, interior, constrained)
        };
        let lo = self.slices[i.saturating_sub(1)].k;
        let hi = self.slices[(i + 1).min(self.slices.len() - 1)].k;
        if hi > lo {
            let (k, v) = golden_min(|k| at(k).map_or(T::infinity(), |r| r.0), lo, hi, T::lit(1e-8));
            if v < best.0 {
                best.0 = v;
                best.1 = k;
            }
        }
        if let Some(sl) = slice(&self.spec, self.s, best.1, n_e) {
            let (v, e, interior, constrained) = optimize_energy(&self.spec, &sl, beta, f_left, true);
            best = (v, sl.k, e, interior, constrained);
        }
        let (sigma, k, energy, interior, constrained) = best;
        if interior {
            RateResult {
                sigma,
                mechanism: Mechanism::QuantumTunneling,
                optimizer: Optimizer::Tunneling { k, energy },
                constrained,
            }
        } else {
            let q = landscape_unchecked(&self.spec, k, self.s)
                .barrier_top
                .map_or(T::nan(), |t| t.q);
            RateResult {
                sigma,
                mechanism: Mechanism::ClassicalOverBarrier,
                optimizer: Optimizer::Saddle { k, q },
                constrained: false,
            }
        }
    }

    /// Lowest saddle of βU − Q_k between the wells, relative to the metastable minimum.
    pub fn classical_escape_action(&self, beta: Beta<T>) -> Result<RateResult<T>> {
        let beta = match beta {
            Beta::Infinite => {
                self.require_ridge()?;
                let top = landscape_unchecked(&self.spec, T::zero(), self.s)
                    .barrier_top
                    .ok_or_else(|| self.missing(Well::Right))?;
                return Ok(RateResult {
                    sigma: T::infinity(),
                    mechanism: Mechanism::ClassicalOverBarrier,
                    optimizer: Optimizer::Saddle { k: T::zero(), q: top.q },
                    constrained: false,
                });
            }
            Beta::Finite(b) => b,
        };
        self.require_ridge()?;
        let f_left = self.finite_free_energy(beta, Well::Left)?;
        let ks = self.k_star.expect("ridge exists");
        let n = self.res.k();
        let ridge = |k: T| {
            landscape_unchecked(&self.spec, k, self.s)
                .barrier_top
                .map(|t| (beta * t.u - binary_entropy(k) - f_left, t.q))
        };
        let vals: Vec<(T, T, T)> = (0..n)
            .into_par_iter()
            .filter_map(|i| {
                let k = node(T::zero(), ks, i, n);
                ridge(k).map(|(v, q)| (k, v, q))
            })
            .collect();
        let (i, &(k0, v0, q0)) = vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap_or(std::cmp::Ordering::Equal))
            .ok_or_else(|| self.missing(Well::Right))?;
        let mut best = (k0, v0, q0);
        let lo = vals[i.saturating_sub(1)].0;
        let hi = vals[(i + 1).min(vals.len() - 1)].0;
        if hi > lo {
            let (k, _) = golden_min(|k| ridge(k).map_or(T::infinity(), |r| r.0), lo, hi, T::lit(1e-11));
            if let Some((v, q)) = ridge(k) {
                if v < best.1 {
                    best = (k, v, q);
                }
            }
        }
        Ok(RateResult {
            sigma: best.1,
            mechanism: Mechanism::ClassicalOverBarrier,
            optimizer: Optimizer::Saddle { k: best.0, q: best.2 },
            constrained: false,
        })
    }

    fn require_ridge(&self) -> Result<()> {
        if self.k_star.is_none() {
            return Err(self.missing(Well::Right));
        }
        Ok(())
    }

    /// β at which both wells have equal free energy, given s_QPT.
    pub fn critical_beta(&self, s_qpt: T) -> Result<Beta<T>> {
        let s = self.s;
        if (s - s_qpt).abs() <= T::lit(QPT_MATCH) {
            return Ok(Beta::Infinite);
        }
        if s < s_qpt {
            return Err(Error::BelowTransition { s: s.to_f64_lossy(), s_qpt: s_qpt.to_f64_lossy() });
        }
        if self.right.is_empty() {
            return Err(self.missing(Well::Right));
        }
        let gap = |b: T| self.free_energy_gap(b).unwrap_or(T::nan());
        if gap(T::zero()) <= T::zero() {
            return Ok(Beta::Finite(T::zero()));
        }
        let mut hi = T::one();
        while gap(hi) > T::zero() {
            hi = hi * T::two();
            if hi > T::lit(1e9) {
                return Ok(Beta::Infinite);
            }
        }
        let lo = if hi > T::one() { hi * T::half() } else { T::zero() };
        let root = brent(gap, lo, hi, T::lit(1e-10)).ok_or(Error::NoTransition)?;
        Ok(Beta::Finite(root))
    }
}

/// |s − s_QPT| below which the critical β is reported as infinite.
pub const QPT_MATCH: f64 = 1e-9;

fn slice<T: Real>(spec: &PotentialSpec<T>, s: T, k: T, n_e: usize) -> Option<Slice<T>> {
    let land = landscape_unchecked(spec, k, s);
    let top = land.barrier_top?;
    let right = land.right_min?;
    let left = land.left_min;
    let floor = left.u.max(right.u);
    let mut grid = Vec::with_capacity(n_e);
    if floor < top.u {
        for j in 0..n_e {
            let x = T::from_usize_lossy(j) / T::from_usize_lossy(n_e);
            let e = floor + (top.u - floor) * x * x;
            if let Ok(a) = action_in(spec, &land, e) {
                if let Some(sigma) = a.sigma() {
                    grid.push((e, sigma));
                }
            }
        }
    }
    Some(Slice {
        k,
        entropy: binary_entropy(k),
        floor,
        top: top.u,
        top_q: top.q,
        constrained_floor: right.u > left.u,
        land,
        grid,
    })
}

/// Best energy in one sector: (value, E, tunneling?, on the constrained floor?).
fn optimize_energy<T: Real>(spec: &PotentialSpec<T>, sl: &Slice<T>, beta: T, f_left: T, refine: bool) -> (T, T, bool, bool) {
    let shift = -sl.entropy - f_left;
    let classical = beta * sl.top + shift;
    let phi = |e: T| match action_in(spec, &sl.land, e) {
        Ok(a) => a.sigma().map_or(T::infinity(), |s| s + beta * e + shift),
        Err(_) => T::infinity(),
    };
    let mut best = (classical, sl.top, false, false);
    let Some((j, &(e_j, s_j))) = sl
        .grid
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1 .1 + beta * a.1 .0)
                .partial_cmp(&(b.1 .1 + beta * b.1 .0))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    else {
        return best;
    };
    let grid_value = s_j + beta * e_j + shift;
    if grid_value < best.0 {
        best = (grid_value, e_j, true, j == 0 && sl.constrained_floor);
    }
    let lo = sl.grid[j.saturating_sub(1)].0;
    let hi = if j + 1 < sl.grid.len() { sl.grid[j + 1].0 } else { sl.top };
    let rel = if refine { T::lit(1e-12) } else { T::lit(1e-7) };
    let (e, v) = golden_min(phi, lo, hi, (hi - lo) * rel);
    if v < best.0 {
        best = (v, e, true, false);
    }
    if !refine {
        return best;
    }
    // Stationarity T(E) = β refines the interior optimum.
    let residual = |e: T| period_in(spec, &sl.land, e).map_or(T::nan(), |t| t - beta);
    let (ra, rb) = (residual(lo), residual(hi));
    if ra > T::zero() && rb < T::zero() {
        if let Some(root) = bisect(residual, lo, hi, T::lit(1e-15)) {
            let v = phi(root);
            if v <= best.0 {
                best = (v, root, true, false);
            }
        }
    }
    if best.2 && best.1 >= sl.top {
        best.2 = false;
    }
    if best.2 && best.1 <= sl.floor && sl.constrained_floor {
        best.3 = true;
    }
    best
}

/// Well free energy at a single annealing point.
pub fn well_free_energy<T: Real>(spec: &PotentialSpec<T>, point: &AnnealPoint<T>, well: Well) -> Result<FreeEnergyWell<T>> {
    let res = Resolution { k_points: 8, e_points: 8, ..Resolution::default() };
    Rates::new(spec, point.s, res)?.well_free_energy(point.beta, well)
}

pub fn optimal_quantum_action<T: Real>(spec: &PotentialSpec<T>, point: &AnnealPoint<T>, res: Resolution) -> Result<RateResult<T>> {
    if point.beta.is_infinite() {
        return zero_temperature_action(spec, point.s);
    }
    Rates::new(spec, point.s, res)?.optimal_quantum_action(point.beta)
}

/// σ_WKB(0, E_L(0)): tunneling out of the metastable well bottom at zero temperature.
pub fn zero_temperature_action<T: Real>(spec: &PotentialSpec<T>, s: T) -> Result<RateResult<T>> {
    if !(s >= T::zero() && s < T::one()) {
        return Err(crate::error::domain("s", s, "[0, 1) for tunneling"));
    }
    let land = landscape_unchecked(spec, T::zero(), s);
    let right = land.right_min.ok_or(Error::MissingWell(Well::Right, 0.0, s.to_f64_lossy()))?;
    if right.u > land.left_min.u {
        return Err(Error::NotMetastable(s.to_f64_lossy()));
    }
    let energy = land.left_min.u;
    let sigma = action_in(spec, &land, energy)?.sigma().unwrap_or(T::infinity());
    Ok(RateResult {
        sigma,
        mechanism: Mechanism::QuantumTunneling,
        optimizer: Optimizer::Tunneling { k: T::zero(), energy },
        constrained: false,
    })
}

pub fn classical_escape_action<T: Real>(spec: &PotentialSpec<T>, point: &AnnealPoint<T>, res: Resolution) -> Result<RateResult<T>> {
    let res = Resolution { e_points: 8, ..res };
    Rates::new(spec, point.s, res)?.classical_escape_action(point.beta)
}

/// Zero-temperature transition point: both well bottoms at k = 0 are degenerate.
pub fn qpt_point<T: Real>(spec: &PotentialSpec<T>) -> Result<T> {
    spec.validate()?;
    if spec.is_degenerate() {
        return Err(Error::NoTransition);
    }
    qpt_unchecked(spec)
}

pub(crate) fn qpt_unchecked<T: Real>(spec: &PotentialSpec<T>) -> Result<T> {
    let right_below = |s: T| {
        let land = landscape_unchecked(spec, T::zero(), s);
        match land.right_min {
            Some(r) => r.u < land.left_min.u,
            None => false,
        }
    };
    if !right_below(T::one()) {
        return Err(Error::NoTransition);
    }
    let s = bisect_predicate(|s| !right_below(s), T::zero(), T::one(), T::lit(1e-12));
    Ok(s)
}

/// Critical inverse temperature β_PT(s); infinite at s_QPT.
pub fn critical_line<T: Real>(spec: &PotentialSpec<T>, s: T, res: Resolution) -> Result<Beta<T>> {
    let s_qpt = qpt_point(spec)?;
    if s < s_qpt - T::lit(QPT_MATCH) {
        return Err(Error::BelowTransition { s: s.to_f64_lossy(), s_qpt: s_qpt.to_f64_lossy() });
    }
    let res = Resolution { k_points: 8, e_points: 8, ..res };
    Rates::new(spec, s, res)?.critical_beta(s_qpt)
}
