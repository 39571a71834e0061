//! Finite-N oracle: permutation-symmetric spin sectors, their spectra, tunneling
//! splittings and thermal well occupations.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::extended::DoubleDouble;
use crate::model::{landscape, AnnealPoint, PotentialSpec, Well};
use crate::roots::brent;
use crate::tridiag;
use crate::wkb::barrier_action;
use crate::Real;

/// Largest N for which degeneracies are kept as exact integers.
pub const EXACT_DEGENERACY_MAX_N: usize = 60;
/// Minimum R² for ln Δ(N) to count as exponential.
pub const EXPONENTIAL_R2: f64 = 0.99;
/// Half-width of the band around the barrier top where well assignment is flagged.
pub const AMBIGUOUS_BAND: f64 = 0.01;

/// Number of spin-S = N/2 − K multiplets in the N-spin Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Degeneracy {
    Exact(u128),
    /// Natural logarithm, used beyond `EXACT_DEGENERACY_MAX_N`.
    Log(f64),
}

impl Degeneracy {
    pub fn ln(&self) -> f64 {
        match *self {
            Degeneracy::Exact(d) => (d as f64).ln(),
            Degeneracy::Log(l) => l,
        }
    }
}

/// ln C(n, k).
fn ln_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (1..=k as u128).fold(1u128, |acc, i| acc * (n as u128 - k as u128 + i) / i)
}

/// C(N, K) − C(N, K − 1).
pub fn degeneracy(n: usize, k: usize) -> Result<Degeneracy> {
    check_sector(n, k)?;
    if n <= EXACT_DEGENERACY_MAX_N {
        let lower = if k == 0 { 0 } else { binomial(n, k - 1) };
        return Ok(Degeneracy::Exact(binomial(n, k) - lower));
    }
    // C(N, K − 1)/C(N, K) = K/(N − K + 1).
    let ratio = k as f64 / (n - k + 1) as f64;
    Ok(Degeneracy::Log(ln_binomial(n, k) + (-ratio).ln_1p()))
}

/// Σ_K degeneracy·(2S + 1): exactly 2^N up to `EXACT_DEGENERACY_MAX_N`, otherwise its log.
pub fn state_count(n: usize) -> Degeneracy {
    let sectors = 0..=n / 2;
    if n <= EXACT_DEGENERACY_MAX_N {
        return Degeneracy::Exact(
            sectors
                .map(|k| match degeneracy(n, k) {
                    Ok(Degeneracy::Exact(d)) => d * (n - 2 * k + 1) as u128,
                    _ => unreachable!("exact below the threshold"),
                })
                .sum(),
        );
    }
    let logs: Vec<f64> = sectors
        .map(|k| degeneracy(n, k).map(|d| d.ln()).unwrap_or(f64::NEG_INFINITY) + ((n - 2 * k + 1) as f64).ln())
        .collect();
    Degeneracy::Log(log_sum_exp(&logs))
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn check_sector(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(domain("N", 0.0, "N ≥ 1"));
    }
    if k > n / 2 {
        return Err(domain("K", k as f64, "0 ≤ K ≤ ⌊N/2⌋"));
    }
    Ok(())
}

/// Hamiltonian block of total spin S = N/2 − K in the S^z basis, M = −S..S.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMatrix<T> {
    pub n: usize,
    pub k: usize,
    /// s·N·f(2M/N).
    pub diagonal: Vec<T>,
    /// −(1−s)·½·√(S(S+1) − M(M+1)).
    pub offdiagonal: Vec<T>,
    pub degeneracy: Degeneracy,
}

impl<T: Real> SectorMatrix<T> {
    /// Total spin S.
    pub fn spin(&self) -> T {
        T::from_usize_lossy(self.n - 2 * self.k) * T::half()
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Magnetization q = 2M/N of basis state `i`.
    pub fn q(&self, i: usize) -> T {
        let two_m = 2 * i as i64 - (self.n - 2 * self.k) as i64;
        T::lit(two_m as f64) / T::from_usize_lossy(self.n)
    }

    /// ⟨q⟩ in a normalized state.
    pub fn expect_q(&self, psi: &[T]) -> T {
        psi.iter().enumerate().fold(T::zero(), |acc, (i, &a)| acc + a * a * self.q(i))
    }
}

pub fn build_sector<T: Real>(n: usize, k: usize, spec: &PotentialSpec<T>, s: T) -> Result<SectorMatrix<T>> {
    check_sector(n, k)?;
    spec.validate()?;
    if !(s >= T::zero() && s <= T::one()) {
        return Err(domain("s", s, "[0, 1]"));
    }
    let two_s = n - 2 * k;
    let nn = T::from_usize_lossy(n);
    let half = T::half();
    let m = SectorMatrix {
        n,
        k,
        diagonal: Vec::new(),
        offdiagonal: Vec::new(),
        degeneracy: degeneracy(n, k)?,
    };
    let diagonal = (0..=two_s).map(|i| s * nn * spec.f(m.q(i))).collect();
    // With S − M = j and S + M + 1 = 2S − j + 1 for the i-th row, j = 2S − i.
    let offdiagonal = (0..two_s)
        .map(|i| {
            let (a, b) = (T::from_usize_lossy(two_s - i), T::from_usize_lossy(i + 1));
            -(T::one() - s) * half * (a * b).sqrt()
        })
        .collect();
    Ok(SectorMatrix { diagonal, offdiagonal, ..m })
}

/// All eigenvalues of a sector, ascending.
pub fn sector_spectrum<T: Real>(m: &SectorMatrix<T>) -> Result<Vec<T>> {
    tridiag::eigenvalues(&m.diagonal, &m.offdiagonal)
}

/// ⟨ψ|B^†|ψ_x⟩ between the fully x-polarized initial state and a sector state:
/// [2^{−N}·C(N,K)]^{1/2}.
pub fn initial_final_overlap(n: usize, k: usize) -> Result<f64> {
    check_sector(n, k)?;
    Ok((0.5 * (ln_binomial(n, k) - n as f64 * std::f64::consts::LN_2)).exp())
}

/// Tunneling splitting of one system size at its avoided crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingPoint {
    pub n: usize,
    /// Annealing parameter of the avoided crossing.
    pub s_cross: f64,
    /// Gap between the two lowest K = 0 levels there.
    pub gap: f64,
    /// E_0(N)/N − min_q U(0, q, s) at the reference s.
    pub ground_offset: f64,
}

/// Least-squares line y = a + b·x with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    LinearFit { intercept, slope, r_squared }
}

/// Finite-N splittings against the WKB exponent, and the ground energy against the
/// effective potential.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub s: f64,
    pub points: Vec<SplittingPoint>,
    /// ln Δ against N.
    pub gap_fit: LinearFit,
    /// −2·d(ln Δ)/dN.
    pub fitted_sigma: f64,
    /// σ_WKB(0, E_bottom) at `s`; `None` without a barrier.
    pub wkb_sigma: Option<f64>,
    pub relative_deviation: Option<f64>,
    /// A barrier separates the wells and ln Δ decays linearly in N with R² ≥ `EXPONENTIAL_R2`.
    pub exponential: bool,
    /// N·offset against 1/N: the intercept is the C of offset ≈ C/N.
    pub offset_fit: LinearFit,
    /// The ground-energy offset shrinks monotonically with N.
    pub offset_decreasing: bool,
}

/// Locates each N's avoided crossing near `s`, takes the K = 0 splitting there in
/// double-double precision and fits ln Δ(N).
pub fn wkb_scaling_check(spec: &PotentialSpec<f64>, s: f64, n_list: &[usize]) -> Result<ScalingReport> {
    spec.validate()?;
    if n_list.len() < 4 || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] < 2 {
        return Err(Error::Oracle("N list must hold at least 4 ascending sizes ≥ 2".into()));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(domain("s", s, "(0, 1)"));
    }
    let land = landscape(spec, 0.0, s)?;
    let min_u = land.right_min.map_or(land.left_min.u, |r| r.u.min(land.left_min.u));
    // At the transition both bottoms agree; the higher one keeps E inside both wells.
    let wkb_sigma = match (land.right_min, land.barrier_top) {
        (Some(right), Some(_)) => {
            let energy = right.u.max(land.left_min.u);
            barrier_action(spec, 0.0, energy, &AnnealPoint::zero_temperature(s)?)?.sigma()
        }
        _ => None,
    };
    let dd_spec: PotentialSpec<DoubleDouble> = spec.cast();
    let points = n_list
        .par_iter()
        .map(|&n| {
            let e0 = ground_energy(n, spec, s)?;
            let ground_offset = (e0 / n as f64 - min_u).abs();
            let (s_cross, gap) = match land.barrier_top {
                Some(top) if land.has_two_wells() => crossing_splitting(n, &dd_spec, s, top.q)?,
                _ => (s, lowest_gap(n, &dd_spec, DoubleDouble::from(s))?.into()),
            };
            Ok(SplittingPoint { n, s_cross, gap, ground_offset })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(p) = points.iter().find(|p| !(p.gap > 0.0)) {
        return Err(Error::Oracle(format!("splitting unresolved at N = {}", p.n)));
    }
    let ns: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let ln_gap: Vec<f64> = points.iter().map(|p| p.gap.ln()).collect();
    let gap_fit = linear_fit(&ns, &ln_gap);
    let fitted_sigma = -2.0 * gap_fit.slope;
    let relative_deviation = wkb_sigma.map(|w| (fitted_sigma - w).abs() / w);
    let inv_n: Vec<f64> = ns.iter().map(|n| 1.0 / n).collect();
    let scaled: Vec<f64> = points.iter().map(|p| p.ground_offset * p.n as f64).collect();
    let offset_fit = linear_fit(&inv_n, &scaled);
    let offset_decreasing = points.windows(2).all(|w| w[1].ground_offset < w[0].ground_offset);
    Ok(ScalingReport {
        s,
        exponential: gap_fit.r_squared >= EXPONENTIAL_R2 && gap_fit.slope < 0.0 && wkb_sigma.is_some(),
        points,
        gap_fit,
        fitted_sigma,
        wkb_sigma,
        relative_deviation,
        offset_fit,
        offset_decreasing,
    })
}

fn ground_energy(n: usize, spec: &PotentialSpec<f64>, s: f64) -> Result<f64> {
    let m = build_sector(n, 0, spec, s)?;
    tridiag::eigenvalue_bisect(&m.diagonal, &m.offdiagonal, 0)
}

fn lowest_gap(n: usize, spec: &PotentialSpec<DoubleDouble>, s: DoubleDouble) -> Result<DoubleDouble> {
    let m = build_sector(n, 0, spec, s)?;
    let l0 = tridiag::eigenvalue_bisect(&m.diagonal, &m.offdiagonal, 0)?;
    let l1 = tridiag::eigenvalue_bisect(&m.diagonal, &m.offdiagonal, 1)?;
    Ok(l1 - l0)
}

fn ground_q(n: usize, spec: &PotentialSpec<DoubleDouble>, s: DoubleDouble) -> Result<DoubleDouble> {
    let m = build_sector(n, 0, spec, s)?;
    let l0 = tridiag::eigenvalue_bisect(&m.diagonal, &m.offdiagonal, 0)?;
    Ok(m.expect_q(&tridiag::inverse_iteration(&m.diagonal, &m.offdiagonal, l0)))
}

/// Bisects s on the ground state moving from the left to the right well, then
/// returns the crossing point and the K = 0 gap there.
fn crossing_splitting(n: usize, spec: &PotentialSpec<DoubleDouble>, s: f64, q_top: f64) -> Result<(f64, f64)> {
    let top = DoubleDouble::from(q_top);
    let mut width = 0.02;
    let (mut lo, mut hi, q_lo, q_hi) = loop {
        let lo = DoubleDouble::from((s - width).max(1e-9));
        let hi = DoubleDouble::from((s + width).min(1.0 - 1e-9));
        let (q_lo, q_hi) = (ground_q(n, spec, lo)?, ground_q(n, spec, hi)?);
        if q_lo < top && q_hi > top {
            break (lo, hi, q_lo, q_hi);
        }
        width *= 2.0;
        if width > 1.0 {
            return Err(Error::Oracle(format!("no avoided crossing near s = {s} at N = {n}")));
        }
    };
    // Equal weight in both wells marks the centre of the avoided crossing.
    let threshold = (q_lo + q_hi) * DoubleDouble::from(0.5);
    for _ in 0..160 {
        let mid = (lo + hi) * DoubleDouble::from(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if ground_q(n, spec, mid)? > threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mid = (lo + hi) * DoubleDouble::from(0.5);
    Ok((mid.into(), lowest_gap(n, spec, mid)?.into()))
}

/// One eigenstate of the full Hamiltonian together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub ln_degeneracy: f64,
    pub q: f64,
    pub well: Well,
}

/// Relative thermal weights of the two wells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupations {
    pub p_left: f64,
    pub p_right: f64,
    /// Levels within `AMBIGUOUS_BAND` of the barrier top, assigned by the sign of ⟨q⟩ − q_top.
    pub ambiguous: usize,
}

/// Complete finite-N spectrum with every level assigned to a well by ⟨q⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSpectrum {
    pub n: usize,
    pub s: f64,
    /// Barrier top of U(0, ·, s), the well-assignment threshold.
    pub q_top: f64,
    pub levels: Vec<Level>,
}

/// Upper limit on N for the full spectrum.
pub const THERMAL_MAX_N: usize = 2000;

impl ThermalSpectrum {
    pub fn new(spec: &PotentialSpec<f64>, s: f64, n: usize) -> Result<Self> {
        if n == 0 || n > THERMAL_MAX_N {
            return Err(domain("N", n as f64, "1 ≤ N ≤ 2000"));
        }
        let land = landscape(spec, 0.0, s)?;
        let q_top = match (land.barrier_top, land.has_two_wells()) {
            (Some(top), true) => top.q,
            _ => return Err(Error::MissingWell(Well::Right, 0.0, s)),
        };
        let sectors = (0..=n / 2)
            .into_par_iter()
            .map(|k| {
                let m = build_sector(n, k, spec, s)?;
                let ln_degeneracy = m.degeneracy.ln();
                Ok(sector_spectrum(&m)?
                    .into_iter()
                    .map(|energy| {
                        let q = m.expect_q(&tridiag::inverse_iteration(&m.diagonal, &m.offdiagonal, energy));
                        let well = if q > q_top { Well::Right } else { Well::Left };
                        Level { energy, ln_degeneracy, q, well }
                    })
                    .collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ThermalSpectrum { n, s, q_top, levels: sectors.into_iter().flatten().collect() })
    }

    /// Adds a constant to every energy.
    pub fn shift(&mut self, delta: f64) {
        self.levels.iter_mut().for_each(|l| l.energy += delta);
    }

    fn ln_weights(&self, beta: f64, well: Well) -> f64 {
        let w: Vec<f64> = self
            .levels
            .iter()
            .filter(|l| l.well == well)
            .map(|l| l.ln_degeneracy - beta * l.energy)
            .collect();
        log_sum_exp(&w)
    }

    /// ln P_L − ln P_R.
    pub fn ln_ratio(&self, beta: f64) -> f64 {
        self.ln_weights(beta, Well::Left) - self.ln_weights(beta, Well::Right)
    }

    pub fn occupations(&self, beta: f64) -> Result<Occupations> {
        if !(beta >= 0.0) {
            return Err(domain("beta", beta, "[0, ∞)"));
        }
        let (l, r) = (self.ln_weights(beta, Well::Left), self.ln_weights(beta, Well::Right));
        let z = log_sum_exp(&[l, r]);
        let ambiguous = self.levels.iter().filter(|x| (x.q - self.q_top).abs() < AMBIGUOUS_BAND).count();
        Ok(Occupations { p_left: (l - z).exp(), p_right: (r - z).exp(), ambiguous })
    }

    /// β in [lo, hi] at which both wells are equally occupied.
    pub fn crossing_beta(&self, lo: f64, hi: f64) -> Option<f64> {
        brent(|b: f64| self.ln_ratio(b), lo, hi, 1e-10)
    }
}

/// Full-spectrum occupations (P_L, P_R) at inverse temperature β.
pub fn thermal_occupations(spec: &PotentialSpec<f64>, s: f64, beta: f64, n: usize) -> Result<Occupations> {
    ThermalSpectrum::new(spec, s, n)?.occupations(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::qpt_point;
    use nalgebra::DMatrix;

    fn spec() -> PotentialSpec<f64> {
        PotentialSpec::cubic(0.0, 0.533).unwrap()
    }

    #[test]
    fn two_spins_polarized_along_x() {
        let m = build_sector(2, 0, &spec(), 0.0).unwrap();
        assert_eq!(m.dim(), 3);
        let e = sector_spectrum(&m).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn pure_driver_spectrum_is_equally_spaced() {
        for (n, k) in [(10, 0), (11, 2), (30, 7)] {
            let m = build_sector(n, k, &spec(), 0.0).unwrap();
            let e = sector_spectrum(&m).unwrap();
            let spin = m.spin();
            for (i, v) in e.iter().enumerate() {
                assert!((v - (i as f64 - spin)).abs() < 1e-12, "{n} {k} {i}: {v}");
            }
        }
    }

    #[test]
    fn classical_limit_is_diagonal() {
        let m = build_sector(12, 3, &spec(), 1.0).unwrap();
        let mut d = m.diagonal.clone();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sector_spectrum(&m).unwrap(), d);
        for (i, v) in m.diagonal.iter().enumerate() {
            assert!((v - 12.0 * spec().f(m.q(i))).abs() < 1e-13);
        }
    }

    #[test]
    fn degeneracies_and_completeness() {
        assert_eq!(degeneracy(4, 1).unwrap(), Degeneracy::Exact(3));
        assert_eq!(degeneracy(4, 2).unwrap(), Degeneracy::Exact(2));
        assert_eq!(state_count(4), Degeneracy::Exact(16));
        for n in 1..=EXACT_DEGENERACY_MAX_N {
            assert_eq!(state_count(n), Degeneracy::Exact(1u128 << n), "N = {n}");
        }
        for n in [61, 100, 401, 2000] {
            let ln = state_count(n).ln();
            assert!((ln - n as f64 * std::f64::consts::LN_2).abs() < 1e-9 * n as f64, "N = {n}");
        }
        // The log branch agrees with exact integers where both apply.
        let exact = degeneracy(60, 17).unwrap().ln();
        let log = ln_binomial(60, 17) + (-(17.0 / 44.0f64)).ln_1p();
        assert!((exact - log).abs() < 1e-12);
        assert!(degeneracy(4, 3).is_err());
    }

    #[test]
    fn dense_oracle_agrees() {
        let m = build_sector(8, 0, &spec(), 0.85).unwrap();
        let n = m.dim();
        let dense = DMatrix::from_fn(n, n, |i, j| match i as i64 - j as i64 {
            0 => m.diagonal[i],
            1 => m.offdiagonal[j],
            -1 => m.offdiagonal[i],
            _ => 0.0,
        });
        let mut want: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().cloned().collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got = sector_spectrum(&m).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn ground_sector_has_no_exact_crossings() {
        for i in 1..40 {
            let s = i as f64 / 40.0;
            let m = build_sector(24, 0, &spec(), s).unwrap();
            let e = sector_spectrum(&m).unwrap();
            let min_gap = e.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            assert!(min_gap > 0.0, "s = {s}");
        }
    }

    #[test]
    fn overlaps() {
        assert!((initial_final_overlap(10, 0).unwrap() - 2f64.powi(-5)).abs() < 1e-16);
        assert!((initial_final_overlap(2, 1).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((initial_final_overlap(4, 2).unwrap() - (6.0f64 / 16.0).sqrt()).abs() < 1e-15);
        assert!(initial_final_overlap(4, 3).is_err());
    }

    #[test]
    fn infinite_temperature_counts_states() {
        let th = ThermalSpectrum::new(&spec(), 0.85, 40).unwrap();
        let count = |w: Well| -> f64 {
            th.levels.iter().filter(|l| l.well == w).map(|l| l.ln_degeneracy.exp()).sum()
        };
        let occ = th.occupations(0.0).unwrap();
        let ratio = occ.p_left / occ.p_right;
        let want = count(Well::Left) / count(Well::Right);
        assert!((ratio / want - 1.0).abs() < 1e-10, "{ratio} vs {want}");
        assert!((count(Well::Left) + count(Well::Right) - 2f64.powi(40)).abs() < 1e-3 * 2f64.powi(40));
    }

    #[test]
    fn cold_limit_and_shift_invariance() {
        let mut th = ThermalSpectrum::new(&spec(), 0.85, 60).unwrap();
        assert!(th.occupations(200.0).unwrap().p_right > 1.0 - 1e-12);
        let before = th.occupations(4.0).unwrap();
        th.shift(-123.25);
        let after = th.occupations(4.0).unwrap();
        assert!((before.p_left - after.p_left).abs() < 1e-12);
        assert!(th.occupations(-1.0).is_err());
    }

    #[test]
    fn single_well_has_no_thermal_split() {
        let err = ThermalSpectrum::new(&spec(), 0.3, 20).unwrap_err();
        assert!(matches!(err, Error::MissingWell(Well::Right, _, _)));
    }

    #[test]
    fn splitting_decays_faster_for_taller_barriers() {
        let ns = [40, 60, 80, 100];
        let mut prev = 0.0;
        for q_max in [0.15, 0.2, 0.25] {
            let spec = PotentialSpec::cubic(0.0, q_max).unwrap();
            let report = wkb_scaling_check(&spec, qpt_point(&spec).unwrap(), &ns).unwrap();
            assert!(report.gap_fit.slope < 0.0);
            assert!(-report.gap_fit.slope > prev, "q_max = {q_max}");
            prev = -report.gap_fit.slope;
        }
    }

    #[test]
    fn single_well_fit_is_flagged() {
        let spec = PotentialSpec::cubic(0.0, 0.2).unwrap();
        let report = wkb_scaling_check(&spec, 0.2, &[40, 60, 80, 100]).unwrap();
        assert!(report.wkb_sigma.is_none());
        assert!(!report.exponential);
        assert!(wkb_scaling_check(&spec, 0.2, &[40, 60, 80]).is_err());
        assert!(wkb_scaling_check(&spec, 0.2, &[40, 80, 60, 100]).is_err());
    }
}
