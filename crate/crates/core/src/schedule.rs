//! Computation-time exponents: quantum annealing frozen at s_F, simulated annealing,
//! and the sweep over cubic potentials comparing the two.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{binary_entropy, entropy_classical, Beta, PotentialSpec};
use crate::rates::{qpt_point, zero_temperature_action, Mechanism, Rates, Resolution};
use crate::roots::golden_min;
use crate::Real;

/// Tolerance within which two exponents count as equal, and a cell as degenerate.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    QuantumAnnealing,
    SimulatedAnnealing,
    /// Exhaustive search: over (q_min, 1) for QA, over all 2^N states for SA.
    Exhaustive,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::QuantumAnnealing => "QA",
            Algorithm::SimulatedAnnealing => "SA",
            Algorithm::Exhaustive => "exhaustive",
        })
    }
}

/// ξ = (1/N) ln τ with the operating point that attains it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleResult<T> {
    pub xi: T,
    /// Freezing point; `None` for simulated annealing and exhaustive search.
    pub s_f: Option<T>,
    pub beta: Beta<T>,
    pub algorithm: Algorithm,
    /// The optimum sits at the quantum transition point.
    pub at_qpt: bool,
    /// The uncapped exponent diverges (degenerate ground state).
    pub divergent: bool,
    /// The exhaustive-search bound replaced a larger exponent.
    pub capped: bool,
}

/// ξ = S_opt(β, s_F) + max(0, F_R − F_L) for a schedule frozen at s_F.
pub fn qa_exponent<T: Real>(spec: &PotentialSpec<T>, beta: Beta<T>, s_f: T, res: Resolution) -> Result<T> {
    let rates = Rates::new(spec, s_f, res)?;
    qa_exponent_with(&rates, beta)
}

pub fn qa_exponent_with<T: Real>(rates: &Rates<T>, beta: Beta<T>) -> Result<T> {
    let s_opt = rates.optimal_quantum_action(beta)?.sigma;
    match beta {
        Beta::Infinite => Ok(s_opt),
        Beta::Finite(b) => Ok(s_opt + rates.free_energy_gap(b)?.max(T::zero())),
    }
}

fn cubic_q_min<T: Real>(spec: &PotentialSpec<T>) -> Result<T> {
    match *spec {
        PotentialSpec::Cubic { q_min, .. } => Ok(q_min),
        PotentialSpec::Monomial { .. } => {
            Err(Error::InvalidPotential("schedule exponents are defined for the cubic family".into()))
        }
    }
}

/// Best QA schedule over freezing points s_F ∈ [s_QPT, 1), with β at one of the edges
/// {β_PT(s_F), ∞}, capped by local exhaustive search over (q_min, 1).
pub fn optimize_qa<T: Real>(spec: &PotentialSpec<T>, res: Resolution) -> Result<ScheduleResult<T>> {
    spec.validate()?;
    let q_min = cubic_q_min(spec)?;
    let cap = entropy_classical(q_min)?;
    let exhaustive = |divergent: bool| ScheduleResult {
        xi: cap,
        s_f: None,
        beta: Beta::Finite(T::zero()),
        algorithm: Algorithm::Exhaustive,
        at_qpt: false,
        divergent,
        capped: true,
    };
    let s_qpt = match qpt_point(spec) {
        Ok(s) => s,
        Err(Error::NoTransition) => return Ok(exhaustive(true)),
        Err(e) => return Err(e),
    };
    let n = res.s();
    let s_at = |x: T| s_qpt + (T::one() - s_qpt) * x;
    let sigma_inf = |s: T| zero_temperature_action(spec, s).map_or(T::infinity(), |r| r.sigma);

    // Candidates: (ξ, s_F, β).
    let grid: Vec<(T, T, Beta<T>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = T::from_usize_lossy(i) / T::from_usize_lossy(n);
            let s = s_at(x);
            let zero_t = (sigma_inf(s), s, Beta::Infinite);
            if i == 0 {
                return vec![zero_t];
            }
            let thermal = Rates::new(spec, s, res).ok().and_then(|r| match r.critical_beta(s_qpt) {
                Ok(Beta::Finite(b)) => r
                    .optimal_quantum_action(Beta::Finite(b))
                    .ok()
                    .map(|q| (q.sigma, s, Beta::Finite(b))),
                _ => None,
            });
            let mut v = vec![zero_t];
            v.extend(thermal);
            v
        })
        .flatten()
        .collect();

    let pick = |a: &&(T, T, Beta<T>), b: &&(T, T, Beta<T>)| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal);
    let mut best = *grid.iter().min_by(pick).expect("non-empty grid");

    // Refine the zero-temperature edge between neighbouring grid points.
    let zero_t: Vec<&(T, T, Beta<T>)> = grid.iter().filter(|c| c.2.is_infinite()).collect();
    if let Some((i, _)) = zero_t.iter().enumerate().min_by(|a, b| pick(a.1, b.1)) {
        let lo = zero_t[i.saturating_sub(1)].1;
        let hi = if i + 1 < zero_t.len() { zero_t[i + 1].1 } else { s_at(T::from_usize_lossy(n) / T::from_usize_lossy(n + 1)) };
        if hi > lo {
            let (s, v) = golden_min(sigma_inf, lo, hi, T::lit(1e-10));
            if v < best.0 {
                best = (v, s, Beta::Infinite);
            }
        }
    }
    let (xi, s_f, beta) = best;
    if !(xi < cap) {
        return Ok(exhaustive(false));
    }
    Ok(ScheduleResult {
        xi,
        s_f: Some(s_f),
        beta,
        algorithm: Algorithm::QuantumAnnealing,
        at_qpt: (s_f - s_qpt).abs() <= T::lit(1e-5) * (T::one() - s_qpt),
        divergent: false,
        capped: false,
    })
}

/// Optimal simulated annealing: the Kramers exponent at the classical transition,
/// or exhaustive search over all 2^N states if that is cheaper.
pub fn sa_exponent<T: Real>(spec: &PotentialSpec<T>) -> Result<ScheduleResult<T>> {
    spec.validate()?;
    let q_min = cubic_q_min(spec)?;
    let q_max = match *spec {
        PotentialSpec::Cubic { q_max, .. } => q_max,
        PotentialSpec::Monomial { .. } => unreachable!("checked above"),
    };
    let ln2 = T::LN_2();
    let exhaustive = |divergent: bool| ScheduleResult {
        xi: ln2,
        s_f: None,
        beta: Beta::Finite(T::zero()),
        algorithm: Algorithm::Exhaustive,
        at_qpt: false,
        divergent,
        capped: true,
    };
    let depth = spec.f(q_min) - spec.f(T::one());
    if spec.is_degenerate() || !(depth > T::zero()) {
        return Ok(exhaustive(true));
    }
    let q_lo = entropy_classical(q_min)?;
    let q_hi = entropy_classical(q_max)?;
    let beta_pt = q_lo / depth;
    let xi = (spec.f(q_max) - spec.f(q_min)) / depth * q_lo + q_lo - q_hi;
    if !(xi < ln2) {
        return Ok(exhaustive(false));
    }
    Ok(ScheduleResult {
        xi,
        s_f: Some(T::one()),
        beta: Beta::Finite(beta_pt),
        algorithm: Algorithm::SimulatedAnnealing,
        at_qpt: false,
        divergent: false,
        capped: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    QuantumAnnealing,
    SimulatedAnnealing,
    Tie,
}

impl std::fmt::Display for Winner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Winner::QuantumAnnealing => "QA",
            Winner::SimulatedAnnealing => "SA",
            Winner::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus<T> {
    Computed { qa: ScheduleResult<T>, sa: ScheduleResult<T>, winner: Winner },
    /// Outside q_min < q_max < (2 + q_min)/3 or q_min ∉ [0, 1).
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell<T> {
    pub q_min: T,
    pub q_max: T,
    /// On the degenerate boundary q_max = (2 + q_min)/3 within `TIE_TOL`.
    pub degenerate: bool,
    pub status: CellStatus<T>,
}

/// Both exponents on every (q_min, q_max) pair, row-major in `q_min`.
///
/// Cells are evaluated in parallel; the output order is the input order.
pub fn comparison_sweep<T: Real>(q_min_grid: &[T], q_max_grid: &[T], res: Resolution) -> Vec<SweepCell<T>> {
    let pairs: Vec<(T, T)> = q_min_grid
        .iter()
        .flat_map(|&a| q_max_grid.iter().map(move |&b| (a, b)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(q_min, q_max)| sweep_cell(q_min, q_max, res))
        .collect()
}

pub fn sweep_cell<T: Real>(q_min: T, q_max: T, res: Resolution) -> SweepCell<T> {
    let bound = (T::two() + q_min) / T::lit(3.0);
    let degenerate = (q_max - bound).abs() <= T::lit(TIE_TOL);
    let infeasible = SweepCell { q_min, q_max, degenerate: false, status: CellStatus::Infeasible };
    let spec = match PotentialSpec::cubic(q_min, if degenerate { bound } else { q_max }) {
        Ok(s) => s,
        Err(_) => return infeasible,
    };
    let (qa, sa) = match (optimize_qa(&spec, res), sa_exponent(&spec)) {
        (Ok(qa), Ok(sa)) => (qa, sa),
        _ => return infeasible,
    };
    let winner = if (qa.xi - sa.xi).abs() <= T::lit(TIE_TOL) {
        Winner::Tie
    } else if qa.xi < sa.xi {
        Winner::QuantumAnnealing
    } else {
        Winner::SimulatedAnnealing
    };
    SweepCell { q_min, q_max, degenerate, status: CellStatus::Computed { qa, sa, winner } }
}

/// Entropy difference between the wells at β = 0: ln 2 − Q_{k*}.
pub fn high_temperature_gap<T: Real>(rates: &Rates<T>) -> Option<T> {
    rates.k_star().map(|ks| T::LN_2() - binary_entropy(ks))
}

/// Whether the QA optimum at (β, s_F) is reached by tunneling.
pub fn qa_mechanism<T: Real>(rates: &Rates<T>, beta: Beta<T>) -> Result<Mechanism> {
    Ok(rates.optimal_quantum_action(beta)?.mechanism)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{critical_line, qpt_point};

    fn quick() -> Resolution {
        Resolution { k_points: 64, e_points: 12, fe_k_points: 64, s_points: 12 }
    }

    #[test]
    fn sa_closed_form() {
        let spec = PotentialSpec::<f64>::cubic(0.88, 0.955).unwrap();
        let sa = sa_exponent(&spec).unwrap();
        let (f, q) = (|x: f64| spec.f(x), |x: f64| entropy_classical(x).unwrap());
        let expect = (f(0.955) - f(0.88)) / (f(0.88) - f(1.0)) * q(0.88) + q(0.88) - q(0.955);
        assert_eq!(sa.algorithm, Algorithm::SimulatedAnnealing);
        assert!((sa.xi - expect).abs() < 1e-15);
        assert!(sa.xi < std::f64::consts::LN_2);
    }

    #[test]
    fn sa_matches_classical_saddle_at_s_one() {
        let spec = PotentialSpec::<f64>::cubic(0.0, 0.533).unwrap();
        let sa = sa_exponent(&spec).unwrap();
        let beta = sa.beta.value().unwrap();
        let rates = Rates::new(&spec, 1.0, quick()).unwrap();
        let c = rates.classical_escape_action(Beta::Finite(beta)).unwrap();
        assert!((c.sigma - sa.xi).abs() < 1e-8, "{} vs {}", c.sigma, sa.xi);
    }

    #[test]
    fn sa_caps() {
        let tall = PotentialSpec::<f64>::cubic(0.0, 0.66).unwrap();
        let sa = sa_exponent(&tall).unwrap();
        assert_eq!(sa.xi, std::f64::consts::LN_2);
        assert!(sa.capped && !sa.divergent);
        let edge = PotentialSpec::<f64>::cubic(0.88, 2.88 / 3.0).unwrap();
        let sa = sa_exponent(&edge).unwrap();
        assert!(sa.divergent && sa.xi == std::f64::consts::LN_2);
        let mut prev = f64::INFINITY;
        for q_max in [0.95, 0.92, 0.9, 0.885, 0.881, 0.8801] {
            let xi = sa_exponent(&PotentialSpec::<f64>::cubic(0.88, q_max).unwrap()).unwrap().xi;
            assert!(xi < prev);
            prev = xi;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn qa_beats_sa_at_reference_cell() {
        let spec = PotentialSpec::<f64>::cubic(0.88, 0.955).unwrap();
        let qa = optimize_qa(&spec, quick()).unwrap();
        let sa = sa_exponent(&spec).unwrap();
        let cap = entropy_classical(0.88).unwrap();
        assert_eq!(qa.algorithm, Algorithm::QuantumAnnealing);
        assert!(qa.xi < sa.xi.min(cap), "qa={} sa={} cap={cap}", qa.xi, sa.xi);
    }

    #[test]
    fn qa_exponent_branches() {
        let spec = PotentialSpec::<f64>::cubic(0.0, 0.533).unwrap();
        let s = 0.85;
        let rates = Rates::new(&spec, s, quick()).unwrap();
        let beta_pt = rates.critical_beta(qpt_point(&spec).unwrap()).unwrap().value().unwrap();
        for beta in [beta_pt + 0.5, 10.0] {
            let xi = qa_exponent_with(&rates, Beta::Finite(beta)).unwrap();
            let s_opt = rates.optimal_quantum_action(Beta::Finite(beta)).unwrap().sigma;
            assert_eq!(xi, s_opt);
        }
        let below = qa_exponent_with(&rates, Beta::Finite(beta_pt - 1e-7)).unwrap();
        let above = qa_exponent_with(&rates, Beta::Finite(beta_pt + 1e-7)).unwrap();
        assert!((below - above).abs() < 1e-6, "{below} vs {above}");
        let gap0 = rates.free_energy_gap(0.0).unwrap();
        assert!((gap0 - high_temperature_gap(&rates).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn xi_nonincreasing_above_critical_line() {
        let spec = PotentialSpec::<f64>::cubic(0.0, 0.533).unwrap();
        let rates = Rates::new(&spec, 0.85, quick()).unwrap();
        let mut prev: Option<(f64, Mechanism)> = None;
        for beta in [16.0, 20.0, 25.0, 30.0, 40.0, 60.0] {
            let xi = qa_exponent_with(&rates, Beta::Finite(beta)).unwrap();
            let m = qa_mechanism(&rates, Beta::Finite(beta)).unwrap();
            if let Some((p, pm)) = prev {
                if pm == m {
                    assert!(xi <= p + 1e-9, "beta={beta}: {xi} > {p}");
                }
            }
            prev = Some((xi, m));
        }
    }

    #[test]
    fn barrierless_limit() {
        let mut prev = f64::INFINITY;
        for q_max in [0.3, 0.1, 0.03, 0.01] {
            let qa = optimize_qa(&PotentialSpec::<f64>::cubic(0.0, q_max).unwrap(), quick()).unwrap();
            assert!(qa.xi < prev);
            prev = qa.xi;
        }
        assert!(prev < 0.05, "{prev}");
    }

    #[test]
    fn degenerate_spec_is_capped() {
        let spec = PotentialSpec::<f64>::cubic(0.88, 2.88 / 3.0).unwrap();
        let qa = optimize_qa(&spec, quick()).unwrap();
        assert!(qa.divergent && qa.capped);
        assert_eq!(qa.xi, entropy_classical(0.88).unwrap());
        assert!(critical_line(&spec, 0.99, quick()).is_err());
    }

    #[test]
    fn sweep_marks_cells_and_keeps_order() {
        let q_min = [0.88, 0.9];
        let q_max = [0.5, 0.955, 0.96, 0.97];
        let cells = comparison_sweep(&q_min, &q_max, Resolution { s_points: 8, ..quick() });
        assert_eq!(cells.len(), 8);
        assert_eq!((cells[1].q_min, cells[1].q_max), (0.88, 0.955));
        assert!(matches!(cells[0].status, CellStatus::Infeasible));
        assert!(cells[2].degenerate);
        assert!(matches!(cells[3].status, CellStatus::Infeasible));
        assert!(matches!(cells[6].status, CellStatus::Computed { .. }));
        assert!(matches!(cells[7].status, CellStatus::Infeasible));
        match &cells[1].status {
            CellStatus::Computed { winner, qa, sa } => {
                assert_eq!(*winner, Winner::QuantumAnnealing);
                assert!(qa.xi >= 0.0 && sa.xi >= 0.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
