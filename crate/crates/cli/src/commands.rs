use pspin_core::exact::ThermalSpectrum;
use pspin_core::model::binary_entropy;
use pspin_core::schedule::TIE_TOL;
use pspin_core::{
    comparison_sweep, effective_potential, landscape, qpt_point, wkb_scaling_check, zero_temperature_action,
    Algorithm, Beta, CellStatus, Rates, Resolution, ScheduleResult, Well,
};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{Cell, Table};

/// Cell that every default compare grid contains.
pub const ANCHOR: (f64, f64) = (0.88, 0.955);
/// Pass thresholds of the oracle report.
pub const ORACLE_REL_TOL: f64 = 0.1;
pub const ORACLE_MIN_R2: f64 = 0.99;

/// Runs one command; `Err(OracleFailed)` comes back with the finished report.
pub fn run(cfg: &RunConfig) -> (Result<Table>, Option<CliError>) {
    match cfg.command {
        Command::Potential => (potential(cfg), None),
        Command::ActionVsBeta => (action_vs_beta(cfg), None),
        Command::Compare => (compare(cfg), None),
        Command::Oracle => match oracle(cfg) {
            Ok((table, failure)) => (Ok(table), failure.map(CliError::OracleFailed)),
            Err(e) => (Err(e), None),
        },
    }
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn transition(spec: &pspin_core::PotentialSpec) -> Result<Option<f64>> {
    match qpt_point(spec) {
        Ok(s) => Ok(Some(s)),
        Err(pspin_core::Error::NoTransition) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// U(k, q) for s ∈ {0, s_QPT, 1} and k ∈ {0, 0.05, …, 0.5} on a common q grid over [−1, 1].
///
/// Outside the band |q| ≤ 1 − 2k the potential is undefined and left empty, except at
/// s = 1 where the transverse term vanishes and U = f(q) for every k.
pub fn potential(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.cubic.spec()?;
    let s_qpt = transition(&spec)?;
    let mut t = Table::new(vec!["s", "k", "q", "in_band", "u"]);
    t.meta("s_qpt", s_qpt.map_or("none".to_string(), |s| s.to_string()));
    let s_values: Vec<f64> = [Some(0.0), s_qpt, Some(1.0)].into_iter().flatten().collect();
    let q_grid = uniform(-1.0, 1.0, cfg.grids.q);
    for &s in &s_values {
        for i in 0..=10 {
            let k = i as f64 / 20.0;
            let band = 1.0 - 2.0 * k;
            for &q in &q_grid {
                let in_band = q.abs() <= band;
                let u = if in_band {
                    Cell::num(effective_potential(&spec, k, q, s)?)
                } else if s == 1.0 {
                    Cell::num(spec.f(q))
                } else {
                    Cell::Empty
                };
                t.push(vec![Cell::num(s), Cell::num(k), Cell::num(q), Cell::text(in_band), u]);
            }
        }
    }
    Ok(t)
}

/// Optimal escape action on a uniform β grid over [0, beta] at fixed s, with the
/// classical branch, the zero-temperature plateau and the two bounding lines.
pub fn action_vs_beta(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg.cubic.spec()?;
    let s = cfg.s;
    let s_qpt = transition(&spec)?.ok_or_else(|| CliError::Infeasible("the potential has no quantum transition".into()))?;
    if !(s > s_qpt && s < 1.0) {
        return Err(CliError::Infeasible(format!("s = {s} must lie in (s_QPT, 1) = ({s_qpt}, 1)")));
    }
    let rates = Rates::new(&spec, s, cfg.grids.resolution())?;
    let beta_pt = match rates.critical_beta(s_qpt)? {
        Beta::Finite(b) => Cell::num(b),
        Beta::Infinite => Cell::Capped,
    };
    let plateau = zero_temperature_action(&spec, s)?.sigma;
    let top0 = landscape(&spec, 0.0, s)?
        .barrier_top
        .ok_or(pspin_core::Error::MissingWell(Well::Right, 0.0, s))?
        .u;
    let k_star = rates.k_star().ok_or(pspin_core::Error::MissingWell(Well::Right, 0.0, s))?;
    let ridge_u = s * spec.f(1.0 - 2.0 * k_star);
    let mut t = Table::new(vec![
        "beta",
        "sigma_opt",
        "mechanism",
        "k_opt",
        "constrained",
        "sigma_classical",
        "plateau",
        "bound_k0",
        "bound_ridge",
        "beta_pt",
    ]);
    t.meta("s_qpt", s_qpt);
    t.meta("k_star", k_star);
    for beta in uniform(0.0, cfg.beta_max, cfg.grids.beta) {
        let b = Beta::Finite(beta);
        let q = rates.optimal_quantum_action(b)?;
        let c = rates.classical_escape_action(b)?;
        let f_left = rates.well_free_energy(b, Well::Left)?.free_energy.expect("finite beta");
        // Ridge line: F at the band edge q = 1 − 2k, evaluated where the right well ends.
        let ridge_f = beta * ridge_u - binary_entropy(k_star);
        t.push(vec![
            Cell::num(beta),
            Cell::num(q.sigma),
            Cell::text(q.mechanism),
            Cell::num(q.optimizer.k()),
            Cell::text(q.constrained),
            Cell::num(c.sigma),
            Cell::num(plateau),
            Cell::num(beta * top0 - f_left),
            Cell::num(ridge_f - f_left),
            beta_pt.clone(),
        ]);
    }
    Ok(t)
}

fn with_anchor(mut grid: Vec<f64>, anchor: f64) -> Vec<f64> {
    if !grid.iter().any(|&x| (x - anchor).abs() <= 1e-12) {
        grid.push(anchor);
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    }
    grid
}

fn xi_cells(r: &ScheduleResult) -> [Cell; 2] {
    let xi = if r.divergent { Cell::Capped } else { Cell::num(r.xi) };
    let cap = if r.capped || r.divergent { Cell::num(r.xi) } else { Cell::Empty };
    [xi, cap]
}

/// QA and SA exponents on q_min ∈ [0, 1), q_max ∈ (0, 1), with the anchor cell inserted
/// and the feasible-region boundaries q_max = q_min and q_max = (2 + q_min)/3 appended.
pub fn compare(cfg: &RunConfig) -> Result<Table> {
    let nq = cfg.grids.q_min;
    let nm = cfg.grids.q_max;
    let q_min_grid = with_anchor((0..nq).map(|i| i as f64 / nq as f64).collect(), ANCHOR.0);
    let q_max_grid = with_anchor((0..nm).map(|j| (j + 1) as f64 / (nm + 1) as f64).collect(), ANCHOR.1);
    let res: Resolution = cfg.grids.resolution();
    let cells = comparison_sweep(&q_min_grid, &q_max_grid, res);
    let feasible = cells.iter().filter(|c| matches!(c.status, CellStatus::Computed { .. })).count();
    if feasible == 0 {
        return Err(CliError::Infeasible("no feasible (q_min, q_max) cell on the grid".into()));
    }
    let mut t = Table::new(vec![
        "kind",
        "q_min",
        "q_max",
        "status",
        "xi_qa",
        "xi_qa_cap",
        "qa_algorithm",
        "s_f",
        "qa_beta",
        "at_qpt",
        "xi_sa",
        "xi_sa_cap",
        "sa_algorithm",
        "winner",
    ]);
    t.meta("anchor", format!("{},{}", ANCHOR.0, ANCHOR.1));
    t.meta("feasible_cells", feasible);
    t.meta("tie_tolerance", TIE_TOL);
    for cell in &cells {
        let mut row = vec![Cell::text("cell"), Cell::num(cell.q_min), Cell::num(cell.q_max)];
        match &cell.status {
            CellStatus::Infeasible => {
                row.push(Cell::text("infeasible"));
                row.extend(std::iter::repeat(Cell::Empty).take(10));
            }
            CellStatus::Computed { qa, sa, winner } => {
                row.push(Cell::text(if cell.degenerate { "degenerate" } else { "feasible" }));
                row.extend(xi_cells(qa));
                row.push(Cell::text(qa.algorithm));
                row.push(Cell::opt(qa.s_f));
                row.push(match (qa.algorithm, qa.beta) {
                    (Algorithm::Exhaustive, _) => Cell::Empty,
                    (_, Beta::Infinite) => Cell::Capped,
                    (_, Beta::Finite(b)) => Cell::num(b),
                });
                row.push(Cell::text(qa.at_qpt));
                row.extend(xi_cells(sa));
                row.push(Cell::text(sa.algorithm));
                row.push(Cell::text(winner));
            }
        }
        t.push(row);
    }
    for (kind, curve) in [
        ("boundary_lower", Box::new(|q: f64| q) as Box<dyn Fn(f64) -> f64>),
        ("boundary_upper", Box::new(|q: f64| (2.0 + q) / 3.0)),
    ] {
        for &q in &q_min_grid {
            let mut row = vec![Cell::text(kind), Cell::num(q), Cell::num(curve(q))];
            row.extend(std::iter::repeat(Cell::Empty).take(11));
            t.push(row);
        }
    }
    Ok(t)
}

fn oracle_row(t: &mut Table, section: &str, n: Option<usize>, k: Option<usize>, quantity: &str, value: Cell) {
    let int = |x: Option<usize>| x.map_or(Cell::Empty, |v| Cell::Int(v as i64));
    t.push(vec![Cell::text(section), int(n), int(k), Cell::text(quantity), value]);
}

/// Splitting-scaling fit, finite-N occupation crossing against β_PT, and the overlap table.
/// The second value lists the failed checks, if any.
pub fn oracle(cfg: &RunConfig) -> Result<(Table, Option<String>)> {
    let mut failures = Vec::new();
    let mut t = Table::new(vec!["section", "n", "k", "quantity", "value"]);

    let scaling_spec = cfg.scaling.spec()?;
    let s_scaling = transition(&scaling_spec)?
        .ok_or_else(|| CliError::Infeasible("the scaling potential has no quantum transition".into()))?;
    let report = wkb_scaling_check(&scaling_spec, s_scaling, &cfg.n_list)?;
    t.meta("scaling_s_qpt", s_scaling);
    for p in &report.points {
        oracle_row(&mut t, "scaling", Some(p.n), Some(0), "s_cross", Cell::num(p.s_cross));
        oracle_row(&mut t, "scaling", Some(p.n), Some(0), "gap", Cell::num(p.gap));
        oracle_row(&mut t, "scaling", Some(p.n), Some(0), "ground_offset", Cell::num(p.ground_offset));
    }
    oracle_row(&mut t, "scaling", None, None, "fitted_sigma", Cell::num(report.fitted_sigma));
    oracle_row(&mut t, "scaling", None, None, "wkb_sigma", Cell::opt(report.wkb_sigma));
    oracle_row(&mut t, "scaling", None, None, "relative_deviation", Cell::opt(report.relative_deviation));
    oracle_row(&mut t, "scaling", None, None, "r_squared", Cell::num(report.gap_fit.r_squared));
    oracle_row(&mut t, "scaling", None, None, "offset_c", Cell::num(report.offset_fit.intercept));
    oracle_row(&mut t, "scaling", None, None, "offset_decreasing", Cell::text(report.offset_decreasing));
    match report.relative_deviation {
        Some(d) if d < ORACLE_REL_TOL && report.gap_fit.r_squared > ORACLE_MIN_R2 && report.exponential => {}
        _ => failures.push("splitting slope"),
    }
    if !report.offset_decreasing {
        failures.push("ground-energy offset");
    }

    let spec = cfg.cubic.spec()?;
    let s_qpt = transition(&spec)?.ok_or_else(|| CliError::Infeasible("the potential has no quantum transition".into()))?;
    let beta_pt = match Rates::new(&spec, cfg.s, Resolution::default())?.critical_beta(s_qpt)? {
        Beta::Finite(b) => b,
        Beta::Infinite => return Err(CliError::Infeasible(format!("s = {} sits at the transition", cfg.s))),
    };
    let thermal = ThermalSpectrum::new(&spec, cfg.s, cfg.n_thermal)?;
    let crossing = thermal.crossing_beta(1e-3, 4.0 * beta_pt);
    let n = Some(cfg.n_thermal);
    oracle_row(&mut t, "thermal", n, None, "beta_pt", Cell::num(beta_pt));
    oracle_row(&mut t, "thermal", n, None, "beta_crossing", Cell::opt(crossing));
    let deviation = crossing.map(|b| (b - beta_pt).abs() / beta_pt);
    oracle_row(&mut t, "thermal", n, None, "relative_deviation", Cell::opt(deviation));
    let occ = thermal.occupations(beta_pt)?;
    oracle_row(&mut t, "thermal", n, None, "p_left_at_beta_pt", Cell::num(occ.p_left));
    oracle_row(&mut t, "thermal", n, None, "ambiguous_levels", Cell::Int(occ.ambiguous as i64));
    if !deviation.is_some_and(|d| d < ORACLE_REL_TOL) {
        failures.push("occupation crossing");
    }

    for k in 0..=5 {
        let a = pspin_core::initial_final_overlap(10, k)?;
        oracle_row(&mut t, "overlap", Some(10), Some(k), "amplitude", Cell::num(a));
    }
    t.meta("checks", if failures.is_empty() { "pass".to_string() } else { format!("fail: {}", failures.join(", ")) });
    Ok((t, (!failures.is_empty()).then(|| failures.join(", "))))
}
