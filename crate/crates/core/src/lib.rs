//! Quantum versus simulated annealing time exponents for the mean-field p-spin model.
//!
//! Every numerical routine is generic over [`Real`]; the aliases below fix the scalar
//! to `f64`, which is what almost every caller wants. The finite-N splitting oracle
//! additionally runs in [`extended::DoubleDouble`].

pub mod error;
pub mod exact;
pub mod extended;
pub mod model;
pub mod quad;
pub mod rates;
pub mod real;
pub mod roots;
pub mod schedule;
pub mod tridiag;
pub mod wkb;

pub use error::{Error, Result};
pub use exact::{
    build_sector, initial_final_overlap, sector_spectrum, thermal_occupations, wkb_scaling_check, Degeneracy,
    Occupations, ScalingReport, ThermalSpectrum,
};
pub use model::{effective_potential, entropy_classical, entropy_k, k_star, landscape, StationaryKind, Well};
pub use rates::{critical_line, qpt_point, zero_temperature_action, Mechanism, Resolution};
pub use real::Real;
pub use schedule::{comparison_sweep, optimize_qa, qa_exponent, sa_exponent, Algorithm, CellStatus, Winner};
pub use wkb::{barrier_action, period, turning_points};

pub type PotentialSpec = model::PotentialSpec<f64>;
pub type Beta = model::Beta<f64>;
pub type AnnealPoint = model::AnnealPoint<f64>;
pub type Landscape = model::Landscape<f64>;
pub type Stationary = model::Stationary<f64>;
pub type WkbState = wkb::WkbState<f64>;
pub type BarrierAction = wkb::BarrierAction<f64>;
pub type Rates = rates::Rates<f64>;
pub type RateResult = rates::RateResult<f64>;
pub type FreeEnergyWell = rates::FreeEnergyWell<f64>;
pub type ScheduleResult = schedule::ScheduleResult<f64>;
pub type SweepCell = schedule::SweepCell<f64>;
pub type SectorMatrix = exact::SectorMatrix<f64>;
