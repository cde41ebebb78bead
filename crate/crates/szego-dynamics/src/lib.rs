//! Time integration of `i u_t = Pi(|u|^2 u)` on the half-shifted periodic lattice.

pub mod config;
pub mod error;
pub mod integrator;
pub mod reference;
pub mod simulate;

pub use config::{CylinderTarget, InitialCondition, InitialState, MonitorConfig, SimulationConfig, SCHEMA_VERSION};
pub use error::{DynamicsError, Result};
pub use integrator::{rhs, step_rk4, CubicKernel, Rk4, BLOW_UP_MODULUS, STABILITY_GUARD};
pub use reference::{advect, deviation, make_circle_soliton, traveling_wave_reference};
pub use simulate::{
    check_stability_guard, integrate, max_modulus, simulate, simulate_many, simulate_with, DeviationMonitor, LogRow,
    Monitor, RunSummary, Schedule, SimulationRecord, Snapshot,
};
