//! Variational structure around the soliton cylinders of the cubic Szego equation.

pub mod cylinder;
pub mod error;
pub mod minimize;
pub mod stability;

pub use cylinder::{cylinder_distance, gn_ratio, CylinderDistance, CylinderMonitor, CylinderSpec};
pub use error::{Result, VariationalError};
pub use minimize::{minimize_momentum, random_initial_field, reproject, HistoryRow, Minimization, MinimizeOptions};
pub use stability::{stability_experiment, verdict, DistanceSample, StabilityReport, StabilityRun, Verdict, NOISE_FLOOR};
