//! Discrete Hardy space for the cubic Szego equation on a periodic box.
//!
//! Fields live on the half-shifted frequency lattice `(k + 1/2) 2pi/L`; see
//! [`FrequencyGrid`].

pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod norms;
pub mod rational;
pub mod snapshot;
pub mod soliton;

pub use error::{HardyError, Result};
pub use field::{analyze, project_szego, synthesize, Conserved, FullField, SpectralField};
pub use grid::FrequencyGrid;
pub use norms::{norm, weighted_inner, NormKind};
pub use num_complex::Complex64;
pub use rational::{synth_rational, PoleTerm, RationalSymbol};
pub use snapshot::{read_snapshot, write_snapshot};
pub use soliton::{grid_wave_parameters, make_soliton, traveling_wave_residual, SolitonParams};
