use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

/// Periodic box of length `L` sampled at `N` points.
///
/// The retained (Hardy) frequencies form the half-shifted lattice
/// `xi_k = (k + 1/2) * dxi`, `k = 0..N/2`, with `dxi = 2 pi / L`. Fields on this
/// lattice are `2L`-antiperiodic functions times the carrier `e^{i x dxi / 2}`;
/// there is no zero mode, so nothing has to be split between the two half-lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    length: f64,
    num_points: usize,
}

impl FrequencyGrid {
    pub fn new(length: f64, num_points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(HardyError::InvalidGrid(format!("domain length must be positive, got {length}")));
        }
        if num_points < 2 || num_points % 2 != 0 {
            return Err(HardyError::InvalidGrid(format!(
                "number of points must be even and >= 2, got {num_points}"
            )));
        }
        Ok(Self { length, num_points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    /// Number of retained nonnegative frequencies, `N/2`.
    pub fn modes(&self) -> usize {
        self.num_points / 2
    }

    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.num_points as f64
    }

    pub fn xi(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.dxi()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.modes()).map(|k| self.xi(k)).collect()
    }

    /// Largest retained frequency.
    pub fn max_frequency(&self) -> f64 {
        self.xi(self.modes() - 1)
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.num_points).map(|j| self.x(j)).collect()
    }

    pub fn ensure_same(&self, other: &FrequencyGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(HardyError::GridMismatch {
                expected_l: self.length,
                expected_n: self.num_points,
                got_l: other.length,
                got_n: other.num_points,
            })
        }
    }
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self { length: 256.0, num_points: 4096 }
    }
}
