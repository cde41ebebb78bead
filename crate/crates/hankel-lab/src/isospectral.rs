use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use szego_dynamics::{Monitor, Snapshot};

use crate::error::Result;
use crate::operator::HankelOperator;
use crate::spectra::leading_svd;

/// Leading Takagi values along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospectralReport {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    /// `max_{i,t} |s_i(t) - s_i(0)| / s_i(0)` over values above `1e-10` at `t = 0`.
    pub drift: f64,
}

pub fn leading_values(snapshot: &Snapshot, top: usize, size: usize) -> Result<Vec<f64>> {
    let h = HankelOperator::from_field(&snapshot.field, size)?;
    Ok(leading_svd(h.to_dense().as_ref(), top)?.values)
}

pub fn isospectral_drift(snapshots: &[Snapshot], top: usize, size: usize) -> Result<IsospectralReport> {
    let values = snapshots
        .par_iter()
        .map(|s| leading_values(s, top, size))
        .collect::<Result<Vec<_>>>()?;
    let times = snapshots.iter().map(|s| s.t).collect();
    let mut drift = 0.0f64;
    if let Some(first) = values.first() {
        for row in &values {
            for (s0, s) in first.iter().zip(row) {
                if *s0 > 1e-10 {
                    drift = drift.max((s - s0).abs() / s0);
                }
            }
        }
    }
    Ok(IsospectralReport { times, values, drift })
}

/// Leading Takagi values of the field Hankel operator at snapshot times.
pub struct HankelMonitor {
    pub top: usize,
    pub size: usize,
}

impl Monitor for HankelMonitor {
    fn columns(&self) -> Vec<String> {
        (1..=self.top).map(|i| format!("sv{i}")).collect()
    }

    fn observe(&mut self, _t: f64, u: &hardy_core::SpectralField) -> std::result::Result<Vec<f64>, String> {
        let h = HankelOperator::from_field(u, self.size).map_err(|e| e.to_string())?;
        let mut v = leading_svd(h.to_dense().as_ref(), self.top).map_err(|e| e.to_string())?.values;
        v.resize(self.top, 0.0);
        Ok(v)
    }
}
