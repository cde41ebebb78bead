use hardy_core::{norm, Complex64, NormKind, SpectralField};
use serde::{Deserialize, Serialize};
use szego_dynamics::{integrate, Monitor, Schedule};

use crate::cylinder::{CylinderMonitor, CylinderSpec};
use crate::error::{Result, VariationalError};

/// Distances below this are treated as roundoff when judging growth.
pub const NOISE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Growing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSample {
    pub t: f64,
    pub dist: f64,
    pub theta_opt: f64,
    pub x0_opt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub spec: CylinderSpec,
    pub delta: f64,
    pub samples: Vec<DistanceSample>,
    pub sup: f64,
    pub verdict: Verdict,
}

impl StabilityReport {
    pub fn initial(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.dist)
    }
}

/// Growing when the mean over the last fifth exceeds twice the mean over the first
/// fifth (and the noise floor).
pub fn verdict(distances: &[f64]) -> Verdict {
    let w = (distances.len() / 5).max(1);
    if distances.len() < 2 {
        return Verdict::Bounded;
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let first = mean(&distances[..w]);
    let last = mean(&distances[distances.len() - w..]);
    if last > 2.0 * first && last > NOISE_FLOOR {
        Verdict::Growing
    } else {
        Verdict::Bounded
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRun {
    pub dt: f64,
    pub final_time: f64,
    /// Steps between distance samples.
    pub sample_stride: usize,
}

/// Evolves `phi + delta g / ||g||` from the cylinder element with `theta = 0`, `x0 = 0`
/// and records the distance to the cylinder.
pub fn stability_experiment(spec: &CylinderSpec, g: &SpectralField, delta: f64, run: &StabilityRun) -> Result<StabilityReport> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(VariationalError::InvalidCylinder(format!("perturbation size must be >= 0, got {delta}")));
    }
    let grid = *g.grid();
    let phi = spec.element(&grid, 0.0, 0.0)?;
    let u0 = if delta == 0.0 {
        phi
    } else {
        let gn = norm(g, NormKind::Sobolev(0.5))?;
        if gn == 0.0 {
            return Err(VariationalError::ZeroField);
        }
        phi.axpy(Complex64::new(delta / gn, 0.0), g)?
    };
    let steps = (run.final_time / run.dt).round();
    if !(steps >= 1.0 && (steps * run.dt - run.final_time).abs() <= 1e-9 * run.final_time.abs().max(1.0)) {
        return Err(VariationalError::InvalidCylinder(format!(
            "final time {} is not a positive multiple of dt {}",
            run.final_time, run.dt
        )));
    }
    let stride = run.sample_stride.max(1);
    let schedule = Schedule { dt: run.dt, steps: steps as usize, snapshot_stride: stride, log_stride: stride };
    let mut monitor = CylinderMonitor { spec: *spec };
    let mut monitors: [&mut dyn Monitor; 1] = [&mut monitor];
    let rec = integrate(&u0, schedule, &mut monitors)?;
    let samples: Vec<DistanceSample> = rec
        .snapshots
        .iter()
        .zip(&rec.monitor_rows)
        .map(|(s, m)| DistanceSample { t: s.t, dist: m[0], theta_opt: m[1], x0_opt: m[2] })
        .collect();
    let dists: Vec<f64> = samples.iter().map(|s| s.dist).collect();
    let sup = dists.iter().copied().fold(0.0, f64::max);
    Ok(StabilityReport { spec: *spec, delta, verdict: verdict(&dists), sup, samples })
}
