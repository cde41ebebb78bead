use hardy_core::{FrequencyGrid, NormKind, SpectralField};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SimulationConfig;
use crate::error::{DynamicsError, Result};
use crate::integrator::{Rk4, BLOW_UP_MODULUS, STABILITY_GUARD};
use crate::reference::{advect, deviation};

/// Quantity evaluated at snapshot times. Returning `Err` aborts the run.
pub trait Monitor: Send {
    fn columns(&self) -> Vec<String>;
    fn observe(&mut self, t: f64, u: &SpectralField) -> std::result::Result<Vec<f64>, String>;
}

/// `L^2` distance to `e^{-i omega t} u0(x - c t)`.
pub struct DeviationMonitor {
    pub u0: SpectralField,
    pub speed: f64,
    pub omega: f64,
}

impl Monitor for DeviationMonitor {
    fn columns(&self) -> Vec<String> {
        vec!["dev_L2".into()]
    }

    fn observe(&mut self, t: f64, u: &SpectralField) -> std::result::Result<Vec<f64>, String> {
        let r = advect(&self.u0, self.speed, self.omega, t);
        deviation(u, &r, NormKind::L2).map(|d| vec![d]).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub t: f64,
    pub q: f64,
    pub m: f64,
    pub e: f64,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub field: SpectralField,
}

#[derive(Debug, Clone)]
pub struct SimulationRecord {
    pub log: Vec<LogRow>,
    pub snapshots: Vec<Snapshot>,
    pub monitor_columns: Vec<String>,
    /// One row per snapshot.
    pub monitor_rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub final_time: f64,
    pub steps: usize,
    pub drift_q: f64,
    pub drift_m: f64,
    pub drift_e: f64,
    pub max_deviation: Option<f64>,
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

impl SimulationRecord {
    /// Largest relative change of `(Q, M, E)` against the first log row.
    pub fn drifts(&self) -> (f64, f64, f64) {
        let Some(first) = self.log.first() else { return (0.0, 0.0, 0.0) };
        self.log.iter().fold((0.0, 0.0, 0.0), |(dq, dm, de), r| {
            (dq.max(rel(r.q, first.q)), dm.max(rel(r.m, first.m)), de.max(rel(r.e, first.e)))
        })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.monitor_columns.iter().position(|c| c == name)?;
        Some(self.monitor_rows.iter().map(|r| r[i]).collect())
    }

    pub fn summary(&self, steps: usize) -> RunSummary {
        let (drift_q, drift_m, drift_e) = self.drifts();
        let max_deviation = self.column("dev_L2").map(|d| d.into_iter().fold(0.0, f64::max));
        RunSummary {
            final_time: self.log.last().map_or(0.0, |r| r.t),
            steps,
            drift_q,
            drift_m,
            drift_e,
            max_deviation,
        }
    }
}

/// Schedule of an integration run.
#[derive(Debug, Clone, Copy)]
pub struct Schedule {
    pub dt: f64,
    pub steps: usize,
    pub snapshot_stride: usize,
    pub log_stride: usize,
}

/// `max|u|` on the padded grid.
pub fn max_modulus(u: &SpectralField) -> f64 {
    u.samples_on(2 * u.grid().num_points()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn check_stability_guard(u: &SpectralField, dt: f64) -> Result<()> {
    let m = max_modulus(u);
    let product = dt.abs() * m * m;
    if product > STABILITY_GUARD || !product.is_finite() {
        return Err(DynamicsError::Unstable { dt, max_modulus: m, product, limit: STABILITY_GUARD });
    }
    Ok(())
}

/// Integrates from `u0` with the given schedule. A negative `dt` runs backwards.
pub fn integrate(u0: &SpectralField, schedule: Schedule, monitors: &mut [&mut dyn Monitor]) -> Result<SimulationRecord> {
    u0.check_finite()?;
    if schedule.snapshot_stride == 0 || schedule.log_stride == 0 {
        return Err(DynamicsError::Config("snapshot and log strides must be at least 1".into()));
    }
    check_stability_guard(u0, schedule.dt)?;
    let grid: FrequencyGrid = *u0.grid();
    let mut rk = Rk4::new(&grid);
    let mut amps = u0.amplitudes().to_vec();
    let monitor_columns: Vec<String> = monitors.iter().flat_map(|m| m.columns()).collect();
    let mut rec = SimulationRecord {
        log: Vec::with_capacity(schedule.steps / schedule.log_stride + 2),
        snapshots: Vec::new(),
        monitor_columns,
        monitor_rows: Vec::new(),
    };
    let l = grid.length();
    let qm = |a: &[num_complex::Complex64]| {
        let q = l * a.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let m = l * a.iter().enumerate().map(|(k, z)| grid.xi(k) * z.norm_sqr()).sum::<f64>();
        (q, m)
    };
    let mut snap = |rec: &mut SimulationRecord, t: f64, amps: &[num_complex::Complex64]| -> Result<()> {
        let field = SpectralField::new(grid, amps.to_vec())?;
        let mut row = Vec::with_capacity(rec.monitor_columns.len());
        for m in monitors.iter_mut() {
            let vals = m.observe(t, &field).map_err(|msg| DynamicsError::Monitor {
                name: m.columns().join(","),
                t,
                msg,
            })?;
            row.extend(vals);
        }
        rec.monitor_rows.push(row);
        rec.snapshots.push(Snapshot { t, field });
        Ok(())
    };

    for k in 0..schedule.steps {
        let t = k as f64 * schedule.dt;
        if k % schedule.snapshot_stride == 0 {
            snap(&mut rec, t, &amps)?;
        }
        let logging = k % schedule.log_stride == 0;
        let (q, m) = if logging { qm(&amps) } else { (0.0, 0.0) };
        let stats = rk.step(&mut amps, schedule.dt);
        if !(stats.max_modulus <= BLOW_UP_MODULUS) {
            return Err(DynamicsError::BlowUp { t, max_modulus: stats.max_modulus });
        }
        if logging {
            rec.log.push(LogRow { t, q, m, e: stats.quartic });
        }
    }
    let t_end = schedule.steps as f64 * schedule.dt;
    let last = SpectralField::new(grid, amps.clone())?;
    let c = last
        .conserved_quantities()
        .map_err(|_| DynamicsError::BlowUp { t: t_end, max_modulus: f64::INFINITY })?;
    let mx = max_modulus(&last);
    if !(mx <= BLOW_UP_MODULUS) {
        return Err(DynamicsError::BlowUp { t: t_end, max_modulus: mx });
    }
    rec.log.push(LogRow { t: t_end, q: c.q, m: c.m, e: c.e });
    snap(&mut rec, t_end, &amps)?;
    Ok(rec)
}

/// Runs a configuration with its built-in monitors plus `extra`.
pub fn simulate_with(config: &SimulationConfig, extra: &mut [&mut dyn Monitor]) -> Result<SimulationRecord> {
    config.validate()?;
    let state = config.initial_state()?;
    let schedule = Schedule {
        dt: config.dt,
        steps: config.steps()?,
        snapshot_stride: config.snapshot_stride,
        log_stride: config.log_stride,
    };
    let mut dev = match (&state.wave, config.monitors.deviation) {
        (Some((c, w, u0)), true) => Some(DeviationMonitor { u0: u0.clone(), speed: *c, omega: *w }),
        (None, true) => {
            return Err(DynamicsError::Config(
                "monitors.deviation: initial data has no exact traveling wave".into(),
            ))
        }
        _ => None,
    };
    let mut monitors: Vec<&mut dyn Monitor> = Vec::new();
    if let Some(d) = dev.as_mut() {
        monitors.push(d);
    }
    for m in extra.iter_mut() {
        monitors.push(&mut **m);
    }
    integrate(&state.field, schedule, &mut monitors)
}

pub fn simulate(config: &SimulationConfig) -> Result<SimulationRecord> {
    simulate_with(config, &mut [])
}

/// Independent runs in parallel; results keep the input order.
pub fn simulate_many(configs: &[SimulationConfig]) -> Vec<Result<SimulationRecord>> {
    configs.par_iter().map(simulate).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{InitialCondition, MonitorConfig};
    use num_complex::Complex64;

    fn config(initial: InitialCondition, t: f64) -> SimulationConfig {
        SimulationConfig {
            schema_version: 1,
            length: 32.0,
            points: 256,
            dt: 1e-2,
            final_time: t,
            snapshot_stride: 10,
            log_stride: 1,
            initial,
            monitors: MonitorConfig { deviation: true, ..MonitorConfig::default() },
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let cfg = config(InitialCondition::Random { band: 4, seed: 0, mass: 1.0 }, 0.1);
        let st = cfg.initial_state().unwrap();
        let zero = SpectralField::zeros(*st.field.grid());
        let sched = Schedule { dt: 1e-2, steps: 10, snapshot_stride: 5, log_stride: 1 };
        let rec = integrate(&zero, sched, &mut []).unwrap();
        assert!(rec.snapshots.iter().all(|s| s.field.is_zero()));
        assert_eq!(rec.snapshots.len(), 3);
        assert_eq!(rec.log.len(), 11);
    }

    #[test]
    fn log_times_increase_and_end_at_final_time() {
        let cfg = config(
            InitialCondition::CircleSoliton { amplitude: Complex64::new(1.0, 0.0), pole_disk: Complex64::new(0.0, 2.0) },
            0.5,
        );
        let rec = simulate(&cfg).unwrap();
        assert!(rec.log.windows(2).all(|w| w[1].t > w[0].t));
        assert!((rec.log.last().unwrap().t - 0.5).abs() < 1e-15);
        assert_eq!(rec.monitor_columns, vec!["dev_L2".to_string()]);
        let dev = rec.column("dev_L2").unwrap();
        assert!(dev.iter().all(|d| *d < 1e-9), "{dev:?}");
    }

    #[test]
    fn guard_rejects_large_step() {
        let mut cfg = config(
            InitialCondition::Soliton { amplitude: Complex64::new(1.0, 0.0), pole: Complex64::new(0.0, -1.0) },
            1.0,
        );
        cfg.dt = 0.5;
        assert!(matches!(simulate(&cfg), Err(DynamicsError::Unstable { .. })));
    }

    #[test]
    fn deviation_monitor_needs_a_wave() {
        let cfg = config(InitialCondition::Random { band: 4, seed: 0, mass: 1.0 }, 0.1);
        assert!(matches!(simulate(&cfg), Err(DynamicsError::Config(_))));
    }

    #[test]
    fn parallel_runs_match_serial() {
        let cfgs: Vec<SimulationConfig> = (0..3)
            .map(|s| {
                let mut c = config(InitialCondition::Random { band: 16, seed: s, mass: 1.0 }, 0.2);
                c.monitors.deviation = false;
                c
            })
            .collect();
        let par = simulate_many(&cfgs);
        for (c, r) in cfgs.iter().zip(par) {
            let s = simulate(c).unwrap();
            assert_eq!(s.snapshots.last().unwrap().field, r.unwrap().snapshots.last().unwrap().field);
        }
    }
}
