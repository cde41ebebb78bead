use hardy_core::{synth_rational, Complex64, FrequencyGrid, PoleTerm, RationalSymbol};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use szego_variational::{stability_experiment, CylinderSpec, StabilityReport, StabilityRun, Verdict};

use super::{check_schema, Outcome};
use crate::error::{CliError, Result};
use crate::manifest::ExperimentManifest;
use crate::output::{num, OutputDir};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilityConfig {
    pub schema_version: u32,
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub final_time: f64,
    pub sample_stride: usize,
    pub a: f64,
    pub r: f64,
    /// Perturbation direction; normalized in `H^{1/2}` before scaling by each delta.
    pub perturbation: Vec<PoleTerm>,
    pub deltas: Vec<f64>,
    /// Regression bounds: `sup <= bound_factor * delta`, or `<= zero_tolerance` at delta 0.
    pub bound_factor: f64,
    pub zero_tolerance: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            length: 256.0,
            points: 4096,
            dt: 1e-3,
            final_time: 100.0,
            sample_stride: 500,
            a: 1.0,
            r: 1.0,
            perturbation: vec![PoleTerm::new(Complex64::new(0.0, -2.0), vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])],
            deltas: vec![1e-2],
            bound_factor: 10.0,
            zero_tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct DeltaSummary {
    delta: f64,
    sup: f64,
    bound: f64,
    verdict: Verdict,
    pass: bool,
}

#[derive(Debug, Clone, Serialize)]
struct Combined {
    runs: Vec<DeltaSummary>,
    /// Whether the sup grows with delta; a violation is flagged, not failed.
    monotone_in_delta: bool,
    pass: bool,
}

pub fn run(manifest: &ExperimentManifest, workers: Option<usize>) -> Result<Outcome> {
    let cfg: StabilityConfig = manifest.typed()?;
    check_schema(cfg.schema_version, SCHEMA_VERSION)?;
    if cfg.deltas.is_empty() {
        return Err(CliError::Config("deltas must not be empty".into()));
    }
    let grid = FrequencyGrid::new(cfg.length, cfg.points)?;
    let spec = CylinderSpec::new(cfg.a, cfg.r)?;
    let g = synth_rational(&RationalSymbol::new(cfg.perturbation.clone())?, &grid);
    let run = StabilityRun { dt: cfg.dt, final_time: cfg.final_time, sample_stride: cfg.sample_stride };
    let reports: Vec<StabilityReport> = super::with_workers(workers, || {
        cfg.deltas.par_iter().map(|&d| stability_experiment(&spec, &g, d, &run)).collect::<Vec<_>>()
    })?
    .into_iter()
    .collect::<std::result::Result<_, _>>()?;

    let mut out = OutputDir::create(manifest)?;
    let mut runs = Vec::new();
    for (i, rep) in reports.iter().enumerate() {
        let rows: Vec<Vec<String>> = rep
            .samples
            .iter()
            .map(|s| vec![num(s.t), num(s.dist), num(s.theta_opt), num(s.x0_opt)])
            .collect();
        out.write_csv(&format!("distance_{i}.csv"), &["t", "dist", "theta_opt", "x0_opt"], &rows)?;
        let pts: Vec<(f64, f64)> = rep.samples.iter().map(|s| (s.t, s.dist)).collect();
        out.write_dat(&format!("distance_{i}.dat"), ["t", "dist"], &pts)?;
        out.write_json(&format!("stability_{i}.json"), rep)?;
        let bound = if rep.delta == 0.0 { cfg.zero_tolerance } else { cfg.bound_factor * rep.delta };
        let pass = rep.sup <= bound && rep.verdict == Verdict::Bounded;
        runs.push(DeltaSummary { delta: rep.delta, sup: rep.sup, bound, verdict: rep.verdict, pass });
    }
    let mut order: Vec<&DeltaSummary> = runs.iter().collect();
    order.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    let monotone_in_delta = order.windows(2).all(|w| w[0].sup <= w[1].sup);
    let pass = runs.iter().all(|r| r.pass);
    let mut text = String::new();
    for r in &runs {
        text.push_str(&format!(
            "delta {:<10} sup {:<24} bound {:<10} {:?} {}\n",
            num(r.delta),
            num(r.sup),
            num(r.bound),
            r.verdict,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    if !monotone_in_delta {
        text.push_str("note: sup distance is not monotone in delta\n");
    }
    out.write_json("summary.json", &Combined { runs, monotone_in_delta, pass })?;
    Ok(Outcome { pass, report: text })
}
