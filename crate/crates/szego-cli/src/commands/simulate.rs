use std::collections::HashMap;

use hankel_lab::HankelMonitor;
use hardy_core::write_snapshot;
use serde::Serialize;
use szego_dynamics::{InitialCondition, Monitor, RunSummary, SimulationConfig};
use szego_variational::{CylinderMonitor, CylinderSpec};

use super::Outcome;
use crate::error::{CliError, Result};
use crate::manifest::ExperimentManifest;
use crate::output::{num, OutputDir};

/// Built-in configuration: the unit soliton for `T = 10`.
pub fn default_config() -> SimulationConfig {
    let mut cfg: SimulationConfig = serde_json::from_value(serde_json::json!({
        "schema_version": szego_dynamics::SCHEMA_VERSION,
        "final_time": 10.0,
        "initial": {"kind": "soliton", "amplitude": [1.0, 0.0], "pole": [0.0, -1.0]}
    }))
    .expect("built-in simulation config is valid");
    cfg.monitors.deviation = true;
    cfg
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    summary: &'a RunSummary,
    monitor_columns: &'a [String],
    snapshots: usize,
    config: &'a SimulationConfig,
}

pub fn run(manifest: &ExperimentManifest, seed_given: bool) -> Result<Outcome> {
    let mut cfg: SimulationConfig = manifest.typed()?;
    if seed_given {
        if let InitialCondition::Random { seed, .. } = &mut cfg.initial {
            *seed = manifest.seed;
        }
    }
    cfg.validate()?;
    let grid = cfg.grid()?;
    let mut cylinder = match &cfg.monitors.cylinder {
        Some(t) => Some(CylinderMonitor { spec: CylinderSpec::new(t.a, t.r)? }),
        None => None,
    };
    let mut hankel = (cfg.monitors.hankel_top > 0)
        .then(|| HankelMonitor { top: cfg.monitors.hankel_top, size: grid.modes() / 2 });
    let mut extra: Vec<&mut dyn Monitor> = Vec::new();
    if let Some(m) = cylinder.as_mut() {
        extra.push(m);
    }
    if let Some(m) = hankel.as_mut() {
        extra.push(m);
    }
    let rec = szego_dynamics::simulate_with(&cfg, &mut extra)?;
    let summary = rec.summary(cfg.steps()?);

    let mut out = OutputDir::create(manifest)?;
    // monitor values exist at snapshot times only; other log rows leave them empty
    let keep: Vec<usize> = rec
        .monitor_columns
        .iter()
        .enumerate()
        .filter(|(_, c)| !matches!(c.as_str(), "theta_opt" | "x0_opt"))
        .map(|(i, _)| i)
        .collect();
    let mut columns = vec!["t", "Q", "M", "E"];
    columns.extend(keep.iter().map(|&i| rec.monitor_columns[i].as_str()));
    let by_time: HashMap<u64, usize> = rec.snapshots.iter().enumerate().map(|(i, s)| (s.t.to_bits(), i)).collect();
    let rows: Vec<Vec<String>> = rec
        .log
        .iter()
        .map(|r| {
            let mut row = vec![num(r.t), num(r.q), num(r.m), num(r.e)];
            let mon = by_time.get(&r.t.to_bits()).map(|&i| &rec.monitor_rows[i]);
            row.extend(keep.iter().map(|&j| mon.map_or(String::new(), |m| num(m[j]))));
            row
        })
        .collect();
    out.write_csv("log.csv", &columns, &rows)?;

    if cylinder.is_some() {
        let base = rec.monitor_columns.iter().position(|c| c == "dist_cyl").unwrap_or(0);
        let rows: Vec<Vec<String>> = rec
            .snapshots
            .iter()
            .zip(&rec.monitor_rows)
            .map(|(s, m)| vec![num(s.t), num(m[base]), num(m[base + 1]), num(m[base + 2])])
            .collect();
        out.write_csv("distance.csv", &["t", "dist", "theta_opt", "x0_opt"], &rows)?;
    }
    let width = rec.snapshots.len().to_string().len().max(5);
    for (i, s) in rec.snapshots.iter().enumerate() {
        let mut comments = out.header().to_vec();
        comments.push(format!("t {}", num(s.t)));
        out.write(&format!("snapshots/snapshot_{i:0width$}.txt"), &write_snapshot(&s.field, &comments))?;
    }
    out.write_json(
        "summary.json",
        &SummaryFile { summary: &summary, monitor_columns: &rec.monitor_columns, snapshots: rec.snapshots.len(), config: &cfg },
    )?;
    let report = format!(
        "steps {}  drift Q {:.3e}  M {:.3e}  E {:.3e}{}\n",
        summary.steps,
        summary.drift_q,
        summary.drift_m,
        summary.drift_e,
        summary.max_deviation.map_or(String::new(), |d| format!("  max dev {d:.3e}")),
    );
    if !(summary.drift_q.is_finite() && summary.drift_m.is_finite() && summary.drift_e.is_finite()) {
        return Err(CliError::Numerical("non-finite conservation drift".into()));
    }
    Ok(Outcome { pass: true, report })
}
