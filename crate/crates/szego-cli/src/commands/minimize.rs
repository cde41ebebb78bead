use hardy_core::{write_snapshot, FrequencyGrid};
use serde::{Deserialize, Serialize};
use szego_variational::{cylinder_distance, gn_ratio, minimize_momentum, random_initial_field, CylinderSpec, MinimizeOptions};

use super::{check_schema, Outcome};
use crate::error::{CliError, Result};
use crate::manifest::ExperimentManifest;
use crate::output::{num, OutputDir};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinimizeConfig {
    pub schema_version: u32,
    pub length: f64,
    pub points: usize,
    pub q: f64,
    pub e: f64,
    /// Number of random starts; start `i` uses seed `seed + i`.
    pub starts: usize,
    pub options: MinimizeOptions,
    pub distance_tolerance: f64,
    pub momentum_tolerance: f64,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            length: 256.0,
            points: 4096,
            q: std::f64::consts::PI,
            e: std::f64::consts::FRAC_PI_2,
            starts: 5,
            options: MinimizeOptions::default(),
            distance_tolerance: 1e-3,
            momentum_tolerance: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct StartSummary {
    seed: u64,
    converged: bool,
    iterations: usize,
    m_final: f64,
    m_expected: f64,
    gn_ratio: f64,
    distance: f64,
    theta_opt: f64,
    x0_opt: f64,
    pass: bool,
}

#[derive(Debug, Clone, Serialize)]
struct Summary {
    cylinder: CylinderSpec,
    starts: Vec<StartSummary>,
    final_distance: f64,
    pass: bool,
}

pub fn run(manifest: &ExperimentManifest) -> Result<Outcome> {
    let cfg: MinimizeConfig = manifest.typed()?;
    check_schema(cfg.schema_version, SCHEMA_VERSION)?;
    if cfg.starts == 0 {
        return Err(CliError::Config("starts must be at least 1".into()));
    }
    let grid = FrequencyGrid::new(cfg.length, cfg.points)?;
    let spec = CylinderSpec::from_targets(cfg.q, cfg.e)?;
    let m_expected = std::f64::consts::PI * cfg.e / cfg.q;
    let mut out = OutputDir::create(manifest)?;
    let mut starts = Vec::new();
    for i in 0..cfg.starts {
        let seed = manifest.seed.wrapping_add(i as u64);
        let init = random_initial_field(&grid, seed)?;
        let res = minimize_momentum(cfg.q, cfg.e, &init, &cfg.options)?;
        let m_final = res.field.conserved_quantities()?.m;
        let d = cylinder_distance(&res.field, &spec)?;
        let pass = res.converged
            && d.distance <= cfg.distance_tolerance
            && (m_final - m_expected).abs() <= cfg.momentum_tolerance;
        let rows: Vec<Vec<String>> = res
            .history
            .iter()
            .map(|h| vec![h.iteration.to_string(), num(h.m), num(h.gradient_norm), num(h.step)])
            .collect();
        out.write_csv(&format!("history_{i}.csv"), &["iteration", "M", "gradient_norm", "step"], &rows)?;
        let pts: Vec<(f64, f64)> = res.history.iter().map(|h| (h.iteration as f64, h.gradient_norm)).collect();
        out.write_dat(&format!("history_{i}.dat"), ["iteration", "gradient_norm"], &pts)?;
        let mut comments = out.header().to_vec();
        comments.push(format!("minimizer start {i} seed {seed}"));
        out.write(&format!("minimizer_{i}.txt"), &write_snapshot(&res.field, &comments))?;
        starts.push(StartSummary {
            seed,
            converged: res.converged,
            iterations: res.iterations(),
            m_final,
            m_expected,
            gn_ratio: gn_ratio(&res.field)?,
            distance: d.distance,
            theta_opt: d.theta,
            x0_opt: d.x0,
            pass,
        });
    }
    let final_distance = starts.iter().map(|s| s.distance).fold(0.0, f64::max);
    let pass = starts.iter().all(|s| s.pass);
    let mut text = String::new();
    for s in &starts {
        text.push_str(&format!(
            "seed {:<6} iterations {:<6} M-m* {:<24} distance {:<24} {}\n",
            s.seed,
            s.iterations,
            num(s.m_final - s.m_expected),
            num(s.distance),
            if s.pass { "PASS" } else { "FAIL" }
        ));
    }
    out.write_json("summary.json", &Summary { cylinder: spec, starts, final_distance, pass })?;
    Ok(Outcome { pass, report: text })
}
