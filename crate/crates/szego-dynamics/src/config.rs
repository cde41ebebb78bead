use hardy_core::{
    make_soliton, norm, read_snapshot, synth_rational, FrequencyGrid, NormKind, PoleTerm, RationalSymbol, SolitonParams,
    SpectralField,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DynamicsError, Result};
use crate::reference::make_circle_soliton;

pub const SCHEMA_VERSION: u32 = 1;

/// Upper bound on `N` accepted from configuration files.
pub const MAX_POINTS: usize = 1 << 22;

fn default_length() -> f64 {
    256.0
}
fn default_points() -> usize {
    4096
}
fn default_dt() -> f64 {
    1e-3
}
fn default_snapshot_stride() -> usize {
    1000
}
fn default_log_stride() -> usize {
    10
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub schema_version: u32,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub final_time: f64,
    #[serde(default = "default_snapshot_stride")]
    pub snapshot_stride: usize,
    #[serde(default = "default_log_stride")]
    pub log_stride: usize,
    pub initial: InitialCondition,
    #[serde(default)]
    pub monitors: MonitorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Soliton {
        amplitude: Complex64,
        pole: Complex64,
    },
    Rational {
        terms: Vec<PoleTerm>,
    },
    /// `soliton + delta * g / ||g||_{H^{1/2}}`.
    PerturbedSoliton {
        amplitude: Complex64,
        pole: Complex64,
        delta: f64,
        perturbation: Vec<PoleTerm>,
    },
    CircleSoliton {
        amplitude: Complex64,
        pole_disk: Complex64,
    },
    /// Random smooth field on the first `band` modes, rescaled to `int |u|^2 = mass`.
    Random {
        band: usize,
        seed: u64,
        mass: f64,
    },
    File {
        path: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    #[serde(default = "yes")]
    pub conservation: bool,
    /// `L^2` distance to the exact traveling wave (soliton and circle-soliton data).
    #[serde(default)]
    pub deviation: bool,
    /// Number of leading Hankel singular values per snapshot (0 disables).
    #[serde(default)]
    pub hankel_top: usize,
    /// Cylinder `(a, r)` for the `H^{1/2}` distance monitor.
    #[serde(default)]
    pub cylinder: Option<CylinderTarget>,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self { conservation: true, deviation: false, hankel_top: 0, cylinder: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderTarget {
    pub a: f64,
    pub r: f64,
}

/// Initial field plus the exact traveling wave it should follow, when known.
#[derive(Debug, Clone)]
pub struct InitialState {
    pub field: SpectralField,
    /// `(c, omega, u0)` of the exact wave.
    pub wave: Option<(f64, f64, SpectralField)>,
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| DynamicsError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn grid(&self) -> Result<FrequencyGrid> {
        if self.points > MAX_POINTS {
            return Err(DynamicsError::Config(format!("points: {} exceeds {MAX_POINTS}", self.points)));
        }
        FrequencyGrid::new(self.length, self.points).map_err(|e| DynamicsError::Config(e.to_string()))
    }

    /// Number of RK4 steps; `final_time` must be a whole number of steps.
    pub fn steps(&self) -> Result<usize> {
        let n = (self.final_time / self.dt).round();
        if !(n >= 1.0 && n < 1e12) || (n * self.dt - self.final_time).abs() > 1e-9 * self.final_time.abs() {
            return Err(DynamicsError::Config(format!(
                "final_time: {} is not a positive multiple of dt={}",
                self.final_time, self.dt
            )));
        }
        Ok(n as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DynamicsError::Config(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        self.grid()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(DynamicsError::Config(format!("dt: must be positive, got {}", self.dt)));
        }
        if !(self.final_time.is_finite() && self.final_time >= self.dt) {
            return Err(DynamicsError::Config(format!("final_time: must be >= dt, got {}", self.final_time)));
        }
        self.steps()?;
        if self.snapshot_stride == 0 {
            return Err(DynamicsError::Config("snapshot_stride: must be >= 1".into()));
        }
        if self.log_stride == 0 {
            return Err(DynamicsError::Config("log_stride: must be >= 1".into()));
        }
        if let Some(c) = self.monitors.cylinder {
            if !(c.a > 0.0 && c.r > 0.0 && c.a.is_finite() && c.r.is_finite()) {
                return Err(DynamicsError::Config("monitors.cylinder: a and r must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<InitialState> {
        let grid = self.grid()?;
        let cfg_err = |key: &str, e: &dyn std::fmt::Display| DynamicsError::Config(format!("initial.{key}: {e}"));
        match &self.initial {
            InitialCondition::Soliton { amplitude, pole } => {
                let (p, u) = make_soliton(*amplitude, *pole, &grid).map_err(|e| cfg_err("pole", &e))?;
                Ok(InitialState { wave: Some((p.speed, p.omega, u.clone())), field: u })
            }
            InitialCondition::Rational { terms } => {
                let sym = RationalSymbol::new(terms.clone()).map_err(|e| cfg_err("terms", &e))?;
                Ok(InitialState { field: synth_rational(&sym, &grid), wave: None })
            }
            InitialCondition::PerturbedSoliton { amplitude, pole, delta, perturbation } => {
                if !delta.is_finite() {
                    return Err(cfg_err("delta", &"must be finite"));
                }
                let (p, u) = make_soliton(*amplitude, *pole, &grid).map_err(|e| cfg_err("pole", &e))?;
                let sym = RationalSymbol::new(perturbation.clone()).map_err(|e| cfg_err("perturbation", &e))?;
                let g = synth_rational(&sym, &grid);
                let gn = norm(&g, NormKind::Sobolev(0.5))?;
                if gn == 0.0 {
                    return Err(cfg_err("perturbation", &"must be nonzero"));
                }
                let field = u.axpy(Complex64::new(delta / gn, 0.0), &g)?;
                Ok(InitialState { field, wave: Some((p.speed, p.omega, u)) })
            }
            InitialCondition::CircleSoliton { amplitude, pole_disk } => {
                let (c, w, u) = make_circle_soliton(*amplitude, *pole_disk, &grid)?;
                Ok(InitialState { wave: Some((c, w, u.clone())), field: u })
            }
            InitialCondition::Random { band, seed, mass } => {
                if !(mass.is_finite() && *mass > 0.0) || *band == 0 {
                    return Err(cfg_err("mass", &"band and mass must be positive"));
                }
                let u = SpectralField::random_band_limited(grid, *band, &mut ChaCha8Rng::seed_from_u64(*seed));
                let q = u.conserved_quantities()?.q;
                Ok(InitialState { field: u.scale(Complex64::new((mass / q).sqrt(), 0.0)), wave: None })
            }
            InitialCondition::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| DynamicsError::Io { path: path.clone(), msg: e.to_string() })?;
                let u = read_snapshot(&text).map_err(|e| cfg_err("path", &e))?;
                grid.ensure_same(u.grid()).map_err(|e| cfg_err("path", &e))?;
                Ok(InitialState { field: u, wave: None })
            }
        }
    }

    /// Soliton parameters when the initial data is a (possibly perturbed) soliton.
    pub fn soliton(&self) -> Option<SolitonParams> {
        match &self.initial {
            InitialCondition::Soliton { amplitude, pole } | InitialCondition::PerturbedSoliton { amplitude, pole, .. } => {
                SolitonParams::new(*amplitude, *pole).ok()
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOLITON: &str = r#"{
        "schema_version": 1,
        "length": 64, "points": 512, "dt": 0.01, "final_time": 1,
        "initial": {"kind": "soliton", "amplitude": [1, 0], "pole": [0, -1]}
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = SimulationConfig::from_json(SOLITON).unwrap();
        assert_eq!(cfg.steps().unwrap(), 100);
        assert!(cfg.monitors.conservation);
        let st = cfg.initial_state().unwrap();
        assert!(st.wave.is_some());
    }

    #[test]
    fn unknown_keys_are_named() {
        let bad = SOLITON.replace("\"dt\"", "\"dtt\"");
        let err = SimulationConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("dtt"), "{err}");
        let bad = SOLITON.replace("\"pole\"", "\"pol\"");
        let err = SimulationConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("pol"), "{err}");
    }

    #[test]
    fn rejects_bad_values() {
        for (from, to) in [
            ("\"schema_version\": 1", "\"schema_version\": 2"),
            ("\"dt\": 0.01", "\"dt\": -0.01"),
            ("\"final_time\": 1", "\"final_time\": 0.001"),
            ("\"final_time\": 1", "\"final_time\": 1.005"),
            ("\"points\": 512", "\"points\": 511"),
        ] {
            assert!(SimulationConfig::from_json(&SOLITON.replace(from, to)).is_err(), "{to}");
        }
        let upper = SOLITON.replace("[0, -1]", "[0, 1]");
        assert!(SimulationConfig::from_json(&upper).unwrap().initial_state().is_err());
    }

    #[test]
    fn perturbation_has_requested_size() {
        let text = r#"{
            "schema_version": 1, "length": 64, "points": 512, "final_time": 1,
            "initial": {"kind": "perturbed_soliton", "amplitude": [1, 0], "pole": [0, -1], "delta": 0.01,
                        "perturbation": [{"pole": [0, -2], "coeffs": [[0, 0], [1, 0]]}]}
        }"#;
        let cfg = SimulationConfig::from_json(text).unwrap();
        let st = cfg.initial_state().unwrap();
        let (_, _, u0) = st.wave.unwrap();
        let d = norm(&st.field.sub(&u0).unwrap(), NormKind::Sobolev(0.5)).unwrap();
        assert!((d - 0.01).abs() < 1e-15);
    }

    #[test]
    fn random_initial_data_has_requested_mass() {
        let text = r#"{"schema_version": 1, "length": 64, "points": 512, "final_time": 1,
            "initial": {"kind": "random", "band": 32, "seed": 5, "mass": 3.0}}"#;
        let st = SimulationConfig::from_json(text).unwrap().initial_state().unwrap();
        assert!((st.field.conserved_quantities().unwrap().q - 3.0).abs() < 1e-12);
    }
}
