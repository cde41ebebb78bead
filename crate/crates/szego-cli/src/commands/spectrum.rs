use hankel_lab::{leading_svd, spectrum_au, write_operator, HankelOperator};
use hardy_core::{grid_wave_parameters, make_soliton, read_snapshot, synth_rational, Complex64, FrequencyGrid, PoleTerm, RationalSymbol, SpectralField};
use serde::{Deserialize, Serialize};

use super::{check_schema, Outcome};
use crate::error::{CliError, Result};
use crate::manifest::ExperimentManifest;
use crate::output::{num, OutputDir};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Soliton { amplitude: Complex64, pole: Complex64 },
    Rational { terms: Vec<PoleTerm> },
    /// Snapshot file in the field text format.
    File { path: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub schema_version: u32,
    pub length: f64,
    pub points: usize,
    pub source: Source,
    /// Operator size; defaults to a quarter of the points.
    pub size: Option<usize>,
    /// Speed in `D - T/c`; defaults to `Q / 2 pi` of the field.
    pub speed: Option<f64>,
    pub top: usize,
    pub export_operator: bool,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            length: 256.0,
            points: 4096,
            source: Source::Soliton { amplitude: Complex64::new(1.0, 0.0), pole: Complex64::new(0.0, -1.0) },
            size: None,
            speed: None,
            top: 8,
            export_operator: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct SpectrumReport {
    size: usize,
    speed: f64,
    omega_grid: f64,
    lowest_eigenvalue: f64,
    expected_lowest: f64,
    negative_count: usize,
    overlap: f64,
    max_positive_gap: f64,
    takagi_values: Vec<f64>,
}

fn load_field(source: &Source, grid: &FrequencyGrid) -> Result<SpectralField> {
    Ok(match source {
        Source::Soliton { amplitude, pole } => make_soliton(*amplitude, *pole, grid)?.1,
        Source::Rational { terms } => synth_rational(&RationalSymbol::new(terms.clone())?, grid),
        Source::File { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let u = read_snapshot(&text)?;
            grid.ensure_same(u.grid())?;
            u
        }
    })
}

pub fn run(manifest: &ExperimentManifest) -> Result<Outcome> {
    let cfg: SpectrumConfig = manifest.typed()?;
    check_schema(cfg.schema_version, SCHEMA_VERSION)?;
    let grid = FrequencyGrid::new(cfg.length, cfg.points)?;
    let u = load_field(&cfg.source, &grid)?;
    let size = cfg.size.unwrap_or(grid.modes() / 2);
    let (c_grid, w_grid) = grid_wave_parameters(&u)?;
    let speed = cfg.speed.unwrap_or(c_grid);
    let au = spectrum_au(&u, speed, size)?;
    let h = HankelOperator::from_field(&u, size)?;
    let takagi = leading_svd(h.to_dense().as_ref(), cfg.top)?.values;

    let mut out = OutputDir::create(manifest)?;
    let pts: Vec<(f64, f64)> = au.eigenvalues.iter().enumerate().map(|(i, e)| (i as f64, *e)).collect();
    out.write_dat("au_eigenvalues.dat", ["index", "eigenvalue"], &pts)?;
    let pts: Vec<(f64, f64)> = takagi.iter().enumerate().map(|(i, s)| ((i + 1) as f64, *s)).collect();
    out.write_dat("takagi.dat", ["index", "value"], &pts)?;
    if cfg.export_operator {
        out.write("operator.txt", &write_operator(&h.to_matrix(), out.header()))?;
    }
    let report = SpectrumReport {
        size,
        speed,
        omega_grid: w_grid,
        lowest_eigenvalue: au.lowest(),
        expected_lowest: -w_grid / speed,
        negative_count: au.negative_count,
        overlap: au.overlap,
        max_positive_gap: au.max_positive_gap,
        takagi_values: takagi,
    };
    let text = format!(
        "lowest eigenvalue {}  (-omega/c = {})  negative {}  overlap {}\nleading Takagi values {}\n",
        num(report.lowest_eigenvalue),
        num(report.expected_lowest),
        report.negative_count,
        num(report.overlap),
        report.takagi_values.iter().map(|s| num(*s)).collect::<Vec<_>>().join(" ")
    );
    out.write_json("spectrum.json", &report)?;
    Ok(Outcome { pass: true, report: text })
}
