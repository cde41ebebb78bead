use hankel_lab::{
    h2_eigen_residual, hs_identity_rational, hs_refinement, kronecker_range_check, lax_identity_residual,
    leading_svd, rational_corpus, soliton_corpus, spectrum_au, traveling_wave_identity_residual, HankelOperator,
    RANK_THRESHOLD,
};
use hardy_core::{
    grid_wave_parameters, make_soliton, synth_rational, traveling_wave_residual, Complex64, FrequencyGrid, PoleTerm,
    RationalSymbol, SolitonParams, SpectralField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use szego_variational::gn_ratio;

use super::{check_schema, Outcome};
use crate::error::{CliError, Result};
use crate::manifest::ExperimentManifest;
use crate::output::{num, OutputDir};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonEntry {
    pub amplitude: Complex64,
    pub pole: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub schema_version: u32,
    pub length: f64,
    pub points: usize,
    /// Frequency cutoff and size for operators built from exact symbols.
    pub cutoff: f64,
    pub rational_size: usize,
    /// Size for operators built from grid fields; defaults to a quarter of the points.
    pub field_size: Option<usize>,
    pub solitons: Vec<SolitonEntry>,
    pub symbols: Vec<Vec<PoleTerm>>,
    pub random_fields: usize,
    /// Replaces the frequency in the traveling-wave checks (fault injection).
    pub omega_override: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            length: 256.0,
            points: 4096,
            cutoff: 40.0,
            rational_size: 2048,
            field_size: None,
            solitons: soliton_corpus().into_iter().map(|(amplitude, pole)| SolitonEntry { amplitude, pole }).collect(),
            symbols: rational_corpus().into_iter().map(|s| s.terms().to_vec()).collect(),
            random_fields: 1000,
            omega_override: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "==")]
    Equal,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::Equal => "==",
        }
    }

    fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::AtMost => value <= threshold,
            Relation::AtLeast => value >= threshold,
            Relation::Below => value < threshold,
            Relation::Equal => value == threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRow {
    fn new(name: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> Self {
        Self { name: name.into(), value, relation, threshold, pass: relation.holds(value, threshold), error: None }
    }

    fn failed(name: impl Into<String>, relation: Relation, threshold: f64, error: String) -> Self {
        Self { name: name.into(), value: f64::NAN, relation, threshold, pass: false, error: Some(error) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub status: &'static str,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub checks: Vec<CheckRow>,
}

type Check = (String, Relation, f64, std::result::Result<f64, String>);

fn rows(checks: Vec<Check>) -> Vec<CheckRow> {
    checks
        .into_iter()
        .map(|(name, rel, thr, v)| match v {
            Ok(v) => CheckRow::new(name, v, rel, thr),
            Err(e) => CheckRow::failed(name, rel, thr, e),
        })
        .collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn soliton_checks(i: usize, s: &SolitonEntry, cfg: &VerifyConfig, grid: &FrequencyGrid, size: usize) -> Vec<Check> {
    let tag = |what: &str| format!("soliton[{i}].{what}");
    let built = SolitonParams::new(s.amplitude, s.pole).and_then(|p| Ok((p, make_soliton(s.amplitude, s.pole, grid)?.1)));
    let (params, u) = match built {
        Ok(x) => x,
        Err(e) => return vec![(tag("build"), Relation::AtMost, 0.0, Err(e.to_string()))],
    };
    let wave = grid_wave_parameters(&u).map_err(|e| e.to_string());
    let mut out: Vec<Check> = Vec::new();
    let cons = u.conserved_quantities().map_err(|e| e.to_string());
    out.push((tag("closed_form_q"), Relation::AtMost, 1e-3, cons.clone().map(|c| rel_err(c.q, params.q))));
    out.push((tag("closed_form_e"), Relation::AtMost, 1e-3, cons.map(|c| rel_err(c.e, params.e))));
    let omega_used = |w: f64| cfg.omega_override.unwrap_or(w);
    out.push((
        tag("traveling_wave_residual"),
        Relation::AtMost,
        1e-6,
        wave.clone().map(|(c, w)| traveling_wave_residual(&u, c, omega_used(w))),
    ));
    out.push((
        tag("traveling_wave_identity"),
        Relation::AtMost,
        1e-6,
        wave.clone().and_then(|(c, w)| traveling_wave_identity_residual(&u, c, omega_used(w), size).map_err(|e| e.to_string())),
    ));
    out.push((tag("lax_identity"), Relation::AtMost, 1e-8, lax_identity_residual(&u, size).map_err(|e| e.to_string())));
    out.push((tag("gn_ratio_minus_one"), Relation::AtMost, 1e-6, gn_ratio(&u).map(|r| (r - 1.0).abs()).map_err(|e| e.to_string())));
    let au = wave.clone().and_then(|(c, w)| spectrum_au(&u, c, size).map(|s| (s, w / c)).map_err(|e| e.to_string()));
    out.push((tag("au_lowest_error"), Relation::AtMost, 1e-3, au.clone().map(|(s, ratio)| (s.lowest() + ratio).abs())));
    out.push((tag("au_negative_count"), Relation::Equal, 1.0, au.clone().map(|(s, _)| s.negative_count as f64)));
    out.push((tag("au_overlap"), Relation::AtLeast, 0.999, au.map(|(s, _)| s.overlap)));
    let h = HankelOperator::from_rational(&params.symbol(), cfg.cutoff, cfg.rational_size).map_err(|e| e.to_string());
    // rank one on the midpoint nodes: s_h = h |C| / (2 sinh(r h)), tending to |C| / (2 r)
    let sv = h.clone().map(|h| {
        let step = h.step();
        params.a * step / (2.0 * (params.r * step).sinh())
    });
    out.push((
        tag("h2_eigen_residual"),
        Relation::AtMost,
        1e-10,
        h.clone().and_then(|h| sv.clone().map(|s| h2_eigen_residual(&params.symbol(), &h, s) / (s * s))),
    ));
    out.push((
        tag("takagi_value_error"),
        Relation::AtMost,
        1e-10,
        h.and_then(|h| leading_svd(h.to_dense().as_ref(), 1).map_err(|e| e.to_string()))
            .and_then(|l| sv.map(|s| rel_err(l.values[0], s))),
    ));
    out
}

fn symbol_checks(j: usize, terms: &[PoleTerm], cfg: &VerifyConfig, grid: &FrequencyGrid, size: usize) -> Vec<Check> {
    let tag = |what: &str| format!("symbol[{j}].{what}");
    let sym = match RationalSymbol::new(terms.to_vec()) {
        Ok(s) => s,
        Err(e) => return vec![(tag("build"), Relation::AtMost, 0.0, Err(e.to_string()))],
    };
    let mut out: Vec<Check> = Vec::new();
    let kr = HankelOperator::from_rational(&sym, cfg.cutoff, cfg.rational_size)
        .and_then(|h| kronecker_range_check(&sym, &h, RANK_THRESHOLD))
        .map_err(|e| e.to_string());
    out.push((tag("rank_minus_degree"), Relation::Equal, 0.0, kr.clone().map(|r| r.rank as f64 - sym.degree() as f64)));
    out.push((tag("gap_ratio"), Relation::AtLeast, 1e6, kr.clone().map(|r| r.gap_ratio)));
    out.push((
        tag("range_basis_residual"),
        Relation::AtMost,
        1e-6,
        kr.clone().map(|r| r.basis_residuals.iter().copied().fold(0.0, f64::max)),
    ));
    out.push((tag("symbol_range_residual"), Relation::AtMost, 1e-6, kr.map(|r| r.symbol_residual)));
    let hs = hs_refinement(&sym, cfg.cutoff, cfg.rational_size, 3).map_err(|e| e.to_string());
    out.push((
        tag("hs_refinement_ratio"),
        Relation::Below,
        1.0,
        hs.map(|r| (r[1] / r[0]).max(r[2] / r[1])),
    ));
    let u = synth_rational(&sym, grid);
    out.push((tag("lax_identity"), Relation::AtMost, 1e-8, lax_identity_residual(&u, size).map_err(|e| e.to_string())));
    let gn = gn_ratio(&u).map_err(|e| e.to_string());
    if sym.degree() == 1 && sym.terms().len() == 1 {
        out.push((tag("gn_ratio_minus_one"), Relation::AtMost, 1e-6, gn.map(|r| (r - 1.0).abs())));
    } else {
        out.push((tag("gn_ratio"), Relation::Below, 1.0 - 1e-6, gn));
    }
    out
}

fn global_checks(cfg: &VerifyConfig, grid: &FrequencyGrid, seed: u64) -> Vec<Check> {
    let unit = RationalSymbol::simple(Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)).expect("valid symbol");
    let hs = HankelOperator::from_rational(&unit, cfg.cutoff, cfg.rational_size)
        .map(|h| hs_identity_rational(&unit, &h))
        .map_err(|e| e.to_string());
    let double = RationalSymbol::power(Complex64::new(0.0, -1.0), 2).expect("valid symbol");
    let gn2 = gn_ratio(&synth_rational(&double, grid)).map(|r| (r - 5.0 / 6.0).abs()).map_err(|e| e.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: std::result::Result<f64, String> = Ok(0.0);
    for _ in 0..cfg.random_fields {
        let band = rng.gen_range(1..=grid.modes().min(400));
        let u = SpectralField::random_band_limited(*grid, band, &mut rng);
        worst = worst.and_then(|w| gn_ratio(&u).map(|r| w.max(r)).map_err(|e| e.to_string()));
    }
    let h2 = HankelOperator::from_rational(&unit, cfg.cutoff, cfg.rational_size)
        .map(|h| h2_eigen_residual(&unit, &h, 0.5))
        .map_err(|e| e.to_string());
    let top = HankelOperator::from_rational(&unit, cfg.cutoff, cfg.rational_size)
        .and_then(|h| leading_svd(h.to_dense().as_ref(), 1))
        .map(|l| rel_err(l.values[0], 0.5))
        .map_err(|e| e.to_string());
    let mut out = vec![
        ("unit_soliton.hs_identity".to_string(), Relation::AtMost, 1e-4, hs),
        ("unit_soliton.h2_eigen_residual".to_string(), Relation::AtMost, 1e-4, h2),
        ("unit_soliton.takagi_value_error".to_string(), Relation::AtMost, 1e-4, top),
        ("double_pole.gn_ratio_error".to_string(), Relation::AtMost, 1e-4, gn2),
    ];
    if cfg.random_fields > 0 {
        out.push(("random_fields.max_gn_ratio".to_string(), Relation::AtMost, 1.0 + 1e-9, worst));
    }
    out
}

pub fn run(manifest: &ExperimentManifest) -> Result<Outcome> {
    let cfg: VerifyConfig = manifest.typed()?;
    check_schema(cfg.schema_version, SCHEMA_VERSION)?;
    let grid = FrequencyGrid::new(cfg.length, cfg.points)?;
    let size = cfg.field_size.unwrap_or(grid.modes() / 2);
    if size == 0 || 2 * size > grid.modes() + 1 {
        return Err(CliError::Config(format!("field_size must be in 1..={}", (grid.modes() + 1) / 2)));
    }
    if !(cfg.cutoff.is_finite() && cfg.cutoff > 0.0) || cfg.rational_size == 0 {
        return Err(CliError::Config("cutoff must be positive and rational_size at least 1".into()));
    }
    let mut out = OutputDir::create(manifest)?;
    let report = if cfg.solitons.is_empty() && cfg.symbols.is_empty() {
        VerifyReport {
            status: "FAIL",
            passed: 0,
            failed: 0,
            note: Some("no checks run: the corpus is empty".into()),
            checks: Vec::new(),
        }
    } else {
        let mut checks: Vec<CheckRow> = Vec::new();
        let sol: Vec<Vec<CheckRow>> = cfg
            .solitons
            .par_iter()
            .enumerate()
            .map(|(i, s)| rows(soliton_checks(i, s, &cfg, &grid, size)))
            .collect();
        checks.extend(sol.into_iter().flatten());
        let sym: Vec<Vec<CheckRow>> = cfg
            .symbols
            .par_iter()
            .enumerate()
            .map(|(j, t)| rows(symbol_checks(j, t, &cfg, &grid, size)))
            .collect();
        checks.extend(sym.into_iter().flatten());
        checks.extend(rows(global_checks(&cfg, &grid, manifest.seed)));
        let failed = checks.iter().filter(|c| !c.pass).count();
        VerifyReport {
            status: if failed == 0 { "PASS" } else { "FAIL" },
            passed: checks.len() - failed,
            failed,
            note: None,
            checks,
        }
    };
    let table: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                num(c.value),
                c.relation.symbol().to_string(),
                num(c.threshold),
                if c.pass { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    out.write_csv("verify.csv", &["check", "value", "relation", "threshold", "status"], &table)?;
    out.write_json("verify.json", &report)?;
    let mut text = String::new();
    for r in &table {
        text.push_str(&format!("{:<40} {:>24} {:>2} {:<12} {}\n", r[0], r[1], r[2], r[3], r[4]));
    }
    match &report.note {
        Some(n) => text.push_str(&format!("FAIL: {n}\n")),
        None => text.push_str(&format!("{}: {} passed, {} failed\n", report.status, report.passed, report.failed)),
    }
    Ok(Outcome { pass: report.status == "PASS", report: text })
}
