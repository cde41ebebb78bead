//! Replays the checked-in fuzz seeds through the parsers with the fuzz-target assertions.

use std::fs;
use std::path::PathBuf;

use hankel_lab::{read_operator, write_operator, Provenance};
use hardy_core::{read_snapshot, write_snapshot, NormKind};
use szego_cli::apply_override;
use szego_cli::commands::{minimize::MinimizeConfig, spectrum::SpectrumConfig, stability::StabilityConfig, verify::VerifyConfig};
use szego_dynamics::SimulationConfig;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn snapshot_seeds() {
    let mut parsed = 0;
    for text in seeds("snapshot") {
        if let Ok(u) = read_snapshot(&text) {
            assert_eq!(read_snapshot(&write_snapshot(&u, &[])).unwrap(), u);
            parsed += 1;
        }
    }
    assert!(parsed >= 1);
}

#[test]
fn operator_seeds() {
    let mut parsed = 0;
    for text in seeds("operator") {
        if let Ok(m) = read_operator(&text) {
            assert_eq!(m.entries.len(), m.size * m.size);
            assert_eq!(read_operator(&write_operator(&m, &[])).unwrap(), m);
            parsed += 1;
        }
    }
    assert!(parsed >= 1);
}

#[test]
fn simulation_config_seeds() {
    for text in seeds("simulation_config") {
        let cfg = SimulationConfig::from_json(&text).unwrap();
        assert!(cfg.steps().is_ok());
    }
}

#[test]
fn command_config_seeds() {
    for text in seeds("command_config") {
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let ok = [
            serde_json::from_value::<VerifyConfig>(value.clone()).is_ok(),
            serde_json::from_value::<StabilityConfig>(value.clone()).is_ok(),
            serde_json::from_value::<MinimizeConfig>(value.clone()).is_ok(),
            serde_json::from_value::<SpectrumConfig>(value).is_ok(),
        ];
        assert!(ok.iter().any(|b| *b), "{text}");
    }
}

#[test]
fn norm_kind_seeds() {
    for text in seeds("norm_kind") {
        if let Ok(kind) = text.parse::<NormKind>() {
            assert_eq!(kind.to_string().parse::<NormKind>().unwrap(), kind);
        }
        let _ = text.parse::<Provenance>();
    }
}

#[test]
fn override_seeds() {
    let mut accepted = 0;
    for spec in seeds("override") {
        let mut config = serde_json::json!({"grid": {"length": 256.0, "points": 4096}, "dt": 0.001});
        if apply_override(&mut config, &spec).is_ok() {
            assert!(config.is_object());
            accepted += 1;
        }
    }
    assert!(accepted >= 2);
}
