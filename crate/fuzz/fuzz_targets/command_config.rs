#![no_main]

use libfuzzer_sys::fuzz_target;
use szego_cli::commands::{minimize::MinimizeConfig, spectrum::SpectrumConfig, stability::StabilityConfig, verify::VerifyConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(value) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    let _ = serde_json::from_value::<VerifyConfig>(value.clone());
    let _ = serde_json::from_value::<StabilityConfig>(value.clone());
    let _ = serde_json::from_value::<MinimizeConfig>(value.clone());
    let _ = serde_json::from_value::<SpectrumConfig>(value);
});
