#![no_main]

use libfuzzer_sys::fuzz_target;
use szego_cli::apply_override;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = std::str::from_utf8(data) else { return };
    let mut config = serde_json::json!({"grid": {"length": 256.0, "points": 4096}, "dt": 0.001});
    if apply_override(&mut config, spec).is_ok() {
        assert!(config.is_object());
    }
});
