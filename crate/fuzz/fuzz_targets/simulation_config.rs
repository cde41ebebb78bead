#![no_main]

use libfuzzer_sys::fuzz_target;
use szego_dynamics::SimulationConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = SimulationConfig::from_json(text) {
        // validation must reject rather than panic
        let _ = cfg.validate();
        let _ = cfg.steps();
    }
});
