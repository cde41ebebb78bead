#![no_main]

use hankel_lab::Provenance;
use hardy_core::NormKind;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(kind) = text.parse::<NormKind>() {
        let again: NormKind = kind.to_string().parse().expect("displayed norm must parse");
        assert_eq!(again, kind);
    }
    let _ = text.parse::<Provenance>();
});
