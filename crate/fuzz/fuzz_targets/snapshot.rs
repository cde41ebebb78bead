#![no_main]

use hardy_core::{read_snapshot, write_snapshot};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(u) = read_snapshot(text) {
        let again = read_snapshot(&write_snapshot(&u, &[])).expect("written snapshot must parse");
        assert_eq!(again, u);
    }
});
