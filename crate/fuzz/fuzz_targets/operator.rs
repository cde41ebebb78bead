#![no_main]

use hankel_lab::{read_operator, write_operator};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = read_operator(text) {
        assert_eq!(m.entries.len(), m.size * m.size);
        let again = read_operator(&write_operator(&m, &[])).expect("written operator must parse");
        assert_eq!(again, m);
    }
});
