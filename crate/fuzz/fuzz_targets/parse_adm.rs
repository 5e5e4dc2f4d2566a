#![no_main]

use edl::io::{parse_adm, to_adm};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = parse_adm(text) {
        // Accepted input is already canonical text.
        assert_eq!(to_adm(&d), text);
    }
});
