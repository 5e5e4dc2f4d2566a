#![no_main]

use edl::io::{parse_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = parse_json(text) {
        let again = parse_json(&to_json(&d)).expect("serialized output parses");
        assert_eq!(again, d);
    }
});
