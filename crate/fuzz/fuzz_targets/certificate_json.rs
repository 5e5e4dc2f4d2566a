#![no_main]

use edl::search::{verify_witness, ExtremalCertificate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(cert) = serde_json::from_slice::<ExtremalCertificate>(data) {
        // Must reject or accept without panicking, whatever the claims.
        let verdict = verify_witness(&cert);
        assert_eq!(verdict.valid, verdict.mismatches.is_empty());
    }
});
