#![no_main]

use edl::search::SearchReport;
use edl::verify::VerificationReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<SearchReport>(data) {
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<SearchReport>(&text).unwrap(), r);
        for c in r.iso_classes.iter().filter(|c| c.adm.len() < 5000) {
            let _ = edl::io::parse_adm(&c.adm);
        }
    }
    if let Ok(r) = serde_json::from_slice::<VerificationReport>(data) {
        let _ = r.summary_row();
        let _ = r.normalized_json();
    }
});
