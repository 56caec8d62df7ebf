//! Report JSON: decoding never panics and decoded reports survive a
//! re-encode unchanged.
#![no_main]
use fraclap_cli::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(report) = serde_json::from_slice::<Report>(data) else {
        return;
    };
    let again: Report = serde_json::from_str(&report.to_json()).expect("re-encoded report decodes");
    assert_eq!(again, report);
    let _ = report.to_csv();
});
