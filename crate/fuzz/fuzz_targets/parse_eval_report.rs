#![no_main]

use libfuzzer_sys::fuzz_target;
use pellroot::EvalReport;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(report) = EvalReport::from_json(text) {
        let again = EvalReport::from_json(&report.to_json()).expect("re-parse");
        assert_eq!(again, report);
    }
});
