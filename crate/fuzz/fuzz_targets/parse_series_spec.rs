#![no_main]

use libfuzzer_sys::fuzz_target;
use pellroot::SeriesSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = SeriesSpec::from_json(text) {
        // accepted specs are canonical, so they must round-trip
        let again = SeriesSpec::from_json(&spec.to_json()).expect("re-parse");
        assert_eq!(again, spec);
    }
});
