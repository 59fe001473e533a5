#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(entries) = pellroot::parse_corpus(text) {
            for e in entries.iter().take(4) {
                let _ = e.solution();
            }
        }
    }
});
