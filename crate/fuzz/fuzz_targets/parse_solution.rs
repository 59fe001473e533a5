#![no_main]

use libfuzzer_sys::fuzz_target;
use pellroot::PellSolution;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sol) = serde_json::from_str::<PellSolution>(text) {
        assert_eq!(pellroot::pell::residual(sol.p(), sol.x(), sol.y()), 1.into());
    }
});
