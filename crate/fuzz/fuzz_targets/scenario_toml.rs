#![no_main]

use arithext_cli::parse_scenario_toml;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_scenario_toml(s);
});
