#![no_main]

use arithext_cli::parse_scenario_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(sc) = parse_scenario_json(s) {
        let text = serde_json::to_string(&sc).unwrap();
        assert_eq!(parse_scenario_json(&text).unwrap(), sc);
    }
});
