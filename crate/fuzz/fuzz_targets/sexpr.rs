#![no_main]

use arithext::forms::parse;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse(s) {
        let printed = e.to_string();
        let again = parse(&printed).expect("printed expression reparses");
        assert_eq!(again.to_string(), printed);
    }
});
