#![no_main]

use arithext::rational::Rat;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = s.parse::<Rat>() {
        assert_eq!(q.to_string().parse::<Rat>().unwrap(), q);
    }
});
