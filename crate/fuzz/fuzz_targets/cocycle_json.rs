#![no_main]

use std::sync::Arc;

use arithext::cech::{ConeCocycle, ConeCocycleDoc};
use arithext::forms::cover::DEFAULT_SEED;
use arithext::forms::{Cover, CoverSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = serde_json::from_slice::<ConeCocycleDoc>(data) else { return };
    let Some(spec): Option<CoverSpec> = Cover::builtin_spec(&doc.cover) else { return };
    let Ok(cover) = Cover::from_spec(&spec, DEFAULT_SEED, 16) else { return };
    if let Ok(c) = ConeCocycle::from_doc(&doc, Arc::new(cover)) {
        let _ = c.check(1e-10);
    }
});
