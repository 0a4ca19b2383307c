#![no_main]

use arithext::fibered::{kernel_rank_check, FiberConfig, DEFAULT_SEED};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(cfg) = serde_json::from_slice::<FiberConfig>(data) else { return };
    if cfg.validate().is_ok() && cfg.r() <= 16 {
        let _ = kernel_rank_check(&cfg, DEFAULT_SEED);
    }
});
