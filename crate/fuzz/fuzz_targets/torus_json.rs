#![no_main]

use arithext::tori::{self, PeriodLattice, UveClass};
use libfuzzer_sys::fuzz_target;

#[derive(serde::Deserialize)]
struct Input {
    lattice: PeriodLattice,
    class: UveClass,
}

fuzz_target!(|data: &[u8]| {
    let Ok(inp) = serde_json::from_slice::<Input>(data) else { return };
    let _ = tori::hodge_split(&inp.lattice, &inp.class);
    let _ = tori::unitary_lift(&inp.lattice, &inp.class);
    let _ = tori::is_torsion(&inp.class, 64, 1e-9);
    let _ = tori::conjugate_double(&inp.lattice, &inp.class);
    let _ = tori::real_monodromy_test(&inp.lattice, &inp.class, 1e-9);
});
