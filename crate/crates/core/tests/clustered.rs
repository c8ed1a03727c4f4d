//! Orbits whose roots crowd an endpoint, or whose flag solutions differ in
//! size by many orders of magnitude, must still pass every operator check.

use lame_bethe::pipeline::{verify_point, Level};
use lame_bethe::solver::{solve_stieltjes_real, SolveOptions};
use lame_bethe::WeightSystem;

fn all_orbits_verify(z: &[f64], m: &[f64], l: usize) {
    let ws = WeightSystem::classical_real(z, m, l).unwrap();
    let set = solve_stieltjes_real(&ws, &SolveOptions::default()).unwrap();
    assert!(!set.orbits.is_empty());
    for cp in &set.orbits {
        let rep = verify_point(&ws, &cp.coords, Level::All, 1e-10, 0).unwrap();
        assert!(rep.passed, "{:?}: {:?}", cp.coords, rep.failures);
    }
}

#[test]
fn roots_next_to_a_weak_charge() {
    // a charge of 0.27 at 2.054 pulls roots within a few thousandths of it
    all_orbits_verify(
        &[-1.3098285401015142, 2.054101123107137, 2.403386180548523, 3.8898017449189446],
        &[-1.4521149306626098, -0.2664890230686119, -2.8302184479493393, -2.4176905908233493],
        5,
    );
}

#[test]
fn strong_charges_with_widely_scaled_solutions() {
    all_orbits_verify(
        &[-4.089031037029258, 0.8828672161461508, 3.974793639603842, 4.343390481310296],
        &[-2.912595215722033, -2.899543388482251, -2.7725234125293077, -1.431679626288987],
        1,
    );
}
