//! Orbits of the planar map `Z' = Z - E psi - c psi^3, psi' = psi + Z'`:
//! fixed points and their stability, a bounded orbit inside the stable
//! island, and a divergent one outside it. Run with:
//!
//! ```text
//! cargo run --example map_orbit
//! ```

use dnls::classify::{classify_orbit, ClassifyConfig};
use dnls::map::{fixed_points, iterate, step_jacobian, MapState, OrbitStatus};

fn main() {
    let (c, e) = (1.0, -1.2);
    println!("map at c = {c}, E = {e}");
    for fp in fixed_points(c, e) {
        println!(
            "  fixed point (Z, psi) = ({:.4}, {:.4}): trace {:.4} -> {:?}",
            fp.state.z, fp.state.psi, fp.trace, fp.stability
        );
    }
    println!(
        "  one-step Jacobian det at psi = 0.7: {:.16}",
        step_jacobian(0.7, c, e).det()
    );
    println!();

    let cfg = ClassifyConfig::default();
    for psi0 in [1.05, 1.205, 1.4] {
        let orbit = iterate(MapState::new(0.0, psi0), c, e, 2000, 1e8);
        let portrait = classify_orbit(&orbit, &cfg);
        let status = match orbit.status {
            OrbitStatus::Completed => "completed".to_string(),
            OrbitStatus::Diverged { step } => format!("diverged at step {step}"),
        };
        println!(
            "orbit from (0, {psi0}): {status}, {} points, {} clusters -> {}",
            orbit.states.len(),
            portrait.clusters.len(),
            portrait.class
        );
    }
    println!();
    println!(
        "the island sits around psi* = sqrt(-E/c) = {:.4};",
        (1.2f64).sqrt()
    );
    println!("smooth invariant loops read quasiperiodic, resonance chains");
    println!("leave real gaps (read chaotic), and orbits outside escape");
}
