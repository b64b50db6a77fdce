//! The two-site chain solved in closed form: symmetric and antisymmetric
//! branches at every coupling, and the symmetry-breaking branch that
//! forks off above coupling 4. Run with:
//!
//! ```text
//! cargo run --example two_site_exact
//! ```

use dnls::lattice::{residual, Bc, LatticeWave, ModelParams};
use dnls::perturbation::{surd_series, two_site_exact, TwoSiteBranch};

fn show(label: &str, c: f64, b: &TwoSiteBranch) {
    let wave = LatticeWave::new(b.vector.to_vec(), Bc::Periodic).unwrap();
    let params = ModelParams::new(c, b.energy, 2, Bc::Periodic).unwrap();
    let res = residual(&wave, &params)
        .unwrap()
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    println!(
        "  {label:<18} E = {:>12.8}  psi = ({:>12.9}, {:>12.9})  |residual| = {res:.1e}",
        b.energy, b.vector[0], b.vector[1]
    );
}

fn main() {
    for c in [3.0, 4.0, 4.5, 5.0, 10.0, 100.0] {
        let sol = two_site_exact(c);
        println!("c = {c}");
        show("symmetric", c, &sol.symmetric);
        show("antisymmetric", c, &sol.antisymmetric);
        match (&sol.symmetry_breaking, sol.alpha) {
            (Some(b), Some(alpha)) => {
                show("symmetry-breaking", c, b);
                println!("  asymmetry alpha = {alpha:.9}");
            }
            _ => println!("  no symmetry-breaking branch (needs c > 4)"),
        }
        println!();
    }

    println!("strong-coupling series vs the exact branch at c = 100:");
    let exact = two_site_exact(100.0).symmetry_breaking.unwrap();
    for terms in 1..=4 {
        let (large, small) = surd_series(100.0, terms).unwrap();
        println!(
            "  {terms} term(s): large dev {:.2e}, small dev {:.2e}",
            (large - exact.vector[0]).abs(),
            (small - exact.vector[1]).abs()
        );
    }
}
