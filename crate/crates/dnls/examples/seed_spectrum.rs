//! Seed patterns and their energy spectrum on a small ring: every
//! `(n, m, l)` class realizable on 12 sites with well-separated spots,
//! its strong-coupling limit energy `(2m + 4l - c) / n`, and the solved
//! continuation at coupling 100. Run with:
//!
//! ```text
//! cargo run --example seed_spectrum
//! ```

use dnls::lattice::{Bc, ModelParams};
use dnls::newton::{solve, SolveConfig};
use dnls::verify::pattern_battery;

fn main() {
    let c = 100.0;
    let cfg = SolveConfig::default();
    println!("12-site ring at c = {c}: one representative per (n, m, l)");
    println!(
        "{:>3} {:>3} {:>3}  {:>10}  {:>9}  {:>12}  {:>12}  layout",
        "n", "m", "l", "E0", "iters", "residual", "energy fn"
    );
    for pat in pattern_battery(12) {
        let e0 = pat.limit_energy(c);
        let params = ModelParams::new(c, e0, 12, Bc::Periodic).unwrap();
        let result = solve(&pat.build(), &params, &cfg).unwrap();
        let layout: String = pat
            .layout()
            .iter()
            .map(|s| match s {
                1 => '+',
                -1 => '-',
                _ => '.',
            })
            .collect();
        match result.state {
            Some(st) => println!(
                "{:>3} {:>3} {:>3}  {:>10.5}  {:>9}  {:>12.2e}  {:>12.6}  {layout}",
                pat.n(),
                pat.m(),
                pat.l(),
                e0,
                result.records.len(),
                st.residual_inf,
                st.hamiltonian
            ),
            None => println!(
                "{:>3} {:>3} {:>3}  {:>10.5}  {:>9}  {:>12}  {:>12}  {layout}",
                pat.n(),
                pat.m(),
                pat.l(),
                e0,
                result.records.len(),
                format!("{}", result.outcome),
                "-"
            ),
        }
    }
    println!();
    println!("the energy functional approaches c/(2n) as the coupling grows;");
    println!("at c = 100 and n = 1 that is {}", c / 2.0);
}
