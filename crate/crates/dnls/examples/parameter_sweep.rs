//! Sweep the coupling on one fixed geometry and read each converged
//! state through two lenses: the sharp default clustering tolerance,
//! and the coarse 4%-of-span radius that merges near-revisits. The
//! seed repeats every 25 sites, so the sharp lens sees an exact
//! 25-point cycle at every coupling; the coarse lens grades how that
//! cycle sits in the plane. Couplings run in parallel, one thread
//! each. Run with:
//!
//! ```text
//! cargo run --example parameter_sweep
//! ```

use dnls::classify::{classify_points, loop_gap_statistic, ClassifyConfig, ClusterTol};
use dnls::runner::run_sweep;
use dnls::scenario::builtin;

fn main() {
    let mut s = builtin("fig4").unwrap();
    s.set("c", "27, 29, 30, 31, 32, 34, 36, 50, 84").unwrap();
    s.expect_clusters = None;
    s.expect_class = None;

    let coarse = ClassifyConfig {
        cluster_tol: ClusterTol::Relative(0.04),
        ..ClassifyConfig::default()
    };

    let runs = run_sweep(&s, None).unwrap();
    println!(
        "{:>5} {:>9} {:>6} {:>18} {:>20} {:>9}",
        "c", "E0", "iters", "sharp lens", "4% lens", "loop gap"
    );
    for run in &runs {
        let Some(p) = &run.portrait else {
            println!(
                "{:>5} {:>9.4} {:>6} {:>18} {:>20} {:>9}",
                run.c,
                run.e0,
                run.result.records.len(),
                run.result.outcome.to_string(),
                "-",
                "-"
            );
            continue;
        };
        let smeared = classify_points(&p.points, &coarse);
        let centers: Vec<(f64, f64)> = smeared.clusters.iter().map(|c| c.center).collect();
        println!(
            "{:>5} {:>9.4} {:>6} {:>18} {:>20} {:>9.2}",
            run.c,
            run.e0,
            run.result.records.len(),
            format!("{} [{}]", p.class, p.clusters.len()),
            format!("{} [{}]", smeared.class, smeared.clusters.len()),
            loop_gap_statistic(&centers)
        );
    }
    println!();
    println!("every converged state is the same exact 25-point cycle; what");
    println!("changes is where those points sit. merged to 4% of the span");
    println!("they hug a closed loop at the weak end (small loop gap), scatter");
    println!("into gap-ridden clumps through the middle, and settle back onto");
    println!("a loop once the spots decouple. at c = 30 the linearization goes");
    println!("singular mid-run and the state never settles -- a structural");
    println!("boundary sitting right between the two regimes.");
}
