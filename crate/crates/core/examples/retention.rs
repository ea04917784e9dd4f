//! Stop-loss retention levels: the `R` with `E_Q[(R − S)^+]` equal to a
//! target, solved exactly on the piecewise-linear integral.
//!
//! cargo run --example retention

use coherent_surplus::allocation::worst_case_measure;
use coherent_surplus::coherent::Distortion;
use coherent_surplus::oracle::oracle_retention;
use coherent_surplus::prob::{ProbSpace, RandomVar};
use coherent_surplus::retention::RetentionProblem;

fn main() -> coherent_surplus::Result<()> {
    let space = ProbSpace::uniform(4);
    let s = RandomVar::new(vec![0.0, 1.0, 2.0, 4.0])?;
    let q0 = worst_case_measure(&space, &Distortion::power(2.0)?, &s)?;
    let problem = RetentionProblem::new(&space, s.clone(), q0.measure().clone(), 1.0)?;

    println!("stop-loss integral under Q0 = {:?}", q0.measure().weights());
    for x in [0.0, 1.0, 2.0, 3.0, 4.0, 5.0] {
        println!("  phi({x}) = {:.6}", problem.phi(x)?);
    }

    println!(
        "\n{:>8} {:>12} {:>12} {:>12} {:>8}",
        "target", "R", "bisection", "ceded", "beyond"
    );
    for target in [0.0, 0.1, 0.3125, 1.0, 1.4375, 2.0] {
        let sol = problem.with_target(target)?.solve();
        let check = oracle_retention(&space, q0.measure(), &s, target)?;
        println!(
            "{target:>8} {:>12.8} {check:>12.8} {:>12.8} {:>8}",
            sol.retention, sol.ceded_premium, sol.beyond_max_claim
        );
    }
    Ok(())
}
