//! Distortion families, their duals, and Choquet utilities of a few payoffs.
//!
//! cargo run --example distortions

use coherent_surplus::coherent::{choquet_utility, minimizing_measure, Distortion};
use coherent_surplus::prob::{ProbSpace, RandomVar};

fn main() -> coherent_surplus::Result<()> {
    let families: Vec<Distortion> = ["power:2", "es:0.25", "pwl:0,0;0.5,0.2;1,1"]
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;

    println!(
        "{:<22} {:>8} {:>8} {:>8}",
        "distortion", "f(1/2)", "dual", "kinks"
    );
    for f in &families {
        println!(
            "{:<22} {:>8.4} {:>8.4} {:>8?}",
            f.to_string(),
            f.eval(0.5),
            f.dual(0.5),
            f.kinks()
        );
    }

    let space = ProbSpace::uniform(4);
    let loss = RandomVar::new(vec![0.0, 1.0, 2.0, 4.0])?;
    let payoff = -&loss;
    println!("\nu(-S) for S = {:?} with uniform P", loss.values());
    for f in &families {
        let u = choquet_utility(&space, f, &payoff)?;
        let q = minimizing_measure(&space, f, &payoff)?;
        println!(
            "  {:<22} u = {:>8.5}   minimizing Q = {:?}",
            f.to_string(),
            u,
            q.weights()
        );
    }

    // Utilities never exceed the expectation and are additive for
    // comonotonic payoffs.
    let f = Distortion::power(3.0)?;
    let capped = payoff.cap(-1.0);
    let sum = &payoff + &capped;
    let lhs = choquet_utility(&space, &f, &sum)?;
    let rhs = choquet_utility(&space, &f, &payoff)? + choquet_utility(&space, &f, &capped)?;
    println!("\ncommonotonic additivity under power:3: {lhs:.12} = {rhs:.12}");
    Ok(())
}
