//! Model 1: fair premia, and claims beyond premium plus capital paid by an
//! outside guarantee.
//!
//! cargo run --example limited_liability

use coherent_surplus::coherent::Distortion;
use coherent_surplus::models::{model1_run, Portfolio, INSURER};
use coherent_surplus::prob::{ProbSpace, RandomVar};

fn main() -> coherent_surplus::Result<()> {
    let portfolio = Portfolio::new(
        ProbSpace::uniform(4),
        vec![
            RandomVar::new(vec![0.0, 1.0, 1.0, 2.0])?,
            RandomVar::new(vec![0.0, 0.0, 1.0, 2.0])?,
        ],
        1.0,
        Distortion::power(2.0)?,
        vec![Distortion::power(4.0)?; 2],
    )?;
    let report = model1_run(&portfolio)?;

    let events = report.events.as_ref().expect("model 1 reports events");
    println!("claims exceed funds:    {:?}", events.a);
    println!("capital partly used:    {:?}", events.b);
    println!("surplus:                {:?}", events.c);
    println!(
        "insurer payoff          {:?}",
        report.payoff(INSURER).unwrap().values()
    );
    println!(
        "outside guarantee pays  {:?}",
        report.flows.government_transfer.values()
    );
    for v in &report.verdicts {
        println!(
            "{:<8} u = {:>9.6}  benchmark {:>9.6}  accepted {}",
            v.party, v.utility, v.benchmark, v.accepted
        );
    }
    Ok(())
}
