//! Model 2: the excess over the retention is reinsured at the insurer's own
//! prices, leaving the insurer exactly indifferent.
//!
//! cargo run --example reinsured

use coherent_surplus::coherent::Distortion;
use coherent_surplus::models::{model2_run, Portfolio, ID_MODEL2_EQUALITY};
use coherent_surplus::prob::{ProbSpace, RandomVar};

fn main() -> coherent_surplus::Result<()> {
    let base = Portfolio::new(
        ProbSpace::uniform(4),
        vec![
            RandomVar::new(vec![0.0, 1.0, 1.0, 2.0])?,
            RandomVar::new(vec![0.0, 0.0, 1.0, 2.0])?,
        ],
        1.0,
        Distortion::power(2.0)?,
        vec![Distortion::power(4.0)?; 2],
    )?;

    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>14}",
        "k0", "R", "retained", "ceded", "u0 - k0"
    );
    for k0 in [0.0, 0.5, 1.0, 2.0] {
        let report = model2_run(&base.clone().with_capital(k0)?)?;
        let sol = report.retention.as_ref().unwrap();
        let id = report.identity(ID_MODEL2_EQUALITY).unwrap();
        println!(
            "{k0:>8} {:>12.8} {:>12.8} {:>12.8} {:>14.2e}",
            sol.retention, sol.retained_premium, sol.ceded_premium, id.residual
        );
    }
    Ok(())
}
