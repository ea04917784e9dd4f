//! Model 3: premia above the fair level buy a proportional share of the
//! surplus.
//!
//! cargo run --example surplus_sharing

use coherent_surplus::coherent::Distortion;
use coherent_surplus::models::{model3_run, Portfolio};
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

    for premia in [vec![1.375, 1.1875], vec![1.5, 1.3], vec![1.65, 1.6]] {
        let report = model3_run(&base.clone().with_premia(premia.clone())?)?;
        let shares = report.shares.as_ref().unwrap();
        println!(
            "premia {:?}: R = {:.6}, shares insurer {:.4} agents {:?}",
            premia,
            report.retention.as_ref().unwrap().retention,
            shares.insurer,
            shares
                .agents
                .iter()
                .map(|l| format!("{l:.4}"))
                .collect::<Vec<_>>()
        );
        for (v, b) in report.verdicts.iter().skip(1).zip(&report.premium_bounds) {
            println!(
                "  {:<7} u = {:>9.6} vs {:>9.6}  accepted {:<5}  within sufficient bound {:<5}  within own cap {}",
                v.party, v.utility, v.benchmark, v.accepted, b.within_sufficient_bound, b.within_agent_cap
            );
        }
    }
    Ok(())
}
