//! Model 4: a direct insurer and a default-free reinsurer that prices under
//! its own, more cautious, utility.
//!
//! cargo run --example direct_and_reinsurer

use coherent_surplus::coherent::Distortion;
use coherent_surplus::models::{model4_run, Portfolio, ID_MODEL4_EXTRA, INSURER};
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
    )?
    .with_reinsurer(Distortion::power(3.0)?)?
    .with_premia(vec![1.7, 1.6])?;

    let report = model4_run(&portfolio)?;
    let fair_r = report.premia.reinsurer_fair.as_ref().unwrap();
    println!("reinsurer fair premia {fair_r:?}");
    println!(
        "retention R = {}",
        report.retention.as_ref().unwrap().retention
    );
    println!(
        "insurer payoff {:?}",
        report.payoff(INSURER).unwrap().values()
    );
    println!(
        "extra return over k0: {:.6}",
        report.identity(ID_MODEL4_EXTRA).unwrap().lhs
    );
    for v in &report.verdicts {
        println!(
            "  {:<8} accepted {} (gap {:+.6})",
            v.party, v.accepted, v.gap
        );
    }
    for b in &report.premium_bounds {
        println!(
            "  {} pays {} against sufficient bound {:.6}: within {}",
            b.agent, b.premium, b.sufficient_bound, b.within_sufficient_bound
        );
    }

    if let Some(alt) = &report.alternative_split {
        println!("\nalternative split (advisory only)");
        println!(
            "  premium inputs {:?}, total {:.6}",
            alt.premium_input, alt.premium_input_total
        );
        println!("  required total {:.6}", alt.required_total);
        for v in &alt.verdicts {
            println!("  {:<8} accepted {}", v.party, v.accepted);
        }
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    Ok(())
}
