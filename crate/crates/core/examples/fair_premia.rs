//! Worst-case measure of the aggregate claim and the fair premia it
//! allocates to each agent.
//!
//! cargo run --example fair_premia

use coherent_surplus::allocation::{
    fair_premia, marginal_premium, total_premium, worst_case_measure,
};
use coherent_surplus::coherent::Distortion;
use coherent_surplus::prob::{ProbSpace, RandomVar};

fn main() -> coherent_surplus::Result<()> {
    let space = ProbSpace::uniform(4);
    let claims = vec![
        RandomVar::new(vec![0.0, 1.0, 1.0, 2.0])?,
        RandomVar::new(vec![0.0, 0.0, 1.0, 2.0])?,
    ];
    let s = RandomVar::sum_of(&claims)?;

    for f in [Distortion::power(2.0)?, Distortion::power(3.0)?] {
        let q = worst_case_measure(&space, &f, &s)?;
        let pv = fair_premia(&space, &f, &claims)?;
        println!("{f}");
        println!("  worst-case Q   {:?}", q.measure().weights());
        println!("  total premium  {}", total_premium(&space, &f, &claims)?);
        for i in 0..claims.len() {
            let m = marginal_premium(&space, &f, &claims, i, 1e-6)?;
            println!("  agent{}  fair {:.6}  marginal {:.6}", i + 1, pv.get(i), m);
        }
        println!("  sum of fair premia {}", pv.total);
    }
    Ok(())
}
