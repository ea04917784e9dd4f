//! Brute-force cross-checks: core extreme points, bisection retention and the
//! randomized verification suite.
//!
//! cargo run --example oracle_check [seed]

use coherent_surplus::allocation::worst_case_measure;
use coherent_surplus::cli::{render_verify, OutputFormat};
use coherent_surplus::coherent::choquet_utility;
use coherent_surplus::oracle::{
    core_extreme_points, oracle_retention, oracle_utility, random_instance, verify_suite, Dims,
};
use coherent_surplus::retention::RetentionProblem;

fn main() -> coherent_surplus::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(11);

    let inst = random_instance(seed, Dims::new(5, 2).with_ties(0.3))?;
    let p = &inst.portfolio;
    let s = p.aggregate();
    println!("random portfolio, seed {seed}: S = {:?}", s.values());
    println!("insurer distortion {}", p.insurer);

    let points = core_extreme_points(&p.space, &p.insurer)?;
    println!("{} core extreme points enumerated", points.len());
    let fast = choquet_utility(&p.space, &p.insurer, &-&s)?;
    let slow = oracle_utility(&p.space, &p.insurer, &-&s)?;
    println!("u0(-S): sorted {fast:.12}, enumerated {slow:.12}");

    let q0 = worst_case_measure(&p.space, &p.insurer, &s)?;
    let fast = RetentionProblem::new(&p.space, s.clone(), q0.measure().clone(), p.capital)?
        .solve()
        .retention;
    let slow = oracle_retention(&p.space, q0.measure(), &s, p.capital)?;
    println!("retention: exact {fast:.12}, bisection {slow:.12}\n");

    let report = verify_suite(seed, 100)?;
    print!("{}", render_verify(&report, OutputFormat::Text)?);
    Ok(())
}
