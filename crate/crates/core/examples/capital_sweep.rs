//! Model 4 across initial capital levels: the retention and the insurer's
//! utility rise with capital while the return per unit of capital falls.
//!
//! cargo run --example capital_sweep

use coherent_surplus::cli::{render_sweep, OutputFormat};
use coherent_surplus::coherent::Distortion;
use coherent_surplus::models::{capital_sweep, linear_grid, Portfolio};
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
    .with_premia(vec![100.0 / 64.0, 93.0 / 64.0])?;

    let mut grid = linear_grid(0.25, 8.0, 12);
    grid.extend([1e3, 1e6]);
    let table = capital_sweep(&portfolio, &grid)?;
    print!("{}", render_sweep(&table, OutputFormat::Text)?);
    Ok(())
}
