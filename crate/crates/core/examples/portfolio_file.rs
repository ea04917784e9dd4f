//! Reading a portfolio file, running every model and writing the three
//! report formats.
//!
//! cargo run --example portfolio_file [path/to/portfolio.json]

use std::path::PathBuf;

use coherent_surplus::cli::{load_portfolio, render_reports, serialize_portfolio, OutputFormat};
use coherent_surplus::models::{run_model, ModelId};

fn main() -> coherent_surplus::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/w1-model4.json")
        });
    let portfolio = load_portfolio(&path)?;
    println!(
        "{} agents on {} atoms from {}",
        portfolio.agent_count(),
        portfolio.space.len(),
        path.display()
    );

    let reports = ModelId::ALL
        .into_iter()
        .map(|m| run_model(m, &portfolio))
        .collect::<coherent_surplus::Result<Vec<_>>>()?;
    for r in &reports {
        println!("{}: all verdicts accepted = {}", r.model, r.all_accepted());
    }

    let text = render_reports(&reports[1..2], OutputFormat::Text)?;
    println!("\n{text}");
    let csv = render_reports(&reports, OutputFormat::Csv)?;
    println!(
        "csv: {} lines, header {}",
        csv.lines().count(),
        csv.lines().next().unwrap_or("")
    );
    let json = render_reports(&reports, OutputFormat::Json)?;
    println!("json: {} bytes", json.len());

    println!("\nnormalized file:\n{}", serialize_portfolio(&portfolio));
    Ok(())
}
