//! Batch front door: `run`, `sweep`, `verify` and `validate`.
//!
//! Exit codes: 0 when every verdict holds, 3 when a computation succeeded but
//! some verdict is false, 1 on input errors, 2 on internal errors.

mod input;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::models::{capital_sweep, linear_grid, run_model, ModelId, ModelReport};
use crate::number::parse_number;
use crate::oracle::verify_suite;

pub use input::{
    load_portfolio, parse_portfolio, serialize_portfolio, AgentUtilities, Num, PortfolioFile,
    SpaceSection, UtilitiesSection,
};
pub use render::{render_reports, render_sweep, render_verify, to_json, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSelector {
    One(ModelId),
    All,
}

impl ModelSelector {
    pub fn models(self) -> Vec<ModelId> {
        match self {
            ModelSelector::One(m) => vec![m],
            ModelSelector::All => ModelId::ALL.to_vec(),
        }
    }
}

impl std::str::FromStr for ModelSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(ModelSelector::All);
        }
        s.parse::<u8>()
            .ok()
            .and_then(ModelId::from_number)
            .map(ModelSelector::One)
            .ok_or_else(|| {
                Error::invalid("model", format!("expected 1, 2, 3, 4 or all, got {s:?}"))
            })
    }
}

/// Capital grid `lo:hi:steps`, `steps` evenly spaced points from `lo` to `hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linear_grid(self.lo, self.hi, self.steps)
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(Error::invalid(
                "grid",
                format!("expected lo:hi:steps, got {s:?}"),
            ));
        };
        let lo = parse_number(lo).map_err(|e| e.at("grid.lo"))?;
        let hi = parse_number(hi).map_err(|e| e.at("grid.hi"))?;
        let steps: usize = steps.parse().map_err(|_| {
            Error::invalid(
                "grid.steps",
                format!("expected a positive integer, got {steps:?}"),
            )
        })?;
        if steps == 0 {
            return Err(Error::invalid(
                "grid.steps",
                "at least one point is required",
            ));
        }
        if !(lo > 0.0 && lo.is_finite()) {
            return Err(Error::invalid(
                "grid.lo",
                format!("capital levels must be positive, got {lo}"),
            ));
        }
        if steps == 1 && hi != lo {
            return Err(Error::invalid("grid", "a single-point grid needs lo = hi"));
        }
        if steps > 1 && !(hi > lo && hi.is_finite()) {
            return Err(Error::invalid(
                "grid.hi",
                format!("must exceed lo = {lo}, got {hi}"),
            ));
        }
        Ok(Grid { lo, hi, steps })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub model: ModelSelector,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub grid: Option<Grid>,
    /// Also run the randomized verification suite.
    pub verify: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            model: ModelSelector::All,
            format: OutputFormat::Json,
            out: None,
            grid: None,
            verify: false,
            seed: DEFAULT_SEED,
        }
    }
}

pub const DEFAULT_SEED: u64 = 20240601;
pub const DEFAULT_VERIFY_INSTANCES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Accepted,
    InputError,
    InternalError,
    Rejected,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Accepted => 0,
            ExitStatus::InputError => 1,
            ExitStatus::InternalError => 2,
            ExitStatus::Rejected => 3,
        }
    }

    fn of_error(e: &Error) -> Self {
        if e.is_internal() {
            ExitStatus::InternalError
        } else {
            ExitStatus::InputError
        }
    }
}

/// Result of a command: the rendered document and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub status: ExitStatus,
}

/// Runs the selected models; failing runs abort the whole command.
pub fn run_reports(config: &RunConfig) -> Result<Vec<ModelReport>> {
    let portfolio = load_portfolio(&config.input)?;
    config
        .model
        .models()
        .into_iter()
        .map(|m| run_model(m, &portfolio).map_err(|e| annotate(m, e)))
        .collect()
}

fn annotate(model: ModelId, e: Error) -> Error {
    match e {
        Error::Invalid { path, reason } => Error::Invalid {
            path,
            reason: format!("{reason} ({model})"),
        },
        other => other,
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    if config.grid.is_some() {
        return Err(Error::invalid(
            "grid",
            "--grid applies to the sweep command",
        ));
    }
    let reports = run_reports(config)?;
    let mut output = render_reports(&reports, config.format)?;
    let mut status = if reports.iter().all(ModelReport::all_accepted) {
        ExitStatus::Accepted
    } else {
        ExitStatus::Rejected
    };
    if config.verify {
        let v = verify_suite(config.seed, DEFAULT_VERIFY_INSTANCES)?;
        output.push_str(&render_verify(&v, config.format)?);
        if !v.passed() {
            status = ExitStatus::InternalError;
        }
    }
    Ok(Outcome { output, status })
}

pub fn sweep(config: &RunConfig) -> Result<Outcome> {
    let grid = config
        .grid
        .as_ref()
        .ok_or_else(|| Error::invalid("grid", "sweep requires --grid lo:hi:steps"))?;
    let portfolio = load_portfolio(&config.input)?;
    let table = capital_sweep(&portfolio, &grid.points())?;
    let status = if table.monotone() {
        ExitStatus::Accepted
    } else {
        ExitStatus::Rejected
    };
    Ok(Outcome {
        output: render_sweep(&table, config.format)?,
        status,
    })
}

pub fn verify(seed: u64, instances: usize, format: OutputFormat) -> Result<Outcome> {
    let v = verify_suite(seed, instances)?;
    Ok(Outcome {
        output: render_verify(&v, format)?,
        status: if v.passed() {
            ExitStatus::Accepted
        } else {
            ExitStatus::InternalError
        },
    })
}

pub fn validate(input: &Path) -> Result<Outcome> {
    let p = load_portfolio(input)?;
    let mut output = format!("ok: {} atoms, {} agents", p.space.len(), p.agent_count());
    if p.premia.is_some() {
        output.push_str(", premia");
    }
    if p.reinsurer.is_some() {
        output.push_str(", reinsurer");
    }
    output.push('\n');
    Ok(Outcome {
        output,
        status: ExitStatus::Accepted,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "coherent-surplus",
    version,
    about = "Surplus sharing under coherent utilities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// json, csv or text.
    #[arg(long, default_value = "json", value_parser = parse_arg::<OutputFormat>)]
    format: OutputFormat,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one model or all four on a portfolio file.
    Run {
        input: PathBuf,
        /// 1, 2, 3, 4 or all.
        #[arg(long, default_value = "all", value_parser = parse_arg::<ModelSelector>)]
        model: ModelSelector,
        #[command(flatten)]
        output: OutputArgs,
        /// Append the randomized verification suite.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_arg::<Grid>)]
        grid: Option<Grid>,
    },
    /// Model 4 over a grid of initial capital levels.
    Sweep {
        input: PathBuf,
        /// lo:hi:steps.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_arg::<Grid>)]
        grid: Grid,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare fast routines with brute-force oracles on random portfolios.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_VERIFY_INSTANCES)]
        instances: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Parse and validate a portfolio file.
    Validate { input: PathBuf },
}

fn parse_arg<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse::<T>().map_err(|e| e.to_string())
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Internal(format!("cannot write output: {e}"))),
    }
}

/// Parses arguments, runs the command, prints errors to standard error and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (result, out) = match cli.command {
        Command::Run {
            input,
            model,
            output,
            verify,
            seed,
            grid,
        } => {
            let config = RunConfig {
                input,
                model,
                format: output.format,
                out: output.out.clone(),
                grid,
                verify,
                seed,
            };
            (run(&config), output.out)
        }
        Command::Sweep {
            input,
            grid,
            output,
        } => {
            let config = RunConfig {
                format: output.format,
                out: output.out.clone(),
                grid: Some(grid),
                model: ModelSelector::One(ModelId::DirectAndReinsurer),
                ..RunConfig::new(input)
            };
            (sweep(&config), output.out)
        }
        Command::Verify {
            seed,
            instances,
            output,
        } => (verify(seed, instances, output.format), output.out),
        Command::Validate { input } => (validate(&input), None),
    };
    let outcome = result.and_then(|o| write_output(&o.output, out.as_deref()).map(|_| o.status));
    match outcome {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitStatus::of_error(&e).code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_and_grids() {
        assert_eq!("all".parse::<ModelSelector>().unwrap(), ModelSelector::All);
        assert_eq!(
            "3".parse::<ModelSelector>().unwrap().models(),
            vec![ModelId::SurplusSharing]
        );
        assert!("5".parse::<ModelSelector>().is_err());

        let g: Grid = "0.25:8:32".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 32);
        assert_eq!(pts[0], 0.25);
        assert_eq!(*pts.last().unwrap(), 8.0);
        assert_eq!("2:2:1".parse::<Grid>().unwrap().points(), vec![2.0]);
        assert!("-1:2:3".parse::<Grid>().is_err());
        assert!("2:1:3".parse::<Grid>().is_err());
        assert!("1:2".parse::<Grid>().is_err());
        assert!("1:2:0".parse::<Grid>().is_err());
    }

    #[test]
    fn bad_arguments_are_input_errors() {
        assert_eq!(
            main_with_args(["coherent-surplus", "run", "--model", "7", "x.json"]),
            1
        );
        assert_eq!(main_with_args(["coherent-surplus", "frobnicate"]), 1);
        assert_eq!(
            main_with_args(["coherent-surplus", "validate", "/nonexistent/file.json"]),
            1
        );
    }
}
