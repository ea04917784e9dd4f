//! Surplus sharing for one-period insurance on finite probability spaces.
//!
//! Agents hand their claims `X_i` to an insurer with initial capital `k_0`.
//! Every party values payoffs with a coherent distortion utility
//! `u(x) = min_{Q ∈ core(f∘P)} E_Q[x]`. The crate computes the worst-case
//! measure of the aggregate claim, the fair premia it induces, the retention
//! level of stop-loss reinsurance, and the acceptability of four contract
//! designs for the insurer and every agent.
//!
//! ```
//! use coherent_surplus::prelude::*;
//!
//! let space = ProbSpace::uniform(4);
//! let claims = vec![
//!     RandomVar::new(vec![0.0, 1.0, 1.0, 2.0]).unwrap(),
//!     RandomVar::new(vec![0.0, 0.0, 1.0, 2.0]).unwrap(),
//! ];
//! let f0 = Distortion::power(2.0).unwrap();
//! let fi = Distortion::power(4.0).unwrap();
//! let portfolio = Portfolio::new(space, claims, 1.0, f0, vec![fi.clone(), fi]).unwrap();
//!
//! let report = model2_run(&portfolio).unwrap();
//! let r = report.retention.as_ref().unwrap().retention;
//! assert!((r - 29.0 / 9.0).abs() < 1e-12);
//! assert!(report.all_accepted());
//! ```

pub mod allocation;
pub mod cli;
pub mod coherent;
pub mod error;
pub mod models;
pub mod number;
pub mod oracle;
pub mod prob;
pub mod retention;

pub use error::{Error, Result};

/// The types and functions most programs need.
pub mod prelude {
    pub use crate::allocation::{fair_premia, marginal_premium, total_premium, worst_case_measure};
    pub use crate::coherent::{choquet_utility, dual_distortion, CoherentUtility, Distortion};
    pub use crate::error::{Error, Result};
    pub use crate::models::{
        capital_sweep, model1_run, model2_run, model3_run, model4_run, run_model, ModelId,
        ModelReport, Portfolio,
    };
    pub use crate::prob::{Measure, ProbSpace, RandomVar};
    pub use crate::retention::{solve_retention, RetentionProblem};
}
