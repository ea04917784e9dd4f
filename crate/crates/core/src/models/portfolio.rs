use crate::coherent::{utility_dominates, Distortion};
use crate::error::{Error, Result};
use crate::prob::{ProbSpace, RandomVar};

/// Grid resolution for checking the pointwise distortion ordering.
pub const ORDERING_GRID: usize = 1000;

/// Claims, capital, charged premia and utilities for one contract period.
///
/// Fields are public; every model run calls [`Portfolio::validate`] first.
/// Validation errors carry the field paths of the portfolio file format.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio {
    pub space: ProbSpace,
    pub agents: Vec<String>,
    pub claims: Vec<RandomVar>,
    /// Initial capital `k_0` of the insurer.
    pub capital: f64,
    /// Charged premia `p_i`; required by Models 3 and 4.
    pub premia: Option<Vec<f64>>,
    pub insurer: Distortion,
    pub reinsurer: Option<Distortion>,
    pub agent_utilities: Vec<Distortion>,
}

impl Portfolio {
    /// Portfolio with agents named `agent1..agentN`, no premia and no
    /// reinsurer.
    pub fn new(
        space: ProbSpace,
        claims: Vec<RandomVar>,
        capital: f64,
        insurer: Distortion,
        agent_utilities: Vec<Distortion>,
    ) -> Result<Self> {
        let agents = (1..=claims.len()).map(|i| format!("agent{i}")).collect();
        let portfolio = Portfolio {
            space,
            agents,
            claims,
            capital,
            premia: None,
            insurer,
            reinsurer: None,
            agent_utilities,
        };
        portfolio.validate()?;
        Ok(portfolio)
    }

    pub fn with_premia(mut self, premia: Vec<f64>) -> Result<Self> {
        self.premia = Some(premia);
        self.validate()?;
        Ok(self)
    }

    pub fn with_reinsurer(mut self, reinsurer: Distortion) -> Result<Self> {
        self.reinsurer = Some(reinsurer);
        self.validate()?;
        Ok(self)
    }

    pub fn with_capital(mut self, capital: f64) -> Result<Self> {
        self.capital = capital;
        self.validate()?;
        Ok(self)
    }

    pub fn agent_count(&self) -> usize {
        self.claims.len()
    }

    /// `S = Σ_i X_i`.
    pub fn aggregate(&self) -> RandomVar {
        RandomVar::sum_of(&self.claims).expect("validated portfolio has claims")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.claims.len();
        if n == 0 {
            return Err(Error::invalid("claims", "at least one agent is required"));
        }
        if self.agents.len() != n {
            return Err(Error::invalid(
                "claims",
                format!("{} agent names for {} claim vectors", self.agents.len(), n),
            ));
        }
        for (i, name) in self.agents.iter().enumerate() {
            if name == super::INSURER {
                return Err(Error::invalid(
                    format!("claims.{name}"),
                    "agent name is reserved for the insurer",
                ));
            }
            if self.agents[..i].contains(name) {
                return Err(Error::invalid(
                    format!("claims.{name}"),
                    "duplicate agent name",
                ));
            }
        }
        for (name, x) in self.agents.iter().zip(&self.claims) {
            if x.len() != self.space.len() {
                return Err(Error::invalid(
                    format!("claims.{name}"),
                    format!("{} values for {} atoms", x.len(), self.space.len()),
                ));
            }
            for (atom, &v) in x.values().iter().enumerate() {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::invalid(
                        format!("claims.{name}[{atom}]"),
                        format!("claims must be finite and nonnegative, got {v}"),
                    ));
                }
            }
        }
        if !(self.capital.is_finite() && self.capital >= 0.0) {
            return Err(Error::invalid(
                "capital",
                format!("must be finite and >= 0, got {}", self.capital),
            ));
        }
        if let Some(premia) = &self.premia {
            if premia.len() != n {
                return Err(Error::invalid(
                    "premia",
                    format!("{} premia for {} agents", premia.len(), n),
                ));
            }
            for (name, &p) in self.agents.iter().zip(premia) {
                if !(p.is_finite() && p >= 0.0) {
                    return Err(Error::invalid(
                        format!("premia.{name}"),
                        format!("premium must be finite and >= 0, got {p}"),
                    ));
                }
            }
        }
        self.insurer
            .validate()
            .map_err(|e| e.at("utilities.insurer"))?;
        if self.agent_utilities.len() != n {
            return Err(Error::invalid(
                "utilities.agents",
                format!("{} utilities for {} agents", self.agent_utilities.len(), n),
            ));
        }
        for (name, f) in self.agents.iter().zip(&self.agent_utilities) {
            let path = format!("utilities.agents.{name}");
            f.validate().map_err(|e| e.at(path.clone()))?;
            if !utility_dominates(f, &self.insurer, ORDERING_GRID) {
                return Err(Error::invalid(
                    path,
                    "agent distortion must lie below the insurer's (u_i <= u_0)",
                ));
            }
        }
        if let Some(fr) = &self.reinsurer {
            fr.validate().map_err(|e| e.at("utilities.reinsurer"))?;
            if !utility_dominates(fr, &self.insurer, ORDERING_GRID) {
                return Err(Error::invalid(
                    "utilities.reinsurer",
                    "reinsurer distortion must lie below the insurer's (u_r <= u_0)",
                ));
            }
            for (name, f) in self.agents.iter().zip(&self.agent_utilities) {
                if !utility_dominates(f, fr, ORDERING_GRID) {
                    return Err(Error::invalid(
                        format!("utilities.agents.{name}"),
                        "agent distortion must lie below the reinsurer's (u_i <= u_r)",
                    ));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn require_premia(&self) -> Result<&[f64]> {
        self.premia
            .as_deref()
            .ok_or_else(|| Error::invalid("premia", "charged premia are required for this model"))
    }

    pub(crate) fn require_reinsurer(&self) -> Result<&Distortion> {
        self.reinsurer.as_ref().ok_or_else(|| {
            Error::invalid(
                "utilities.reinsurer",
                "a reinsurer distortion is required for model 4",
            )
        })
    }
}
