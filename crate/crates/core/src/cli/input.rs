//! The portfolio file format.
//!
//! ```json
//! {
//!   "space": { "atoms": ["w1", "w2"], "probs": ["1/2", 0.5] },
//!   "claims": { "agent1": [0, 1] },
//!   "capital": 1,
//!   "premia": { "agent1": "3/4" },
//!   "utilities": {
//!     "insurer": "power:2",
//!     "reinsurer": "power:3",
//!     "agents": "power:4"
//!   }
//! }
//! ```
//!
//! Numbers may be JSON numbers or strings holding decimals or fractions.
//! `premia` and `utilities.reinsurer` are optional; `utilities.agents` is a
//! single distortion for everyone or a map keyed by agent name.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::coherent::Distortion;
use crate::error::{Error, Result};
use crate::models::Portfolio;
use crate::number::parse_number;
use crate::prob::{ProbSpace, RandomVar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortfolioFile {
    pub space: SpaceSection,
    pub claims: IndexMap<String, Vec<Num>>,
    pub capital: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub premia: Option<IndexMap<String, Num>>,
    pub utilities: UtilitiesSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    pub atoms: Vec<String>,
    pub probs: Vec<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilitiesSection {
    pub insurer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reinsurer: Option<String>,
    pub agents: AgentUtilities,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AgentUtilities {
    Shared(String),
    PerAgent(IndexMap<String, String>),
}

/// A JSON number, or a string with a decimal or a fraction such as `"29/9"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Number(f64),
    Text(String),
}

impl Num {
    pub fn value(&self) -> Result<f64> {
        match self {
            Num::Number(v) => Ok(*v),
            Num::Text(t) => parse_number(t),
        }
    }
}

fn number(n: &Num, path: impl Into<String>) -> Result<f64> {
    n.value().map_err(|e| e.at(path))
}

fn distortion(text: &str, path: &str) -> Result<Distortion> {
    text.parse::<Distortion>().map_err(|e| e.at(path))
}

impl PortfolioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("portfolio file serializes")
    }

    /// Validated portfolio; errors name the offending field.
    pub fn to_portfolio(&self) -> Result<Portfolio> {
        let probs = self
            .space
            .probs
            .iter()
            .enumerate()
            .map(|(i, p)| number(p, format!("space.probs[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let space = ProbSpace::new(self.space.atoms.clone(), probs).map_err(|e| e.at("space"))?;

        let agents: Vec<String> = self.claims.keys().cloned().collect();
        let claims = self
            .claims
            .iter()
            .map(|(name, values)| {
                let values = values
                    .iter()
                    .enumerate()
                    .map(|(a, v)| number(v, format!("claims.{name}[{a}]")))
                    .collect::<Result<Vec<_>>>()?;
                RandomVar::new(values)
                    .map_err(|e| Error::invalid(format!("claims.{name}"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;

        let capital = number(&self.capital, "capital")?;

        let premia = match &self.premia {
            None => None,
            Some(map) => {
                if let Some(unknown) = map.keys().find(|k| !self.claims.contains_key(*k)) {
                    return Err(Error::invalid(format!("premia.{unknown}"), "unknown agent"));
                }
                let values = agents
                    .iter()
                    .map(|name| {
                        let path = format!("premia.{name}");
                        let n = map
                            .get(name)
                            .ok_or_else(|| Error::invalid(path.clone(), "missing premium"))?;
                        number(n, path)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(values)
            }
        };

        let insurer = distortion(&self.utilities.insurer, "utilities.insurer")?;
        let reinsurer = self
            .utilities
            .reinsurer
            .as_deref()
            .map(|r| distortion(r, "utilities.reinsurer"))
            .transpose()?;
        let agent_utilities = match &self.utilities.agents {
            AgentUtilities::Shared(text) => {
                let f = distortion(text, "utilities.agents")?;
                vec![f; agents.len()]
            }
            AgentUtilities::PerAgent(map) => {
                if let Some(unknown) = map.keys().find(|k| !self.claims.contains_key(*k)) {
                    return Err(Error::invalid(
                        format!("utilities.agents.{unknown}"),
                        "unknown agent",
                    ));
                }
                agents
                    .iter()
                    .map(|name| {
                        let path = format!("utilities.agents.{name}");
                        let text = map
                            .get(name)
                            .ok_or_else(|| Error::invalid(path.clone(), "missing distortion"))?;
                        distortion(text, &path)
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };

        let portfolio = Portfolio {
            space,
            agents,
            claims,
            capital,
            premia,
            insurer,
            reinsurer,
            agent_utilities,
        };
        portfolio.validate()?;
        Ok(portfolio)
    }

    /// File form of a portfolio, numbers written as JSON numbers.
    pub fn from_portfolio(p: &Portfolio) -> Self {
        let nums = |v: &[f64]| v.iter().map(|&x| Num::Number(x)).collect::<Vec<_>>();
        PortfolioFile {
            space: SpaceSection {
                atoms: p.space.atoms().to_vec(),
                probs: nums(p.space.probs()),
            },
            claims: p
                .agents
                .iter()
                .cloned()
                .zip(p.claims.iter().map(|x| nums(x.values())))
                .collect(),
            capital: Num::Number(p.capital),
            premia: p.premia.as_ref().map(|premia| {
                p.agents
                    .iter()
                    .cloned()
                    .zip(premia.iter().map(|&v| Num::Number(v)))
                    .collect()
            }),
            utilities: UtilitiesSection {
                insurer: p.insurer.to_string(),
                reinsurer: p.reinsurer.as_ref().map(|r| r.to_string()),
                agents: AgentUtilities::PerAgent(
                    p.agents
                        .iter()
                        .cloned()
                        .zip(p.agent_utilities.iter().map(|f| f.to_string()))
                        .collect(),
                ),
            },
        }
    }
}

/// Parses and validates a portfolio document.
pub fn parse_portfolio(text: &str) -> Result<Portfolio> {
    PortfolioFile::from_json(text)?.to_portfolio()
}

pub fn load_portfolio(path: &Path) -> Result<Portfolio> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_portfolio(&text)
}

/// JSON document that parses back to the same portfolio.
pub fn serialize_portfolio(p: &Portfolio) -> String {
    PortfolioFile::from_portfolio(p).to_json()
}
