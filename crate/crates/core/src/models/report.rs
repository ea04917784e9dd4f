use std::fmt;

use serde::Serialize;

use crate::prob::{RandomVar, TOL};
use crate::retention::RetentionSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    /// Limited liability, excess covered by a free outside guarantee.
    LimitedLiability,
    /// Excess reinsured at the insurer's own prices.
    Reinsured,
    /// Charged premia above fair premia buy a share of the surplus.
    SurplusSharing,
    /// Direct insurer plus a default-free reinsurer with higher prices.
    DirectAndReinsurer,
}

impl ModelId {
    pub const ALL: [ModelId; 4] = [
        ModelId::LimitedLiability,
        ModelId::Reinsured,
        ModelId::SurplusSharing,
        ModelId::DirectAndReinsurer,
    ];

    pub fn number(self) -> u8 {
        match self {
            ModelId::LimitedLiability => 1,
            ModelId::Reinsured => 2,
            ModelId::SurplusSharing => 3,
            ModelId::DirectAndReinsurer => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        ModelId::ALL.into_iter().find(|m| m.number() == n)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "model {}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiaReport {
    /// `π_i = E_{Q_0}[X_i]`.
    pub fair: Vec<f64>,
    pub fair_total: f64,
    /// `π^r_i = E_{Q_r}[X_i]` (Model 4).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reinsurer_fair: Option<Vec<f64>>,
    pub charged: Vec<f64>,
    pub charged_total: f64,
    /// Part of each charged premium buying cover.
    pub premium_input: Vec<f64>,
    /// Remainder, treated as a capital contribution.
    pub capital_input: Vec<f64>,
}

/// Model 1 partition of the atoms by the size of aggregate claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventPartition {
    /// `S > π_0 + k_0`: claims exceed available funds.
    pub a: Vec<String>,
    /// `π_0 ≤ S ≤ π_0 + k_0`: capital partly consumed.
    pub b: Vec<String>,
    /// `S < π_0`: surplus.
    pub c: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurplusShares {
    pub insurer: f64,
    pub agents: Vec<f64>,
    /// Zero capital inputs in total: shares fixed at `(1, 0, ..., 0)`.
    pub degenerate: bool,
}

impl SurplusShares {
    /// Shares proportional to `k_0` and the agents' capital inputs.
    pub fn proportional(capital: f64, inputs: &[f64]) -> Self {
        let total = capital + inputs.iter().sum::<f64>();
        if total <= 1e-12 {
            return SurplusShares {
                insurer: 1.0,
                agents: vec![0.0; inputs.len()],
                degenerate: true,
            };
        }
        SurplusShares {
            insurer: capital / total,
            agents: inputs.iter().map(|c| c / total).collect(),
            degenerate: false,
        }
    }

    pub fn total(&self) -> f64 {
        self.insurer + self.agents.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartyPayoff {
    pub party: String,
    pub payoff: RandomVar,
}

/// Acceptability of the deal for one party: `utility ≥ benchmark`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub party: String,
    pub utility: f64,
    pub benchmark: f64,
    pub gap: f64,
    pub accepted: bool,
}

impl Verdict {
    /// Accepts within `1e-9·max(1, |benchmark|)`, so equality cases pass.
    pub fn new(party: impl Into<String>, utility: f64, benchmark: f64) -> Self {
        let gap = utility - benchmark;
        Verdict {
            party: party.into(),
            utility,
            benchmark,
            gap,
            accepted: gap >= -TOL * benchmark.abs().max(1.0),
        }
    }
}

/// Per-agent comparison of the charged premium with the sufficient bound
/// for agent acceptability and with the agent's own indifference premium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiumBound {
    pub agent: String,
    pub premium: f64,
    /// `−u_0(−X_i)` in Model 3, `−u_r(−X_i)` in Model 4.
    pub sufficient_bound: f64,
    pub within_sufficient_bound: bool,
    /// `−u_i(−X_i)`.
    pub agent_cap: f64,
    pub within_agent_cap: bool,
}

impl PremiumBound {
    pub fn new(agent: impl Into<String>, premium: f64, sufficient: f64, cap: f64) -> Self {
        PremiumBound {
            agent: agent.into(),
            premium,
            sufficient_bound: sufficient,
            within_sufficient_bound: premium <= sufficient + TOL,
            agent_cap: cap,
            within_agent_cap: premium <= cap + TOL,
        }
    }
}

/// A closed-form identity the run should satisfy, with both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identity {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl Identity {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Identity {
            name: name.into(),
            lhs,
            rhs,
            residual: lhs - rhs,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.residual.abs() <= tol * self.rhs.abs().max(1.0)
    }
}

/// Money flows per atom.
///
/// Two ledgers close on every atom: the insurer's funds
/// `premia + k_0 = insurer claims + reinsurance premium + distributed surplus`
/// and claim settlement
/// `S = insurer claims + reinsurer claims + government transfer`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flows {
    pub premium_income: f64,
    pub capital: f64,
    pub reinsurance_premium: f64,
    pub insurer_claims: RandomVar,
    pub reinsurer_claims: RandomVar,
    pub government_transfer: RandomVar,
    pub distributed: RandomVar,
}

impl Flows {
    /// Largest atomwise residual over both ledgers.
    pub fn balance_residual(&self, aggregate: &RandomVar) -> f64 {
        let sources = self.premium_income + self.capital;
        let mut worst: f64 = 0.0;
        for atom in 0..aggregate.len() {
            let uses = self.insurer_claims.get(atom)
                + self.reinsurance_premium
                + self.distributed.get(atom);
            let settled = self.insurer_claims.get(atom)
                + self.reinsurer_claims.get(atom)
                + self.government_transfer.get(atom);
            worst = worst
                .max((sources - uses).abs())
                .max((aggregate.get(atom) - settled).abs());
        }
        worst
    }
}

/// Alternative premium-input split for Model 4: the layer above the
/// retention priced under `Q_r`, the layer below under `Q_0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternativeSplit {
    /// `E_{Q_r}[X_i 1{S > R}] + E_{Q_0}[X_i 1{S ≤ R}]`.
    pub premium_input: Vec<f64>,
    pub premium_input_total: f64,
    /// `E_{Q_r}[(S − R)^+] + E_{Q_0}[S ∧ R]`, reported next to the total
    /// above without reconciliation.
    pub required_total: f64,
    pub capital_input: Vec<f64>,
    /// Present only when every capital input is nonnegative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shares: Option<SurplusShares>,
    /// Informational; no acceptability claim is made for this split.
    pub verdicts: Vec<Verdict>,
    pub advisory_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub model: ModelId,
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
    pub capital: f64,
    pub premia: PremiaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retention: Option<RetentionSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub events: Option<EventPartition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shares: Option<SurplusShares>,
    /// Funds left after claims and reinsurance, before distribution.
    pub surplus: RandomVar,
    pub payoffs: Vec<PartyPayoff>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premium_bounds: Vec<PremiumBound>,
    pub identities: Vec<Identity>,
    pub flows: Flows,
    pub balance_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative_split: Option<AlternativeSplit>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ModelReport {
    pub fn all_accepted(&self) -> bool {
        self.verdicts.iter().all(|v| v.accepted)
    }

    pub fn verdict(&self, party: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.party == party)
    }

    pub fn insurer_verdict(&self) -> &Verdict {
        self.verdict(INSURER)
            .expect("every report has an insurer verdict")
    }

    pub fn payoff(&self, party: &str) -> Option<&RandomVar> {
        self.payoffs
            .iter()
            .find(|p| p.party == party)
            .map(|p| &p.payoff)
    }

    pub fn identity(&self, name: &str) -> Option<&Identity> {
        self.identities.iter().find(|i| i.name == name)
    }
}

pub const INSURER: &str = "insurer";
