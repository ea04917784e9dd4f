//! Worst-case measures and capital-allocation premia.
//!
//! For aggregate claims `S` and a commonotonic insurer utility `u_0`, the
//! measure `Q_0` built from the descending order of `S` attains
//! `sup_{Q ∈ S_0} E_Q[g(S)]` for every non-decreasing `g` at once: `S`
//! itself, `S ∧ a` and `(S − a)^+`. The fair premium of agent `i` is
//! `E_{Q_0}[X_i]`: the premia add up to `π_0 = −u_0(−S)` with nothing left
//! over.

use serde::Serialize;

use crate::coherent::{choquet_utility, extremal_measure, Distortion};
use crate::error::{Error, Result};
use crate::prob::{ComonotoneOrder, Measure, ProbSpace, RandomVar};

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseMeasure {
    measure: Measure,
    order: ComonotoneOrder,
    distortion: Distortion,
}

impl WorstCaseMeasure {
    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn order(&self) -> &ComonotoneOrder {
        &self.order
    }

    pub fn distortion(&self) -> &Distortion {
        &self.distortion
    }

    pub fn expect(&self, x: &RandomVar) -> f64 {
        self.measure.expect(x)
    }
}

/// Fair premium per agent together with their total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiumVector {
    pub premia: Vec<f64>,
    pub total: f64,
}

impl PremiumVector {
    fn new(premia: Vec<f64>) -> Self {
        let total = premia.iter().sum();
        PremiumVector { premia, total }
    }

    pub fn get(&self, agent: usize) -> f64 {
        self.premia[agent]
    }

    pub fn len(&self) -> usize {
        self.premia.len()
    }

    pub fn is_empty(&self) -> bool {
        self.premia.is_empty()
    }
}

/// `Q_0` adapted to `s`: `f̂` increments along the descending order of `s`,
/// split proportionally to `P` inside tie groups.
pub fn worst_case_measure(
    space: &ProbSpace,
    f: &Distortion,
    s: &RandomVar,
) -> Result<WorstCaseMeasure> {
    let order = space.comonotone_order(s)?;
    let measure = extremal_measure(space, f, &order);
    Ok(WorstCaseMeasure {
        measure,
        order,
        distortion: f.clone(),
    })
}

pub(crate) fn check_claims(space: &ProbSpace, claims: &[RandomVar]) -> Result<()> {
    if claims.is_empty() {
        return Err(Error::invalid("claims", "at least one agent is required"));
    }
    for (agent, x) in claims.iter().enumerate() {
        space.check_var(x)?;
        if let Some(atom) = x.values().iter().position(|&v| v < 0.0) {
            return Err(Error::NegativeClaim {
                agent,
                atom,
                value: x.get(atom),
            });
        }
    }
    Ok(())
}

/// `π_0 = −u_0(−S)` with `S` the sum of the claims.
pub fn total_premium(space: &ProbSpace, f: &Distortion, claims: &[RandomVar]) -> Result<f64> {
    check_claims(space, claims)?;
    let s = RandomVar::sum_of(claims)?;
    Ok(-choquet_utility(space, f, &-&s)?)
}

/// `π_i = E_{Q_0}[X_i]`.
pub fn fair_premia(
    space: &ProbSpace,
    f: &Distortion,
    claims: &[RandomVar],
) -> Result<PremiumVector> {
    check_claims(space, claims)?;
    let s = RandomVar::sum_of(claims)?;
    let q0 = worst_case_measure(space, f, &s)?;
    Ok(premia_under(&q0.measure, claims))
}

pub(crate) fn premia_under(q: &Measure, claims: &[RandomVar]) -> PremiumVector {
    PremiumVector::new(claims.iter().map(|x| q.expect(x)).collect())
}

/// Difference quotient `−(u_0(−S − εX_i) − u_0(−S))/ε`.
///
/// Converges to `π_i` as `ε ↓ 0` when the atoms of `S` carry distinct
/// values; with ties the limit depends on how `X_i` breaks them.
pub fn marginal_premium(
    space: &ProbSpace,
    f: &Distortion,
    claims: &[RandomVar],
    agent: usize,
    eps: f64,
) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::invalid("epsilon", format!("must be > 0, got {eps}")));
    }
    check_claims(space, claims)?;
    let x = claims
        .get(agent)
        .ok_or_else(|| Error::invalid("agent", format!("no agent with index {agent}")))?;
    let s = RandomVar::sum_of(claims)?;
    let base = choquet_utility(space, f, &-&s)?;
    let bumped = choquet_utility(space, f, &-&(&s + &x.scale(eps)))?;
    Ok(-(bumped - base) / eps)
}
