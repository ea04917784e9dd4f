//! The four surplus-sharing models.

use crate::allocation::{
    fair_premia, premia_under, worst_case_measure, PremiumVector, WorstCaseMeasure,
};
use crate::coherent::{choquet_utility, Distortion};
use crate::error::{Error, Result};
use crate::prob::{ProbSpace, RandomVar, TOL};
use crate::retention::RetentionProblem;

use super::portfolio::Portfolio;
use super::report::*;

pub const ID_MODEL1_TRANSLATION: &str = "u0(pi0 + k0 - S) = k0";
pub const ID_MODEL2_EQUALITY: &str = "u0(R - S^R) = k0";
pub const ID_MODEL3_RETAINED: &str = "u0(R - S^R) = R - pi^R";
pub const ID_MODEL3_INSURER: &str = "u0(lambda0 (R - S)^+) = k0";
pub const ID_MODEL4_SCALED: &str = "u0(lambda0 S+) = lambda0 E_Q0[(R - S)^+]";
pub const ID_MODEL4_EXTRA: &str =
    "u0(lambda0 S+) - k0 = k0 (E_Qr[S^R] - E_Q0[S^R]) / (k0 + sum p - E_Qr[S])";

fn utility(space: &ProbSpace, f: &Distortion, x: &RandomVar) -> f64 {
    choquet_utility(space, f, x).expect("variables built on the portfolio space")
}

struct Base<'a> {
    p: &'a Portfolio,
    aggregate: RandomVar,
    q0: WorstCaseMeasure,
    fair: PremiumVector,
}

impl<'a> Base<'a> {
    fn new(p: &'a Portfolio) -> Result<Self> {
        p.validate()?;
        let aggregate = p.aggregate();
        let q0 = worst_case_measure(&p.space, &p.insurer, &aggregate)?;
        let fair = fair_premia(&p.space, &p.insurer, &p.claims)?;
        Ok(Base {
            p,
            aggregate,
            q0,
            fair,
        })
    }

    fn u0(&self, x: &RandomVar) -> f64 {
        utility(&self.p.space, &self.p.insurer, x)
    }

    fn ui(&self, agent: usize, x: &RandomVar) -> f64 {
        utility(&self.p.space, &self.p.agent_utilities[agent], x)
    }

    /// `u_i(−X_i)`, the agent's value of staying uninsured.
    fn uninsured(&self, agent: usize) -> f64 {
        self.ui(agent, &-&self.p.claims[agent])
    }

    fn n(&self) -> usize {
        self.p.claims.len()
    }

    fn atoms_where(&self, event: impl Fn(f64) -> bool) -> Vec<String> {
        self.aggregate
            .values()
            .iter()
            .zip(self.p.space.atoms())
            .filter(|(&s, _)| event(s))
            .map(|(_, id)| id.clone())
            .collect()
    }

    fn ignored_premia_note(&self) -> Vec<String> {
        match self.p.premia {
            Some(_) => vec!["charged premia ignored: this model charges fair premia".into()],
            None => Vec::new(),
        }
    }

    /// Agents paying a premium and holding no surplus share.
    fn flat_fee_agents(&self, payoffs: &mut Vec<PartyPayoff>, verdicts: &mut Vec<Verdict>) {
        let len = self.p.space.len();
        for i in 0..self.n() {
            let name = &self.p.agents[i];
            let paid = self.fair.get(i);
            let payoff = RandomVar::constant(len, -paid);
            verdicts.push(Verdict::new(name, self.ui(i, &payoff), self.uninsured(i)));
            payoffs.push(PartyPayoff {
                party: name.clone(),
                payoff,
            });
        }
    }

    fn fair_premia_report(&self) -> PremiaReport {
        PremiaReport {
            fair: self.fair.premia.clone(),
            fair_total: self.fair.total,
            reinsurer_fair: None,
            charged: self.fair.premia.clone(),
            charged_total: self.fair.total,
            premium_input: self.fair.premia.clone(),
            capital_input: vec![0.0; self.n()],
        }
    }

    /// Charged premia checked against per-agent floors; returns capital inputs.
    fn capital_inputs(&self, charged: &[f64], floors: &[f64]) -> Result<Vec<f64>> {
        charged
            .iter()
            .zip(floors)
            .zip(&self.p.agents)
            .map(|((&p, &floor), name)| {
                if p < floor - TOL {
                    Err(Error::invalid(
                        format!("premia.{name}"),
                        format!("charged premium {p} is below the required floor {floor}"),
                    ))
                } else {
                    Ok((p - floor).max(0.0))
                }
            })
            .collect()
    }
}

/// Model 1: limited liability, fair premia, outside cover of any shortfall.
pub fn model1_run(portfolio: &Portfolio) -> Result<ModelReport> {
    let base = Base::new(portfolio)?;
    let p = base.p;
    let s = &base.aggregate;
    let pi0 = base.fair.total;
    let k0 = p.capital;
    let funds = pi0 + k0;

    let events = EventPartition {
        a: base.atoms_where(|v| v > funds + TOL),
        b: base.atoms_where(|v| v >= pi0 - TOL && v <= funds + TOL),
        c: base.atoms_where(|v| v < pi0 - TOL),
    };

    let insurer_payoff = s.shortfall_below(funds);
    let government = s.excess_over(funds);
    let insurer_claims = s.cap(funds);

    let mut payoffs = vec![PartyPayoff {
        party: INSURER.into(),
        payoff: insurer_payoff.clone(),
    }];
    let mut verdicts = vec![Verdict::new(INSURER, base.u0(&insurer_payoff), k0)];
    base.flat_fee_agents(&mut payoffs, &mut verdicts);

    let identities = vec![Identity::new(
        ID_MODEL1_TRANSLATION,
        base.u0(&s.scale(-1.0).shift(funds)),
        k0,
    )];

    let flows = Flows {
        premium_income: pi0,
        capital: k0,
        reinsurance_premium: 0.0,
        insurer_claims,
        reinsurer_claims: RandomVar::zeros(s.len()),
        government_transfer: government,
        distributed: insurer_payoff.clone(),
    };
    let balance_residual = flows.balance_residual(s);

    Ok(ModelReport {
        model: ModelId::LimitedLiability,
        atoms: p.space.atoms().to_vec(),
        agents: p.agents.clone(),
        capital: k0,
        premia: base.fair_premia_report(),
        retention: None,
        events: Some(events),
        shares: None,
        surplus: insurer_payoff,
        payoffs,
        verdicts,
        premium_bounds: Vec::new(),
        identities,
        flows,
        balance_residual,
        alternative_split: None,
        notes: base.ignored_premia_note(),
    })
}

/// Model 2: fair premia, excess over the retention reinsured at `Q_0` prices.
pub fn model2_run(portfolio: &Portfolio) -> Result<ModelReport> {
    let base = Base::new(portfolio)?;
    let p = base.p;
    let s = &base.aggregate;
    let k0 = p.capital;

    let problem = RetentionProblem::new(&p.space, s.clone(), base.q0.measure().clone(), k0)?;
    let sol = problem.solve();
    let r = sol.retention;
    let surplus = s.shortfall_below(r);

    let mut payoffs = vec![PartyPayoff {
        party: INSURER.into(),
        payoff: surplus.clone(),
    }];
    let insurer_utility = base.u0(&surplus);
    let mut verdicts = vec![Verdict::new(INSURER, insurer_utility, k0)];
    base.flat_fee_agents(&mut payoffs, &mut verdicts);

    let identities = vec![Identity::new(ID_MODEL2_EQUALITY, insurer_utility, k0)];

    let flows = Flows {
        premium_income: base.fair.total,
        capital: k0,
        reinsurance_premium: sol.ceded_premium,
        insurer_claims: s.cap(r),
        reinsurer_claims: s.excess_over(r),
        government_transfer: RandomVar::zeros(s.len()),
        distributed: surplus.clone(),
    };
    let balance_residual = flows.balance_residual(s);

    Ok(ModelReport {
        model: ModelId::Reinsured,
        atoms: p.space.atoms().to_vec(),
        agents: p.agents.clone(),
        capital: k0,
        premia: base.fair_premia_report(),
        retention: Some(sol),
        events: None,
        shares: None,
        surplus,
        payoffs,
        verdicts,
        premium_bounds: Vec::new(),
        identities,
        flows,
        balance_residual,
        alternative_split: None,
        notes: base.ignored_premia_note(),
    })
}

fn degenerate_note(shares: &SurplusShares, notes: &mut Vec<String>) {
    if shares.degenerate {
        notes.push(
            "no capital inputs (k0 = 0 and premia at their floor): shares set to insurer 1, agents 0"
                .into(),
        );
    }
}

/// Model 3: charged premia `p_i ≥ π_i`, excess premia share the surplus.
pub fn model3_run(portfolio: &Portfolio) -> Result<ModelReport> {
    let base = Base::new(portfolio)?;
    let p = base.p;
    let s = &base.aggregate;
    let k0 = p.capital;
    let charged = p.require_premia()?.to_vec();
    let inputs = base.capital_inputs(&charged, &base.fair.premia)?;
    let target = k0 + inputs.iter().sum::<f64>();

    let problem = RetentionProblem::new(&p.space, s.clone(), base.q0.measure().clone(), target)?;
    let sol = problem.solve();
    let r = sol.retention;
    let surplus = s.shortfall_below(r);
    let shares = SurplusShares::proportional(k0, &inputs);

    let insurer_payoff = surplus.scale(shares.insurer);
    let mut payoffs = vec![PartyPayoff {
        party: INSURER.into(),
        payoff: insurer_payoff.clone(),
    }];
    let insurer_utility = base.u0(&insurer_payoff);
    let mut verdicts = vec![Verdict::new(INSURER, insurer_utility, k0)];
    let mut bounds = Vec::with_capacity(base.n());
    for i in 0..base.n() {
        let name = &p.agents[i];
        let payoff = surplus.scale(shares.agents[i]).shift(-charged[i]);
        let uninsured = base.uninsured(i);
        verdicts.push(Verdict::new(name, base.ui(i, &payoff), uninsured));
        payoffs.push(PartyPayoff {
            party: name.clone(),
            payoff,
        });
        let insurer_price = -base.u0(&-&p.claims[i]);
        bounds.push(PremiumBound::new(
            name,
            charged[i],
            insurer_price,
            -uninsured,
        ));
    }

    let mut identities = vec![Identity::new(
        ID_MODEL3_RETAINED,
        base.u0(&surplus),
        r - sol.retained_premium,
    )];
    if !shares.degenerate {
        identities.push(Identity::new(ID_MODEL3_INSURER, insurer_utility, k0));
    }

    let flows = Flows {
        premium_income: charged.iter().sum(),
        capital: k0,
        reinsurance_premium: sol.ceded_premium,
        insurer_claims: s.cap(r),
        reinsurer_claims: s.excess_over(r),
        government_transfer: RandomVar::zeros(s.len()),
        distributed: surplus.clone(),
    };
    let balance_residual = flows.balance_residual(s);
    let mut notes = Vec::new();
    degenerate_note(&shares, &mut notes);

    Ok(ModelReport {
        model: ModelId::SurplusSharing,
        atoms: p.space.atoms().to_vec(),
        agents: p.agents.clone(),
        capital: k0,
        premia: PremiaReport {
            fair: base.fair.premia.clone(),
            fair_total: base.fair.total,
            reinsurer_fair: None,
            charged_total: charged.iter().sum(),
            charged,
            premium_input: base.fair.premia.clone(),
            capital_input: inputs,
        },
        retention: Some(sol),
        events: None,
        shares: Some(shares),
        surplus,
        payoffs,
        verdicts,
        premium_bounds: bounds,
        identities,
        flows,
        balance_residual,
        alternative_split: None,
        notes,
    })
}

/// Model 4: direct insurer with capital `k_0`, excess over the retention
/// ceded to a default-free reinsurer pricing under `Q_r`.
pub fn model4_run(portfolio: &Portfolio) -> Result<ModelReport> {
    let base = Base::new(portfolio)?;
    let p = base.p;
    let fr = p.require_reinsurer()?;
    let charged = p.require_premia()?.to_vec();
    let s = &base.aggregate;
    let k0 = p.capital;

    let qr = worst_case_measure(&p.space, fr, s)?;
    let fair_r = premia_under(qr.measure(), &p.claims);
    let inputs = base.capital_inputs(&charged, &fair_r.premia)?;
    let target = k0 + inputs.iter().sum::<f64>();

    let problem = RetentionProblem::new(&p.space, s.clone(), qr.measure().clone(), target)?;
    let sol = problem.solve();
    let r = sol.retention;
    let charged_total: f64 = charged.iter().sum();
    let retained_claims = s.cap(r);
    let surplus = retained_claims
        .scale(-1.0)
        .shift(k0 + charged_total - sol.ceded_premium);
    let shares = SurplusShares::proportional(k0, &inputs);

    let insurer_payoff = surplus.scale(shares.insurer);
    let insurer_utility = base.u0(&insurer_payoff);
    let mut payoffs = vec![PartyPayoff {
        party: INSURER.into(),
        payoff: insurer_payoff,
    }];
    let mut verdicts = vec![Verdict::new(INSURER, insurer_utility, k0)];
    let mut bounds = Vec::with_capacity(base.n());
    for i in 0..base.n() {
        let name = &p.agents[i];
        let payoff = surplus.scale(shares.agents[i]).shift(-charged[i]);
        let uninsured = base.uninsured(i);
        verdicts.push(Verdict::new(name, base.ui(i, &payoff), uninsured));
        payoffs.push(PartyPayoff {
            party: name.clone(),
            payoff,
        });
        let reinsurer_price = -utility(&p.space, fr, &-&p.claims[i]);
        bounds.push(PremiumBound::new(
            name,
            charged[i],
            reinsurer_price,
            -uninsured,
        ));
    }

    let q0_layer = base.q0.expect(&s.shortfall_below(r));
    let mut identities = vec![Identity::new(
        ID_MODEL4_SCALED,
        insurer_utility,
        shares.insurer * q0_layer,
    )];
    let total_capital = k0 + charged_total - qr.expect(s);
    if !shares.degenerate {
        let layer_gap = qr.expect(&retained_claims) - base.q0.expect(&retained_claims);
        identities.push(Identity::new(
            ID_MODEL4_EXTRA,
            insurer_utility - k0,
            k0 * layer_gap / total_capital,
        ));
    }

    let mut notes = Vec::new();
    degenerate_note(&shares, &mut notes);
    let alternative = alternative_split(&base, &qr, r, &charged, &surplus, &mut notes);

    let flows = Flows {
        premium_income: charged_total,
        capital: k0,
        reinsurance_premium: sol.ceded_premium,
        insurer_claims: retained_claims,
        reinsurer_claims: s.excess_over(r),
        government_transfer: RandomVar::zeros(s.len()),
        distributed: surplus.clone(),
    };
    let balance_residual = flows.balance_residual(s);

    Ok(ModelReport {
        model: ModelId::DirectAndReinsurer,
        atoms: p.space.atoms().to_vec(),
        agents: p.agents.clone(),
        capital: k0,
        premia: PremiaReport {
            fair: base.fair.premia.clone(),
            fair_total: base.fair.total,
            reinsurer_fair: Some(fair_r.premia.clone()),
            charged,
            charged_total,
            premium_input: fair_r.premia,
            capital_input: inputs,
        },
        retention: Some(sol),
        events: None,
        shares: Some(shares),
        surplus,
        payoffs,
        verdicts,
        premium_bounds: bounds,
        identities,
        flows,
        balance_residual,
        alternative_split: Some(alternative),
        notes,
    })
}

fn alternative_split(
    base: &Base<'_>,
    qr: &WorstCaseMeasure,
    r: f64,
    charged: &[f64],
    surplus: &RandomVar,
    notes: &mut Vec<String>,
) -> AlternativeSplit {
    let p = base.p;
    let s = &base.aggregate;
    let above = |atom: usize| s.get(atom) > r + TOL;
    let premium_input: Vec<f64> = p
        .claims
        .iter()
        .map(|x| qr.expect(&x.restrict(above)) + base.q0.expect(&x.restrict(|a| !above(a))))
        .collect();
    let premium_input_total = premium_input.iter().sum();
    let required_total = qr.expect(&s.excess_over(r)) + base.q0.expect(&s.cap(r));
    let raw: Vec<f64> = charged
        .iter()
        .zip(&premium_input)
        .map(|(c, pi)| c - pi)
        .collect();

    let (shares, verdicts) = if raw.iter().all(|&c| c >= -TOL) {
        let inputs: Vec<f64> = raw.iter().map(|c| c.max(0.0)).collect();
        let shares = SurplusShares::proportional(p.capital, &inputs);
        let mut verdicts = vec![Verdict::new(
            INSURER,
            base.u0(&surplus.scale(shares.insurer)),
            p.capital,
        )];
        for i in 0..base.n() {
            let payoff = surplus.scale(shares.agents[i]).shift(-charged[i]);
            verdicts.push(Verdict::new(
                &p.agents[i],
                base.ui(i, &payoff),
                base.uninsured(i),
            ));
        }
        (Some(shares), verdicts)
    } else {
        notes.push(
            "alternative premium-input split suppressed: some charged premium is below its \
             alternative premium input"
                .into(),
        );
        (None, Vec::new())
    };

    AlternativeSplit {
        premium_input,
        premium_input_total,
        required_total,
        capital_input: raw,
        shares,
        verdicts,
        advisory_only: true,
    }
}

/// Runs one model by id.
pub fn run_model(model: ModelId, portfolio: &Portfolio) -> Result<ModelReport> {
    match model {
        ModelId::LimitedLiability => model1_run(portfolio),
        ModelId::Reinsured => model2_run(portfolio),
        ModelId::SurplusSharing => model3_run(portfolio),
        ModelId::DirectAndReinsurer => model4_run(portfolio),
    }
}
