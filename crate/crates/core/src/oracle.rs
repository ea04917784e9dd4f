//! Brute-force cross-checks and random instances.
//!
//! Nothing here is used by the production routines. Core enumeration is
//! factorial and event enumeration exponential in the atom count, so both
//! are guarded by [`MAX_ORACLE_ATOMS`]. The bisection retention evaluates
//! `Φ` as a plain sum and never looks at breakpoints.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::allocation::{fair_premia, total_premium, worst_case_measure};
use crate::coherent::{choquet_utility, Distortion};
use crate::error::{Error, Result};
use crate::models::{model1_run, model2_run, model3_run, model4_run, Portfolio, INSURER};
use crate::models::{ID_MODEL2_EQUALITY, ID_MODEL3_RETAINED};
use crate::prob::{Measure, ProbSpace, RandomVar};
use crate::retention::RetentionProblem;

pub const MAX_ORACLE_ATOMS: usize = 8;
pub const MAX_ORACLE_AGENTS: usize = 5;

/// Width of the final bisection bracket.
pub const BISECTION_WIDTH: f64 = 1e-10;

/// The permutation measures of the core of `f∘P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePointSet {
    pub measures: Vec<Measure>,
    pub permutations: Vec<Vec<usize>>,
}

impl ExtremePointSet {
    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }
}

fn guard(found: usize, max: usize) -> Result<()> {
    if found > max {
        Err(Error::GuardExceeded { found, max })
    } else {
        Ok(())
    }
}

/// For each permutation `σ`, atom `σ(k)` gets `f(c_k) − f(c_{k−1})` with
/// `c_k` the cumulative `P`-mass along `σ`.
pub fn core_extreme_points(space: &ProbSpace, f: &Distortion) -> Result<ExtremePointSet> {
    guard(space.len(), MAX_ORACLE_ATOMS)?;
    let probs = space.probs();
    let mut measures = Vec::new();
    let mut permutations = Vec::new();
    for perm in (0..space.len()).permutations(space.len()) {
        let mut weights = vec![0.0; space.len()];
        let mut cum = 0.0;
        let mut prev = 0.0;
        for (k, &atom) in perm.iter().enumerate() {
            cum += probs[atom];
            let next = if k + 1 == perm.len() {
                1.0
            } else {
                f.eval(cum)
            };
            weights[atom] = (next - prev).max(0.0);
            prev = next;
        }
        measures.push(Measure::new(weights)?);
        permutations.push(perm);
    }
    Ok(ExtremePointSet {
        measures,
        permutations,
    })
}

/// `min` of `E_Q[x]` over the core's extreme points.
pub fn oracle_utility(space: &ProbSpace, f: &Distortion, x: &RandomVar) -> Result<f64> {
    space.check_var(x)?;
    let points = core_extreme_points(space, f)?;
    Ok(points
        .measures
        .iter()
        .map(|q| q.expect(x))
        .fold(f64::INFINITY, f64::min))
}

/// Whether `Q(A) ≥ f(P(A)) − tol` for every event `A`.
pub fn core_contains(space: &ProbSpace, f: &Distortion, q: &Measure, tol: f64) -> Result<bool> {
    guard(space.len(), MAX_ORACLE_ATOMS)?;
    space.check_measure(q)?;
    let n = space.len();
    for mask in 0u32..(1 << n) {
        let inside = |a: usize| mask & (1 << a) != 0;
        let qa = q.mass_of(inside);
        let pa: f64 = (0..n)
            .filter(|&a| inside(a))
            .map(|a| space.probs()[a])
            .sum();
        if qa < f.eval(pa) - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `x` with `E_q[(x − s)^+] ≤ target`, by bisection on
/// `[0, max(s) + target + 1]`; returns the right end of the final bracket.
pub fn oracle_retention(space: &ProbSpace, q: &Measure, s: &RandomVar, target: f64) -> Result<f64> {
    space.check_var(s)?;
    space.check_measure(q)?;
    if !(target.is_finite() && target >= 0.0) {
        return Err(Error::invalid(
            "target",
            format!("must be >= 0, got {target}"),
        ));
    }
    let phi = |x: f64| -> f64 {
        s.values()
            .iter()
            .zip(q.weights())
            .map(|(&v, &w)| w * (x - v).max(0.0))
            .sum()
    };
    let mut lo = 0.0;
    let mut hi = s.max().max(0.0) + target + 1.0;
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if phi(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Shape of a random instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dims {
    pub atoms: usize,
    pub agents: usize,
    /// Probability that an atom copies the claims of an earlier atom; 1
    /// makes every claim vector, hence `S`, constant.
    pub tie_frequency: f64,
}

impl Dims {
    pub fn new(atoms: usize, agents: usize) -> Self {
        Dims {
            atoms,
            agents,
            tie_frequency: 0.0,
        }
    }

    pub fn with_ties(mut self, tie_frequency: f64) -> Self {
        self.tie_frequency = tie_frequency;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstance {
    pub seed: u64,
    /// Carries charged premia `p_i ≥ max(π_i, π^r_i)` and a reinsurer, with
    /// `f_i ≤ f_r ≤ f_0` pointwise.
    pub portfolio: Portfolio,
}

/// Deterministic random instance for `seed`.
pub fn random_instance(seed: u64, dims: Dims) -> Result<RandomInstance> {
    guard(dims.atoms, MAX_ORACLE_ATOMS)?;
    guard(dims.agents, MAX_ORACLE_AGENTS)?;
    if dims.atoms == 0 || dims.agents == 0 {
        return Err(Error::invalid(
            "dims",
            "need at least one atom and one agent",
        ));
    }
    if !(0.0..=1.0).contains(&dims.tie_frequency) {
        return Err(Error::invalid("dims.tie_frequency", "must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = random_space(&mut rng, dims.atoms);

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dims.atoms);
    for a in 0..dims.atoms {
        if a > 0 && rng.gen_bool(dims.tie_frequency) {
            let from = rng.gen_range(0..a);
            let copy = columns[from].clone();
            columns.push(copy);
        } else {
            columns.push(
                (0..dims.agents)
                    .map(|_| {
                        if rng.gen_bool(0.2) {
                            0.0
                        } else {
                            rng.gen_range(0.0..3.0)
                        }
                    })
                    .collect(),
            );
        }
    }
    let claims: Vec<RandomVar> = (0..dims.agents)
        .map(|i| RandomVar::new(columns.iter().map(|c| c[i]).collect()))
        .collect::<Result<_>>()?;

    let agent_utilities: Vec<Distortion> = (0..dims.agents)
        .map(|_| random_distortion(&mut rng))
        .collect();
    let mut reinsurer = random_distortion(&mut rng);
    for f in &agent_utilities {
        reinsurer = pwl_max(&reinsurer, f);
    }
    let reinsurer = toward_identity(&reinsurer, mixing_weight(&mut rng));
    let insurer = if rng.gen_bool(0.05) {
        Distortion::identity()
    } else {
        let f = pwl_max(&random_distortion(&mut rng), &reinsurer);
        toward_identity(&f, mixing_weight(&mut rng))
    };

    let s = RandomVar::sum_of(&claims)?;
    let capital = if rng.gen_bool(0.1) {
        0.0
    } else {
        rng.gen_range(0.0..2.0) * s.max().max(0.1)
    };

    let fair0 = fair_premia(&space, &insurer, &claims)?;
    let fair_r = fair_premia(&space, &reinsurer, &claims)?;
    let premia = claims
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let floor = fair0.get(i).max(fair_r.get(i));
            let bound = -choquet_utility(&space, &reinsurer, &-x).expect("same space");
            let room = (bound - floor).max(0.0);
            match rng.gen_range(0..3) {
                0 => floor,
                1 => floor + rng.gen_range(0.0..=1.0) * room,
                _ => floor + rng.gen_range(0.0..1.0) * (room + 0.5),
            }
        })
        .collect();

    let portfolio = Portfolio::new(space, claims, capital, insurer, agent_utilities)?
        .with_reinsurer(reinsurer)?
        .with_premia(premia)?;
    Ok(RandomInstance { seed, portfolio })
}

/// Random space with probabilities from a positive uniform draw, normalized.
pub fn random_space(rng: &mut impl Rng, atoms: usize) -> ProbSpace {
    let raw: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    ProbSpace::with_probs(raw.iter().map(|w| w / total).collect()).expect("normalized draw")
}

/// Random convex distortion: power, expected shortfall or piecewise linear.
pub fn random_any_distortion(rng: &mut impl Rng) -> Distortion {
    match rng.gen_range(0..3) {
        0 => Distortion::power(rng.gen_range(1.0..5.0)).expect("gamma >= 1"),
        1 => Distortion::expected_shortfall(rng.gen_range(0.05..=1.0)).expect("alpha in (0,1]"),
        _ => random_distortion(rng),
    }
}

/// Random piecewise-linear convex distortion; one in five is an
/// expected-shortfall kink written as knots.
pub fn random_distortion(rng: &mut impl Rng) -> Distortion {
    if rng.gen_bool(0.2) {
        let alpha: f64 = rng.gen_range(0.05..1.0);
        return Distortion::piecewise_linear(vec![(0.0, 0.0), (1.0 - alpha, 0.0), (1.0, 1.0)])
            .expect("expected-shortfall knots");
    }
    let interior = rng.gen_range(1..=4);
    let mut xs: Vec<f64> = (0..interior).map(|_| rng.gen_range(0.02..0.98)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut grid = vec![0.0];
    grid.extend(xs);
    grid.push(1.0);

    let mut slope = if rng.gen_bool(0.2) {
        0.0
    } else {
        rng.gen_range(0.0..1.0)
    };
    let mut knots = vec![(0.0, 0.0)];
    let mut y = 0.0;
    for w in grid.windows(2) {
        y += slope * (w[1] - w[0]);
        knots.push((w[1], y));
        slope += rng.gen_range(0.0..2.0);
    }
    if y <= 0.0 {
        return Distortion::identity();
    }
    for k in knots.iter_mut() {
        k.1 /= y;
    }
    let last = knots.len() - 1;
    knots[last] = (1.0, 1.0);
    Distortion::piecewise_linear(knots).expect("convex by construction")
}

fn knots_of(f: &Distortion) -> Option<Vec<(f64, f64)>> {
    match f {
        Distortion::PiecewiseLinear { knots } => Some(knots.clone()),
        Distortion::ExpectedShortfall { alpha } if *alpha < 1.0 => {
            Some(vec![(0.0, 0.0), (1.0 - alpha, 0.0), (1.0, 1.0)])
        }
        Distortion::ExpectedShortfall { .. } | Distortion::Power { gamma: 1.0 } => {
            Some(vec![(0.0, 0.0), (1.0, 1.0)])
        }
        Distortion::Power { .. } => None,
    }
}

fn mixing_weight(rng: &mut impl Rng) -> f64 {
    if rng.gen_bool(0.2) {
        0.0
    } else {
        rng.gen_range(0.0..0.8)
    }
}

/// `(1 − t)·f + t·x` for a piecewise-linear `f`; convex and at least `f`.
pub fn toward_identity(f: &Distortion, t: f64) -> Distortion {
    let knots = knots_of(f).expect("piecewise-linear input");
    let mixed = knots
        .iter()
        .map(|&(x, y)| (x, (1.0 - t) * y + t * x))
        .collect();
    Distortion::piecewise_linear(mixed).expect("mixture of convex distortions is convex")
}

/// Pointwise maximum of two piecewise-linear convex distortions, exact on
/// their knots and crossings. The maximum of convex functions is convex.
pub fn pwl_max(a: &Distortion, b: &Distortion) -> Distortion {
    let (ka, kb) = match (knots_of(a), knots_of(b)) {
        (Some(ka), Some(kb)) => (ka, kb),
        _ => panic!("pwl_max needs piecewise-linear inputs"),
    };
    let mut xs: Vec<f64> = ka.iter().chain(&kb).map(|k| k.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|x, prev| (*x - *prev).abs() < 1e-12);

    let diff = |x: f64| a.eval(x) - b.eval(x);
    let mut points = vec![xs[0]];
    for w in xs.windows(2) {
        let (dl, dr) = (diff(w[0]), diff(w[1]));
        if dl * dr < 0.0 {
            let cross = w[0] + (w[1] - w[0]) * dl / (dl - dr);
            if cross - w[0] > 1e-6 && w[1] - cross > 1e-6 {
                points.push(cross);
            }
        }
        points.push(w[1]);
    }
    let mut knots: Vec<(f64, f64)> = points
        .iter()
        .map(|&x| (x, a.eval(x).max(b.eval(x))))
        .collect();
    knots[0] = (0.0, 0.0);
    let last = knots.len() - 1;
    knots[last] = (1.0, 1.0);

    // Segments of one input split at a knot of the other are collinear in
    // exact arithmetic; rounding can make them look concave.
    let slope = |p: (f64, f64), q: (f64, f64)| (q.1 - p.1) / (q.0 - p.0);
    let mut merged = vec![knots[0]];
    for k in 1..knots.len() - 1 {
        let prev = *merged.last().expect("non-empty");
        let (s_in, s_out) = (slope(prev, knots[k]), slope(knots[k], knots[k + 1]));
        if (s_out - s_in).abs() > 1e-9 * s_in.abs().max(1.0) {
            merged.push(knots[k]);
        }
    }
    merged.push(knots[last]);
    let knots = merged;
    Distortion::piecewise_linear(knots).expect("max of convex distortions is convex")
}

/// Outcome of one family of brute-force checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: &str, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            cases: 0,
            failures: 0,
            max_error: 0.0,
            tolerance,
        }
    }

    fn record_error(&mut self, err: f64) {
        self.cases += 1;
        self.max_error = self.max_error.max(err);
        if !(err <= self.tolerance) {
            self.failures += 1;
        }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub instances: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Runs the oracle comparisons and acceptability checks on `instances` random
/// portfolios with up to six atoms.
pub fn verify_suite(seed: u64, instances: usize) -> Result<VerifyReport> {
    let mut choquet = CheckResult::new("choquet utility = extreme-point minimum", 1e-9);
    let mut core = CheckResult::new("extreme points lie in the core", 1e-12);
    let mut retention = CheckResult::new("breakpoint retention = bisection retention", 1e-8);
    let mut exhaustion = CheckResult::new("fair premia exhaust the total premium", 1e-12);
    let mut insurer = CheckResult::new("insurer acceptability, models 1, 3, 4", 0.0);
    let mut equalities = CheckResult::new("model 2 and 3 utility equalities", 1e-9);
    let mut agents = CheckResult::new("agent acceptability under sufficient premium bounds", 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..instances {
        let dims = Dims::new(rng.gen_range(2..=6), rng.gen_range(1..=3))
            .with_ties(if rng.gen_bool(0.3) { 0.4 } else { 0.0 });
        let inst = random_instance(seed.wrapping_mul(1_000_003).wrapping_add(k as u64), dims)?;
        let p = &inst.portfolio;
        let s = p.aggregate();
        let x = RandomVar::new(
            (0..p.space.len())
                .map(|_| rng.gen_range(-5.0..5.0))
                .collect(),
        )?;

        let mut distortions = vec![p.insurer.clone(), p.reinsurer.clone().expect("generated")];
        distortions.push(random_any_distortion(&mut rng));
        for f in &distortions {
            let fast = choquet_utility(&p.space, f, &x)?;
            let slow = oracle_utility(&p.space, f, &x)?;
            choquet.record_error((fast - slow).abs());
        }
        for q in core_extreme_points(&p.space, &p.insurer)?
            .measures
            .iter()
            .take(24)
        {
            core.record(core_contains(&p.space, &p.insurer, q, core.tolerance)?);
        }

        for f in &distortions[..2] {
            let q = worst_case_measure(&p.space, f, &s)?;
            let target = p.capital + rng.gen_range(0.0..1.0);
            let fast = RetentionProblem::new(&p.space, s.clone(), q.measure().clone(), target)?
                .solve()
                .retention;
            let slow = oracle_retention(&p.space, q.measure(), &s, target)?;
            retention.record_error((fast - slow).abs());
        }

        let pv = fair_premia(&p.space, &p.insurer, &p.claims)?;
        let pi0 = total_premium(&p.space, &p.insurer, &p.claims)?;
        exhaustion.record_error((pv.total - pi0).abs());

        let m1 = model1_run(p)?;
        let m2 = model2_run(p)?;
        let m3 = model3_run(p)?;
        let m4 = model4_run(p)?;
        for report in [&m1, &m3, &m4] {
            insurer.record(report.insurer_verdict().accepted);
        }
        equalities.record_error(
            m2.identity(ID_MODEL2_EQUALITY)
                .map_or(f64::NAN, |i| i.residual.abs()),
        );
        equalities.record_error(
            m3.identity(ID_MODEL3_RETAINED)
                .map_or(f64::NAN, |i| i.residual.abs()),
        );

        for report in [&m3, &m4] {
            for bound in report
                .premium_bounds
                .iter()
                .filter(|b| b.within_sufficient_bound)
            {
                let verdict = report.verdict(&bound.agent).expect("agent verdict");
                agents.record(verdict.accepted);
            }
        }
        debug_assert!(m1.verdict(INSURER).is_some());
    }

    Ok(VerifyReport {
        seed,
        instances,
        checks: vec![
            choquet, core, retention, exhaustion, insurer, equalities, agents,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_atom_extreme_points() {
        let space = ProbSpace::uniform(2);
        let f = Distortion::power(2.0).unwrap();
        let pts = core_extreme_points(&space, &f).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts.measures[0].weights(), &[0.25, 0.75]);
        assert_eq!(pts.measures[1].weights(), &[0.75, 0.25]);
    }

    #[test]
    fn identity_core_is_reference() {
        let space = ProbSpace::with_probs(vec![0.2, 0.3, 0.5]).unwrap();
        let pts = core_extreme_points(&space, &Distortion::identity()).unwrap();
        assert_eq!(pts.len(), 6);
        for q in &pts.measures {
            for (w, p) in q.weights().iter().zip(space.probs()) {
                assert!((w - p).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn w1_enumeration() {
        let space = ProbSpace::uniform(4);
        let s = RandomVar::new(vec![0.0, 1.0, 2.0, 4.0]).unwrap();
        let f0 = Distortion::power(2.0).unwrap();
        assert_eq!(core_extreme_points(&space, &f0).unwrap().len(), 24);
        let u = oracle_utility(&space, &f0, &-&s).unwrap();
        assert!((u + 41.0 / 16.0).abs() < 1e-12);
        let u = oracle_utility(&space, &f0, &RandomVar::constant(4, 1.5)).unwrap();
        assert!((u - 1.5).abs() < 1e-12);
    }

    #[test]
    fn guards() {
        let space = ProbSpace::uniform(9);
        assert!(matches!(
            core_extreme_points(&space, &Distortion::identity()),
            Err(Error::GuardExceeded { found: 9, max: 8 })
        ));
        assert!(random_instance(1, Dims::new(9, 1)).is_err());
        assert!(random_instance(1, Dims::new(3, 6)).is_err());
    }

    #[test]
    fn bisection_on_w1() {
        let space = ProbSpace::uniform(4);
        let s = RandomVar::new(vec![0.0, 1.0, 2.0, 4.0]).unwrap();
        let q0 = Measure::new(vec![1.0 / 16.0, 3.0 / 16.0, 5.0 / 16.0, 7.0 / 16.0]).unwrap();
        let r = oracle_retention(&space, &q0, &s, 1.0).unwrap();
        assert!((r - 29.0 / 9.0).abs() < 1e-9);
        let qr = Measure::new(vec![1.0 / 64.0, 7.0 / 64.0, 19.0 / 64.0, 37.0 / 64.0]).unwrap();
        let r = oracle_retention(&space, &qr, &s, 1.0).unwrap();
        assert!((r - 257.0 / 64.0).abs() < 1e-9);
        let zero = RandomVar::zeros(4);
        let r = oracle_retention(&space, &space.reference_measure(), &zero, 0.0).unwrap();
        assert!(r.abs() < 1e-9);
    }

    #[test]
    fn instances_are_deterministic_and_valid() {
        let a = random_instance(42, Dims::new(5, 3)).unwrap();
        let b = random_instance(42, Dims::new(5, 3)).unwrap();
        assert_eq!(a, b);
        for seed in 0..100 {
            let inst = random_instance(
                seed,
                Dims::new(1 + (seed as usize % 8), 1 + (seed as usize % 5)),
            )
            .unwrap();
            inst.portfolio.validate().unwrap();
        }
    }

    #[test]
    fn full_tie_frequency_makes_aggregate_constant() {
        let inst = random_instance(7, Dims::new(6, 2).with_ties(1.0)).unwrap();
        assert!(inst.portfolio.aggregate().is_constant());
    }

    #[test]
    fn pwl_max_dominates_both() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = random_distortion(&mut rng);
            let b = random_distortion(&mut rng);
            let m = pwl_max(&a, &b);
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let expect = a.eval(x).max(b.eval(x));
                assert!(m.eval(x) >= expect - 1e-12, "{a} {b} at {x}");
                assert!((m.eval(x) - expect).abs() < 1e-6, "{a} {b} at {x}");
            }
        }
    }
}
