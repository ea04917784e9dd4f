//! Distortion functions and coherent utilities.
//!
//! A convex distortion `f: [0,1] → [0,1]` with `f(0) = 0`, `f(1) = 1` defines
//! the convex game `v = f∘P`. Its core `{Q : Q(A) ≥ f(P(A)) for all A}` is the
//! scenario set of a commonotonic coherent utility
//!
//! ```text
//! u(x) = min_{Q ∈ core} E_Q[x].
//! ```
//!
//! The minimum is attained at the permutation measure that assigns the
//! increments of the dual distortion `f̂(t) = 1 − f(1 − t)` to the atoms of
//! `x` taken in ascending order, so `u` is evaluated by a sort instead of an
//! enumeration of the core.
//!
//! A larger distortion means a smaller core and therefore a larger utility:
//! `f_lo ≤ f_hi` pointwise implies `u_lo ≤ u_hi`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::number::parse_number;
use crate::prob::{ComonotoneOrder, Measure, ProbSpace, RandomVar, MASS_TOL};

const SHAPE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Distortion {
    /// `f(x) = x^γ`, `γ ≥ 1`.
    Power { gamma: f64 },
    /// `f(x) = max(0, (x − (1 − α))/α)`, `α ∈ (0, 1]`.
    ExpectedShortfall { alpha: f64 },
    /// Linear interpolation between knots `(x, f(x))`, `x` strictly increasing
    /// from 0 to 1.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

impl Distortion {
    pub fn power(gamma: f64) -> Result<Self> {
        let f = Distortion::Power { gamma };
        f.validate()?;
        Ok(f)
    }

    pub fn expected_shortfall(alpha: f64) -> Result<Self> {
        let f = Distortion::ExpectedShortfall { alpha };
        f.validate()?;
        Ok(f)
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        let f = Distortion::PiecewiseLinear { knots };
        f.validate()?;
        Ok(f)
    }

    /// `f(x) = x`; the utility it induces is the plain expectation.
    pub fn identity() -> Self {
        Distortion::Power { gamma: 1.0 }
    }

    /// Checks endpoints, monotonicity and convexity.
    ///
    /// The power and expected-shortfall families are checked analytically
    /// through their parameter ranges; piecewise-linear distortions through
    /// their knot sequence (non-decreasing, nonnegative slopes).
    pub fn validate(&self) -> Result<()> {
        match self {
            Distortion::Power { gamma } => {
                if !(gamma.is_finite() && *gamma >= 1.0) {
                    return Err(Error::Distortion(format!(
                        "power exponent must be >= 1, got {gamma}"
                    )));
                }
            }
            Distortion::ExpectedShortfall { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0 && *alpha <= 1.0) {
                    return Err(Error::Distortion(format!(
                        "expected-shortfall level must lie in (0, 1], got {alpha}"
                    )));
                }
            }
            Distortion::PiecewiseLinear { knots } => validate_knots(knots)?,
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            Distortion::Power { gamma } => {
                if *gamma == 1.0 {
                    x
                } else {
                    x.powf(*gamma)
                }
            }
            Distortion::ExpectedShortfall { alpha } => ((x - (1.0 - alpha)) / alpha).max(0.0),
            Distortion::PiecewiseLinear { knots } => interpolate(knots, x),
        }
    }

    /// The dual distortion `f̂(x) = 1 − f(1 − x)`.
    pub fn dual(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            Distortion::Power { gamma } => {
                if *gamma == 1.0 {
                    x
                } else {
                    1.0 - (1.0 - x).powf(*gamma)
                }
            }
            Distortion::ExpectedShortfall { alpha } => (x / alpha).min(1.0),
            Distortion::PiecewiseLinear { .. } => 1.0 - self.eval(1.0 - x),
        }
    }

    /// Interior kink locations.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Distortion::Power { .. } => Vec::new(),
            Distortion::ExpectedShortfall { alpha } => {
                if *alpha < 1.0 {
                    vec![1.0 - alpha]
                } else {
                    Vec::new()
                }
            }
            Distortion::PiecewiseLinear { knots } => knots.iter().map(|&(x, _)| x).collect(),
        }
    }
}

fn validate_knots(knots: &[(f64, f64)]) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::Distortion(
            "piecewise-linear distortion needs at least two knots".into(),
        ));
    }
    if knots.iter().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(Error::Distortion("knots must be finite".into()));
    }
    let (x0, y0) = knots[0];
    let (xn, yn) = knots[knots.len() - 1];
    if x0.abs() > SHAPE_TOL || y0.abs() > SHAPE_TOL {
        return Err(Error::Distortion(format!(
            "first knot must be (0, 0), got ({x0}, {y0})"
        )));
    }
    if (xn - 1.0).abs() > SHAPE_TOL || (yn - 1.0).abs() > SHAPE_TOL {
        return Err(Error::Distortion(format!(
            "last knot must be (1, 1), got ({xn}, {yn})"
        )));
    }
    let mut prev_slope = f64::NEG_INFINITY;
    for (k, w) in knots.windows(2).enumerate() {
        let (xa, ya) = w[0];
        let (xb, yb) = w[1];
        if xb <= xa {
            return Err(Error::Distortion(format!(
                "knot abscissae must be strictly increasing (segment {k})"
            )));
        }
        let slope = (yb - ya) / (xb - xa);
        if slope < -SHAPE_TOL {
            return Err(Error::Distortion(format!(
                "distortion decreases on segment {k} (slope {slope})"
            )));
        }
        if slope < prev_slope - SHAPE_TOL {
            return Err(Error::Distortion(format!(
                "distortion is not convex: slope {slope} on segment {k} after {prev_slope}"
            )));
        }
        prev_slope = slope;
    }
    Ok(())
}

fn interpolate(knots: &[(f64, f64)], x: f64) -> f64 {
    let k = knots.partition_point(|&(kx, _)| kx <= x);
    if k == 0 {
        return knots[0].1;
    }
    if k == knots.len() {
        return knots[k - 1].1;
    }
    let (xa, ya) = knots[k - 1];
    let (xb, yb) = knots[k];
    ya + (yb - ya) * (x - xa) / (xb - xa)
}

/// Free-function form of [`Distortion::validate`].
pub fn validate_distortion(f: &Distortion) -> Result<()> {
    f.validate()
}

/// The dual distortion as a closure.
pub fn dual_distortion(f: &Distortion) -> impl Fn(f64) -> f64 + '_ {
    move |x| f.dual(x)
}

impl fmt::Display for Distortion {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distortion::Power { gamma } => write!(out, "power:{gamma}"),
            Distortion::ExpectedShortfall { alpha } => write!(out, "es:{alpha}"),
            Distortion::PiecewiseLinear { knots } => {
                write!(out, "pwl:")?;
                for (k, (x, y)) in knots.iter().enumerate() {
                    if k > 0 {
                        write!(out, ";")?;
                    }
                    write!(out, "{x},{y}")?;
                }
                Ok(())
            }
        }
    }
}

/// Grammar: `power:γ`, `es:α`, `pwl:x0,y0;x1,y1;...`. Numbers may be
/// fractions.
impl FromStr for Distortion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, args) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("distortion `{s}` lacks a `family:` prefix")))?;
        match family.trim() {
            "power" => Distortion::power(parse_number(args)?),
            "es" => Distortion::expected_shortfall(parse_number(args)?),
            "pwl" => {
                let knots = args
                    .split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(|pair| {
                        let (x, y) = pair.split_once(',').ok_or_else(|| {
                            Error::Parse(format!("knot `{pair}` is not of the form x,y"))
                        })?;
                        Ok((parse_number(x)?, parse_number(y)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Distortion::piecewise_linear(knots)
            }
            other => Err(Error::Parse(format!("unknown distortion family `{other}`"))),
        }
    }
}

/// The permutation measure of the core of `f∘P` attached to `order`.
///
/// Walking `order` from its first position, each tie group receives
/// `f̂(c_end) − f̂(c_start)` where `c` is cumulative `P`-mass; the group total
/// is split across its atoms proportionally to `P`. For the descending order
/// of a variable `s` this measure maximizes `E_Q[g(s)]` over the core for
/// every non-decreasing `g`.
pub fn extremal_measure(space: &ProbSpace, f: &Distortion, order: &ComonotoneOrder) -> Measure {
    let probs = space.probs();
    let mut weights = vec![0.0; space.len()];
    let mut cum = 0.0;
    let mut dual_prev = 0.0;
    let groups = order.tie_groups().len();
    for (g, atoms) in order.groups().enumerate() {
        let group_mass: f64 = atoms.iter().map(|&a| probs[a]).sum();
        cum += group_mass;
        let dual_next = if g + 1 == groups { 1.0 } else { f.dual(cum) };
        let group_weight = dual_next - dual_prev;
        for &a in atoms {
            weights[a] = group_weight * probs[a] / group_mass;
        }
        dual_prev = dual_next;
    }
    debug_assert!((weights.iter().sum::<f64>() - 1.0).abs() < MASS_TOL * 10.0);
    Measure::from_increments(weights)
}

/// The measure attaining `u(x)` for the commonotonic utility of `f`.
pub fn minimizing_measure(space: &ProbSpace, f: &Distortion, x: &RandomVar) -> Result<Measure> {
    let order = space.comonotone_order(&-x)?;
    Ok(extremal_measure(space, f, &order))
}

/// `u(x) = min over the core of f∘P of E_Q[x]`, the Choquet integral of `x`.
pub fn choquet_utility(space: &ProbSpace, f: &Distortion, x: &RandomVar) -> Result<f64> {
    let q = minimizing_measure(space, f, x)?;
    Ok(q.expect(x))
}

/// `min_k E_{Q_k}[x]` and the first index attaining it.
pub fn scenario_utility(
    space: &ProbSpace,
    measures: &[Measure],
    x: &RandomVar,
) -> Result<(f64, usize)> {
    if measures.is_empty() {
        return Err(Error::EmptyScenarioSet);
    }
    let mut best = (f64::INFINITY, 0);
    for (k, q) in measures.iter().enumerate() {
        let e = space.expectation(x, q)?;
        if e < best.0 {
            best = (e, k);
        }
    }
    Ok(best)
}

/// `f_lo ≤ f_hi + 1e-12` on `{0, 1/grid, ..., 1}` and on every kink of both.
pub fn utility_dominates(f_lo: &Distortion, f_hi: &Distortion, grid: usize) -> bool {
    let grid = grid.max(1);
    let uniform = (0..=grid).map(|k| k as f64 / grid as f64);
    let kinks = f_lo.kinks().into_iter().chain(f_hi.kinks());
    uniform
        .chain(kinks)
        .all(|x| f_lo.eval(x) <= f_hi.eval(x) + SHAPE_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSet {
    /// The core of `f∘P`; never materialized.
    Distortion(Distortion),
    Explicit(Vec<Measure>),
}

/// A coherent utility represented by its scenario set.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentUtility {
    scenario: ScenarioSet,
}

impl CoherentUtility {
    pub fn commonotonic(f: Distortion) -> Result<Self> {
        f.validate()?;
        Ok(CoherentUtility {
            scenario: ScenarioSet::Distortion(f),
        })
    }

    pub fn from_measures(measures: Vec<Measure>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::EmptyScenarioSet);
        }
        Ok(CoherentUtility {
            scenario: ScenarioSet::Explicit(measures),
        })
    }

    pub fn scenario(&self) -> &ScenarioSet {
        &self.scenario
    }

    pub fn evaluate(&self, space: &ProbSpace, x: &RandomVar) -> Result<f64> {
        match &self.scenario {
            ScenarioSet::Distortion(f) => choquet_utility(space, f, x),
            ScenarioSet::Explicit(ms) => scenario_utility(space, ms, x).map(|(u, _)| u),
        }
    }

    /// `sup_Q E_Q[x] = −u(−x)`, the premium asked for carrying `x`.
    pub fn premium(&self, space: &ProbSpace, x: &RandomVar) -> Result<f64> {
        self.evaluate(space, &-x).map(|u| -u)
    }
}
