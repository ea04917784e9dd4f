//! Optimal retention levels.
//!
//! For aggregate claims `s ≥ 0` priced under `q`, the retention function
//!
//! ```text
//! Φ(x) = x − E_q[s ∧ x] = E_q[(x − s)^+] = ∫_0^x q(s ≤ a) da
//! ```
//!
//! is piecewise linear with breakpoints at the values of `s` carrying
//! positive `q`-mass, slope `q(s ≤ a)` between them and slope 1 past the
//! largest. The optimal retention for available funds `k` is the largest `R`
//! with `Φ(R) = k`, found by locating the segment and inverting its linear
//! piece. The same routine serves `Ψ` by passing `Q_r` instead of `Q_0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{Measure, ProbSpace, RandomVar, TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct RetentionProblem {
    aggregate: RandomVar,
    pricing: Measure,
    target: f64,
    breakpoints: Vec<Breakpoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Breakpoint {
    value: f64,
    mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetentionSolution {
    /// `R`.
    pub retention: f64,
    /// `π^R = E_q[s ∧ R]`.
    pub retained_premium: f64,
    /// `ρ^R = E_q[(s − R)^+]`.
    pub ceded_premium: f64,
    /// Index of the breakpoint opening the segment containing `R`; equal to
    /// the breakpoint count when `R` lies past the largest claim value.
    pub segment: usize,
    /// Whether `R` came from closed-form segment inversion.
    pub exact: bool,
    pub beyond_max_claim: bool,
}

impl RetentionProblem {
    pub fn new(
        space: &ProbSpace,
        aggregate: RandomVar,
        pricing: Measure,
        target: f64,
    ) -> Result<Self> {
        space.check_var(&aggregate)?;
        space.check_measure(&pricing)?;
        if !(target.is_finite() && target >= 0.0) {
            return Err(Error::invalid(
                "target",
                format!("must be >= 0, got {target}"),
            ));
        }
        if let Some(atom) = aggregate.values().iter().position(|&v| v < 0.0) {
            return Err(Error::invalid(
                format!("aggregate[{atom}]"),
                format!(
                    "aggregate claims must be nonnegative, got {}",
                    aggregate.get(atom)
                ),
            ));
        }
        let breakpoints = breakpoints(&aggregate, &pricing);
        Ok(RetentionProblem {
            aggregate,
            pricing,
            target,
            breakpoints,
        })
    }

    pub fn aggregate(&self) -> &RandomVar {
        &self.aggregate
    }

    pub fn pricing(&self) -> &Measure {
        &self.pricing
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn with_target(&self, target: f64) -> Result<Self> {
        if !(target.is_finite() && target >= 0.0) {
            return Err(Error::invalid(
                "target",
                format!("must be >= 0, got {target}"),
            ));
        }
        Ok(RetentionProblem {
            target,
            ..self.clone()
        })
    }

    /// `Φ(x)` as the integral of the step cdf over the breakpoints.
    pub fn phi(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::invalid("x", format!("must be >= 0, got {x}")));
        }
        let mut area = 0.0;
        let mut left = 0.0;
        let mut cdf = 0.0;
        for bp in &self.breakpoints {
            if bp.value >= x {
                break;
            }
            area += cdf * (bp.value - left);
            left = bp.value;
            cdf += bp.mass;
        }
        Ok(area + cdf * (x - left))
    }

    /// Largest `R ≥ 0` with `Φ(R) = target`.
    pub fn solve(&self) -> RetentionSolution {
        let (retention, segment) = self.invert();
        let retained_premium = self.pricing.expect(&self.aggregate.cap(retention));
        let ceded_premium = self.pricing.expect(&self.aggregate.excess_over(retention));
        RetentionSolution {
            retention,
            retained_premium,
            ceded_premium,
            segment,
            exact: true,
            beyond_max_claim: segment == self.breakpoints.len(),
        }
    }

    fn invert(&self) -> (f64, usize) {
        let target = self.target;
        if target == 0.0 {
            // Φ vanishes up to the q-essential infimum of s and increases
            // strictly after it.
            return match self.breakpoints.first() {
                Some(bp) => (bp.value, 0),
                None => (0.0, 0),
            };
        }
        let mut area = 0.0;
        let mut left = 0.0;
        let mut cdf = 0.0;
        for (k, bp) in self.breakpoints.iter().enumerate() {
            let next = area + cdf * (bp.value - left);
            if cdf > 0.0 && next >= target {
                return (left + (target - area) / cdf, k.saturating_sub(1));
            }
            area = next;
            left = bp.value;
            cdf += bp.mass;
        }
        // past the largest value the slope is q(s ≤ max s) = 1
        (left + (target - area), self.breakpoints.len())
    }
}

/// Distinct values of `s` with positive `q`-mass, ascending, with their mass.
fn breakpoints(s: &RandomVar, q: &Measure) -> Vec<Breakpoint> {
    let mut atoms: Vec<(f64, f64)> = s
        .values()
        .iter()
        .zip(q.weights())
        .filter(|(_, &w)| w > 0.0)
        .map(|(&v, &w)| (v, w))
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<Breakpoint> = Vec::with_capacity(atoms.len());
    for (value, mass) in atoms {
        match out.last_mut() {
            Some(last) if value - last.value <= TOL => last.mass += mass,
            _ => out.push(Breakpoint { value, mass }),
        }
    }
    out
}

/// Free-function form of [`RetentionProblem::phi`].
pub fn phi_eval(problem: &RetentionProblem, x: f64) -> Result<f64> {
    problem.phi(x)
}

/// Free-function form of [`RetentionProblem::solve`].
pub fn solve_retention(problem: &RetentionProblem) -> RetentionSolution {
    problem.solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn w1(q: &[f64], target: f64) -> RetentionProblem {
        let space = ProbSpace::uniform(4);
        let s = RandomVar::new(vec![0.0, 1.0, 2.0, 4.0]).unwrap();
        RetentionProblem::new(&space, s, Measure::new(q.to_vec()).unwrap(), target).unwrap()
    }

    const Q0: [f64; 4] = [1.0 / 16.0, 3.0 / 16.0, 5.0 / 16.0, 7.0 / 16.0];
    const QR: [f64; 4] = [1.0 / 64.0, 7.0 / 64.0, 19.0 / 64.0, 37.0 / 64.0];

    #[test]
    fn phi_on_w1() {
        let p = w1(&Q0, 1.0);
        close(p.phi(2.0).unwrap(), 5.0 / 16.0, 1e-15);
        assert_eq!(p.phi(0.0).unwrap(), 0.0);
        close(p.phi(0.5).unwrap(), 0.5 / 16.0, 1e-15);
        close(p.phi(4.0).unwrap(), 23.0 / 16.0, 1e-15);
        close(p.phi(5.0).unwrap(), 39.0 / 16.0, 1e-15);
        assert!(p.phi(-1.0).is_err());
    }

    #[test]
    fn phi_of_constant_aggregate() {
        let space = ProbSpace::uniform(3);
        let s = RandomVar::constant(3, 2.0);
        let p = RetentionProblem::new(&space, s, space.reference_measure(), 0.0).unwrap();
        for x in [0.0, 1.0, 2.0, 3.5, 10.0] {
            close(p.phi(x).unwrap(), (x - 2.0_f64).max(0.0), 1e-15);
        }
    }

    #[test]
    fn solves_w1_under_q0() {
        let sol = w1(&Q0, 1.0).solve();
        close(sol.retention, 29.0 / 9.0, 1e-12);
        close(sol.retained_premium, 20.0 / 9.0, 1e-12);
        close(sol.ceded_premium, 49.0 / 144.0, 1e-12);
        assert!(sol.exact);
        assert!(!sol.beyond_max_claim);
        assert_eq!(sol.segment, 2);
    }

    #[test]
    fn solves_w1_under_qr_beyond_max() {
        let sol = w1(&QR, 1.0).solve();
        close(sol.retention, 257.0 / 64.0, 1e-12);
        close(sol.ceded_premium, 0.0, 1e-15);
        assert!(sol.beyond_max_claim);
    }

    #[test]
    fn zero_target() {
        let sol = w1(&Q0, 0.0).solve();
        assert_eq!(sol.retention, 0.0);

        // zero-mass lower atoms: Φ stays flat until the q-essential infimum
        let space = ProbSpace::uniform(3);
        let s = RandomVar::new(vec![0.0, 1.5, 3.0]).unwrap();
        let q = Measure::new(vec![0.0, 0.5, 0.5]).unwrap();
        let p = RetentionProblem::new(&space, s, q, 0.0).unwrap();
        assert_eq!(p.solve().retention, 1.5);
        let p = p.with_target(0.25).unwrap();
        close(p.solve().retention, 2.0, 1e-15);
    }

    #[test]
    fn round_trip_and_identities() {
        for target in [0.01, 0.3125, 0.5, 1.0, 1.4375, 2.0, 7.5] {
            let p = w1(&Q0, target);
            let sol = p.solve();
            close(p.phi(sol.retention).unwrap(), target, 1e-12);
            close(sol.retention - sol.retained_premium, target, 1e-9);
            close(sol.retained_premium + sol.ceded_premium, 41.0 / 16.0, 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let space = ProbSpace::uniform(2);
        let s = RandomVar::new(vec![0.0, 1.0]).unwrap();
        let q = space.reference_measure();
        assert!(RetentionProblem::new(&space, s.clone(), q.clone(), -1.0).is_err());
        let neg = RandomVar::new(vec![-1.0, 1.0]).unwrap();
        assert!(RetentionProblem::new(&space, neg, q, 1.0).is_err());
    }
}
