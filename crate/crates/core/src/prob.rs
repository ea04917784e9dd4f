//! Finite probability spaces, random variables and measures.
//!
//! A [`ProbSpace`] holds finitely many atoms, each with strictly positive
//! probability. Random variables and measures are plain vectors indexed by
//! atom position, so they only make sense relative to the space they were
//! built for; every operation that mixes them checks the lengths.

use std::ops::{Add, Mul, Neg, Range, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance for comparing monetary values and probabilities.
pub const TOL: f64 = 1e-9;

/// Tolerance on the total mass of a probability vector.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbSpace {
    atoms: Vec<String>,
    probs: Vec<f64>,
}

impl ProbSpace {
    pub fn new(atoms: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("atoms", "at least one atom is required"));
        }
        if atoms.len() != probs.len() {
            return Err(Error::invalid(
                "probs",
                format!("{} probabilities for {} atoms", probs.len(), atoms.len()),
            ));
        }
        for (i, id) in atoms.iter().enumerate() {
            if atoms[..i].contains(id) {
                return Err(Error::invalid(
                    format!("atoms[{i}]"),
                    format!("duplicate atom id `{id}`"),
                ));
            }
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::invalid(
                    format!("probs[{i}]"),
                    format!("probability must be strictly positive, got {p}"),
                ));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::invalid(
                "probs",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        Ok(ProbSpace { atoms, probs })
    }

    /// Space with atoms named `w1..wn` and the given probabilities.
    pub fn with_probs(probs: Vec<f64>) -> Result<Self> {
        let atoms = (1..=probs.len()).map(|i| format!("w{i}")).collect();
        Self::new(atoms, probs)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "a probability space needs at least one atom");
        let p = 1.0 / n as f64;
        let atoms = (1..=n).map(|i| format!("w{i}")).collect();
        ProbSpace {
            atoms,
            probs: vec![p; n],
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The reference measure itself.
    pub fn reference_measure(&self) -> Measure {
        Measure(self.probs.clone())
    }

    pub fn check_var(&self, x: &RandomVar) -> Result<()> {
        check_len(self.len(), x.len())
    }

    pub fn check_measure(&self, q: &Measure) -> Result<()> {
        check_len(self.len(), q.len())
    }

    /// `E_q[x]`.
    pub fn expectation(&self, x: &RandomVar, q: &Measure) -> Result<f64> {
        self.check_var(x)?;
        self.check_measure(q)?;
        Ok(dot(q.weights(), x.values()))
    }

    /// `q[x > t]`, strict inequality.
    pub fn survival(&self, x: &RandomVar, t: f64, q: &Measure) -> Result<f64> {
        self.check_var(x)?;
        self.check_measure(q)?;
        Ok(x.values()
            .iter()
            .zip(q.weights())
            .filter(|(&v, _)| v > t)
            .map(|(_, &w)| w)
            .sum())
    }

    /// Descending order of `reference`, ties grouped, stable by atom index.
    pub fn comonotone_order(&self, reference: &RandomVar) -> Result<ComonotoneOrder> {
        self.check_var(reference)?;
        Ok(ComonotoneOrder::descending(reference))
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A real value per atom.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RandomVar(Vec<f64>);

impl RandomVar {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                format!("[{i}]"),
                format!("value must be finite, got {}", values[i]),
            ));
        }
        Ok(RandomVar(values))
    }

    pub fn constant(n: usize, c: f64) -> Self {
        RandomVar(vec![c; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    /// Atomwise sum of a non-empty list of variables of equal length.
    pub fn sum_of(vars: &[RandomVar]) -> Result<Self> {
        let first = vars
            .first()
            .ok_or_else(|| Error::invalid("claims", "at least one variable is required"))?;
        let mut acc = vec![0.0; first.len()];
        for v in vars {
            check_len(first.len(), v.len())?;
            for (a, x) in acc.iter_mut().zip(v.values()) {
                *a += x;
            }
        }
        Ok(RandomVar(acc))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, atom: usize) -> f64 {
        self.0[atom]
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        RandomVar(self.0.iter().map(|&v| f(v)).collect())
    }

    /// `x ∧ a`.
    pub fn cap(&self, a: f64) -> Self {
        self.map(|v| v.min(a))
    }

    /// `(x − a)^+`.
    pub fn excess_over(&self, a: f64) -> Self {
        self.map(|v| (v - a).max(0.0))
    }

    /// `(a − x)^+`.
    pub fn shortfall_below(&self, a: f64) -> Self {
        self.map(|v| (a - v).max(0.0))
    }

    /// Atomwise product with the indicator of `event`.
    pub fn restrict(&self, event: impl Fn(usize) -> bool) -> Self {
        RandomVar(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &v)| if event(i) { v } else { 0.0 })
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn shift(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    pub fn is_constant(&self) -> bool {
        self.max() - self.min() <= TOL
    }

    fn zip_with(&self, other: &RandomVar, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "random variables on different spaces"
        );
        RandomVar(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl Add for &RandomVar {
    type Output = RandomVar;
    fn add(self, rhs: &RandomVar) -> RandomVar {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &RandomVar {
    type Output = RandomVar;
    fn sub(self, rhs: &RandomVar) -> RandomVar {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &RandomVar {
    type Output = RandomVar;
    fn neg(self) -> RandomVar {
        self.map(|v| -v)
    }
}

impl Mul<f64> for &RandomVar {
    type Output = RandomVar;
    fn mul(self, rhs: f64) -> RandomVar {
        self.scale(rhs)
    }
}

/// A probability measure on the atoms of a space.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Measure(Vec<f64>);

impl Measure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid(
                format!("weights[{i}]"),
                format!("weight must be finite and nonnegative, got {}", weights[i]),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::invalid(
                "weights",
                format!("weights sum to {total}, expected 1"),
            ));
        }
        Ok(Measure(weights))
    }

    /// Weights produced by telescoping increments; mass is one up to rounding.
    pub(crate) fn from_increments(weights: Vec<f64>) -> Self {
        debug_assert!(weights.iter().all(|w| *w >= -MASS_TOL));
        Measure(weights.into_iter().map(|w| w.max(0.0)).collect())
    }

    pub fn point_mass(n: usize, atom: usize) -> Self {
        let mut w = vec![0.0; n];
        w[atom] = 1.0;
        Measure(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn weight(&self, atom: usize) -> f64 {
        self.0[atom]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `E[x]` under this measure; panics if lengths differ.
    pub fn expect(&self, x: &RandomVar) -> f64 {
        assert_eq!(
            self.len(),
            x.len(),
            "measure and variable on different spaces"
        );
        dot(&self.0, x.values())
    }

    /// Mass of the atoms where `event` holds.
    pub fn mass_of(&self, event: impl Fn(usize) -> bool) -> f64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| event(*i))
            .map(|(_, w)| w)
            .sum()
    }
}

/// Atoms sorted by a reference variable, largest value first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComonotoneOrder {
    permutation: Vec<usize>,
    tie_groups: Vec<Range<usize>>,
}

impl ComonotoneOrder {
    pub(crate) fn descending(reference: &RandomVar) -> Self {
        let values = reference.values();
        let mut permutation: Vec<usize> = (0..values.len()).collect();
        // sort_by is stable, so equal values keep atom-index order
        permutation.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

        let mut tie_groups = Vec::new();
        let mut start = 0;
        for pos in 1..=permutation.len() {
            let split = pos == permutation.len()
                || values[permutation[pos - 1]] - values[permutation[pos]] > TOL;
            if split {
                tie_groups.push(start..pos);
                start = pos;
            }
        }
        ComonotoneOrder {
            permutation,
            tie_groups,
        }
    }

    /// Atom indices, largest reference value first.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Consecutive position ranges of `permutation` with equal reference value.
    pub fn tie_groups(&self) -> &[Range<usize>] {
        &self.tie_groups
    }

    /// Tie groups as lists of atom indices.
    pub fn groups(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.tie_groups
            .iter()
            .map(move |r| &self.permutation[r.clone()])
    }

    pub fn has_ties(&self) -> bool {
        self.tie_groups.len() < self.permutation.len()
    }
}

/// Pairwise comonotonicity: `(x(a) − x(b))·(y(a) − y(b)) ≥ 0` for all atoms.
pub fn is_comonotonic(x: &RandomVar, y: &RandomVar) -> Result<bool> {
    check_len(x.len(), y.len())?;
    let (xs, ys) = (x.values(), y.values());
    for a in 0..xs.len() {
        for b in (a + 1)..xs.len() {
            if (xs[a] - xs[b]) * (ys[a] - ys[b]) < 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
