//! Extending a metric from a subset to a finite superset with a sup bound,
//! and the perturbation `rho = d + e~` built from it.
//!
//! New points are attached one at a time. A candidate distance profile from
//! the new point to the current space is repaired into one satisfying
//!
//! ```text
//! |t[a] - t[b]| <= rho(a, b) <= t[a] + t[b]
//! ```
//!
//! for all existing `a, b` (a Katetov profile): first raise it until the
//! right inequality holds, then take the largest 1-Lipschitz minorant.

use crate::error::{Error, Result};
use crate::matrix::{DistanceMatrix, Tolerance};
use crate::validate::validate;

/// Slack for the internal check that capping a lifted profile keeps it
/// admissible.
const KATETOV_SLACK: f64 = 1e-9;

/// Candidate distances from a new point to each point of an existing space.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile(Vec<f64>);

impl Profile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!(
                "profile value {v} is not a finite nonnegative number"
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// A profile admissible as the distances from one extra point.
#[derive(Debug, Clone, PartialEq)]
pub struct KatetovProfile(Vec<f64>);

impl KatetovProfile {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl From<KatetovProfile> for Profile {
    fn from(k: KatetovProfile) -> Self {
        Profile(k.0)
    }
}

/// Worst violation of the Katetov inequalities by `t` against `rho`; zero or
/// negative when both hold everywhere.
pub fn katetov_excess(t: &[f64], rho: &DistanceMatrix) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for a in 0..t.len() {
        for b in 0..t.len() {
            let r = rho.get(a, b);
            worst = worst.max((t[a] - t[b]).abs() - r).max(r - (t[a] + t[b]));
        }
    }
    worst
}

/// Repairs `g` into a Katetov profile over the metric space `rho`, with
/// every value at least `floor`.
///
/// If `g` already is one (and `>= floor`), it comes back unchanged. If `g`
/// and `rho` are bounded by some `C`, so is the result.
pub fn katetov_lift(g: &Profile, rho: &DistanceMatrix, floor: f64) -> Result<KatetovProfile> {
    if g.0.len() != rho.n() {
        return Err(Error::Dimension {
            expected: rho.n(),
            actual: g.0.len(),
        });
    }
    if !(floor >= 0.0 && floor.is_finite()) {
        return Err(Error::domain(format!(
            "floor must be finite and nonnegative, got {floor}"
        )));
    }
    if !validate(rho, Tolerance::default()).is_metric {
        return Err(Error::domain("ambient space is not a metric"));
    }
    Ok(KatetovProfile(lift(&g.0, rho, floor)))
}

fn lift(g: &[f64], rho: &DistanceMatrix, floor: f64) -> Vec<f64> {
    let n = g.len();
    let floored: Vec<f64> = g.iter().map(|v| v.max(floor)).collect();
    let raised: Vec<f64> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| rho.get(a, b) - floored[b])
                .fold(floored[a], f64::max)
        })
        .collect();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| raised[b] + rho.get(a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Inputs of [`extend_metric`].
#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    /// Metric on the subset.
    pub subset_metric: DistanceMatrix,
    /// Positions of the subset's points in the full set, in the subset
    /// metric's order.
    pub indices: Vec<usize>,
    pub full_n: usize,
    /// Metric on the full set supplying candidate distances.
    pub target: DistanceMatrix,
    pub cap: f64,
    pub floor: f64,
}

/// Extends `subset_metric` to a metric on `full_n` points.
///
/// Entries between subset points are copied verbatim, every entry is at most
/// `cap`, and every distance involving a new point is at least `floor`.
/// Missing points are attached in ascending index order, each with the
/// target's distances clamped to `[floor, cap]` as the candidate profile.
pub fn extend_metric(problem: &ExtensionProblem) -> Result<DistanceMatrix> {
    extend_metric_with(problem, Tolerance::default())
}

pub fn extend_metric_with(problem: &ExtensionProblem, tol: Tolerance) -> Result<DistanceMatrix> {
    let ExtensionProblem {
        subset_metric: e,
        indices,
        full_n,
        target,
        cap,
        floor,
    } = problem;
    let (full_n, cap, floor) = (*full_n, *cap, *floor);

    if e.n() != indices.len() {
        return Err(Error::Dimension {
            expected: indices.len(),
            actual: e.n(),
        });
    }
    if target.n() != full_n {
        return Err(Error::Dimension {
            expected: full_n,
            actual: target.n(),
        });
    }
    let mut in_subset = vec![false; full_n];
    for &i in indices {
        if i >= full_n {
            return Err(Error::domain(format!(
                "subset index {i} out of range for {full_n} points"
            )));
        }
        if std::mem::replace(&mut in_subset[i], true) {
            return Err(Error::domain(format!("subset index {i} repeated")));
        }
    }
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::domain(format!("cap must be positive, got {cap}")));
    }
    if !(floor > 0.0 && floor <= cap) {
        return Err(Error::domain(format!(
            "floor must lie in (0, cap], got {floor}"
        )));
    }
    if !validate(e, tol).is_metric {
        return Err(Error::domain("subset distances are not a metric"));
    }
    if !validate(target, tol).is_metric {
        return Err(Error::domain("target is not a metric"));
    }
    if e.max_entry() > cap {
        return Err(Error::domain(format!(
            "subset has an entry {} above the cap {cap}",
            e.max_entry()
        )));
    }
    if target.max_entry() > cap {
        return Err(Error::domain(format!(
            "target has an entry {} above the cap {cap}",
            target.max_entry()
        )));
    }
    if let Some(min) = e.min_positive_off_diagonal() {
        if floor > min {
            return Err(Error::domain(format!(
                "floor {floor} exceeds the smallest subset distance {min}"
            )));
        }
    }

    let mut out = DistanceMatrix::zeros(full_n);
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            if a < b {
                out.set_pair(i, j, e.get(a, b));
            }
        }
    }

    let mut members = indices.clone();
    for p in (0..full_n).filter(|&p| !in_subset[p]) {
        let current = out.restrict(&members)?;
        let profile: Vec<f64> = members
            .iter()
            .map(|&q| target.get(p, q).clamp(floor, cap))
            .collect();
        let lifted: Vec<f64> = lift(&profile, &current, floor)
            .into_iter()
            .map(|v| v.min(cap))
            .collect();
        assert!(
            katetov_excess(&lifted, &current) <= KATETOV_SLACK * cap.max(1.0),
            "capped profile for point {p} is not admissible"
        );
        for (&q, &v) in members.iter().zip(&lifted) {
            out.set_pair(p, q, v);
        }
        members.push(p);
    }
    Ok(out)
}

/// `d + e~` where `e~` is a metric with `e~(i, j) = epsilon` and all entries
/// at most `epsilon`.
///
/// The result is a metric within `epsilon` of `d` in the sup-metric, with
/// `rho(i, j) >= rho(i, i) + epsilon`. Each sum is rounded down when needed so
/// that `rho - d` never exceeds the added amount in binary64.
pub fn perturb(d: &DistanceMatrix, i: usize, j: usize, epsilon: f64) -> Result<DistanceMatrix> {
    perturb_with(d, i, j, epsilon, Tolerance::default())
}

pub fn perturb_with(
    d: &DistanceMatrix,
    i: usize,
    j: usize,
    epsilon: f64,
    tol: Tolerance,
) -> Result<DistanceMatrix> {
    let n = d.n();
    if i == j {
        return Err(Error::domain("perturbation needs two distinct points"));
    }
    if i >= n || j >= n {
        return Err(Error::domain(format!(
            "pair ({i}, {j}) out of range for {n} points"
        )));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::domain(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    if !validate(d, tol).is_pseudometric {
        return Err(Error::domain("input is not a pseudometric"));
    }

    let bump = extend_metric(&ExtensionProblem {
        subset_metric: DistanceMatrix::discrete(2, epsilon),
        indices: vec![i, j],
        full_n: n,
        target: DistanceMatrix::discrete(n, epsilon),
        cap: epsilon,
        floor: epsilon * 1e-3,
    })?;
    d.zip_with(&bump, add_within)
}

/// `base + extra` rounded so that the binary64 difference from `base` stays
/// at most `extra`.
fn add_within(base: f64, extra: f64) -> f64 {
    let mut sum = base + extra;
    while sum - base > extra {
        sum = sum.next_down();
    }
    sum
}
