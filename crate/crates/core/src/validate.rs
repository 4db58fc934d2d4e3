//! Membership checks for the pseudometric and metric axioms.

use serde::Serialize;

use crate::matrix::{DistanceMatrix, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Symmetry,
    Diagonal,
    Negativity,
    Triangle,
    Positivity,
}

/// One failed constraint. `indices` are 0-based positions: a pair `[i, j]`,
/// or for the triangle kind a triple `[i, j, k]` meaning
/// `d(i, k) > d(i, j) + d(j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub is_pseudometric: bool,
    pub is_metric: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Checks `m` against the pseudometric axioms, then positivity.
///
/// Symmetry, zero diagonal and nonnegativity are exact. The triangle
/// inequality `d(i,k) <= d(i,j) + d(j,k)` is allowed `tol` of slack. Every
/// failing constraint is reported; a pair or triple appears at most once per
/// kind, carrying the worse of its two orientations.
pub fn validate(m: &DistanceMatrix, tol: Tolerance) -> ValidationReport {
    let n = m.n();
    let eps = tol.eps_abs();
    let mut violations = Vec::new();

    for i in 0..n {
        let v = m.get(i, i);
        if v != 0.0 {
            violations.push(Violation {
                kind: ViolationKind::Diagonal,
                indices: vec![i, i],
                magnitude: v.abs(),
            });
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (m.get(i, j), m.get(j, i));
            if a != b {
                violations.push(Violation {
                    kind: ViolationKind::Symmetry,
                    indices: vec![i, j],
                    magnitude: (a - b).abs(),
                });
            }
            let low = a.min(b);
            if low < 0.0 {
                violations.push(Violation {
                    kind: ViolationKind::Negativity,
                    indices: vec![i, j],
                    magnitude: -low,
                });
            }
        }
    }

    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let forward = m.get(i, k) - (m.get(i, j) + m.get(j, k));
                let backward = m.get(k, i) - (m.get(k, j) + m.get(j, i));
                let excess = forward.max(backward);
                if excess > eps {
                    violations.push(Violation {
                        kind: ViolationKind::Triangle,
                        indices: vec![i, j, k],
                        magnitude: excess,
                    });
                }
            }
        }
    }

    let is_pseudometric = violations.is_empty();

    for i in 0..n {
        for j in i + 1..n {
            let low = m.get(i, j).min(m.get(j, i));
            if low <= 0.0 {
                violations.push(Violation {
                    kind: ViolationKind::Positivity,
                    indices: vec![i, j],
                    magnitude: -low,
                });
            }
        }
    }

    // Only positivity failures can have been added since `is_pseudometric`.
    let is_metric = is_pseudometric && violations.is_empty();

    ValidationReport {
        is_pseudometric,
        is_metric,
        violations,
    }
}

pub fn is_pseudometric(m: &DistanceMatrix, tol: Tolerance) -> bool {
    validate(m, tol).is_pseudometric
}

pub fn is_metric(m: &DistanceMatrix, tol: Tolerance) -> bool {
    validate(m, tol).is_metric
}
