//! Oracles and random instance generators shared by the integration tests.
//! The oracles are written against the axioms directly and do not call the
//! library's validation code.
#![allow(dead_code)]

use pseudometric::chart::{decode_natural, Level, NaturalCoords};
use pseudometric::DistanceMatrix;
use rand::Rng;

/// Triple-loop membership test over every ordered triple.
pub fn oracle_pseudometric(d: &DistanceMatrix, eps: f64) -> bool {
    let n = d.n();
    for i in 0..n {
        if d.get(i, i) != 0.0 {
            return false;
        }
        for j in 0..n {
            let v = d.get(i, j);
            if v < 0.0 || v != d.get(j, i) {
                return false;
            }
            for k in 0..n {
                if d.get(i, k) > d.get(i, j) + d.get(j, k) + eps {
                    return false;
                }
            }
        }
    }
    true
}

pub fn oracle_metric(d: &DistanceMatrix, eps: f64) -> bool {
    let n = d.n();
    oracle_pseudometric(d, eps)
        && (0..n).all(|i| (0..n).all(|j| i == j || d.get(i, j) > 0.0))
}

/// Chart coordinates that hit collapsed points (`s = 0`) and interval ends
/// (`u` in {0, 1}) with positive probability.
pub fn rough_coords<R: Rng>(rng: &mut R, n: usize) -> NaturalCoords {
    let levels = (0..n.saturating_sub(1))
        .map(|m| {
            let s = if rng.random_bool(0.2) {
                0.0
            } else {
                rng.random_range(0.0..0.95)
            };
            let u = (0..m)
                .map(|_| match rng.random_range(0..10) {
                    0 => 0.0,
                    1 => 1.0,
                    _ => rng.random::<f64>(),
                })
                .collect();
            Level { s, u }
        })
        .collect();
    NaturalCoords::new(n, levels).unwrap()
}

pub fn scale(d: &DistanceMatrix, factor: f64) -> DistanceMatrix {
    DistanceMatrix::new(d.n(), d.as_slice().iter().map(|v| v * factor).collect()).unwrap()
}

/// Pseudometric with zero distances, near-degenerate triangles and a
/// random overall scale in `[1e-3, 10]`.
pub fn random_pseudometric<R: Rng>(rng: &mut R, n: usize) -> DistanceMatrix {
    let d = decode_natural(&rough_coords(rng, n));
    scale(&d, 10f64.powf(rng.random_range(-3.0..1.0)))
}

/// Metric from uniform chart coordinates at a random scale.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize) -> DistanceMatrix {
    let d = pseudometric::chart::sample_with(n, rng, true).unwrap();
    scale(&d, 10f64.powf(rng.random_range(-2.0..1.0)))
}
