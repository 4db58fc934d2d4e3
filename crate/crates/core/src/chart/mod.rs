//! Cube charts for the space of pseudometrics on `n` ordered points.
//!
//! A pseudometric is built point by point. When point `x_k` joins
//! `x_1..x_{k-1}`, its distance to `x_1` is free in `[0, inf)` and, for each
//! later `x_i`, the distance `d(x_i, x_k)` ranges over the intersection of
//! the intervals `[|d(x_j,x_i) - d(x_j,x_k)|, d(x_j,x_i) + d(x_j,x_k)]`,
//! `j < i`. [`NaturalCoords`] record one half-open coordinate for the free
//! distance (through `t -> t / (1 + t)`) and one closed coordinate per
//! interval (the relative position inside it).
//!
//! [`CanonicalCoords`] fold all half-open coordinates into a single one with
//! [`square_pack`], leaving `n(n-1)/2 - 1` closed coordinates.
//!
//! The chart depends on the input order of the points; nothing here
//! permutes them.

mod square;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{DistanceMatrix, Tolerance};
use crate::validate::validate;

pub use square::{square_pack, square_unpack};

/// Most negative interval width (relative to the interval's upper end)
/// accepted as rounding noise rather than a broken invariant.
const COLLAPSE_SLACK: f64 = 1e-9;

/// Rejection-sampling budget for [`sample_pseudometric`].
pub const MAX_SAMPLE_DRAWS: usize = 10_000;

/// Coordinates of the point added at one level of the induction.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    /// Scaled distance to the first point, in `[0, 1)`.
    pub s: f64,
    /// Positions inside the admissible intervals for the distances to the
    /// 2nd, 3rd, ... existing points, each in `[0, 1]`.
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaturalCoords {
    n: usize,
    levels: Vec<Level>,
}

impl NaturalCoords {
    /// `levels[m]` describes point `x_{m+2}`, so it carries `m` interval
    /// positions.
    pub fn new(n: usize, levels: Vec<Level>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("a chart needs at least one point"));
        }
        if levels.len() != n - 1 {
            return Err(Error::domain(format!(
                "{} levels given for {n} points, expected {}",
                levels.len(),
                n - 1
            )));
        }
        for (m, level) in levels.iter().enumerate() {
            if !(0.0..1.0).contains(&level.s) {
                return Err(Error::domain(format!(
                    "level {}: s = {} is outside [0, 1)",
                    m + 2,
                    level.s
                )));
            }
            if level.u.len() != m {
                return Err(Error::domain(format!(
                    "level {}: {} interval positions, expected {m}",
                    m + 2,
                    level.u.len()
                )));
            }
            if let Some(u) = level.u.iter().find(|u| !(0.0..=1.0).contains(*u)) {
                return Err(Error::domain(format!(
                    "level {}: u = {u} is outside [0, 1]",
                    m + 2
                )));
            }
        }
        Ok(Self { n, levels })
    }

    /// Uniform draw: `s` on the grid `j / 2^32`, `j < 2^32`, and `u` in
    /// `[0, 1)`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("a chart needs at least one point"));
        }
        let levels = (0..n - 1)
            .map(|m| Level {
                s: f64::from(rng.random::<u32>()) * 2f64.powi(-32),
                u: (0..m).map(|_| rng.random::<f64>()).collect(),
            })
            .collect();
        Ok(Self { n, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn coordinate_count(&self) -> usize {
        self.levels.iter().map(|l| 1 + l.u.len()).sum()
    }
}

/// A point of `[0,1]^(N-1) x [0,1)`, `N = n(n-1)/2`.
///
/// `closed` holds the `n - 2` coordinates produced while folding the
/// half-open coordinates (in fold order), followed by every interval
/// position in level order.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalCoords {
    n: usize,
    closed: Vec<f64>,
    half_open: f64,
}

impl CanonicalCoords {
    pub fn new(n: usize, closed: Vec<f64>, half_open: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(
                "canonical coordinates need at least two points",
            ));
        }
        let expected = pair_count(n) - 1;
        if closed.len() != expected {
            return Err(Error::domain(format!(
                "{} closed coordinates given for {n} points, expected {expected}",
                closed.len()
            )));
        }
        if let Some(c) = closed.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::domain(format!(
                "closed coordinate {c} is outside [0, 1]"
            )));
        }
        if !(0.0..1.0).contains(&half_open) {
            return Err(Error::domain(format!(
                "half-open coordinate {half_open} is outside [0, 1)"
            )));
        }
        Ok(Self {
            n,
            closed,
            half_open,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn closed(&self) -> &[f64] {
        &self.closed
    }

    pub fn half_open(&self) -> f64 {
        self.half_open
    }
}

/// `n(n-1)/2`, the number of unordered pairs.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn half_line_to_unit(t: f64) -> f64 {
    t / (1.0 + t)
}

fn unit_to_half_line(s: f64) -> f64 {
    s / (1.0 - s)
}

/// The `s` in `[0, 1)` whose image under `s / (1 - s)` is closest to `t`.
///
/// Near 1 the grid of binary64 values is coarse relative to the half-line,
/// so the rounded quotient `t / (1 + t)` is polished over its neighbours.
fn encode_half_line(t: f64) -> Result<f64> {
    let guess = half_line_to_unit(t);
    if guess.is_nan() || guess >= 1.0 {
        return Err(Error::domain(format!(
            "distance {t} is too large to chart in binary64"
        )));
    }
    let err = |s: f64| (unit_to_half_line(s) - t).abs();
    let mut best = guess;
    let mut candidate = guess;
    for _ in 0..2 {
        candidate = candidate.next_down();
        if candidate >= 0.0 && err(candidate) < err(best) {
            best = candidate;
        }
    }
    candidate = guess;
    for _ in 0..2 {
        candidate = candidate.next_up();
        if candidate < 1.0 && err(candidate) < err(best) {
            best = candidate;
        }
    }
    Ok(best)
}

/// Lower and upper ends of the admissible interval for `d(x_i, x_new)`,
/// given `t[j] = d(x_j, x_new)` for `j < i`.
fn interval(d: &DistanceMatrix, t: &[f64], i: usize) -> (f64, f64) {
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for (j, &tj) in t.iter().enumerate().take(i) {
        let dji = d.get(j, i);
        lower = lower.max((dji - tj).abs());
        upper = upper.min(dji + tj);
    }
    (lower, upper)
}

/// Interval widths seen while decoding, shaped like the `u` coordinates of
/// the input: `gaps[m][i]` is `U - L` for `levels[m].u[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeTrace {
    pub gaps: Vec<Vec<f64>>,
}

impl DecodeTrace {
    pub fn min_gap(&self) -> f64 {
        self.gaps
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds the pseudometric described by `coords`.
pub fn decode_natural(coords: &NaturalCoords) -> DistanceMatrix {
    decode_natural_traced(coords).0
}

/// [`decode_natural`], also returning the interval widths it met.
///
/// # Panics
///
/// If an admissible interval is empty beyond rounding noise. The triangle
/// inequalities of the points already placed guarantee the intervals meet
/// pairwise, and pairwise-meeting intervals on a line have a common point,
/// so this signals a bug rather than bad input.
pub fn decode_natural_traced(coords: &NaturalCoords) -> (DistanceMatrix, DecodeTrace) {
    let n = coords.n;
    let mut d = DistanceMatrix::zeros(n);
    let mut gaps = Vec::with_capacity(n.saturating_sub(1));
    let mut t = Vec::with_capacity(n);
    for (m, level) in coords.levels.iter().enumerate() {
        let new = m + 1;
        t.clear();
        t.push(unit_to_half_line(level.s));
        let mut level_gaps = Vec::with_capacity(level.u.len());
        for (offset, &u) in level.u.iter().enumerate() {
            let i = offset + 1;
            let (lower, upper) = interval(&d, &t, i);
            let gap = upper - lower;
            assert!(
                gap >= -COLLAPSE_SLACK * upper.max(1.0),
                "admissible interval collapsed at level {}, point {}: [{lower}, {upper}]",
                new + 1,
                i + 1
            );
            let ti = if gap > 0.0 {
                (lower + u * gap).clamp(lower, upper)
            } else {
                lower
            };
            t.push(ti);
            level_gaps.push(gap);
        }
        for (j, &tj) in t.iter().enumerate() {
            d.set_pair(j, new, tj);
        }
        gaps.push(level_gaps);
    }
    (d, DecodeTrace { gaps })
}

/// Chart coordinates of a pseudometric.
///
/// Interval positions are `(t - L) / (U - L)` clamped to `[0, 1]`, or 0 when
/// the interval is a single point.
pub fn encode_natural(d: &DistanceMatrix) -> Result<NaturalCoords> {
    encode_natural_with(d, Tolerance::default())
}

pub fn encode_natural_with(d: &DistanceMatrix, tol: Tolerance) -> Result<NaturalCoords> {
    let n = d.n();
    if n == 0 {
        return Err(Error::domain("a chart needs at least one point"));
    }
    if !validate(d, tol).is_pseudometric {
        return Err(Error::domain("input is not a pseudometric"));
    }
    let mut levels = Vec::with_capacity(n - 1);
    for new in 1..n {
        let t: Vec<f64> = (0..new).map(|j| d.get(j, new)).collect();
        let s = encode_half_line(t[0])?;
        let u = (1..new)
            .map(|i| {
                let (lower, upper) = interval(d, &t, i);
                let gap = upper - lower;
                if gap > 0.0 {
                    ((t[i] - lower) / gap).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect();
        levels.push(Level { s, u });
    }
    Ok(NaturalCoords { n, levels })
}

/// Folds the `n - 1` half-open coordinates into one, left to right.
pub fn to_canonical(coords: &NaturalCoords) -> Result<CanonicalCoords> {
    let n = coords.n;
    if n < 2 {
        return Err(Error::domain(
            "a single point has no canonical coordinates (its space is {0})",
        ));
    }
    let mut closed = Vec::with_capacity(pair_count(n) - 1);
    let mut acc = coords.levels[0].s;
    for level in &coords.levels[1..] {
        let (c, h) = square_pack(acc, level.s)?;
        closed.push(c);
        acc = h;
    }
    closed.extend(coords.levels.iter().flat_map(|l| l.u.iter().copied()));
    Ok(CanonicalCoords {
        n,
        closed,
        half_open: acc,
    })
}

/// Inverse of [`to_canonical`].
pub fn from_canonical(q: &CanonicalCoords) -> Result<NaturalCoords> {
    let n = q.n;
    let folds = n - 2;
    let (packed, positions) = q.closed.split_at(folds);

    let mut s = vec![0.0; n - 1];
    let mut acc = q.half_open;
    for m in (1..n - 1).rev() {
        let (prev, sm) = square_unpack(packed[m - 1], acc)?;
        s[m] = sm;
        acc = prev;
    }
    s[0] = acc;

    let mut rest = positions;
    let levels = s
        .into_iter()
        .enumerate()
        .map(|(m, s)| {
            let (u, tail) = rest.split_at(m);
            rest = tail;
            Level { s, u: u.to_vec() }
        })
        .collect();
    NaturalCoords::new(n, levels)
}

/// Decodes uniformly drawn chart coordinates. With `metric_only`, redraws
/// until the result has no zero distance between distinct points.
pub fn sample_pseudometric(n: usize, seed: u64, metric_only: bool) -> Result<DistanceMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(n, &mut rng, metric_only)
}

pub fn sample_with<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    metric_only: bool,
) -> Result<DistanceMatrix> {
    for _ in 0..MAX_SAMPLE_DRAWS {
        let d = decode_natural(&NaturalCoords::random(n, rng)?);
        if !metric_only || validate(&d, Tolerance::default()).is_metric {
            return Ok(d);
        }
    }
    Err(Error::Sampling {
        draws: MAX_SAMPLE_DRAWS,
    })
}
