//! Binary pseudometric families `d_a`, one member per bit string `a`.
//!
//! Point `x_0` sits at index 0 and bit `a_g` is the distance from `x_g` to
//! `x_0`; two other points are at distance `|a_g - a_l|`. Distinct bit
//! strings give members exactly 1 apart in the sup-metric.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{sup_distance, DistanceMatrix};

/// Longest selector the exhaustive paths accept (2^20 members).
pub const MAX_ENUMERATION_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySelector(Vec<u8>);

impl FamilySelector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::domain(format!("selector bit {b} is not 0 or 1")));
        }
        Ok(Self(bits))
    }

    /// Bits of `index`, most significant first, padded to `k`.
    pub fn from_index(index: u64, k: usize) -> Self {
        Self(
            (0..k)
                .map(|g| ((index >> (k - 1 - g)) & 1) as u8)
                .collect(),
        )
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for FamilySelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::domain(format!("selector character {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self)
    }
}

impl fmt::Display for FamilySelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// The `(k + 1) x (k + 1)` pseudometric selected by `a`.
pub fn family_member(a: &FamilySelector) -> DistanceMatrix {
    let k = a.len();
    let mut d = DistanceMatrix::zeros(k + 1);
    let to_base = |g: usize| f64::from(a.0[g - 1]);
    for g in 1..=k {
        d.set_pair(0, g, to_base(g));
        for l in g + 1..=k {
            d.set_pair(g, l, (to_base(g) - to_base(l)).abs());
        }
    }
    d
}

/// Smallest sup-distance between members at distinct list positions, or
/// `None` for a one-element list.
pub fn family_separation(selectors: &[FamilySelector]) -> Result<Option<f64>> {
    let first = selectors
        .first()
        .ok_or_else(|| Error::domain("no selectors given"))?;
    if let Some(bad) = selectors.iter().find(|s| s.len() != first.len()) {
        return Err(Error::domain(format!(
            "selector lengths differ: {} and {}",
            first.len(),
            bad.len()
        )));
    }
    let members: Vec<DistanceMatrix> = selectors.iter().map(family_member).collect();
    let mut best: Option<f64> = None;
    for (p, a) in members.iter().enumerate() {
        for b in &members[p + 1..] {
            let dist = sup_distance(a, b)?;
            best = Some(best.map_or(dist, |m| m.min(dist)));
        }
    }
    Ok(best)
}

/// Every selector of length `k`, in counting order.
pub fn all_selectors(k: usize) -> Result<Vec<FamilySelector>> {
    if k > MAX_ENUMERATION_BITS {
        return Err(Error::domain(format!(
            "enumeration is limited to {MAX_ENUMERATION_BITS} bits, got {k}"
        )));
    }
    Ok((0..1u64 << k).map(|i| FamilySelector::from_index(i, k)).collect())
}

/// `pairs` random pairs of distinct selectors of length `k >= 1`.
pub fn sample_distinct_pairs(
    k: usize,
    pairs: usize,
    seed: u64,
) -> Result<Vec<(FamilySelector, FamilySelector)>> {
    if k == 0 {
        return Err(Error::domain("no two distinct selectors of length 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        FamilySelector((0..k).map(|_| rng.random_range(0..=1u8)).collect())
    };
    Ok((0..pairs)
        .map(|_| {
            let a = draw(&mut rng);
            let mut b = draw(&mut rng);
            while b == a {
                b = draw(&mut rng);
            }
            (a, b)
        })
        .collect())
}
