//! A homeomorphism `[0,1) x [0,1) -> [0,1] x [0,1)`.
//!
//! Both squares are viewed radially about their center `(0.5, 0.5)`: a
//! point is its max-norm radius plus an angle. Radii are kept and angles are
//! moved by a piecewise-linear circle map fixing 135 degrees and carrying
//! -45 degrees to 45 degrees. On the outer boundary this stretches the
//! present open arc (135, 315) of the half-open source square onto the arc
//! (135, 405) of the target, whose only missing side is the top edge.

use std::f64::consts::{FRAC_PI_4, TAU};

use crate::error::{Error, Result};

const KNOT_FIXED: f64 = 3.0 * FRAC_PI_4;

/// Largest binary64 strictly below one.
pub(crate) const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

fn circle_map(theta: f64) -> f64 {
    // theta in [-45, 315) degrees
    if theta <= KNOT_FIXED {
        FRAC_PI_4 + (theta + FRAC_PI_4) / 2.0
    } else {
        KNOT_FIXED + 1.5 * (theta - KNOT_FIXED)
    }
}

fn circle_map_inverse(phi: f64) -> f64 {
    // phi in [45, 405) degrees
    if phi <= KNOT_FIXED {
        2.0 * (phi - FRAC_PI_4) - FRAC_PI_4
    } else {
        KNOT_FIXED + (phi - KNOT_FIXED) / 1.5
    }
}

/// Max-norm radius (scaled to 1 on the boundary) and angle of `(x, y)`
/// relative to the center, with the angle wrapped to `[from, from + 2 pi)`.
fn polar(x: f64, y: f64, from: f64) -> (f64, f64) {
    let (dx, dy) = (x - 0.5, y - 0.5);
    let radius = 2.0 * dx.abs().max(dy.abs());
    let mut angle = dy.atan2(dx);
    if angle < from {
        angle += TAU;
    }
    (radius, angle)
}

fn square_point(radius: f64, angle: f64) -> (f64, f64) {
    let (sin, cos) = angle.sin_cos();
    let scale = 0.5 * radius / cos.abs().max(sin.abs());
    (0.5 + scale * cos, 0.5 + scale * sin)
}

fn check_half_open(v: f64, name: &str) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} is outside [0, 1)")))
    }
}

fn check_closed(v: f64, name: &str) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} is outside [0, 1]")))
    }
}

/// Maps `(a, b)` in `[0,1)^2` to `(c, h)` with `c` in `[0,1]` and `h` in
/// `[0,1)`.
pub fn square_pack(a: f64, b: f64) -> Result<(f64, f64)> {
    check_half_open(a, "a")?;
    check_half_open(b, "b")?;
    let (radius, theta) = polar(a, b, -FRAC_PI_4);
    if radius == 0.0 {
        return Ok((0.5, 0.5));
    }
    let (c, h) = square_point(radius, circle_map(theta));
    Ok((c.clamp(0.0, 1.0), h.clamp(0.0, BELOW_ONE)))
}

/// Inverse of [`square_pack`].
pub fn square_unpack(c: f64, h: f64) -> Result<(f64, f64)> {
    check_closed(c, "c")?;
    check_half_open(h, "h")?;
    let (radius, phi) = polar(c, h, FRAC_PI_4);
    if radius == 0.0 {
        return Ok((0.5, 0.5));
    }
    let (a, b) = square_point(radius, circle_map_inverse(phi));
    Ok((a.clamp(0.0, BELOW_ONE), b.clamp(0.0, BELOW_ONE)))
}
