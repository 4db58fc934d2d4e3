//! Finite pseudometric spaces as points of the sup-metric space of distance
//! matrices.
//!
//! - [`matrix`]: distance matrices, tolerances and the sup-metric.
//! - [`validate`]: pseudometric and metric axiom checks with full
//!   violation reports.
//! - [`chart`]: invertible cube coordinates for pseudometrics on `n`
//!   ordered points.
//! - [`densify`]: nearby metrics through entrywise maxima.
//! - [`extend`]: bounded metric extension from subsets, and the
//!   perturbation `d + e~`.
//! - [`family`]: binary pseudometric families at mutual distance 1.
//! - [`io`] and [`cli`]: file formats and the `pseudometric` binary.

pub mod chart;
pub mod cli;
pub mod densify;
pub mod error;
pub mod extend;
pub mod family;
pub mod io;
pub mod matrix;
pub mod validate;

pub use error::{Error, Result};
pub use matrix::{sup_distance, DistanceMatrix, Tolerance};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};
