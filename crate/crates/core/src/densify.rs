//! Approximating a pseudometric by a metric in the sup-metric.

use crate::error::{Error, Result};
use crate::matrix::{DistanceMatrix, Tolerance};
use crate::validate::validate;

#[derive(Debug, Clone)]
pub struct DensifyRequest {
    pub d: DistanceMatrix,
    pub epsilon: f64,
    /// A metric with every entry `<= epsilon`. Defaults to the discrete
    /// metric scaled by `epsilon`.
    pub base: Option<DistanceMatrix>,
}

impl DensifyRequest {
    pub fn new(d: DistanceMatrix, epsilon: f64) -> Self {
        Self {
            d,
            epsilon,
            base: None,
        }
    }

    pub fn with_base(mut self, base: DistanceMatrix) -> Self {
        self.base = Some(base);
        self
    }
}

/// Entrywise maximum of `d` and a small base metric.
///
/// The result is a metric, dominates `d`, agrees with `d` wherever
/// `d >= epsilon`, and lies within `epsilon` of `d` in the sup-metric.
pub fn densify(req: &DensifyRequest) -> Result<DistanceMatrix> {
    densify_with(req, Tolerance::default())
}

pub fn densify_with(req: &DensifyRequest, tol: Tolerance) -> Result<DistanceMatrix> {
    let eps = req.epsilon;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!(
            "epsilon must be positive and finite, got {eps}"
        )));
    }
    if !validate(&req.d, tol).is_pseudometric {
        return Err(Error::domain("input is not a pseudometric"));
    }
    let n = req.d.n();
    let base = match &req.base {
        Some(b) => {
            if b.n() != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: b.n(),
                });
            }
            if !validate(b, tol).is_metric {
                return Err(Error::domain("base is not a metric"));
            }
            if b.max_entry() > eps {
                return Err(Error::domain(format!(
                    "base has an entry {} above epsilon {eps}",
                    b.max_entry()
                )));
            }
            b.clone()
        }
        None => DistanceMatrix::discrete(n, eps),
    };
    req.d.pointwise_max(&base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::sup_distance;
    use crate::validate::is_metric;

    fn rows(r: &[&[f64]]) -> DistanceMatrix {
        DistanceMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn zero_becomes_discrete() {
        let d = DistanceMatrix::zeros(2);
        let rho = densify(&DensifyRequest::new(d.clone(), 1.0)).unwrap();
        assert_eq!(rho, DistanceMatrix::discrete(2, 1.0));
        assert_eq!(sup_distance(&d, &rho).unwrap(), 1.0);
    }

    #[test]
    fn large_entries_untouched() {
        let d = DistanceMatrix::discrete(2, 5.0);
        let rho = densify(&DensifyRequest::new(d.clone(), 1.0)).unwrap();
        assert_eq!(rho, d);
        assert_eq!(sup_distance(&d, &rho).unwrap(), 0.0);
    }

    #[test]
    fn mixed_three_points() {
        let d = rows(&[&[0.0, 0.0, 2.0], &[0.0, 0.0, 2.0], &[2.0, 2.0, 0.0]]);
        let rho = densify(&DensifyRequest::new(d.clone(), 0.5)).unwrap();
        assert_eq!(rho, rows(&[&[0.0, 0.5, 2.0], &[0.5, 0.0, 2.0], &[2.0, 2.0, 0.0]]));
        assert_eq!(sup_distance(&d, &rho).unwrap(), 0.5);
        assert!(is_metric(&rho, Tolerance::exact()));
    }

    #[test]
    fn custom_base() {
        let d = DistanceMatrix::zeros(3);
        let base = rows(&[&[0.0, 0.1, 0.2], &[0.1, 0.0, 0.15], &[0.2, 0.15, 0.0]]);
        let rho = densify(&DensifyRequest::new(d, 0.2).with_base(base.clone())).unwrap();
        assert_eq!(rho, base);
    }

    #[test]
    fn rejects_bad_requests() {
        let d = DistanceMatrix::zeros(2);
        assert!(densify(&DensifyRequest::new(d.clone(), 0.0)).is_err());
        assert!(densify(&DensifyRequest::new(d.clone(), f64::NAN)).is_err());
        let too_big = DistanceMatrix::discrete(2, 2.0);
        assert!(densify(&DensifyRequest::new(d.clone(), 1.0).with_base(too_big)).is_err());
        let not_metric = DistanceMatrix::zeros(2);
        assert!(densify(&DensifyRequest::new(d.clone(), 1.0).with_base(not_metric)).is_err());
        let wrong_size = DistanceMatrix::discrete(3, 0.5);
        assert!(matches!(
            densify(&DensifyRequest::new(d, 1.0).with_base(wrong_size)),
            Err(Error::Dimension { .. })
        ));
        let bad = rows(&[&[0.0, 1.0, 3.0], &[1.0, 0.0, 1.0], &[3.0, 1.0, 0.0]]);
        assert!(densify(&DensifyRequest::new(bad, 1.0)).is_err());
    }

    #[test]
    fn idempotent_for_fixed_base() {
        let d = rows(&[&[0.0, 0.0, 0.3], &[0.0, 0.0, 0.3], &[0.3, 0.3, 0.0]]);
        let once = densify(&DensifyRequest::new(d, 0.1)).unwrap();
        let twice = densify(&DensifyRequest::new(once.clone(), 0.1)).unwrap();
        assert_eq!(once, twice);
    }
}
