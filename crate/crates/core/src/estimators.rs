//! Estimators built on a design: knot means, Lagrange interpolation of
//! derivatives, the Taylor extrapolation estimator, and the polynomial
//! (Hoel-type) estimator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::numeric::factorial;
use crate::polybasis::LagrangeBasis;

/// Highest jet order the Taylor estimator will build.
pub const JET_ORDER_CAP: usize = 64;

/// Raw observations, one list per knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub per_knot: Vec<Vec<f64>>,
}

impl SampleSet {
    pub fn new(per_knot: Vec<Vec<f64>>) -> Self {
        Self { per_knot }
    }

    pub fn frequencies(&self) -> Vec<usize> {
        self.per_knot.iter().map(Vec::len).collect()
    }
}

/// Estimated values of `phi` at the knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotEstimates {
    pub values: Vec<f64>,
}

impl KnotEstimates {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Per-knot sample means (the least-squares estimate with `sigma = 1`).
pub fn knot_means(samples: &SampleSet) -> Result<KnotEstimates> {
    let values = samples
        .per_knot
        .iter()
        .enumerate()
        .map(|(k, obs)| {
            if obs.is_empty() {
                Err(Error::MissingData(format!("knot {k} has no observations")))
            } else {
                Ok(obs.iter().sum::<f64>() / obs.len() as f64)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(Error::MissingData("sample set has no knots".into()));
    }
    Ok(KnotEstimates { values })
}

fn check_aligned(basis: &LagrangeBasis, estimates: &KnotEstimates) -> Result<()> {
    if basis.len() != estimates.len() {
        return Err(Error::MissingData(format!(
            "{} estimates for {} knots",
            estimates.len(),
            basis.len()
        )));
    }
    Ok(())
}

/// `sum_k est_k L_k^(order)(point)`.
pub fn interpolate_derivative(knots: &[f64], estimates: &KnotEstimates, order: usize, point: f64) -> Result<f64> {
    let basis = LagrangeBasis::new(knots)?;
    check_aligned(&basis, estimates)?;
    Ok(estimates
        .values
        .iter()
        .enumerate()
        .map(|(k, e)| e * basis.derivative(k, order, point))
        .sum())
}

/// The Taylor extrapolation estimator as a fixed linear functional of the
/// knot estimates.
///
/// `T(v) = sum_{i<m} (v - s*)^i / i! * sum_k est_k L_k^(d+i)(s*)`
/// is rearranged into `sum_k w_k est_k`, with each `w_k` read off a single
/// jet of `L_k` at `s*` of order `d + m - 1`.
#[derive(Debug, Clone)]
pub struct TaylorExtrapolator {
    weights: Vec<f64>,
    d: usize,
    m: usize,
}

impl TaylorExtrapolator {
    pub fn new(knots: &[f64], d: usize, m: usize, s_star: f64, target: f64) -> Result<Self> {
        let basis = LagrangeBasis::new(knots)?;
        Self::from_basis(&basis, d, m, s_star, target)
    }

    pub fn from_basis(basis: &LagrangeBasis, d: usize, m: usize, s_star: f64, target: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("Taylor order m must be at least 1".into()));
        }
        let order = d + m - 1;
        if order > JET_ORDER_CAP {
            return Err(Error::Config(format!(
                "jet order d + m - 1 = {order} exceeds the cap {JET_ORDER_CAP}"
            )));
        }
        let h = target - s_star;
        let weights = (0..basis.len())
            .map(|k| {
                let jet = basis.jet(k, s_star, order);
                let mut power = 1.0;
                let mut w = 0.0;
                for i in 0..m {
                    // L^(d+i)(s*) / i! = c_{d+i} (d+i)! / i!
                    w += power * jet.derivative(d + i) / factorial(i);
                    power *= h;
                }
                w
            })
            .collect();
        Ok(Self { weights, d, m })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn derivative_order(&self) -> usize {
        self.d
    }

    pub fn taylor_terms(&self) -> usize {
        self.m
    }

    pub fn estimate(&self, estimates: &KnotEstimates) -> Result<f64> {
        if estimates.len() != self.weights.len() {
            return Err(Error::MissingData(format!(
                "{} estimates for {} knots",
                estimates.len(),
                self.weights.len()
            )));
        }
        Ok(self.estimate_slice(&estimates.values))
    }

    pub(crate) fn estimate_slice(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Estimate of `phi^(d)(target)` from the Taylor expansion at `s_star`
/// truncated after `m` terms.
pub fn taylor_extrapolate(
    knots: &[f64],
    estimates: &KnotEstimates,
    d: usize,
    m: usize,
    s_star: f64,
    target: f64,
) -> Result<f64> {
    TaylorExtrapolator::new(knots, d, m, s_star, target)?.estimate(estimates)
}

/// `sum_k L_k^(d)(target) mean_k`, exact for polynomials of degree below the
/// number of knots. Coincides with Hoel's estimator when `d = 0`.
pub fn hoel_polynomial_estimate(knots: &[f64], means: &KnotEstimates, d: usize, target: f64) -> Result<f64> {
    interpolate_derivative(knots, means, d, target)
}

/// Converts an estimate of `phi^(d)` into one of `f^(d)` by removing
/// `sigma E(Z)`, which only affects `d = 0`.
pub fn remove_location_shift(estimate: f64, d: usize, noise: &NoiseModel) -> f64 {
    if d == 0 {
        estimate - noise.location_shift()
    } else {
        estimate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::chebyshev_knots;
    use crate::noise::ZLaw;

    #[test]
    fn means() {
        let s = SampleSet::new(vec![vec![1.0, 1.0, 1.0], vec![2.0, 2.0]]);
        assert_eq!(knot_means(&s).unwrap().values, vec![1.0, 2.0]);
        let s = SampleSet::new(vec![vec![0.0, 2.0]]);
        assert_eq!(knot_means(&s).unwrap().values, vec![1.0]);
        let s = SampleSet::new(vec![vec![1.0], vec![]]);
        assert!(matches!(knot_means(&s), Err(Error::MissingData(_))));
    }

    #[test]
    fn interpolation_examples() {
        let est = KnotEstimates::new(vec![0.0, 1.0]);
        assert!((interpolate_derivative(&[0.0, 1.0], &est, 0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        for &p in &[-3.0, 0.2, 7.0] {
            assert!((interpolate_derivative(&[0.0, 1.0], &est, 1, p).unwrap() - 1.0).abs() < 1e-14);
        }
        let knots = chebyshev_knots(2, -1.0, 1.0).unwrap();
        let est = KnotEstimates::new(knots.iter().map(|s| s * s).collect());
        assert!((interpolate_derivative(&knots, &est, 2, 0.0).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn misaligned_estimates() {
        let est = KnotEstimates::new(vec![0.0]);
        assert!(interpolate_derivative(&[0.0, 1.0], &est, 0, 0.5).is_err());
        assert!(taylor_extrapolate(&[0.0, 1.0], &est, 0, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn taylor_single_term_at_expansion_point() {
        let knots = chebyshev_knots(4, -1.0, 1.0).unwrap();
        let est = KnotEstimates::new(knots.iter().map(|s: &f64| s.sin() + 0.3).collect());
        let t = taylor_extrapolate(&knots, &est, 0, 1, 0.4, 0.4).unwrap();
        let i = interpolate_derivative(&knots, &est, 0, 0.4).unwrap();
        assert!((t - i).abs() < 1e-14);
        let t = taylor_extrapolate(&knots, &est, 2, 1, 0.4, 0.4).unwrap();
        let i = interpolate_derivative(&knots, &est, 2, 0.4).unwrap();
        assert!((t - i).abs() < 1e-12);
    }

    #[test]
    fn taylor_exp_pipeline() {
        let knots = chebyshev_knots(12, -1.0, 1.0).unwrap();
        let est = KnotEstimates::new(knots.iter().map(|s: &f64| s.exp()).collect());
        let t = taylor_extrapolate(&knots, &est, 0, 8, 1.0, 1.5).unwrap();
        // with exact knot values the error is the Taylor tail e * sum_{i>=8} 0.5^i / i!
        // plus a much smaller interpolation part
        let kept: f64 = (0..8).map(|i| 0.5f64.powi(i) / factorial(i as usize)).sum();
        let tail = 1f64.exp() * (0.5f64.exp() - kept);
        let err = 1.5f64.exp() - t;
        assert!((err - tail).abs() < 1e-8, "{err} vs {tail}");
    }

    #[test]
    fn order_cap() {
        let est = KnotEstimates::new(vec![1.0, 2.0]);
        assert!(matches!(
            taylor_extrapolate(&[0.0, 1.0], &est, 10, 60, 0.0, 1.0),
            Err(Error::Config(_))
        ));
        assert!(taylor_extrapolate(&[0.0, 1.0], &est, 0, 0, 0.0, 1.0).is_err());
    }

    #[test]
    fn hoel_examples() {
        let est = KnotEstimates::new(vec![0.0, 1.0]);
        assert!((hoel_polynomial_estimate(&[0.0, 1.0], &est, 0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        let est = KnotEstimates::new(vec![0.0, 1.0, 4.0]);
        assert!((hoel_polynomial_estimate(&[0.0, 1.0, 2.0], &est, 1, 3.0).unwrap() - 6.0).abs() < 1e-12);
        let est = KnotEstimates::new(vec![2.5]);
        assert_eq!(hoel_polynomial_estimate(&[0.7], &est, 0, -4.0).unwrap(), 2.5);
    }

    #[test]
    fn location_shift() {
        let noise = NoiseModel::unbounded(2.0, ZLaw::Gaussian { mean: 0.5, sd: 1.0 }).unwrap();
        assert_eq!(remove_location_shift(3.0, 0, &noise), 2.0);
        assert_eq!(remove_location_shift(3.0, 1, &noise), 3.0);
    }
}
