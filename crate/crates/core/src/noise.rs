//! Observation noise of the location-scale model `Y = f(s) + sigma Z`.

use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law of the standardizing variable `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ZLaw {
    /// Uniform on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// `lo + (hi - lo) * Beta(alpha, beta)`.
    ScaledBeta { alpha: f64, beta: f64, lo: f64, hi: f64 },
    /// Normal with the given mean and standard deviation.
    Gaussian { mean: f64, sd: f64 },
}

impl ZLaw {
    /// Uniform on `[-sqrt(3), sqrt(3)]`: centered, unit variance.
    pub fn standard_uniform() -> Self {
        let r = 3f64.sqrt();
        ZLaw::Uniform { lo: -r, hi: r }
    }

    pub fn standard_gaussian() -> Self {
        ZLaw::Gaussian { mean: 0.0, sd: 1.0 }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ZLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
            ZLaw::ScaledBeta { alpha, beta, lo, hi } => lo + (hi - lo) * alpha / (alpha + beta),
            ZLaw::Gaussian { mean, .. } => mean,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            ZLaw::Uniform { lo, hi } => (hi - lo).powi(2) / 12.0,
            ZLaw::ScaledBeta { alpha, beta, lo, hi } => {
                let s = alpha + beta;
                (hi - lo).powi(2) * alpha * beta / (s * s * (s + 1.0))
            }
            ZLaw::Gaussian { sd, .. } => sd * sd,
        }
    }

    /// Support of `Z`, `None` when unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            ZLaw::Uniform { lo, hi } | ZLaw::ScaledBeta { lo, hi, .. } => Some((lo, hi)),
            ZLaw::Gaussian { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ZLaw::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            ZLaw::ScaledBeta { alpha, beta, lo, hi } => {
                alpha > 0.0 && beta > 0.0 && lo.is_finite() && hi.is_finite() && lo < hi
            }
            ZLaw::Gaussian { mean, sd } => mean.is_finite() && sd.is_finite() && sd > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDomain(format!("invalid noise law {self:?}")))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ZLaw::Uniform { lo, hi } => rng.random_range(lo..hi),
            ZLaw::ScaledBeta { alpha, beta, lo, hi } => {
                let b = Beta::new(alpha, beta).expect("validated beta parameters");
                lo + (hi - lo) * b.sample(rng)
            }
            ZLaw::Gaussian { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Bounded,
    Unbounded,
}

/// Noise model: scale `sigma`, the law of `Z`, and for bounded observations
/// the declared support `[tau_lo, tau_hi]` of `Y` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma: f64,
    pub z: ZLaw,
    /// Declared support of the observations; required for bounded noise.
    pub tau: Option<(f64, f64)>,
}

impl NoiseModel {
    pub fn bounded(sigma: f64, z: ZLaw, tau_lo: f64, tau_hi: f64) -> Result<Self> {
        let model = Self { sigma, z, tau: Some((tau_lo, tau_hi)) };
        model.validate()?;
        Ok(model)
    }

    pub fn unbounded(sigma: f64, z: ZLaw) -> Result<Self> {
        let model = Self { sigma, z, tau: None };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::InvalidDomain(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        self.z.validate()?;
        if !(self.z.variance() > 0.0) {
            return Err(Error::InvalidDomain("Z must have positive variance".into()));
        }
        if let Some((lo, hi)) = self.tau {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidDomain(format!("need tau_lo < tau_hi, got [{lo}, {hi}]")));
            }
            if self.z.support().is_none() && self.sigma > 0.0 {
                return Err(Error::InvalidDomain(
                    "a declared support needs a bounded law for Z".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> NoiseKind {
        if self.tau.is_some() {
            NoiseKind::Bounded
        } else {
            NoiseKind::Unbounded
        }
    }

    pub fn mean_z(&self) -> f64 {
        self.z.mean()
    }

    /// Variance of `Z` (not of `sigma Z`).
    pub fn var_z(&self) -> f64 {
        self.z.variance()
    }

    /// `sigma E(Z)`: the offset between the estimable mean `phi` and `f`.
    pub fn location_shift(&self) -> f64 {
        self.sigma * self.z.mean()
    }

    /// `tau_hi - tau_lo`.
    pub fn support_width(&self) -> Result<f64> {
        self.tau
            .map(|(lo, hi)| hi - lo)
            .ok_or_else(|| Error::Unsupported("unbounded noise has no support width".into()))
    }

    /// `R = max(|tau_lo|, |tau_hi|)`, the bound on `|phi|`.
    pub fn sup_bound(&self) -> Result<f64> {
        self.tau
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .ok_or_else(|| Error::Unsupported("unbounded noise gives no bound R on |phi|".into()))
    }

    /// One draw of `sigma Z`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sigma * self.z.sample(rng)
    }
}
