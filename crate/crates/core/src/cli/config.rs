//! Run configuration: a single JSON document with one block per concern.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::ErrorBudget;
use crate::designs::DesignSpace;
use crate::error::{Error, Result};
use crate::mc::TestFunction;
use crate::noise::{NoiseKind, NoiseModel, ZLaw};

/// Directory searched for relative `--config` paths and for `config.json`
/// when no path is given.
pub const CONFIG_DIR_ENV: &str = "OPTDESIGN_CONFIG_DIR";
pub const DEFAULT_CONFIG_NAME: &str = "config.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: DesignSpace,
    pub smoothness: SmoothnessConfig,
    pub noise: NoiseConfig,
    #[serde(default)]
    pub mc: Option<McConfig>,
    #[serde(default)]
    pub diagnostics: Option<DiagnosticsConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothnessConfig {
    pub alpha: usize,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub l: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    /// Estimation allowance for explicit designs. When absent it is the
    /// radius that `n` certifies at confidence `eta`.
    #[serde(default)]
    pub rho_n: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub budget: Option<BudgetConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub rho_m: f64,
    pub rho_l: f64,
    pub rho: f64,
    pub eta: f64,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub l_max: Option<usize>,
}

/// `m`, `l` and `n` given directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplicitDesign {
    pub m: usize,
    pub l: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DesignSource {
    Explicit(ExplicitDesign),
    Budget(ErrorBudget, usize),
}

impl SmoothnessConfig {
    pub fn source(&self) -> Result<DesignSource> {
        let any_explicit = self.m.is_some() || self.l.is_some() || self.n.is_some();
        match (&self.budget, any_explicit) {
            (Some(_), true) => Err(Error::Config(
                "smoothness: give either m, l, n or a budget block, not both".into(),
            )),
            (None, false) => Err(Error::Config("smoothness: need m, l, n or a budget block".into())),
            (None, true) => {
                let field = |v: Option<usize>, name: &str| {
                    v.ok_or_else(|| Error::Config(format!("smoothness.{name}: missing")))
                };
                let e = ExplicitDesign {
                    m: field(self.m, "m")?,
                    l: field(self.l, "l")?,
                    n: field(self.n, "n")?,
                };
                if e.m == 0 {
                    return Err(Error::Config("smoothness.m: must be at least 1".into()));
                }
                Ok(DesignSource::Explicit(e))
            }
            (Some(b), false) => {
                let budget = ErrorBudget {
                    rho_m: b.rho_m,
                    rho_l: b.rho_l,
                    rho_n: b.rho,
                    eta: b.eta,
                    omega: b.omega,
                    alpha: self.alpha,
                };
                budget
                    .validate()
                    .map_err(|e| Error::Config(format!("smoothness.budget: {}", message(&e))))?;
                Ok(DesignSource::Budget(budget, b.l_max.unwrap_or(1000)))
            }
        }
    }

    pub fn eta_or_default(&self) -> f64 {
        self.eta.unwrap_or(0.05)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub kind: NoiseKind,
    pub sigma: f64,
    /// Explicit law of `Z`. Without it `Z` is uniform (bounded) or Gaussian
    /// (unbounded) with the given `mean_z` and `var_z`.
    #[serde(default)]
    pub law: Option<ZLaw>,
    #[serde(default)]
    pub mean_z: Option<f64>,
    #[serde(default)]
    pub var_z: Option<f64>,
    #[serde(default)]
    pub tau_lo: Option<f64>,
    #[serde(default)]
    pub tau_hi: Option<f64>,
}

impl NoiseConfig {
    pub fn model(&self) -> Result<NoiseModel> {
        let z = match self.law {
            Some(law) => {
                if self.mean_z.is_some() || self.var_z.is_some() {
                    return Err(Error::Config("noise: mean_z/var_z conflict with an explicit law".into()));
                }
                law
            }
            None => {
                let mean = self.mean_z.unwrap_or(0.0);
                let var = self.var_z.unwrap_or(1.0);
                if !(var > 0.0) || !var.is_finite() {
                    return Err(Error::Config(format!("noise.var_z: must be positive, got {var}")));
                }
                if !mean.is_finite() {
                    return Err(Error::Config("noise.mean_z: must be finite".into()));
                }
                match self.kind {
                    NoiseKind::Bounded => {
                        let half = (3.0 * var).sqrt();
                        ZLaw::Uniform { lo: mean - half, hi: mean + half }
                    }
                    NoiseKind::Unbounded => ZLaw::Gaussian { mean, sd: var.sqrt() },
                }
            }
        };
        let built = match self.kind {
            NoiseKind::Bounded => {
                let lo = self.tau_lo.ok_or_else(|| Error::Config("noise.tau_lo: required for bounded noise".into()))?;
                let hi = self.tau_hi.ok_or_else(|| Error::Config("noise.tau_hi: required for bounded noise".into()))?;
                NoiseModel::bounded(self.sigma, z, lo, hi)
            }
            NoiseKind::Unbounded => {
                if self.tau_lo.is_some() || self.tau_hi.is_some() {
                    return Err(Error::Config("noise: tau_lo/tau_hi need kind \"bounded\"".into()));
                }
                NoiseModel::unbounded(self.sigma, z)
            }
        };
        built.map_err(|e| Error::Config(format!("noise: {}", message(&e))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub replicates: u64,
    pub seed: u64,
    /// `exp`, `sin`, `runge`, `runge:<c>` or `poly:c0,c1,...`.
    pub test_function: String,
    /// Worker threads for replicate loops; all cores when absent.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn function(&self) -> Result<TestFunction> {
        self.test_function
            .parse()
            .map_err(|e: Error| Error::Config(format!("mc.test_function: {}", message(&e))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default)]
    pub l_from: usize,
    pub l_to: usize,
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    /// Highest derivative order tabulated against the Markoff bound.
    #[serde(default = "default_markoff_j")]
    pub markoff_j: usize,
}

fn default_grid() -> usize {
    crate::polybasis::DEFAULT_GRID
}

fn default_markoff_j() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

/// Inner message of an error, without the variant prefix.
fn message(e: &Error) -> String {
    match e {
        Error::InvalidDomain(m)
        | Error::InvalidKnots(m)
        | Error::InvalidWeights(m)
        | Error::InfeasibleBudget(m)
        | Error::InfeasibleGeometry(m)
        | Error::MissingData(m)
        | Error::Unsupported(m)
        | Error::Config(m)
        | Error::Numerical(m) => m.clone(),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config(format!("{path}: {}", e.into_inner()))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Re-checks every block against the invariants of the types it feeds.
    pub fn validate(&self) -> Result<()> {
        self.space
            .validate()
            .map_err(|e| Error::Config(format!("space: {}", message(&e))))?;
        self.smoothness.source()?;
        if let Some(rho) = self.smoothness.rho_n {
            if !(rho >= 0.0) || !rho.is_finite() {
                return Err(Error::Config(format!("smoothness.rho_n: must be nonnegative, got {rho}")));
            }
        }
        if let Some(eta) = self.smoothness.eta {
            if !(eta > 0.0 && eta < 1.0) {
                return Err(Error::Config(format!("smoothness.eta: must lie in (0, 1), got {eta}")));
            }
        }
        self.noise.model()?;
        if let Some(mc) = &self.mc {
            if mc.replicates == 0 {
                return Err(Error::Config("mc.replicates: must be at least 1".into()));
            }
            if mc.threads == Some(0) {
                return Err(Error::Config("mc.threads: must be at least 1".into()));
            }
            mc.function()?;
        }
        if let Some(diag) = &self.diagnostics {
            if diag.l_from > diag.l_to {
                return Err(Error::Config("diagnostics.l_from: exceeds l_to".into()));
            }
            if diag.grid_size < 2 {
                return Err(Error::Config("diagnostics.grid_size: must be at least 2".into()));
            }
        }
        Ok(())
    }
}

/// Resolves the config path from the flag and the config-directory variable.
pub fn resolve_config_path(flag: Option<&Path>, config_dir: Option<&Path>) -> Result<PathBuf> {
    match (flag, config_dir) {
        (Some(p), Some(dir)) if p.is_relative() && !p.exists() => Ok(dir.join(p)),
        (Some(p), _) => Ok(p.to_path_buf()),
        (None, Some(dir)) => Ok(dir.join(DEFAULT_CONFIG_NAME)),
        (None, None) => Err(Error::Config(format!(
            "no --config given and {CONFIG_DIR_ENV} is not set"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "space": {"a": -2, "b": 2, "s_lo": -1, "s_hi": 1, "s_star": 1, "target": 1.25, "d": 0},
        "smoothness": {"alpha": 3, "m": 8, "l": 12, "n": 1000},
        "noise": {"kind": "bounded", "sigma": 0.1, "tau_lo": 0.0, "tau_hi": 3.0}
    }"#;

    #[test]
    fn parses_minimal() {
        let c = RunConfig::from_json(BASE).unwrap();
        assert_eq!(
            c.smoothness.source().unwrap(),
            DesignSource::Explicit(ExplicitDesign { m: 8, l: 12, n: 1000 })
        );
        let noise = c.noise.model().unwrap();
        assert!((noise.var_z() - 1.0).abs() < 1e-15);
        assert_eq!(c.output.format, Format::Json);
    }

    #[test]
    fn field_paths_in_messages() {
        let bad = BASE.replace("\"s_star\": 1", "\"s_star\": 1.5");
        let err = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("space:"), "{err}");

        let bad = BASE.replace("\"sigma\": 0.1", "\"sigma\": \"x\"");
        let err = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("noise.sigma"), "{err}");

        let bad = BASE.replace("\"n\": 1000", "\"n\": 1000, \"budget\": {\"rho_m\": 1, \"rho_l\": 1, \"rho\": 1, \"eta\": 0.1}");
        let err = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("not both"), "{err}");

        let bad = BASE.replace("\"tau_lo\": 0.0, ", "");
        let err = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("noise.tau_lo"), "{err}");

        let bad = BASE.replace("\"alpha\": 3", "\"alpha\": 3, \"colour\": 1");
        let err = RunConfig::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("smoothness"), "{err}");
    }

    #[test]
    fn config_dir_resolution() {
        let dir = Path::new("/nonexistent-dir");
        assert_eq!(resolve_config_path(None, Some(dir)).unwrap(), dir.join("config.json"));
        assert_eq!(
            resolve_config_path(Some(Path::new("run.json")), Some(dir)).unwrap(),
            dir.join("run.json")
        );
        assert!(resolve_config_path(None, None).is_err());
    }
}
