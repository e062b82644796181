//! One function per subcommand, each turning a config into a report.

use serde::Serialize;

use crate::bounds::{
    hoeffding_radius, solve_budget_with, total_bound, BoundReport, BudgetSolution, SolveOptions,
};
use crate::designs::{build_design, Design, DesignSpace};
use crate::error::{Error, Result};
use crate::mc::{run_coverage_experiment, CoverageExperiment, CoverageReport};
use crate::noise::NoiseModel;
use crate::polybasis::{elementary_lagrange_sup_check, markoff_bound, LebesgueDiagnostics};

use super::config::{DesignSource, RunConfig};

/// A flat table for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub trait Report: Serialize {
    fn table(&self) -> Table;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnotRow {
    pub k: usize,
    pub knot: f64,
    pub weight: f64,
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    pub space: DesignSpace,
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub total: usize,
    pub knots: Vec<KnotRow>,
}

impl Report for DesignReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["k", "knot", "weight", "frequency"]);
        for r in &self.knots {
            t.push(vec![r.k.to_string(), num(r.knot), num(r.weight), r.frequency.to_string()]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub alpha: usize,
    /// Confidence level behind `m_est` when it was derived from `n`.
    pub eta: Option<f64>,
    pub bound: BoundReport,
}

impl Report for BoundsReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "l", "m", "n", "alpha", "eta", "m_taylor", "m_interp", "lambda", "k_factor", "m_est", "total",
            "smoothness_hypothesis",
        ]);
        let b = &self.bound;
        t.push(vec![
            self.l.to_string(),
            self.m.to_string(),
            self.n.to_string(),
            self.alpha.to_string(),
            opt(self.eta),
            num(b.m_taylor),
            num(b.m_interp),
            num(b.lambda),
            num(b.k_factor),
            num(b.m_est),
            num(b.total),
            b.smoothness_hypothesis.to_string(),
        ]);
        t
    }
}

impl Report for BudgetSolution {
    fn table(&self) -> Table {
        let mut t = Table::new(&["m", "l", "n", "n_union", "lambda", "m_taylor", "m_interp", "m_explicit"]);
        t.push(vec![
            self.m.to_string(),
            self.l.to_string(),
            self.n.to_string(),
            self.n_union.to_string(),
            num(self.lambda),
            num(self.m_taylor),
            num(self.m_interp),
            opt(self.m_explicit),
        ]);
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub test_function: String,
    pub coverage: CoverageReport,
}

impl Report for SimulationReport {
    fn table(&self) -> Table {
        let c = &self.coverage;
        let mut t = Table::new(&[
            "l",
            "m",
            "n",
            "test_function",
            "seed",
            "replicates",
            "exceed_count_est",
            "exceed_count_total",
            "exceed_count_posterior",
            "empirical_rate_est",
            "empirical_rate_total",
            "empirical_rate_posterior",
            "mean_abs_error",
            "max_abs_error",
            "deterministic_error",
            "bound_value",
            "knot_threshold",
        ]);
        t.push(vec![
            self.l.to_string(),
            self.m.to_string(),
            self.n.to_string(),
            self.test_function.clone(),
            c.seed.to_string(),
            c.replicates.to_string(),
            c.exceed_count_est.to_string(),
            c.exceed_count_total.to_string(),
            c.exceed_count_posterior.to_string(),
            num(c.empirical_rate_est),
            num(c.empirical_rate_total),
            num(c.empirical_rate_posterior),
            num(c.mean_abs_error),
            num(c.max_abs_error),
            num(c.deterministic_error),
            num(c.bound_value),
            num(c.knot_threshold),
        ]);
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    #[serde(flatten)]
    pub lebesgue: LebesgueDiagnostics,
    /// Grid max of `|L_k|` over Chebyshev knots on `[-1, 1]`; at most `pi`.
    pub w_check: f64,
    /// Markoff bound for derivative orders `1..=markoff_j` on the window, `W = 1`.
    pub markoff: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub grid_size: usize,
    pub window: (f64, f64),
    pub rows: Vec<DiagnosticsRow>,
}

impl Report for DiagnosticsReport {
    fn table(&self) -> Table {
        let j = self.rows.first().map_or(0, |r| r.markoff.len());
        let mut headers = vec![
            "l".to_string(),
            "grid_max".into(),
            "closed_form".into(),
            "chebyshev_asymptote".into(),
            "equidistant_grid_max".into(),
            "equidistant_asymptote".into(),
            "w_check".into(),
        ];
        headers.extend((1..=j).map(|i| format!("markoff_{i}")));
        let mut t = Table { headers, rows: Vec::new() };
        for r in &self.rows {
            let d = &r.lebesgue;
            let mut row = vec![
                d.l.to_string(),
                num(d.grid_max),
                num(d.closed_form),
                num(d.chebyshev_asymptote),
                num(d.equidistant_grid_max),
                opt(d.equidistant_asymptote),
                num(r.w_check),
            ];
            row.extend(r.markoff.iter().copied().map(num));
            t.push(row);
        }
        t
    }
}

fn noise(config: &RunConfig) -> Result<NoiseModel> {
    config.noise.model()
}

/// Resolves `(m, l, n)`, solving the budget when one is configured.
fn resolve_mln(config: &RunConfig, noise: &NoiseModel) -> Result<(usize, usize, usize)> {
    match config.smoothness.source()? {
        DesignSource::Explicit(e) => Ok((e.m, e.l, e.n)),
        DesignSource::Budget(budget, l_max) => {
            let sol = solve_budget_with(&budget, &config.space, noise, SolveOptions { l_max })?;
            let n = usize::try_from(sol.n)
                .map_err(|_| Error::InfeasibleBudget(format!("sample size {} is not addressable", sol.n)))?;
            Ok((sol.m, sol.l, n))
        }
    }
}

/// Estimation allowance and the confidence behind it.
fn resolve_rho_n(config: &RunConfig, noise: &NoiseModel, design: &Design, m: usize, l: usize, n: usize) -> Result<(f64, Option<f64>)> {
    if let DesignSource::Budget(budget, _) = config.smoothness.source()? {
        return Ok((budget.rho_n, Some(budget.eta)));
    }
    if let Some(rho) = config.smoothness.rho_n {
        return Ok((rho, None));
    }
    let (tau_lo, tau_hi) = noise
        .tau
        .ok_or_else(|| Error::Unsupported("unbounded noise has no Hoeffding radius; set smoothness.rho_n".into()))?;
    let lambda = crate::bounds::lambda_factor(&design.knots, m, config.space.d, config.space.s_star, config.space.target)?;
    let eta = config.smoothness.eta_or_default();
    Ok((hoeffding_radius(l, lambda, tau_lo, tau_hi, n as u64, eta)?, Some(eta)))
}

pub fn cmd_design(config: &RunConfig) -> Result<DesignReport> {
    let noise = noise(config)?;
    let (m, l, n) = resolve_mln(config, &noise)?;
    let design = build_design(&config.space, l, m, n)?;
    let knots = design
        .knots
        .iter()
        .zip(&design.weights)
        .zip(&design.frequencies)
        .enumerate()
        .map(|(k, ((&knot, &weight), &frequency))| KnotRow { k, knot, weight, frequency })
        .collect();
    Ok(DesignReport { space: config.space, l, m, n, total: design.total, knots })
}

pub fn cmd_bounds(config: &RunConfig) -> Result<BoundsReport> {
    let noise = noise(config)?;
    if noise.tau.is_none() {
        return Err(Error::Unsupported(
            "the total bound needs bounded observations (noise.kind = \"bounded\" with tau_lo, tau_hi)".into(),
        ));
    }
    let (m, l, n) = resolve_mln(config, &noise)?;
    let design = build_design(&config.space, l, m, n)?;
    let (rho_n, eta) = resolve_rho_n(config, &noise, &design, m, l, n)?;
    let alpha = config.smoothness.alpha;
    let bound = total_bound(&config.space, &design, &noise, m, alpha, rho_n)?;
    Ok(BoundsReport { l, m, n, alpha, eta, bound })
}

pub fn cmd_solve(config: &RunConfig) -> Result<BudgetSolution> {
    let noise = noise(config)?;
    match config.smoothness.source()? {
        DesignSource::Budget(budget, l_max) => {
            solve_budget_with(&budget, &config.space, &noise, SolveOptions { l_max })
        }
        DesignSource::Explicit(_) => Err(Error::Config("smoothness.budget: required by solve".into())),
    }
}

pub fn cmd_simulate(config: &RunConfig, seed_override: Option<u64>) -> Result<SimulationReport> {
    let mc = config
        .mc
        .as_ref()
        .ok_or_else(|| Error::Config("mc: required by simulate".into()))?;
    let noise = noise(config)?;
    let (m, l, n) = resolve_mln(config, &noise)?;
    let design = build_design(&config.space, l, m, n)?;
    let (rho_n, _) = resolve_rho_n(config, &noise, &design, m, l, n)?;
    let phi = mc.function()?;
    let exp = CoverageExperiment {
        space: &config.space,
        design: &design,
        phi: &phi,
        noise: &noise,
        m,
        alpha: config.smoothness.alpha,
        rho_n,
        replicates: mc.replicates,
        seed: seed_override.unwrap_or(mc.seed),
    };
    let coverage = with_threads(mc.threads, || run_coverage_experiment(&exp))?;
    Ok(SimulationReport { l, m, n, test_function: phi.to_string(), coverage })
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("mc.threads: {e}")))?
            .install(f),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T>(_threads: Option<usize>, f: impl FnOnce() -> Result<T>) -> Result<T> {
    f()
}

pub fn cmd_diagnostics(config: &RunConfig) -> Result<DiagnosticsReport> {
    let diag = config
        .diagnostics
        .as_ref()
        .ok_or_else(|| Error::Config("diagnostics: required by diagnostics".into()))?;
    let (lo, hi) = (config.space.s_lo, config.space.s_hi);
    let rows = (diag.l_from..=diag.l_to)
        .map(|l| {
            let markoff = (1..=diag.markoff_j)
                .map(|j| markoff_bound(l, j, lo, hi, 1.0))
                .collect::<Result<Vec<_>>>()?;
            Ok(DiagnosticsRow {
                lebesgue: LebesgueDiagnostics::compute(l, diag.grid_size),
                w_check: elementary_lagrange_sup_check(l, diag.grid_size),
                markoff,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsReport { grid_size: diag.grid_size, window: (lo, hi), rows })
}
