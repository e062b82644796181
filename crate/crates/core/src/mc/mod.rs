//! Seeded Monte Carlo for the observation model and the estimation pipeline.
//!
//! Every random draw comes from a ChaCha8 stream keyed by the run seed, with
//! the replicate index as stream id and the knot index selecting a disjoint
//! block of the counter. Results therefore do not depend on how replicates
//! are scheduled across threads.

mod functions;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{total_bound, BoundReport};
use crate::designs::{Design, DesignSpace};
use crate::error::{Error, Result};
use crate::estimators::{hoel_polynomial_estimate, knot_means, SampleSet, TaylorExtrapolator};
use crate::noise::NoiseModel;
use crate::numeric::uniform_grid;
use crate::polybasis::extended::{lagrange_derivative_dd, DoubleDouble};

pub use functions::{FunctionSups, TestFunction};

/// Words of counter space reserved for each knot within a replicate stream.
const KNOT_BLOCK: u128 = 1 << 40;

/// Grid size for sup-norm error scans.
pub const DEFAULT_DECAY_GRID: usize = 10_000;

/// RNG for `(seed, replicate, knot)`.
pub fn substream(seed: u64, replicate: u64, knot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng.set_word_pos(knot as u128 * KNOT_BLOCK);
    rng
}

fn map_replicates<T, F>(replicates: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..replicates).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..replicates).map(f).collect()
    }
}

/// Observations `Y_j(s_k) = f(s_k) + sigma Z_j` for one replicate.
pub fn sample_replicate(design: &Design, phi: &TestFunction, noise: &NoiseModel, seed: u64, replicate: u64) -> SampleSet {
    let per_knot = design
        .knots
        .iter()
        .zip(&design.frequencies)
        .enumerate()
        .map(|(k, (&s, &n))| {
            let mut rng = substream(seed, replicate, k);
            let f = phi.value(s);
            (0..n).map(|_| f + noise.sample(&mut rng)).collect()
        })
        .collect();
    SampleSet::new(per_knot)
}

/// Observations for replicate 0 of `seed`.
pub fn sample_observations(design: &Design, phi: &TestFunction, noise: &NoiseModel, seed: u64) -> SampleSet {
    sample_replicate(design, phi, noise, seed, 0)
}

/// Inputs of a coverage experiment.
#[derive(Debug, Clone)]
pub struct CoverageExperiment<'a> {
    pub space: &'a DesignSpace,
    pub design: &'a Design,
    pub phi: &'a TestFunction,
    pub noise: &'a NoiseModel,
    pub m: usize,
    pub alpha: usize,
    /// Estimation allowance; the knot threshold is `rho_n / Lambda`.
    pub rho_n: f64,
    pub replicates: u64,
    pub seed: u64,
}

/// Empirical counterpart of the three-term bound and its Hoeffding budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub replicates: u64,
    /// Replicates with `max_k |eps_k| >= rho_n / Lambda`.
    pub exceed_count_est: u64,
    /// Replicates whose error exceeds the a-priori total bound.
    pub exceed_count_total: u64,
    /// Replicates whose error exceeds the bound built from their own residuals.
    pub exceed_count_posterior: u64,
    pub empirical_rate_est: f64,
    pub empirical_rate_total: f64,
    pub empirical_rate_posterior: f64,
    pub mean_abs_error: f64,
    pub max_abs_error: f64,
    /// Error of the estimator fed with exact knot values.
    pub deterministic_error: f64,
    pub bound_value: f64,
    pub knot_threshold: f64,
    pub bound: BoundReport,
    pub seed: u64,
}

struct ReplicateOutcome {
    abs_error: f64,
    worst_residual: f64,
}

pub fn run_coverage_experiment(exp: &CoverageExperiment<'_>) -> Result<CoverageReport> {
    if exp.replicates == 0 {
        return Err(Error::Config("at least one replicate is required".into()));
    }
    let space = exp.space;
    let design = exp.design;
    let bound = total_bound(space, design, exp.noise, exp.m, exp.alpha, exp.rho_n)?;
    let basis = design.basis()?;
    let extrapolator = TaylorExtrapolator::from_basis(&basis, space.d, exp.m, space.s_star, space.target)?;

    // the model estimates phi = f + sigma E(Z)
    let shift = exp.noise.location_shift();
    let knot_truth: Vec<f64> = design.knots.iter().map(|&s| exp.phi.value(s) + shift).collect();
    let truth = exp.phi.derivative(space.d, space.target) + if space.d == 0 { shift } else { 0.0 };
    let deterministic_error = (truth - extrapolator.estimate_slice(&knot_truth)).abs();

    let outcomes: Vec<Result<ReplicateOutcome>> = map_replicates(exp.replicates, |rep| {
        let samples = sample_replicate(design, exp.phi, exp.noise, exp.seed, rep);
        let means = knot_means(&samples)?;
        let estimate = extrapolator.estimate(&means)?;
        let worst_residual = means
            .values
            .iter()
            .zip(&knot_truth)
            .fold(0.0f64, |acc, (m, t)| acc.max((m - t).abs()));
        Ok(ReplicateOutcome { abs_error: (truth - estimate).abs(), worst_residual })
    });

    let threshold = exp.rho_n / bound.lambda;
    let deterministic = bound.m_taylor + bound.m_interp;
    let mut exceed_est = 0;
    let mut exceed_total = 0;
    let mut exceed_post = 0;
    let mut sum_err = 0.0;
    let mut max_err = 0.0f64;
    for outcome in outcomes {
        let o = outcome?;
        if o.worst_residual >= threshold {
            exceed_est += 1;
        }
        if o.abs_error > bound.total {
            exceed_total += 1;
        }
        if o.abs_error > deterministic + bound.lambda * o.worst_residual {
            exceed_post += 1;
        }
        sum_err += o.abs_error;
        max_err = max_err.max(o.abs_error);
    }
    let reps = exp.replicates as f64;
    Ok(CoverageReport {
        replicates: exp.replicates,
        exceed_count_est: exceed_est,
        exceed_count_total: exceed_total,
        exceed_count_posterior: exceed_post,
        empirical_rate_est: exceed_est as f64 / reps,
        empirical_rate_total: exceed_total as f64 / reps,
        empirical_rate_posterior: exceed_post as f64 / reps,
        mean_abs_error: sum_err / reps,
        max_abs_error: max_err,
        deterministic_error,
        bound_value: bound.total,
        knot_threshold: threshold,
        bound,
        seed: exp.seed,
    })
}

/// Frequency of `max_k |eps_k| >= threshold` over replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceReport {
    pub replicates: u64,
    pub threshold: f64,
    pub exceed_count: u64,
    pub rate: f64,
    pub seed: u64,
}

pub fn estimation_exceedance(
    design: &Design,
    phi: &TestFunction,
    noise: &NoiseModel,
    threshold: f64,
    replicates: u64,
    seed: u64,
) -> Result<ExceedanceReport> {
    if replicates == 0 {
        return Err(Error::Config("at least one replicate is required".into()));
    }
    let shift = noise.location_shift();
    let knot_truth: Vec<f64> = design.knots.iter().map(|&s| phi.value(s) + shift).collect();
    let hits: Vec<Result<bool>> = map_replicates(replicates, |rep| {
        let means = knot_means(&sample_replicate(design, phi, noise, seed, rep))?;
        Ok(means
            .values
            .iter()
            .zip(&knot_truth)
            .any(|(m, t)| (m - t).abs() >= threshold))
    });
    let mut exceed_count = 0;
    for hit in hits {
        if hit? {
            exceed_count += 1;
        }
    }
    Ok(ExceedanceReport {
        replicates,
        threshold,
        exceed_count,
        rate: exceed_count as f64 / replicates as f64,
        seed,
    })
}

/// Empirical behavior of the polynomial estimator at one target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoelReport {
    pub replicates: u64,
    pub truth: f64,
    pub mean_estimate: f64,
    pub empirical_variance: f64,
    /// Replicates with `|estimate - truth| >= eta`.
    pub exceed_count: u64,
    pub rate: f64,
    pub seed: u64,
}

#[allow(clippy::too_many_arguments)]
pub fn hoel_experiment(
    design: &Design,
    phi: &TestFunction,
    noise: &NoiseModel,
    d: usize,
    target: f64,
    eta: f64,
    replicates: u64,
    seed: u64,
) -> Result<HoelReport> {
    if replicates < 2 {
        return Err(Error::Config("at least two replicates are required".into()));
    }
    let shift = noise.location_shift();
    let truth = phi.derivative(d, target) + if d == 0 { shift } else { 0.0 };
    let estimates: Vec<Result<f64>> = map_replicates(replicates, |rep| {
        let means = knot_means(&sample_replicate(design, phi, noise, seed, rep))?;
        hoel_polynomial_estimate(&design.knots, &means, d, target)
    });
    let estimates = estimates.into_iter().collect::<Result<Vec<f64>>>()?;
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let exceed_count = estimates.iter().filter(|e| (*e - truth).abs() >= eta).count() as u64;
    Ok(HoelReport {
        replicates,
        truth,
        mean_estimate: mean,
        empirical_variance: var,
        exceed_count,
        rate: exceed_count as f64 / n,
        seed,
    })
}

/// One row of an interpolation decay table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub l: usize,
    pub sup_error: f64,
}

/// Sup-grid error `max_s |phi^(j)(s) - sum_k L_k^(j)(s) phi(s_k)|` on the
/// window for Chebyshev knots of each requested degree, from exact knot
/// values.
///
/// Both the function and the interpolant are evaluated in double-double, so
/// errors well below `f64` epsilon are still measured faithfully.
pub fn interpolation_decay_study(
    phi: &TestFunction,
    s_lo: f64,
    s_hi: f64,
    j: usize,
    l_values: &[usize],
    grid_size: usize,
) -> Result<Vec<DecayRow>> {
    if grid_size < 2 {
        return Err(Error::Config("grid needs at least two points".into()));
    }
    let grid: Vec<f64> = uniform_grid(s_lo, s_hi, grid_size).collect();
    l_values
        .iter()
        .map(|&l| {
            let knots = crate::designs::chebyshev_knots(l, s_lo, s_hi)?;
            let values: Vec<DoubleDouble> = knots.iter().map(|&s| phi.derivative_dd(0, s)).collect();
            let errors: Vec<f64> = map_replicates(grid.len() as u64, |i| {
                let x = grid[i as usize];
                let interp = values
                    .iter()
                    .enumerate()
                    .fold(DoubleDouble::ZERO, |acc, (k, &v)| {
                        acc + v * lagrange_derivative_dd(&knots, k, x, j)
                    });
                (phi.derivative_dd(j, x) - interp).abs().to_f64()
            });
            let sup_error = errors.into_iter().fold(0.0, f64::max);
            Ok(DecayRow { l, sup_error })
        })
        .collect()
}

/// Draws `count` values of `sigma Z` on one substream.
pub fn noise_draws(noise: &NoiseModel, seed: u64, replicate: u64, knot: usize, count: usize) -> Vec<f64> {
    let mut rng = substream(seed, replicate, knot);
    (0..count).map(|_| noise.sample(&mut rng)).collect()
}

/// A uniform draw in `[0, 1)` from a substream; convenience for tests.
pub fn unit_draw(seed: u64, replicate: u64, knot: usize) -> f64 {
    substream(seed, replicate, knot).random()
}
