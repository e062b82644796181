//! Lebesgue function and constants: how much knot-value errors are amplified
//! by interpolation.

use std::f64::consts::{E, PI};

use serde::Serialize;

use super::lagrange::LagrangeBasis;
use crate::designs::chebyshev_knots;
use crate::error::{Error, Result};
use crate::numeric::{uniform_grid, EULER_GAMMA_SHORT};

/// Default number of grid points for sup-norm scans.
pub const DEFAULT_GRID: usize = 100_000;

/// `sum_k |L_k(point)|`.
pub fn lebesgue_function(knots: &[f64], point: f64) -> Result<f64> {
    let basis = LagrangeBasis::new(knots)?;
    Ok(basis.values(point).iter().map(|v| v.abs()).sum())
}

/// Maximum of the Lebesgue function over a uniform grid on `[lo, hi]`.
pub fn lebesgue_grid_max(basis: &LagrangeBasis, lo: f64, hi: f64, grid_size: usize) -> f64 {
    let mut buf = vec![0.0; basis.len()];
    uniform_grid(lo, hi, grid_size)
        .map(|x| {
            basis.values_at(x, &mut buf);
            buf.iter().map(|v| v.abs()).sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Closed form of the Lebesgue constant for `l + 1` Chebyshev knots:
/// `(1/(l+1)) sum_k cot((2k+1) pi / (4(l+1)))`.
pub fn lebesgue_constant_chebyshev(l: usize) -> f64 {
    let n = (l + 1) as f64;
    (0..=l)
        .map(|k| 1.0 / ((2 * k + 1) as f64 * PI / (4.0 * n)).tan())
        .sum::<f64>()
        / n
}

/// `(2/pi) ln(l+1)`, the leading growth of the Chebyshev Lebesgue constant.
pub fn chebyshev_lebesgue_asymptote(l: usize) -> f64 {
    2.0 / PI * ((l + 1) as f64).ln()
}

/// `2^(l+1) / (e l (ln l + gamma))` with `gamma = 0.577`; growth for
/// equispaced knots.
pub fn equidistant_lebesgue_asymptote(l: usize) -> Result<f64> {
    if l < 2 {
        return Err(Error::InvalidDomain(format!(
            "equidistant asymptote needs l >= 2, got {l}"
        )));
    }
    let lf = l as f64;
    Ok(2f64.powi(l as i32 + 1) / (E * lf * (lf.ln() + EULER_GAMMA_SHORT)))
}

/// `l + 1` equispaced knots including both window ends.
pub fn equidistant_knots(l: usize, s_lo: f64, s_hi: f64) -> Result<Vec<f64>> {
    if !(s_lo < s_hi) {
        return Err(Error::InvalidDomain(format!("window [{s_lo}, {s_hi}] is degenerate")));
    }
    if l == 0 {
        return Ok(vec![0.5 * (s_lo + s_hi)]);
    }
    Ok(uniform_grid(s_lo, s_hi, l + 1).collect())
}

/// Largest `|L_k|` over all `k` and a uniform grid on `[-1, 1]`, for Chebyshev
/// knots. The quantity is invariant under affine maps of the window.
pub fn elementary_lagrange_sup_check(l: usize, grid_size: usize) -> f64 {
    let knots = chebyshev_knots(l, -1.0, 1.0).expect("reference window is valid");
    let basis = LagrangeBasis::new(&knots).expect("chebyshev knots are distinct");
    let mut buf = vec![0.0; basis.len()];
    uniform_grid(-1.0, 1.0, grid_size.max(2))
        .map(|x| {
            basis.values_at(x, &mut buf);
            buf.iter().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .fold(0.0, f64::max)
}

/// Lebesgue-constant diagnostics for one degree `l` on the reference window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LebesgueDiagnostics {
    pub l: usize,
    /// Grid maximum of the Lebesgue function for Chebyshev knots.
    pub grid_max: f64,
    pub closed_form: f64,
    pub chebyshev_asymptote: f64,
    /// Grid maximum for equispaced knots.
    pub equidistant_grid_max: f64,
    /// Absent for `l < 2`.
    pub equidistant_asymptote: Option<f64>,
}

impl LebesgueDiagnostics {
    pub fn compute(l: usize, grid_size: usize) -> Self {
        let cheb = LagrangeBasis::new(&chebyshev_knots(l, -1.0, 1.0).expect("valid window"))
            .expect("distinct knots");
        let equi = LagrangeBasis::new(&equidistant_knots(l, -1.0, 1.0).expect("valid window"))
            .expect("distinct knots");
        Self {
            l,
            grid_max: lebesgue_grid_max(&cheb, -1.0, 1.0, grid_size),
            closed_form: lebesgue_constant_chebyshev(l),
            chebyshev_asymptote: chebyshev_lebesgue_asymptote(l),
            equidistant_grid_max: lebesgue_grid_max(&equi, -1.0, 1.0, grid_size),
            equidistant_asymptote: equidistant_lebesgue_asymptote(l).ok(),
        }
    }
}
