//! Closed-form error bounds and sample sizes.
//!
//! The extrapolation error `|phi^(d)(u) - T(u)|` splits into a Taylor
//! truncation term, an interpolation term and a knot-estimation term. Each
//! has a closed-form bound here, together with the Hoeffding and Tchebycheff
//! budgets that make the estimation term small with high probability, and
//! the inversion from an error budget back to `(m, l, n)`.
//!
//! Distances `s* - u` enter every bound as `|s* - u|`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::designs::{chebyshev_knots, Design, DesignSpace};
use crate::error::{Error, Result};
use crate::estimators::JET_ORDER_CAP;
pub use crate::noise::{NoiseKind, NoiseModel, ZLaw};
use crate::numeric::{factorial, falling_ratio};
use crate::polybasis::LagrangeBasis;

/// Target radii for the three error components and the confidence settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    /// Allowance for the Taylor truncation term.
    pub rho_m: f64,
    /// Allowance for the interpolation term.
    pub rho_l: f64,
    /// Allowance for the knot-estimation term; the Hoeffding radius.
    #[serde(alias = "rho")]
    pub rho_n: f64,
    /// Failure probability of the estimation allowance.
    pub eta: f64,
    /// Failure probability for the Tchebycheff budget (unbounded noise).
    #[serde(default)]
    pub omega: Option<f64>,
    /// Smoothness order used in the interpolation bound.
    pub alpha: usize,
}

impl ErrorBudget {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rho_m", self.rho_m), ("rho_l", self.rho_l), ("rho_n", self.rho_n)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Config(format!("eta must lie in (0, 1), got {}", self.eta)));
        }
        if let Some(w) = self.omega {
            if !(w > 0.0 && w < 1.0) {
                return Err(Error::Config(format!("omega must lie in (0, 1), got {w}")));
            }
        }
        if self.alpha == 0 {
            return Err(Error::Config("alpha must be at least 1".into()));
        }
        Ok(())
    }
}

/// The three-term extrapolation bound and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m_taylor: f64,
    pub m_interp: f64,
    pub lambda: f64,
    pub k_factor: f64,
    pub m_est: f64,
    pub total: f64,
    /// Whether `l >= 2 alpha - 3` holds; the interpolation term assumes it.
    pub smoothness_hypothesis: bool,
}

/// Taylor truncation term
/// `R (d+m)!/m! (|s* - u| / (b - a))^m (b - a)^-d`.
pub fn m_taylor(r: f64, d: usize, m: usize, s_star: f64, target: f64, a: f64, b: f64) -> f64 {
    let width = b - a;
    let ratio = (s_star - target).abs() / width;
    r * falling_ratio(d + m, m) * ratio.powi(m as i32) / width.powi(d as i32)
}

/// `K(l, alpha) = (9 + (4/pi) ln(1+l)) (pi / (2(1+l)))^alpha`.
pub fn k_factor(l: usize, alpha: usize) -> f64 {
    let lp = (l + 1) as f64;
    (9.0 + 4.0 / PI * lp.ln()) * (PI / (2.0 * lp)).powi(alpha as i32)
}

/// Interpolation term
/// `K(l, alpha) R / w^(d+alpha) sum_{i<m} (|s* - u| / w)^i (d+i+alpha)!/i!`
/// with `w = s_hi - s_lo`. Overflow yields an infinite (valid, useless) bound.
#[allow(clippy::too_many_arguments)]
pub fn m_interp(
    r: f64,
    d: usize,
    m: usize,
    l: usize,
    alpha: usize,
    s_lo: f64,
    s_hi: f64,
    s_star: f64,
    target: f64,
) -> f64 {
    let w = s_hi - s_lo;
    let ratio = (s_star - target).abs() / w;
    let sum: f64 = (0..m)
        .map(|i| ratio.powi(i as i32) * falling_ratio(d + i + alpha, i))
        .sum();
    k_factor(l, alpha) * r / w.powi((d + alpha) as i32) * sum
}

/// Error amplification of the knot estimates:
/// `Lambda = sum_{i<m} sum_k |s* - u|^i / i! |L_k^(d+i)(s*)|`.
pub fn lambda_factor(knots: &[f64], m: usize, d: usize, s_star: f64, target: f64) -> Result<f64> {
    let basis = LagrangeBasis::new(knots)?;
    lambda_from_basis(&basis, m, d, s_star, target)
}

pub(crate) fn lambda_from_basis(basis: &LagrangeBasis, m: usize, d: usize, s_star: f64, target: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Config("Taylor order m must be at least 1".into()));
    }
    let order = d + m - 1;
    if order > JET_ORDER_CAP {
        return Err(Error::Config(format!("jet order {order} exceeds the cap {JET_ORDER_CAP}")));
    }
    let h = (s_star - target).abs();
    let mut total = 0.0;
    for k in 0..basis.len() {
        let jet = basis.jet(k, s_star, order);
        let mut power = 1.0;
        for i in 0..m {
            total += power / factorial(i) * jet.derivative(d + i).abs();
            power *= h;
        }
    }
    Ok(total)
}

fn deterministic_terms(
    space: &DesignSpace,
    design: &Design,
    noise: &NoiseModel,
    m: usize,
    alpha: usize,
) -> Result<(f64, f64, f64, f64, bool)> {
    space.validate()?;
    design.validate()?;
    if alpha == 0 {
        return Err(Error::Config("alpha must be at least 1".into()));
    }
    let r = noise.sup_bound().map_err(|_| {
        Error::Unsupported("the three-term bound needs bounded noise (a finite R)".into())
    })?;
    let l = design.degree();
    let d = space.d;
    let mt = m_taylor(r, d, m, space.s_star, space.target, space.a, space.b);
    let mi = m_interp(r, d, m, l, alpha, space.s_lo, space.s_hi, space.s_star, space.target);
    let lambda = lambda_factor(&design.knots, m, d, space.s_star, space.target)?;
    let hypothesis = l + 3 >= 2 * alpha;
    Ok((mt, mi, lambda, k_factor(l, alpha), hypothesis))
}

/// A-priori bound: the estimation term is the allowance `rho_n`, i.e.
/// `Lambda` times the knot threshold `rho_n / Lambda` certified by the
/// Hoeffding budget.
pub fn total_bound(
    space: &DesignSpace,
    design: &Design,
    noise: &NoiseModel,
    m: usize,
    alpha: usize,
    rho_n: f64,
) -> Result<BoundReport> {
    if !(rho_n >= 0.0) {
        return Err(Error::Config(format!("rho_n must be nonnegative, got {rho_n}")));
    }
    let (m_taylor, m_interp, lambda, k_factor, smoothness_hypothesis) =
        deterministic_terms(space, design, noise, m, alpha)?;
    Ok(BoundReport {
        m_taylor,
        m_interp,
        lambda,
        k_factor,
        m_est: rho_n,
        total: m_taylor + m_interp + rho_n,
        smoothness_hypothesis,
    })
}

/// A-posteriori bound: the estimation term is `Lambda max_k |residual_k|`.
pub fn total_bound_with_residuals(
    space: &DesignSpace,
    design: &Design,
    noise: &NoiseModel,
    m: usize,
    alpha: usize,
    residuals: &[f64],
) -> Result<BoundReport> {
    if residuals.len() != design.knots.len() {
        return Err(Error::MissingData(format!(
            "{} residuals for {} knots",
            residuals.len(),
            design.knots.len()
        )));
    }
    let (m_taylor, m_interp, lambda, k_factor, smoothness_hypothesis) =
        deterministic_terms(space, design, noise, m, alpha)?;
    let worst = residuals.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let m_est = lambda * worst;
    Ok(BoundReport {
        m_taylor,
        m_interp,
        lambda,
        k_factor,
        m_est,
        total: m_taylor + m_interp + m_est,
        smoothness_hypothesis,
    })
}

/// Derivative sup-norms of the unknown function, as needed by
/// [`approximation_bound`]. `None` means the bound is not available.
pub trait SupBounds {
    /// `sup_{s in S} |phi^(j)(s)|`.
    fn sup_on_window(&self, j: usize) -> Option<f64>;
    /// `sup_{v in (a, s_hi)} |phi^(j)(v)|`.
    fn sup_left_of_window_end(&self, j: usize) -> Option<f64>;
}

/// `M(m, l, alpha) = A + B`, the deterministic approximation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproximationBound {
    pub interpolation_part: f64,
    pub truncation_part: f64,
    pub total: f64,
}

/// Deterministic approximation bound for the noiseless Taylor-Lagrange
/// scheme:
///
/// - `A = K'(alpha, l) sum_{i<m} sup_S |phi^(d+i+alpha)| / i! sup_U |v - s*|^i`,
///   with `K'(alpha, l) = ((pi / (2(1+l))) (s_hi - s_lo))^alpha (9 + (4/pi) ln(1+l))`,
/// - `B = |u - s*|^m sup_{(a, s_hi)} |phi^(d+alpha)| / m!`,
///
/// where `U = D \ S`, so `sup_U |v - s*| = max(s* - a, b - s*)`.
pub fn approximation_bound(
    alpha: usize,
    l: usize,
    m: usize,
    d: usize,
    space: &DesignSpace,
    sups: &dyn SupBounds,
) -> Result<ApproximationBound> {
    space.validate()?;
    let lp = (l + 1) as f64;
    let k = (PI / (2.0 * lp) * space.window_width()).powi(alpha as i32) * (9.0 + 4.0 / PI * lp.ln());
    let reach_u = (space.s_star - space.a).max(space.b - space.s_star);
    let mut a_part = 0.0;
    for i in 0..m {
        let sup = sups
            .sup_on_window(d + i + alpha)
            .ok_or_else(|| Error::Config(format!("missing sup bound for derivative {}", d + i + alpha)))?;
        a_part += sup / factorial(i) * reach_u.powi(i as i32);
    }
    a_part *= k;
    let sup_b = sups
        .sup_left_of_window_end(d + alpha)
        .ok_or_else(|| Error::Config(format!("missing sup bound for derivative {}", d + alpha)))?;
    let b_part = space.reach().powi(m as i32) * sup_b / factorial(m);
    Ok(ApproximationBound { interpolation_part: a_part, truncation_part: b_part, total: a_part + b_part })
}

/// Hoeffding budgets for `P(max_k |eps_k| >= rho / Lambda) <= eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoeffdingSize {
    /// `floor(((l+1) ln 2 - ln eta) / 2 (Lambda (tau_hi - tau_lo) / rho)^2)`, at least 1.
    pub n_star: u64,
    /// Total budget under equal allocation that certifies the event through a
    /// union bound over knots; always a multiple of `l + 1`.
    pub n_union: u64,
}

pub fn hoeffding_sample_size(l: usize, lambda: f64, tau_lo: f64, tau_hi: f64, rho: f64, eta: f64) -> Result<HoeffdingSize> {
    if !(tau_lo < tau_hi) {
        return Err(Error::InvalidDomain(format!("need tau_lo < tau_hi, got [{tau_lo}, {tau_hi}]")));
    }
    if !(rho > 0.0) || !(lambda > 0.0) {
        return Err(Error::InvalidDomain("rho and Lambda must be positive".into()));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidDomain(format!("eta must lie in (0, 1), got {eta}")));
    }
    let knots = (l + 1) as f64;
    let spread = (lambda * (tau_hi - tau_lo) / rho).powi(2);
    let raw = (knots * LN_2 - eta.ln()) / 2.0 * spread;
    let per_knot = (spread * (2.0 * knots / eta).ln() / 2.0).ceil();
    let n_star = to_count(raw.floor())?.max(1);
    let n_union = to_count(per_knot)?
        .max(1)
        .checked_mul(l as u64 + 1)
        .ok_or_else(|| Error::Numerical(format!("union budget for {} knots overflows", l + 1)))?;
    Ok(HoeffdingSize { n_star, n_union })
}

/// The radius `rho` certified by `n` observations, inverting the
/// `n_star` formula of [`hoeffding_sample_size`] before flooring.
pub fn hoeffding_radius(l: usize, lambda: f64, tau_lo: f64, tau_hi: f64, n: u64, eta: f64) -> Result<f64> {
    if !(tau_lo < tau_hi) {
        return Err(Error::InvalidDomain(format!("need tau_lo < tau_hi, got [{tau_lo}, {tau_hi}]")));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidDomain(format!("eta must lie in (0, 1), got {eta}")));
    }
    if n == 0 {
        return Err(Error::InfeasibleBudget("no observations".into()));
    }
    let knots = (l + 1) as f64;
    Ok(lambda * (tau_hi - tau_lo) * ((knots * LN_2 - eta.ln()) / (2.0 * n as f64)).sqrt())
}

fn to_count(x: f64) -> Result<u64> {
    if x.is_finite() && x >= 0.0 && x < u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(Error::Numerical(format!("sample size {x} is not representable")))
    }
}

/// Options for [`solve_budget_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub l_max: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { l_max: 1000 }
    }
}

/// `(m, l, n)` meeting an error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSolution {
    pub m: usize,
    pub l: usize,
    pub n: u64,
    pub n_union: u64,
    pub lambda: f64,
    pub m_taylor: f64,
    pub m_interp: f64,
    /// Real-valued explicit `m` for `d = 0`, before rounding up.
    pub m_explicit: Option<f64>,
}

/// Explicit truncation order for `d = 0`:
/// `(ln rho_m - ln R) / (ln |s* - u| - ln(b - a))`.
pub fn explicit_m_d0(rho_m: f64, r: f64, s_star: f64, target: f64, a: f64, b: f64) -> f64 {
    (rho_m.ln() - r.ln()) / ((s_star - target).abs().ln() - (b - a).ln())
}

/// Smallest `m` in `1..=m_max` with `M_Taylor(m) <= rho_m`.
pub fn search_m(rho_m: f64, r: f64, space: &DesignSpace, m_max: usize) -> Option<usize> {
    (1..=m_max).find(|&m| m_taylor(r, space.d, m, space.s_star, space.target, space.a, space.b) <= rho_m)
}

/// Smallest `l` in `[lo, l_max]` with `M_interp(l) <= rho_l`, by bisection;
/// `M_interp` is decreasing in `l`.
fn search_l(rho_l: f64, r: f64, space: &DesignSpace, m: usize, alpha: usize, lo: usize, l_max: usize) -> Result<usize> {
    let interp = |l: usize| {
        m_interp(r, space.d, m, l, alpha, space.s_lo, space.s_hi, space.s_star, space.target)
    };
    if lo > l_max || interp(l_max) > rho_l {
        return Err(Error::InfeasibleBudget(format!(
            "no l <= {l_max} reaches rho_l = {rho_l:e}; best M_interp = {:e} at l = {l_max}",
            interp(l_max.max(lo))
        )));
    }
    let (mut lo, mut hi) = (lo, l_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if interp(mid) <= rho_l {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Smallest `m` with `M_Taylor <= rho_m`, plus the unrounded closed form when
/// `d = 0`.
pub(crate) fn choose_m(rho_m: f64, r: f64, space: &DesignSpace) -> Result<(usize, Option<f64>)> {
    let m_max = JET_ORDER_CAP + 1 - space.d;
    let (m, m_explicit) = if space.d == 0 {
        let raw = explicit_m_d0(rho_m, r, space.s_star, space.target, space.a, space.b);
        let mt = |m: usize| m_taylor(r, 0, m, space.s_star, space.target, space.a, space.b);
        let mut m = if raw.is_finite() { raw.ceil().max(1.0) as usize } else { 1 };
        // guard the rounded value against last-bit disagreement with the forward bound
        while m > 1 && mt(m - 1) <= rho_m {
            m -= 1;
        }
        while mt(m) > rho_m && m <= m_max {
            m += 1;
        }
        (m, Some(raw))
    } else {
        (search_m(rho_m, r, space, m_max).unwrap_or(m_max + 1), None)
    };
    if m > m_max {
        return Err(Error::InfeasibleBudget(format!("rho_m = {rho_m} needs more than {m_max} Taylor terms")));
    }
    Ok((m, m_explicit))
}

pub fn solve_budget(budget: &ErrorBudget, space: &DesignSpace, noise: &NoiseModel) -> Result<BudgetSolution> {
    solve_budget_with(budget, space, noise, SolveOptions::default())
}

/// Inverts the bound: `m` from the truncation allowance, then `l` from the
/// interpolation allowance, then `n` from the Hoeffding budget on the
/// Chebyshev knots of degree `l`.
pub fn solve_budget_with(
    budget: &ErrorBudget,
    space: &DesignSpace,
    noise: &NoiseModel,
    options: SolveOptions,
) -> Result<BudgetSolution> {
    budget.validate()?;
    space.validate()?;
    let r = noise.sup_bound()?;
    let (tau_lo, tau_hi) = noise.tau.expect("sup_bound succeeded");
    if space.reach() >= space.domain_width() {
        return Err(Error::InfeasibleGeometry(format!(
            "|s* - u| = {} is not below b - a = {}",
            space.reach(),
            space.domain_width()
        )));
    }

    let (m, m_explicit) = choose_m(budget.rho_m, r, space)?;

    let l_lo = (2 * budget.alpha).saturating_sub(3).max(1);
    let l = search_l(budget.rho_l, r, space, m, budget.alpha, l_lo, options.l_max)?;

    let knots = chebyshev_knots(l, space.s_lo, space.s_hi)?;
    let basis = LagrangeBasis::new(&knots)?;
    let lambda = lambda_from_basis(&basis, m, space.d, space.s_star, space.target)?;
    let sizes = hoeffding_sample_size(l, lambda, tau_lo, tau_hi, budget.rho_n, budget.eta).map_err(|e| match e {
        Error::Numerical(msg) => Error::InfeasibleBudget(format!("rho_n = {} with Lambda = {lambda:e}: {msg}", budget.rho_n)),
        other => other,
    })?;

    Ok(BudgetSolution {
        m,
        l,
        n: sizes.n_star.max(l as u64 + 1),
        n_union: sizes.n_union,
        lambda,
        m_taylor: m_taylor(r, space.d, m, space.s_star, space.target, space.a, space.b),
        m_interp: m_interp(r, space.d, m, l, budget.alpha, space.s_lo, space.s_hi, space.s_star, space.target),
        m_explicit,
    })
}

/// Variance of the polynomial estimator,
/// `sum_k (L_k^(d)(u))^2 var_z / n_k`.
pub fn polynomial_variance(d: usize, knots: &[f64], target: f64, var_z: f64, frequencies: &[usize]) -> Result<f64> {
    let basis = LagrangeBasis::new(knots)?;
    if frequencies.len() != basis.len() {
        return Err(Error::MissingData(format!(
            "{} frequencies for {} knots",
            frequencies.len(),
            basis.len()
        )));
    }
    if frequencies.contains(&0) {
        return Err(Error::InfeasibleBudget("every knot needs an observation".into()));
    }
    Ok(frequencies
        .iter()
        .enumerate()
        .map(|(k, &n)| basis.derivative(k, d, target).powi(2) * var_z / n as f64)
        .sum())
}

/// Tchebycheff budget for `P(|phi_hat^(d) - phi^(d)| >= eta) <= omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TchebycheffSize {
    /// `sum_k (L_k^(d)(u))^2 var_z / (omega eta^2)` before flooring.
    pub n_star_raw: f64,
    /// `floor(n_star_raw)`, at least 1: the common frequency at every knot.
    pub per_knot: u64,
    /// `g * per_knot`.
    pub total: u64,
}

pub fn tchebycheff_sample_size(
    d: usize,
    knots: &[f64],
    target: f64,
    var_z: f64,
    eta: f64,
    omega: f64,
) -> Result<TchebycheffSize> {
    if !(eta > 0.0) {
        return Err(Error::InvalidDomain(format!("eta must be positive, got {eta}")));
    }
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::InvalidDomain(format!("omega must lie in (0, 1), got {omega}")));
    }
    let basis = LagrangeBasis::new(knots)?;
    let spread: f64 = (0..basis.len())
        .map(|k| basis.derivative(k, d, target).powi(2))
        .sum();
    let raw = spread * var_z / (omega * eta * eta);
    let per_knot = to_count(raw.floor())?.max(1);
    Ok(TchebycheffSize { n_star_raw: raw, per_knot, total: per_knot * basis.len() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn taylor_term_examples() {
        assert!(close(m_taylor(1.0, 0, 2, 0.0, 1.0, -1.0, 1.0), 0.25, 1e-15));
        assert!(close(m_taylor(1.0, 1, 1, 0.0, 1.0, -1.0, 1.0), 0.5, 1e-15));
        let a = m_taylor(1.0, 0, 3, 0.0, 1.0, -1.0, 1.0);
        let b = m_taylor(1.0, 0, 4, 0.0, 1.0, -1.0, 1.0);
        assert!(b < a);
    }

    #[test]
    fn k_factor_examples() {
        assert!(close(k_factor(0, 1), 9.0 * PI / 2.0, 1e-15));
        let expected = (9.0 + 4.0 / PI * 10f64.ln()) * (PI / 20.0).powi(2);
        assert!(close(k_factor(9, 2), expected, 1e-15));
        assert!((k_factor(9, 2) - 0.2944).abs() < 1e-3);
        assert!(k_factor(10_000, 2) < 1e-6);
    }

    #[test]
    fn interp_term_examples() {
        for l in [0, 3, 12] {
            let single = m_interp(1.0, 0, 1, l, 1, -1.0, 1.0, 0.3, 1.7);
            assert!(close(single, k_factor(l, 1) / 2.0, 1e-15));
            let two = m_interp(1.0, 0, 2, l, 1, -1.0, 1.0, -1.0, 1.0);
            assert!(close(two, 1.5 * k_factor(l, 1), 1e-15));
        }
        assert!(m_interp(1.0, 0, 3, 1_000_000, 2, -1.0, 1.0, 1.0, 1.5) < 1e-9);
    }

    #[test]
    fn lambda_examples() {
        assert!(close(lambda_factor(&[0.2], 1, 0, 0.5, 3.0).unwrap(), 1.0, 1e-15));
        assert!(close(lambda_factor(&[0.0, 1.0], 1, 0, 0.0, 2.0).unwrap(), 1.0, 1e-15));
        assert!(close(lambda_factor(&[0.0, 1.0], 2, 0, 0.0, 2.0).unwrap(), 5.0, 1e-15));
    }

    #[test]
    fn hoeffding_fixture() {
        let s = hoeffding_sample_size(1, 2.0, 0.0, 1.0, 0.5, 0.05).unwrap();
        assert_eq!(s.n_star, 35);
        // 2 * ceil(16 ln(80) / 2) = 2 * 36
        assert_eq!(s.n_union, 72);
    }

    #[test]
    fn hoeffding_monotone() {
        let base = hoeffding_sample_size(3, 4.0, -1.0, 1.0, 0.5, 0.05).unwrap().n_star;
        let looser = hoeffding_sample_size(3, 4.0, -1.0, 1.0, 0.5, 0.5).unwrap().n_star;
        let wider = hoeffding_sample_size(3, 4.0, -1.0, 1.0, 1.0, 0.05).unwrap().n_star;
        assert!(looser < base);
        assert!((base as f64 / 4.0 - wider as f64).abs() <= 1.0);
        assert!(hoeffding_sample_size(3, 4.0, 1.0, -1.0, 0.5, 0.05).is_err());
        assert!(hoeffding_sample_size(3, 4.0, -1.0, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn variance_examples() {
        assert!(close(polynomial_variance(0, &[0.3], 5.0, 1.0, &[4]).unwrap(), 0.25, 1e-15));
        assert!(close(polynomial_variance(0, &[0.0, 1.0], 2.0, 1.0, &[1, 1]).unwrap(), 5.0, 1e-14));
        let v1 = polynomial_variance(1, &[0.0, 0.5, 1.0], 2.0, 1.0, &[3, 5, 7]).unwrap();
        let v2 = polynomial_variance(1, &[0.0, 0.5, 1.0], 2.0, 1.0, &[6, 10, 14]).unwrap();
        assert!(close(v2, v1 / 2.0, 1e-14));
    }

    #[test]
    fn tchebycheff_examples() {
        let s = tchebycheff_sample_size(0, &[0.1], 3.0, 1.0, 1.0, 0.25).unwrap();
        assert_eq!(s.per_knot, 4);
        let s = tchebycheff_sample_size(0, &[0.0, 1.0], 2.0, 1.0, 0.5, 0.1).unwrap();
        assert_eq!(s.per_knot, 200);
        assert_eq!(s.total, 400);
        let weaker = tchebycheff_sample_size(0, &[0.0, 1.0], 2.0, 1.0, 0.5, 0.5).unwrap();
        assert!(weaker.per_knot < s.per_knot);
    }

    struct ExpSups;
    impl SupBounds for ExpSups {
        fn sup_on_window(&self, _j: usize) -> Option<f64> {
            Some(1f64.exp())
        }
        fn sup_left_of_window_end(&self, _j: usize) -> Option<f64> {
            Some(1f64.exp())
        }
    }

    struct ZeroSups;
    impl SupBounds for ZeroSups {
        fn sup_on_window(&self, _j: usize) -> Option<f64> {
            Some(0.0)
        }
        fn sup_left_of_window_end(&self, _j: usize) -> Option<f64> {
            Some(0.0)
        }
    }

    struct NoSups;
    impl SupBounds for NoSups {
        fn sup_on_window(&self, _j: usize) -> Option<f64> {
            None
        }
        fn sup_left_of_window_end(&self, _j: usize) -> Option<f64> {
            None
        }
    }

    #[test]
    fn approximation_bound_cases() {
        let space = DesignSpace::new(-2.0, 2.0, -1.0, 1.0, 1.0, 1.5, 0).unwrap();
        assert_eq!(approximation_bound(2, 8, 4, 0, &space, &ZeroSups).unwrap().total, 0.0);
        assert!(matches!(approximation_bound(2, 8, 4, 0, &space, &NoSups), Err(Error::Config(_))));

        // exp on [-1, 1] with all sups = e; sup_U |v - s*| = 3
        let b = approximation_bound(2, 8, 3, 0, &space, &ExpSups).unwrap();
        let e = 1f64.exp();
        let k = (PI / 18.0 * 2.0).powi(2) * (9.0 + 4.0 / PI * 9f64.ln());
        let a = k * e * (1.0 + 3.0 + 9.0 / 2.0);
        let bb = 0.5f64.powi(3) * e / 6.0;
        assert!(close(b.interpolation_part, a, 1e-14));
        assert!(close(b.truncation_part, bb, 1e-14));

        let tails: Vec<f64> = (1..30)
            .map(|m| approximation_bound(2, 8, m, 0, &space, &ExpSups).unwrap().truncation_part)
            .collect();
        assert!(tails.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn total_bound_decomposes() {
        let space = DesignSpace::new(-2.0, 2.0, -1.0, 1.0, 1.0, 1.5, 0).unwrap();
        let design = crate::designs::build_design(&space, 12, 8, 500).unwrap();
        let noise = NoiseModel::bounded(0.1, ZLaw::standard_uniform(), -0.2, 3.0).unwrap();
        let rep = total_bound(&space, &design, &noise, 8, 3, 0.05).unwrap();
        assert_eq!(rep.total, rep.m_taylor + rep.m_interp + rep.m_est);
        assert_eq!(rep.m_est, 0.05);
        assert!(rep.smoothness_hypothesis);
        let post = total_bound_with_residuals(&space, &design, &noise, 8, 3, &[0.0; 13]).unwrap();
        assert_eq!(post.m_est, 0.0);
        assert_eq!(post.m_taylor, rep.m_taylor);
        let unbounded = NoiseModel::unbounded(1.0, ZLaw::standard_gaussian()).unwrap();
        assert!(matches!(
            total_bound(&space, &design, &unbounded, 8, 3, 0.05),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn solve_round_trip_and_geometry() {
        let space = DesignSpace::new(-2.0, 2.0, -1.0, 1.0, 1.0, 1.5, 0).unwrap();
        let noise = NoiseModel::bounded(0.1, ZLaw::standard_uniform(), -0.2, 3.0).unwrap();
        let budget = ErrorBudget { rho_m: 1e-2, rho_l: 1e-2, rho_n: 1e-2, eta: 0.05, omega: None, alpha: 3 };
        let sol = solve_budget(&budget, &space, &noise).unwrap();
        assert!(sol.m_taylor <= budget.rho_m && sol.m_interp <= budget.rho_l);
        assert!(sol.l >= 3);

        // exact boundary: rho_m equal to a realized M_Taylor returns that m
        let r = 3.0;
        for m0 in 1..12 {
            let rho_m = m_taylor(r, 0, m0, 1.0, 1.5, -2.0, 2.0);
            assert_eq!(choose_m(rho_m, r, &space).unwrap().0, m0);
        }

        let far = DesignSpace::new(-2.0, 20.0, -1.0, 1.0, -1.0, 19.0, 0).unwrap();
        assert!(matches!(solve_budget(&budget, &far, &noise), Err(Error::InfeasibleBudget(_)) | Err(Error::InfeasibleGeometry(_))));
    }

    #[test]
    fn radius_inverts_sample_size() {
        let r = hoeffding_radius(1, 2.0, 0.0, 1.0, 35, 0.05).unwrap();
        let size = hoeffding_sample_size(1, 2.0, 0.0, 1.0, r, 0.05).unwrap();
        assert!((34..=35).contains(&size.n_star));
        assert!(hoeffding_radius(1, 2.0, 0.0, 1.0, 0, 0.05).is_err());
    }

    #[test]
    fn solve_infeasible_l() {
        let space = DesignSpace::new(-2.0, 2.0, -1.0, 1.0, 1.0, 1.5, 0).unwrap();
        let noise = NoiseModel::bounded(0.1, ZLaw::standard_uniform(), -0.2, 3.0).unwrap();
        let budget = ErrorBudget { rho_m: 1e-2, rho_l: 1e-30, rho_n: 1e-2, eta: 0.05, omega: None, alpha: 1 };
        let err = solve_budget_with(&budget, &space, &noise, SolveOptions { l_max: 50 }).unwrap_err();
        assert!(matches!(err, Error::InfeasibleBudget(ref msg) if msg.contains("best")));
    }
}
