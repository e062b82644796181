//! Chebyshev designs: knot placement, variance weights and the split of a
//! fixed observation budget across knots.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polybasis::LagrangeBasis;

/// Geometry of an interpolation or extrapolation problem.
///
/// The function lives on the open interval `(a, b)` and can only be observed
/// on the window `[s_lo, s_hi]`. The Taylor expansion is taken at `s_star`
/// and the `d`-th derivative is wanted at `target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSpace {
    pub a: f64,
    pub b: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub s_star: f64,
    pub target: f64,
    pub d: usize,
}

impl DesignSpace {
    pub fn new(a: f64, b: f64, s_lo: f64, s_hi: f64, s_star: f64, target: f64, d: usize) -> Result<Self> {
        let space = Self { a, b, s_lo, s_hi, s_star, target, d };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.s_lo, self.s_hi, self.s_star, self.target];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain("geometry contains a non-finite value".into()));
        }
        if !(self.a < self.s_lo && self.s_lo < self.s_hi && self.s_hi < self.b) {
            return Err(Error::InvalidDomain(format!(
                "need a < s_lo < s_hi < b, got a={} s_lo={} s_hi={} b={}",
                self.a, self.s_lo, self.s_hi, self.b
            )));
        }
        if !(self.s_lo <= self.s_star && self.s_star <= self.s_hi) {
            return Err(Error::InvalidDomain(format!(
                "expansion point {} lies outside the window [{}, {}]",
                self.s_star, self.s_lo, self.s_hi
            )));
        }
        if !(self.a < self.target && self.target < self.b) {
            return Err(Error::InvalidDomain(format!(
                "target {} lies outside the domain ({}, {})",
                self.target, self.a, self.b
            )));
        }
        Ok(())
    }

    /// Window length `s_hi - s_lo`.
    pub fn window_width(&self) -> f64 {
        self.s_hi - self.s_lo
    }

    /// Domain length `b - a`.
    pub fn domain_width(&self) -> f64 {
        self.b - self.a
    }

    /// `|s_star - target|`.
    pub fn reach(&self) -> f64 {
        (self.s_star - self.target).abs()
    }

    pub fn is_extrapolation(&self) -> bool {
        self.target < self.s_lo || self.target > self.s_hi
    }
}

/// Knots with their variance weights and observation frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub knots: Vec<f64>,
    pub weights: Vec<f64>,
    pub frequencies: Vec<usize>,
    pub total: usize,
}

impl Design {
    /// Assembles a design from arbitrary distinct knots and positive
    /// frequencies; weights are left at zero.
    pub fn from_parts(knots: Vec<f64>, frequencies: Vec<usize>) -> Result<Self> {
        let total = frequencies.iter().sum();
        let design = Self { weights: vec![0.0; knots.len()], knots, frequencies, total };
        design.validate()?;
        Ok(design)
    }

    pub fn validate(&self) -> Result<()> {
        let len = self.knots.len();
        if len == 0 {
            return Err(Error::InvalidKnots("design has no knots".into()));
        }
        if self.weights.len() != len || self.frequencies.len() != len {
            return Err(Error::InvalidKnots(format!(
                "length mismatch: {} knots, {} weights, {} frequencies",
                len,
                self.weights.len(),
                self.frequencies.len()
            )));
        }
        if self.knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidKnots("knots must be strictly increasing".into()));
        }
        if let Some(k) = self.frequencies.iter().position(|&n| n == 0) {
            return Err(Error::InfeasibleBudget(format!("knot {k} has no observations")));
        }
        if self.frequencies.iter().sum::<usize>() > self.total {
            return Err(Error::InfeasibleBudget("frequencies exceed the total budget".into()));
        }
        Ok(())
    }

    /// Degree `l` of the interpolation scheme.
    pub fn degree(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn basis(&self) -> Result<LagrangeBasis> {
        LagrangeBasis::new(&self.knots)
    }
}

/// `l + 1` Chebyshev knots of the first kind on `[s_lo, s_hi]`, ascending:
/// `s_k = c - h cos((2k+1) pi / (2l+2))`.
///
/// The cosine is evaluated as `sin((l - 2k) pi / (2l+2))`, which keeps the
/// midpoint exact and the set exactly symmetric.
pub fn chebyshev_knots(l: usize, s_lo: f64, s_hi: f64) -> Result<Vec<f64>> {
    if !(s_lo < s_hi) || !s_lo.is_finite() || !s_hi.is_finite() {
        return Err(Error::InvalidDomain(format!("window [{s_lo}, {s_hi}] is degenerate")));
    }
    let center = 0.5 * (s_hi + s_lo);
    let half = 0.5 * (s_hi - s_lo);
    let denom = (2 * l + 2) as f64;
    Ok((0..=l)
        .map(|k| {
            let num = l as f64 - 2.0 * k as f64;
            center - half * (num * PI / denom).sin()
        })
        .collect())
}

/// Variance weight of knot `k` for extrapolating from `s_star` to `target`:
/// `P_k = | sum_{alpha, beta <= m} (u-s)^(alpha+beta) / (alpha! beta!) L_k^(alpha)(s) L_k^(beta)(s) |`.
///
/// The double sum factors, so it is evaluated as the square of
/// `sum_{alpha <= m} (u-s)^alpha L_k^(alpha)(s) / alpha!`.
pub fn weight_pk(k: usize, knots: &[f64], s_star: f64, target: f64, m: usize) -> Result<f64> {
    let basis = LagrangeBasis::new(knots)?;
    if k >= basis.len() {
        return Err(Error::InvalidKnots(format!("knot index {k} out of range")));
    }
    Ok(weight_from_basis(&basis, k, s_star, target, m))
}

fn weight_from_basis(basis: &LagrangeBasis, k: usize, s_star: f64, target: f64, m: usize) -> f64 {
    // the jet coefficients already carry the 1/alpha! factor
    let jet = basis.jet(k, s_star, m);
    let h = target - s_star;
    let single: f64 = jet.coefficients().iter().rev().fold(0.0, |acc, c| acc * h + c);
    single * single
}

/// Splits `n` observations proportionally to `sqrt(P_k)`.
///
/// Without redistribution this is the raw floor `n_k = floor(n sqrt(P_k) / sum sqrt(P_j))`,
/// which can leave budget unused and knots empty. With redistribution every
/// knot first receives at least one observation (knots whose share falls
/// below one are pinned to one and the rest re-shared), then the leftover
/// units go to the largest fractional parts, ties to the lowest index.
pub fn allocate(n: usize, weights: &[f64], redistribute: bool) -> Result<Vec<usize>> {
    let len = weights.len();
    if len == 0 {
        return Err(Error::InvalidWeights("no weights".into()));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("weights must be finite and nonnegative".into()));
    }
    if weights.iter().all(|&w| w == 0.0) {
        return Err(Error::InvalidWeights("all weights are zero".into()));
    }
    if n < len {
        return Err(Error::InfeasibleBudget(format!(
            "{n} observations cannot cover {len} knots"
        )));
    }

    // normalizing first keeps the split invariant under rescaling of the weights
    let top = weights.iter().fold(0.0f64, |a, &w| a.max(w));
    let roots: Vec<f64> = weights.iter().map(|w| (w / top).sqrt()).collect();

    if !redistribute {
        let sum: f64 = roots.iter().sum();
        return Ok(roots
            .iter()
            .map(|r| snap(n as f64 * (r / sum)).floor() as usize)
            .collect());
    }

    let mut pinned = vec![false; len];
    let shares = loop {
        let free_budget = (n - pinned.iter().filter(|&&p| p).count()) as f64;
        let free_sum: f64 = roots.iter().zip(&pinned).filter(|(_, &p)| !p).map(|(r, _)| r).sum();
        let shares: Vec<f64> = roots
            .iter()
            .zip(&pinned)
            .map(|(r, &p)| if p { 0.0 } else { snap(free_budget * (r / free_sum)) })
            .collect();
        let mut changed = false;
        for k in 0..len {
            if !pinned[k] && shares[k] < 1.0 {
                pinned[k] = true;
                changed = true;
            }
        }
        if !changed {
            break shares;
        }
    };

    let mut alloc: Vec<usize> = shares
        .iter()
        .zip(&pinned)
        .map(|(s, &p)| if p { 1 } else { s.floor() as usize })
        .collect();
    let leftover = n - alloc.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..len).filter(|&k| !pinned[k]).collect();
    order.sort_by(|&i, &j| {
        let fi = shares[i] - shares[i].floor();
        let fj = shares[j] - shares[j].floor();
        fj.total_cmp(&fi).then(i.cmp(&j))
    });
    for &k in order.iter().take(leftover) {
        alloc[k] += 1;
    }
    Ok(alloc)
}

/// Rounds shares that sit within representation error of an integer, so
/// exact proportions are not floored one unit short.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Chebyshev knots on the window, their variance weights for the
/// extrapolation `s_star -> target`, and the redistributed allocation of `n`.
pub fn build_design(space: &DesignSpace, l: usize, m: usize, n: usize) -> Result<Design> {
    space.validate()?;
    if m == 0 {
        return Err(Error::Config("Taylor order m must be at least 1".into()));
    }
    if n < l + 1 {
        return Err(Error::InfeasibleBudget(format!(
            "{n} observations cannot cover {} knots",
            l + 1
        )));
    }
    let knots = chebyshev_knots(l, space.s_lo, space.s_hi)?;
    let basis = LagrangeBasis::new(&knots)?;
    let weights: Vec<f64> = (0..=l)
        .map(|k| weight_from_basis(&basis, k, space.s_star, space.target, m))
        .collect();
    let frequencies = allocate(n, &weights, true)?;
    let design = Design { knots, weights, frequencies, total: n };
    design.validate()?;
    Ok(design)
}
