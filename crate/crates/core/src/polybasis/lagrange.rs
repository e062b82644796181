use super::jet::Jet;
use crate::error::{Error, Result};

/// Elementary Lagrange polynomials `L_k(v) = prod_{j != k} (v - s_j) / (s_k - s_j)`
/// on a validated set of distinct knots.
///
/// Derivatives come from [`LagrangeBasis::jet`], which multiplies the `l`
/// linear factor jets in truncated Taylor arithmetic. Plain values over many
/// points use scaled barycentric weights instead, see [`LagrangeBasis::values_at`].
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    knots: Vec<f64>,
    // 4 / (hull width); keeps the barycentric products near unit size
    scale: f64,
    bary: Vec<f64>,
}

impl LagrangeBasis {
    pub fn new(knots: &[f64]) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidKnots("empty knot set".into()));
        }
        if let Some(bad) = knots.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidKnots(format!("non-finite knot {bad}")));
        }
        let mut sorted = knots.to_vec();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidKnots(format!("coincident knots at {}", w[0])));
        }

        let width = sorted[sorted.len() - 1] - sorted[0];
        let scale = if width > 0.0 { 4.0 / width } else { 1.0 };
        let bary = knots
            .iter()
            .enumerate()
            .map(|(k, &sk)| {
                let prod: f64 = knots
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &sj)| scale * (sk - sj))
                    .product();
                1.0 / prod
            })
            .collect();

        Ok(Self { knots: knots.to_vec(), scale, bary })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of knots, `l + 1`.
    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Polynomial degree `l`.
    pub fn degree(&self) -> usize {
        self.knots.len() - 1
    }

    /// Jet of `L_k` at `point`, truncated at `order`.
    ///
    /// Factors are multiplied in order of increasing `|point - s_j|`.
    pub fn jet(&self, k: usize, point: f64, order: usize) -> Jet {
        let sk = self.knots[k];
        let mut others: Vec<f64> = self
            .knots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &s)| s)
            .collect();
        others.sort_by(|x, y| (point - x).abs().total_cmp(&(point - y).abs()));

        let mut jet = Jet::constant(point, 1.0, order);
        for sj in others {
            let denom = sk - sj;
            jet.mul_linear((point - sj) / denom, 1.0 / denom);
        }
        jet
    }

    /// `L_k^(j)(point)`.
    pub fn derivative(&self, k: usize, j: usize, point: f64) -> f64 {
        self.jet(k, point, j).derivative(j)
    }

    /// Writes `L_k(x)` for every `k` into `out`.
    pub fn values_at(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.knots.len());
        if let Some(hit) = self.knots.iter().position(|&s| s == x) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[hit] = 1.0;
            return;
        }
        let node: f64 = self.knots.iter().map(|&s| self.scale * (x - s)).product();
        for ((v, &s), &w) in out.iter_mut().zip(&self.knots).zip(&self.bary) {
            *v = node * w / (self.scale * (x - s));
        }
    }

    pub fn values(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.knots.len()];
        self.values_at(x, &mut out);
        out
    }
}

/// Jet of the elementary Lagrange polynomial `L_{s_k}` at `point`.
pub fn lagrange_jet(knots: &[f64], k: usize, point: f64, order: usize) -> Result<Jet> {
    let basis = LagrangeBasis::new(knots)?;
    if k >= basis.len() {
        return Err(Error::InvalidKnots(format!(
            "basis index {k} out of range for {} knots",
            basis.len()
        )));
    }
    Ok(basis.jet(k, point, order))
}
