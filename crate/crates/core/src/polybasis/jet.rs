use crate::numeric::factorial;

/// Truncated Taylor expansion of a function at a point.
///
/// `coefficients[j]` holds `f^(j)(center) / j!` for `j = 0..=order`. Products
/// are truncated at `order`, which is exact for everything we need here since
/// only the low-order coefficients of polynomial products are read back.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    center: f64,
    coefficients: Vec<f64>,
}

impl Jet {
    pub fn constant(center: f64, value: f64, order: usize) -> Self {
        let mut coefficients = vec![0.0; order + 1];
        coefficients[0] = value;
        Self { center, coefficients }
    }

    /// Jet of `value + slope * (v - center)`.
    pub fn linear(center: f64, value: f64, slope: f64, order: usize) -> Self {
        let mut jet = Self::constant(center, value, order);
        if order >= 1 {
            jet.coefficients[1] = slope;
        }
        jet
    }

    pub fn from_coefficients(center: f64, coefficients: Vec<f64>) -> Self {
        assert!(!coefficients.is_empty(), "a jet carries at least c_0");
        Self { center, coefficients }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn value(&self) -> f64 {
        self.coefficients[0]
    }

    /// `f^(j)(center)`; zero past the truncation order.
    pub fn derivative(&self, j: usize) -> f64 {
        self.coefficients
            .get(j)
            .map_or(0.0, |c| c * factorial(j))
    }

    /// In-place product with the linear jet `value + slope * (v - center)`.
    pub fn mul_linear(&mut self, value: f64, slope: f64) {
        for j in (1..self.coefficients.len()).rev() {
            self.coefficients[j] = value * self.coefficients[j] + slope * self.coefficients[j - 1];
        }
        self.coefficients[0] *= value;
    }

    /// Truncated product. Both jets must share the center; the result keeps
    /// the smaller order.
    pub fn mul(&self, other: &Jet) -> Jet {
        debug_assert_eq!(self.center, other.center);
        let order = self.order().min(other.order());
        let coefficients = (0..=order)
            .map(|j| {
                (0..=j)
                    .map(|i| self.coefficients[i] * other.coefficients[j - i])
                    .sum()
            })
            .collect();
        Jet { center: self.center, coefficients }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        debug_assert_eq!(self.center, other.center);
        let order = self.order().min(other.order());
        let coefficients = (0..=order)
            .map(|j| self.coefficients[j] + other.coefficients[j])
            .collect();
        Jet { center: self.center, coefficients }
    }

    pub fn scale(&self, factor: f64) -> Jet {
        Jet {
            center: self.center,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Evaluates the truncated Taylor polynomial at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let h = x - self.center;
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }
}
