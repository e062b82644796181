use crate::error::{Error, Result};
use crate::numeric::odd_double_factorial;

/// Markoff's uniform bound on `|P^(j)(s)|` for a polynomial `P` of degree `l`
/// with `sup_S |P| <= w`:
///
/// `l^2 (l^2 - 1) ... (l^2 - (j-1)^2) / (2j-1)!! * (2 / (s_hi - s_lo))^j * w`.
///
/// The product vanishes once `j > l`, matching `P^(j) = 0`.
pub fn markoff_bound(l: usize, j: usize, s_lo: f64, s_hi: f64, w: f64) -> Result<f64> {
    if !(s_lo < s_hi) {
        return Err(Error::InvalidDomain(format!("window [{s_lo}, {s_hi}] is degenerate")));
    }
    if w < 0.0 {
        return Err(Error::InvalidDomain(format!("sup bound must be nonnegative, got {w}")));
    }
    if j > l {
        return Ok(0.0);
    }
    let l2 = (l * l) as f64;
    let numerator: f64 = (0..j).map(|i| l2 - (i * i) as f64).product();
    Ok(numerator / odd_double_factorial(j) * (2.0 / (s_hi - s_lo)).powi(j as i32) * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(markoff_bound(1, 1, -1.0, 1.0, 1.0).unwrap(), 1.0);
        let v = markoff_bound(2, 1, -1.0, 1.0, std::f64::consts::PI).unwrap();
        assert!((v - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(markoff_bound(2, 3, 0.0, 5.0, 7.0).unwrap(), 0.0);
        assert!(markoff_bound(0, 2, -1.0, 1.0, 1.0).unwrap().is_sign_positive());
    }

    #[test]
    fn chebyshev_second_derivative_is_tight() {
        // T_3'' (1) = 24 = 9 * 8 / 3
        assert_eq!(markoff_bound(3, 2, -1.0, 1.0, 1.0).unwrap(), 24.0);
    }

    #[test]
    fn window_scaling() {
        let narrow = markoff_bound(4, 2, 0.0, 0.5, 1.0).unwrap();
        let wide = markoff_bound(4, 2, -1.0, 1.0, 1.0).unwrap();
        assert!((narrow / wide - 16.0).abs() < 1e-12);
        assert!(markoff_bound(4, 2, 1.0, 1.0, 1.0).is_err());
    }
}
