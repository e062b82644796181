use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::SupBounds;
use crate::designs::DesignSpace;
use crate::error::{Error, Result};
use crate::numeric::factorial;
use crate::polybasis::extended::DoubleDouble;

/// Analytic test functions with closed-form derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Exp,
    Sin,
    /// `sum_i coefficients[i] v^i`.
    Polynomial { coefficients: Vec<f64> },
    /// `1 / (1 + (scale v)^2)`.
    Runge { scale: f64 },
}

impl TestFunction {
    pub fn runge() -> Self {
        TestFunction::Runge { scale: 5.0 }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    /// `f^(j)(x)`.
    pub fn derivative(&self, j: usize, x: f64) -> f64 {
        match self {
            TestFunction::Exp => x.exp(),
            TestFunction::Sin => (x + j as f64 * FRAC_PI_2).sin(),
            TestFunction::Polynomial { coefficients } => {
                let dc = derivative_coefficients(coefficients, j);
                dc.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            TestFunction::Runge { scale } => {
                let c2 = scale * scale;
                let g = 1.0 + c2 * x * x;
                let mut prev2 = 0.0;
                let mut prev = 1.0 / g;
                for i in 1..=j {
                    let fi = i as f64;
                    let next = -(2.0 * c2 * x * fi * prev + c2 * fi * (fi - 1.0) * prev2) / g;
                    prev2 = prev;
                    prev = next;
                }
                prev
            }
        }
    }

    /// `f^(j)(x)` in double-double arithmetic.
    pub fn derivative_dd(&self, j: usize, x: f64) -> DoubleDouble {
        let xd = DoubleDouble::from(x);
        match self {
            TestFunction::Exp => xd.exp(),
            TestFunction::Sin => match j % 4 {
                0 => xd.sin(),
                1 => xd.cos(),
                2 => -xd.sin(),
                _ => -xd.cos(),
            },
            TestFunction::Polynomial { coefficients } => {
                let dc = derivative_coefficients(coefficients, j);
                dc.iter()
                    .rev()
                    .fold(DoubleDouble::ZERO, |acc, &c| acc * xd + DoubleDouble::from(c))
            }
            TestFunction::Runge { scale } => {
                let c2 = DoubleDouble::from(*scale) * DoubleDouble::from(*scale);
                let g = DoubleDouble::ONE + c2 * xd * xd;
                let two = DoubleDouble::from(2.0);
                let mut prev2 = DoubleDouble::ZERO;
                let mut prev = DoubleDouble::ONE / g;
                for i in 1..=j {
                    let fi = DoubleDouble::from(i as f64);
                    let fim1 = DoubleDouble::from(i as f64 - 1.0);
                    let next = -(two * c2 * xd * fi * prev + c2 * fi * fim1 * prev2) / g;
                    prev2 = prev;
                    prev = next;
                }
                prev
            }
        }
    }

    /// An upper bound on `sup_{[lo, hi]} |f^(j)|`; exact for `exp` and `sin`.
    pub fn sup_on(&self, j: usize, lo: f64, hi: f64) -> f64 {
        match self {
            TestFunction::Exp => hi.exp(),
            TestFunction::Sin => {
                // |sin(x + j pi/2)| reaches 1 where x + j pi/2 = pi/2 + k pi
                let shift = j as f64 * FRAC_PI_2;
                let k = ((lo + shift - FRAC_PI_2) / std::f64::consts::PI).ceil();
                let peak = FRAC_PI_2 + k * std::f64::consts::PI - shift;
                if peak <= hi {
                    1.0
                } else {
                    self.derivative(j, lo).abs().max(self.derivative(j, hi).abs())
                }
            }
            TestFunction::Polynomial { coefficients } => {
                let radius = lo.abs().max(hi.abs());
                derivative_coefficients(coefficients, j)
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.abs() * radius.powi(i as i32))
                    .sum()
            }
            TestFunction::Runge { scale } => factorial(j) * scale.abs().powi(j as i32),
        }
    }

    /// Polynomial degree, `None` for transcendental functions.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            TestFunction::Polynomial { coefficients } => {
                Some(coefficients.iter().rposition(|&c| c != 0.0).unwrap_or(0))
            }
            _ => None,
        }
    }

    /// Supplies sup bounds on the window and on `(a, s_hi)` of a design space.
    pub fn sup_bounds<'a>(&'a self, space: &'a DesignSpace) -> FunctionSups<'a> {
        FunctionSups { phi: self, space }
    }
}

fn derivative_coefficients(coefficients: &[f64], j: usize) -> Vec<f64> {
    if j >= coefficients.len() {
        return vec![0.0];
    }
    coefficients[j..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * crate::numeric::falling_ratio(i + j, i))
        .collect()
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Exp => write!(f, "exp"),
            TestFunction::Sin => write!(f, "sin"),
            TestFunction::Polynomial { coefficients } => {
                let parts: Vec<String> = coefficients.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            TestFunction::Runge { scale } => write!(f, "runge:{scale}"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Accepts `exp`, `sin`, `runge`, `runge:<scale>` and `poly:<c0>,<c1>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown test function '{s}'"));
        match s.split_once(':') {
            None => match s {
                "exp" => Ok(TestFunction::Exp),
                "sin" => Ok(TestFunction::Sin),
                "runge" => Ok(TestFunction::runge()),
                _ => Err(bad()),
            },
            Some(("runge", scale)) => {
                let scale: f64 = scale.trim().parse().map_err(|_| bad())?;
                Ok(TestFunction::Runge { scale })
            }
            Some(("poly", list)) => {
                let coefficients = list
                    .split(',')
                    .map(|c| c.trim().parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if coefficients.is_empty() {
                    return Err(bad());
                }
                Ok(TestFunction::Polynomial { coefficients })
            }
            _ => Err(bad()),
        }
    }
}

/// [`SupBounds`] view of a test function over a design space.
pub struct FunctionSups<'a> {
    phi: &'a TestFunction,
    space: &'a DesignSpace,
}

impl SupBounds for FunctionSups<'_> {
    fn sup_on_window(&self, j: usize) -> Option<f64> {
        Some(self.phi.sup_on(j, self.space.s_lo, self.space.s_hi))
    }

    fn sup_left_of_window_end(&self, j: usize) -> Option<f64> {
        Some(self.phi.sup_on(j, self.space.a, self.space.s_hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_difference(f: &TestFunction, j: usize, x: f64) -> f64 {
        let h = 1e-5;
        (f.derivative(j, x + h) - f.derivative(j, x - h)) / (2.0 * h)
    }

    #[test]
    fn derivative_oracles_match_differences() {
        let fs = [
            TestFunction::Exp,
            TestFunction::Sin,
            TestFunction::runge(),
            TestFunction::Polynomial { coefficients: vec![1.0, -2.0, 0.5, 3.0] },
        ];
        for f in &fs {
            assert_eq!(f.derivative(0, 0.3), f.value(0.3));
            for j in 0..4 {
                for &x in &[-0.7, 0.1, 0.45] {
                    let fd = central_difference(f, j, x);
                    let exact = f.derivative(j + 1, x);
                    assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0), "{f} j={j} x={x}");
                }
            }
        }
    }

    #[test]
    fn dd_agrees_with_f64() {
        let fs = [TestFunction::Exp, TestFunction::Sin, TestFunction::runge()];
        for f in &fs {
            for j in 0..4 {
                let a = f.derivative_dd(j, 0.37).to_f64();
                let b = f.derivative(j, 0.37);
                assert!((a - b).abs() < 1e-13 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sups_bound_the_function() {
        let fs = [
            TestFunction::Exp,
            TestFunction::Sin,
            TestFunction::runge(),
            TestFunction::Polynomial { coefficients: vec![0.2, 1.0, -1.5] },
        ];
        for f in &fs {
            for j in 0..5 {
                let sup = f.sup_on(j, -1.0, 0.6);
                let seen = crate::numeric::uniform_grid(-1.0, 0.6, 2001)
                    .map(|x| f.derivative(j, x).abs())
                    .fold(0.0, f64::max);
                assert!(seen <= sup * (1.0 + 1e-12), "{f} j={j}: {seen} > {sup}");
            }
        }
        assert_eq!(TestFunction::Sin.sup_on(0, 0.0, 0.1), 0.1f64.sin());
        assert_eq!(TestFunction::Sin.sup_on(0, 0.0, 2.0), 1.0);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["exp", "sin", "runge:5", "poly:1,0,-2.5"] {
            let f: TestFunction = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!("runge".parse::<TestFunction>().unwrap(), TestFunction::runge());
        assert!("cosh".parse::<TestFunction>().is_err());
        assert!("poly:a".parse::<TestFunction>().is_err());
        let p: TestFunction = "poly:1,2,0".parse().unwrap();
        assert_eq!(p.polynomial_degree(), Some(1));
    }
}
