//! Double-double arithmetic (about 32 significant digits).
//!
//! Interpolation errors of analytic functions fall below `f64` resolution
//! after a dozen Chebyshev knots; resolving their decay needs a wider
//! accumulator for both the function values and the basis evaluation.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::numeric::factorial;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

const LN2: DoubleDouble = DoubleDouble { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
const PI: DoubleDouble = DoubleDouble { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };
const EPS: f64 = 1e-34;

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Exact multiplication by `2^k`.
    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Self { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn powi(self, n: u32) -> Self {
        (0..n).fold(Self::ONE, |acc, _| acc * self)
    }

    pub fn exp(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::ONE;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2 * Self::from(k)).ldexp(-10);
        // Taylor series of exp(r) - 1 for |r| < 2^-10
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        while term.hi.abs() > EPS {
            n += 1.0;
            term = term * r / Self::from(n);
            sum = sum + term;
        }
        // (1 + s)^2 - 1 = s (2 + s), applied ten times
        for _ in 0..10 {
            sum = sum * (sum + Self::from(2.0));
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    fn reduce_angle(self) -> Self {
        let two_pi = PI.ldexp(1);
        let k = (self.hi / two_pi.hi).round();
        self - two_pi * Self::from(k)
    }

    pub fn sin(self) -> Self {
        let x = self.reduce_angle();
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 1.0;
        while term.hi.abs() > EPS {
            term = -(term * x2) / Self::from((n + 1.0) * (n + 2.0));
            sum = sum + term;
            n += 2.0;
        }
        sum
    }

    pub fn cos(self) -> Self {
        let x = self.reduce_angle();
        let x2 = x * x;
        let mut term = Self::ONE;
        let mut sum = Self::ONE;
        let mut n = 0.0;
        while term.hi.abs() > EPS {
            term = -(term * x2) / Self::from((n + 1.0) * (n + 2.0));
            sum = sum + term;
            n += 2.0;
        }
        sum
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = self.hi * rhs.hi;
        let e = self.hi.mul_add(rhs.hi, -p);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Self::from(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from(q3)
    }
}

/// `L_k^(j)(x)` evaluated in double-double, knots taken as exact `f64` values.
pub fn lagrange_derivative_dd(knots: &[f64], k: usize, x: f64, j: usize) -> DoubleDouble {
    let sk = knots[k];
    let xd = DoubleDouble::from(x);
    let mut coeffs = vec![DoubleDouble::ZERO; j + 1];
    coeffs[0] = DoubleDouble::ONE;
    for (i, &si) in knots.iter().enumerate() {
        if i == k {
            continue;
        }
        let denom = DoubleDouble::from(sk) - DoubleDouble::from(si);
        let value = (xd - DoubleDouble::from(si)) / denom;
        let slope = DoubleDouble::ONE / denom;
        for c in (1..=j).rev() {
            coeffs[c] = value * coeffs[c] + slope * coeffs[c - 1];
        }
        coeffs[0] = value * coeffs[0];
    }
    coeffs[j] * DoubleDouble::from(factorial(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: DoubleDouble, hi: f64, lo: f64, tol: f64) -> bool {
        let diff = a - DoubleDouble::new(hi, lo);
        diff.to_f64().abs() < tol
    }

    #[test]
    fn exp_one() {
        let e = DoubleDouble::from(1.0).exp();
        assert!(close(e, std::f64::consts::E, 1.445_646_891_729_250_2e-16, 1e-30));
        let inv = DoubleDouble::from(-1.0).exp();
        assert!(((e * inv) - DoubleDouble::ONE).to_f64().abs() < 1e-30);
    }

    #[test]
    fn trig_identity() {
        for &x in &[-2.5, -0.3, 0.0, 0.7, 1.9, 5.0] {
            let v = DoubleDouble::from(x);
            let one = v.sin() * v.sin() + v.cos() * v.cos();
            assert!((one - DoubleDouble::ONE).to_f64().abs() < 1e-30, "x = {x}");
            assert!((v.sin().to_f64() - x.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn division_round_trip() {
        let a = DoubleDouble::from(1.0) / DoubleDouble::from(3.0);
        let back = a * DoubleDouble::from(3.0);
        assert!((back - DoubleDouble::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn lagrange_dd_matches_f64() {
        let knots = [-1.0, -0.3, 0.4, 0.9];
        let basis = super::super::LagrangeBasis::new(&knots).unwrap();
        for k in 0..knots.len() {
            for j in 0..3 {
                let a = lagrange_derivative_dd(&knots, k, 0.17, j).to_f64();
                let b = basis.derivative(k, j, 0.17);
                assert!((a - b).abs() < 1e-12 * b.abs().max(1.0));
            }
        }
    }
}
