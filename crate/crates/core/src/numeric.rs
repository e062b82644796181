//! Small factorial-type products, always accumulated iteratively in `f64`.

/// `n!` as a float. Overflows to infinity past 170.
pub fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `hi! / lo!` computed as `(lo+1)(lo+2)...(hi)`; equals 1 when `hi <= lo`.
pub fn falling_ratio(hi: usize, lo: usize) -> f64 {
    ((lo + 1)..=hi).fold(1.0, |acc, i| acc * i as f64)
}

/// `(2j-1)!! = 1·3·5···(2j-1)`, with the empty product for `j = 0`.
pub fn odd_double_factorial(j: usize) -> f64 {
    (1..=j).fold(1.0, |acc, i| acc * (2 * i - 1) as f64)
}

/// Euler-Mascheroni constant, truncated the way the equidistant Lebesgue
/// asymptote is usually quoted.
pub const EULER_GAMMA_SHORT: f64 = 0.577;

/// `n` evenly spaced points on `[lo, hi]`, both ends included exactly.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { hi } else { lo + step * i as f64 })
}
