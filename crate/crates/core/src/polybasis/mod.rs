//! Elementary Lagrange polynomials and the diagnostics built on them.

pub mod extended;
mod jet;
mod lagrange;
mod lebesgue;
mod markoff;

pub use jet::Jet;
pub use lagrange::{lagrange_jet, LagrangeBasis};
pub use lebesgue::{
    chebyshev_lebesgue_asymptote, elementary_lagrange_sup_check, equidistant_knots,
    equidistant_lebesgue_asymptote, lebesgue_constant_chebyshev, lebesgue_function,
    lebesgue_grid_max, LebesgueDiagnostics, DEFAULT_GRID,
};
pub use markoff::markoff_bound;
