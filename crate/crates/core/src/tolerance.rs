//! Numeric tolerances used by the solvers, checks and property suites.

/// Closed-form solver against brute-force numeric argmin.
pub const CLOSED_FORM_VS_ORACLE: f64 = 1e-6;
/// Two independent implementations of the same iterate sequence.
pub const STATE_EQUIVALENCE: f64 = 1e-8;
/// Exact algebraic identities evaluated in floating point.
pub const ALGEBRAIC_IDENTITY: f64 = 1e-12;
/// Residual of first-order optimality conditions.
pub const SUBGRADIENT_RESIDUAL: f64 = 1e-9;
/// Agreement between the lazy/greedy projection formulations.
pub const PROJECTION_FORMS: f64 = 1e-9;
/// Equality case of the smooth-change inequalities.
pub const SMOOTH_CHANGE_EQUALITY: f64 = 1e-9;
/// Relative slack granted to `lhs <= rhs` checks of inequalities that hold
/// in exact arithmetic.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// `lhs <= rhs` up to floating-point slack proportional to the magnitudes.
pub fn leq(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + INEQUALITY_SLACK * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Largest absolute coordinate difference.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
