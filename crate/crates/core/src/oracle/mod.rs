//! Brute-force verifiers that share no code with the closed-form solvers:
//! numeric minimization of raw objective closures, finite differences, and
//! executable forms of the smooth-change and square-root-sum inequalities.

mod argmin;
mod inequalities;

pub use argmin::{
    default_bracket, finite_difference_subgradient, numeric_argmin_1d, numeric_argmin_constrained,
    numeric_argmin_separable, SeparableConstraint,
};
pub use inequalities::{
    check_lemma_sum, check_smoothchange, LinearL1, QuadraticObjective, SmoothChangeReport,
};
