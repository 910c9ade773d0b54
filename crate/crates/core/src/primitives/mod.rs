//! Domain types, learning-rate schedules, projections and closed-form
//! single-step argmin solvers shared by all learners.

mod point;
mod prox;
mod regularizer;
mod schedule;
mod sets;

pub use point::Point;
pub use prox::{
    ball_conjugate_gradient, composite_l1_argmin, diagonal_quadratic_argmin, soft_threshold_argmin,
    softmax_simplex,
};
pub use regularizer::{
    bregman_divergence, entropy, AlphaSchedule, Centering, CompositePenalty, RegularizerBase,
    RegularizerSpec,
};
pub use schedule::{schedule_sigma, LearningRateSchedule};
pub use sets::{clamp_box, project_l2_ball, project_simplex, FeasibleSet};
