//! The FTRL family as incremental step machines: dual averaging,
//! FTRL-Proximal (optionally with diagonal AdaGrad rates), composite L1
//! FTRL, entropic FTRL over the simplex, and strongly convex OGD.

mod config;
mod learner;
mod state;
mod steps;

pub use config::BoundConfig;
pub use learner::{Algorithm, Learner};
pub use state::LearnerState;
pub use steps::{
    dual_averaging_step, entropic_ftrl_step, ftrl_composite_l1_step, ftrl_proximal_step,
    strongly_convex_ogd_step, strongly_convex_ogd_update,
};
