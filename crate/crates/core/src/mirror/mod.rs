//! Adaptive mirror descent with an optional L1 or indicator penalty, its
//! FTRL-Proximal reformulation, and the lazy/greedy projection families.
//!
//! [`MirrorState`] keeps only the current point plus schedule scalars;
//! [`MdFtrlState`] keeps FTRL accumulators and extracts its own penalty
//! subgradients. The two are separate implementations on purpose, so that
//! their agreement is a meaningful check.

mod descent;
mod ftrl_form;
mod projection;
mod psi;

pub use descent::{mirror_descent_step, MirrorLearner, MirrorState};
pub use ftrl_form::{md_as_ftrl_step, MdFtrlState};
pub use projection::{
    greedy_projection_step, greedy_trajectory, lazy_projection_step, lazy_trajectory,
    ProjectionFamily, ProjectionForm, ProjectionLearner, ProjectionState,
};
pub use psi::{extract_psi_subgradient, PsiSubgradient};
