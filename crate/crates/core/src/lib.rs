//! Online convex optimization in the follow-the-regularized-leader family.
//!
//! The crate provides incremental step machines for dual averaging,
//! FTRL-Proximal (with diagonal AdaGrad rates), composite L1 FTRL, entropic
//! FTRL over the simplex, strongly convex online gradient descent and
//! adaptive mirror descent, plus the tooling needed to check them:
//! regret accounting, closed-form and generic regret bounds, the strong
//! FTRL decomposition, and brute-force numeric oracles.
//!
//! Every learner follows the same protocol: read the current iterate,
//! reveal a loss, feed its (sub)gradient to `observe`, repeat.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod learners;
pub mod mirror;
pub mod oracle;
pub mod primitives;
pub mod streams;
pub mod suites;
pub mod tolerance;

pub use error::{Error, Result};
pub use primitives::{
    AlphaSchedule, Centering, CompositePenalty, FeasibleSet, LearningRateSchedule, Point,
    RegularizerSpec,
};


/// Common protocol shared by every learner: play `current`, then `observe`
/// the gradient of the revealed loss at that point.
pub trait OnlineLearner: Send {
    /// Dimension of the iterates.
    fn dim(&self) -> usize;
    /// Number of completed rounds.
    fn round(&self) -> usize;
    /// The point to play next (`x_{t+1}` after `t` rounds).
    fn current(&self) -> &Point;
    /// Consumes `g_t` and returns the next iterate.
    fn observe(&mut self, g: &Point) -> Result<Point>;
    /// Regularizer information for the round just completed.
    fn trace(&self) -> bounds::RoundTrace;
    /// Regularizer family used by this learner.
    fn geometry(&self) -> bounds::Geometry;
    /// The feasible set iterates are confined to.
    fn set(&self) -> &FeasibleSet;
}
