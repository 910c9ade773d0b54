//! Regret accounting, best comparators, closed-form and generic regret
//! bounds, and the strong FTRL decomposition diagnostic.

mod decomposition;
mod harness;
mod history;
mod regret;
mod theorem;

pub use decomposition::{strong_ftrl_decomposition, strong_ftrl_prefix, FtrlObjective};
pub use harness::{best_comparator, comparator_for, evaluate, run_online, RunLog};
pub use history::{Geometry, PenaltyKind, PenaltyTrace, RoundTrace, RunHistory};
pub use regret::{cumulative_regret, RegretRecord};
pub use theorem::{bound_series, bound_value, check_compatible, TheoremId};
