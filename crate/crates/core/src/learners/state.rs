use crate::error::{invalid, Result};
use crate::primitives::{
    Centering, CompositePenalty, FeasibleSet, LearningRateSchedule, Point,
};

/// Accumulator state shared by the FTRL-family step functions.
///
/// Holds `g_{1:t}`, per-coordinate squared-gradient sums, the proximal
/// adjustment `a_{1:t}` (with `a_t = sigma_t * x_t`), the cumulative
/// strong-convexity weights `sigma_{0:t}` and the current iterate. Memory is
/// O(n) regardless of the number of rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState {
    pub(crate) t: usize,
    pub(crate) g_sum: Vec<f64>,
    pub(crate) sq_sum: Vec<f64>,
    pub(crate) sup_sq_sum: f64,
    pub(crate) adj_sum: Vec<f64>,
    pub(crate) inv_rate: Vec<f64>,
    pub(crate) x_current: Point,
    pub(crate) set: FeasibleSet,
    pub(crate) sched: LearningRateSchedule,
    pub(crate) penalty: CompositePenalty,
    pub(crate) centering: Centering,
}

impl LearnerState {
    /// Fresh state at round 0; `x_1` is the minimum-norm feasible point.
    pub fn new(
        n: usize,
        set: FeasibleSet,
        sched: LearningRateSchedule,
        penalty: CompositePenalty,
        centering: Centering,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        set.validate()?;
        sched.validate()?;
        let sigma0 = sched.inverse_rate(0, 0.0);
        Ok(LearnerState {
            t: 0,
            g_sum: vec![0.0; n],
            sq_sum: vec![0.0; n],
            sup_sq_sum: 0.0,
            adj_sum: vec![0.0; n],
            inv_rate: vec![sigma0; n],
            x_current: set.min_norm_point(n),
            set,
            sched,
            penalty,
            centering,
        })
    }

    pub fn dim(&self) -> usize {
        self.g_sum.len()
    }

    /// Completed rounds t.
    pub fn round(&self) -> usize {
        self.t
    }

    /// `g_{1:t}`.
    pub fn g_sum(&self) -> &[f64] {
        &self.g_sum
    }

    /// `sum_{s<=t} g_{s,i}^2`.
    pub fn sq_sum(&self) -> &[f64] {
        &self.sq_sum
    }

    /// `sum_{s<=t} ||g_s||_inf^2`.
    pub fn sup_sq_sum(&self) -> f64 {
        self.sup_sq_sum
    }

    /// `a_{1:t}` (zero for centered learners).
    pub fn adj_sum(&self) -> &[f64] {
        &self.adj_sum
    }

    /// `sigma_{0:t} = 1/eta_t` per coordinate.
    pub fn inverse_rates(&self) -> &[f64] {
        &self.inv_rate
    }

    /// `x_{t+1}`.
    pub fn current(&self) -> &Point {
        &self.x_current
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn schedule(&self) -> &LearningRateSchedule {
        &self.sched
    }

    pub fn penalty(&self) -> &CompositePenalty {
        &self.penalty
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }
}
