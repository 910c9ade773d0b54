use super::state::LearnerState;
use super::steps::{
    check_composite, check_dual_averaging, check_entropic, check_proximal, check_strongly_convex,
    dual_averaging_step, entropic_ftrl_step, ftrl_composite_l1_step, ftrl_proximal_step,
    strongly_convex_ogd_step,
};
use crate::bounds::{Geometry, PenaltyTrace, RoundTrace};
use crate::error::Result;
use crate::primitives::{
    Centering, CompositePenalty, FeasibleSet, LearningRateSchedule, Point,
};
use crate::OnlineLearner;

/// Which step function drives a [`Learner`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    DualAveraging,
    FtrlProximal,
    CompositeL1,
    Entropic,
    StronglyConvexOgd,
}

/// A [`LearnerState`] bound to one step function.
#[derive(Debug, Clone)]
pub struct Learner {
    algorithm: Algorithm,
    state: LearnerState,
}

impl Learner {
    /// Validates that the state's set, schedule, centering and penalty suit
    /// the algorithm before any round is played.
    pub fn new(algorithm: Algorithm, state: LearnerState) -> Result<Self> {
        match algorithm {
            Algorithm::DualAveraging => check_dual_averaging(&state)?,
            Algorithm::FtrlProximal => check_proximal(&state)?,
            Algorithm::CompositeL1 => check_composite(&state)?,
            Algorithm::Entropic => check_entropic(&state)?,
            Algorithm::StronglyConvexOgd => check_strongly_convex(&state)?,
        }
        Ok(Learner { algorithm, state })
    }

    pub fn dual_averaging(n: usize, set: FeasibleSet, sched: LearningRateSchedule) -> Result<Self> {
        let s = LearnerState::new(n, set, sched, CompositePenalty::none(), Centering::Centered)?;
        Learner::new(Algorithm::DualAveraging, s)
    }

    pub fn ftrl_proximal(n: usize, set: FeasibleSet, sched: LearningRateSchedule) -> Result<Self> {
        let s = LearnerState::new(n, set, sched, CompositePenalty::none(), Centering::Proximal)?;
        Learner::new(Algorithm::FtrlProximal, s)
    }

    pub fn composite_l1(
        n: usize,
        set: FeasibleSet,
        sched: LearningRateSchedule,
        centering: Centering,
        penalty: CompositePenalty,
    ) -> Result<Self> {
        let s = LearnerState::new(n, set, sched, penalty, centering)?;
        Learner::new(Algorithm::CompositeL1, s)
    }

    pub fn entropic(n: usize, g_inf: f64) -> Result<Self> {
        let sched = LearningRateSchedule::EntropicWeight { g_inf, n };
        let s = LearnerState::new(n, FeasibleSet::Simplex, sched, CompositePenalty::none(), Centering::Centered)?;
        Learner::new(Algorithm::Entropic, s)
    }

    pub fn strongly_convex_ogd(n: usize) -> Result<Self> {
        let s = LearnerState::new(
            n,
            FeasibleSet::Unconstrained,
            LearningRateSchedule::InverseT,
            CompositePenalty::none(),
            Centering::Centered,
        )?;
        Learner::new(Algorithm::StronglyConvexOgd, s)
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn state(&self) -> &LearnerState {
        &self.state
    }
}

impl OnlineLearner for Learner {
    fn dim(&self) -> usize {
        self.state.dim()
    }

    fn round(&self) -> usize {
        self.state.round()
    }

    fn current(&self) -> &Point {
        self.state.current()
    }

    fn observe(&mut self, g: &Point) -> Result<Point> {
        match self.algorithm {
            Algorithm::DualAveraging => dual_averaging_step(&mut self.state, g),
            Algorithm::FtrlProximal => ftrl_proximal_step(&mut self.state, g),
            Algorithm::CompositeL1 => ftrl_composite_l1_step(&mut self.state, g),
            Algorithm::Entropic => entropic_ftrl_step(&mut self.state, g),
            Algorithm::StronglyConvexOgd => strongly_convex_ogd_step(&mut self.state, g),
        }
    }

    fn trace(&self) -> RoundTrace {
        let inverse_rates = match self.algorithm {
            Algorithm::Entropic => vec![self.state.inverse_rates()[0]],
            Algorithm::StronglyConvexOgd => Vec::new(),
            _ => self.state.inverse_rates().to_vec(),
        };
        let penalty = match self.algorithm {
            Algorithm::CompositeL1 => PenaltyTrace::Native {
                weight: self.state.penalty().weight(self.state.round()),
            },
            _ => PenaltyTrace::None,
        };
        RoundTrace {
            inverse_rates,
            penalty,
        }
    }

    fn geometry(&self) -> Geometry {
        match (self.algorithm, self.state.centering()) {
            (Algorithm::Entropic, _) => Geometry::Entropic,
            (Algorithm::StronglyConvexOgd, _) => Geometry::StronglyConvex,
            (Algorithm::FtrlProximal, _) | (Algorithm::CompositeL1, Centering::Proximal) => {
                Geometry::QuadraticProximal
            }
            _ => Geometry::QuadraticCentered,
        }
    }

    fn set(&self) -> &FeasibleSet {
        self.state.set()
    }
}
