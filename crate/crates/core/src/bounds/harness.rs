use super::decomposition::strong_ftrl_prefix;
use super::history::RunHistory;
use super::regret::{cumulative_regret, RegretRecord};
use super::theorem::{bound_series, TheoremId};
use crate::error::{unsupported, Error, Result};
use crate::learners::BoundConfig;
use crate::primitives::{FeasibleSet, Point};
use crate::streams::{Loss, LossStream};
use crate::OnlineLearner;

/// Raw outcome of driving a learner with a stream.
#[derive(Debug, Clone)]
pub struct RunLog {
    pub history: RunHistory,
    /// `f_t` for every played round.
    pub losses: Vec<Loss>,
    /// `f_t(x_t)`.
    pub incurred: Vec<f64>,
    pub set: FeasibleSet,
}

/// Plays up to `rounds` rounds in the order: read `x_t`, reveal `f_t`,
/// incur `f_t(x_t)`, update with `g_t`.
pub fn run_online(
    learner: &mut dyn OnlineLearner,
    stream: &mut dyn LossStream,
    rounds: usize,
) -> Result<RunLog> {
    if learner.dim() != stream.dim() {
        return Err(Error::DimensionMismatch {
            expected: learner.dim(),
            got: stream.dim(),
        });
    }
    let mut history = RunHistory::new(learner.geometry(), learner.current().clone(), learner.trace())?;
    let mut losses = Vec::with_capacity(rounds);
    let mut incurred = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let x = learner.current().clone();
        let Some(event) = stream.next_event(t, &x)? else {
            break;
        };
        let loss_value = event.loss.value(&x);
        let next = learner.observe(&event.gradient)?;
        history.record(event.gradient, loss_value, next, learner.trace())?;
        losses.push(event.loss);
        incurred.push(loss_value);
    }
    Ok(RunLog {
        history,
        losses,
        incurred,
        set: *learner.set(),
    })
}

/// The minimizer of `g_{1:T} . x` over `set`.
pub fn best_comparator(g_sum: &Point, set: &FeasibleSet) -> Result<Point> {
    set.linear_minimizer(g_sum)
}

/// The best fixed point in hindsight for a homogeneous list of linear or
/// half-squared losses.
pub fn comparator_for(losses: &[Loss], set: &FeasibleSet, n: usize) -> Result<Point> {
    if losses.is_empty() {
        return Ok(set.min_norm_point(n));
    }
    if losses.iter().all(|l| matches!(l, Loss::Linear { .. })) {
        let mut sum = vec![0.0; n];
        for l in losses {
            if let Loss::Linear { g } = l {
                g.check_dim(n)?;
                sum.iter_mut().zip(g.iter()).for_each(|(s, v)| *s += v);
            }
        }
        return best_comparator(&Point::new(sum)?, set);
    }
    if losses.iter().all(|l| matches!(l, Loss::HalfSquared { .. })) {
        let mut mean = vec![0.0; n];
        for l in losses {
            if let Loss::HalfSquared { center } = l {
                center.check_dim(n)?;
                mean.iter_mut().zip(center.iter()).for_each(|(s, v)| *s += v);
            }
        }
        let k = losses.len() as f64;
        mean.iter_mut().for_each(|v| *v /= k);
        return Ok(set.project(&Point::new(mean)?));
    }
    Err(unsupported(
        "no closed-form comparator for this loss family",
    ))
}

/// Regret, bound and decomposition at every prefix against a fixed comparator.
pub fn evaluate(
    log: &RunLog,
    comparator: &Point,
    bound: Option<(TheoremId, &BoundConfig)>,
) -> Result<RegretRecord> {
    let comp_loss: Vec<f64> = log.losses.iter().map(|l| l.value(comparator)).collect();
    let cum_regret = cumulative_regret(&log.incurred, &comp_loss)?;
    let bound = bound
        .map(|(id, cfg)| bound_series(id, cfg, &log.history, comparator))
        .transpose()?;
    let decomposition = strong_ftrl_prefix(&log.history, log.history.iterates(), comparator)?;
    Ok(RegretRecord {
        loss: log.incurred.clone(),
        comp_loss,
        cum_regret,
        bound,
        decomposition,
    })
}
