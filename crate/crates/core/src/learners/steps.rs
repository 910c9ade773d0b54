use super::state::LearnerState;
use crate::error::{invalid, unsupported, Error, Result};
use crate::primitives::{
    composite_l1_argmin, diagonal_quadratic_argmin, project_l2_ball, schedule_sigma,
    softmax_simplex, Centering, FeasibleSet, LearningRateSchedule, Point,
};
use crate::tolerance::ALGEBRAIC_IDENTITY;

/// Accumulators after absorbing g_t, not yet committed to the state.
struct Pending {
    t: usize,
    g_sum: Vec<f64>,
    sq_sum: Vec<f64>,
    sup_sq_sum: f64,
    adj_sum: Vec<f64>,
    inv_rate: Vec<f64>,
}

fn statistic(sched: &LearningRateSchedule, sq: f64, sup_sq: f64) -> f64 {
    match sched {
        LearningRateSchedule::AdaGradDiagonal { .. } => sq,
        LearningRateSchedule::EntropicWeight { .. } => sup_sq,
        _ => 0.0,
    }
}

fn absorb(state: &LearnerState, g: &Point) -> Result<Pending> {
    g.check_dim(state.dim())?;
    let t = state.t + 1;
    let sup = g.norm_inf();
    let sup_sq_sum = state.sup_sq_sum + sup * sup;
    let mut p = Pending {
        t,
        g_sum: state.g_sum.clone(),
        sq_sum: state.sq_sum.clone(),
        sup_sq_sum,
        adj_sum: state.adj_sum.clone(),
        inv_rate: state.inv_rate.clone(),
    };
    let proximal = state.centering == Centering::Proximal;
    for i in 0..state.dim() {
        let prev = statistic(&state.sched, p.sq_sum[i], state.sup_sq_sum);
        p.g_sum[i] += g[i];
        p.sq_sum[i] += g[i] * g[i];
        let now = statistic(&state.sched, p.sq_sum[i], sup_sq_sum);
        let sigma = schedule_sigma(&state.sched, t, prev, now)?;
        if proximal {
            p.adj_sum[i] += sigma * state.x_current[i];
        }
        p.inv_rate[i] = state.sched.inverse_rate(t, now);
    }
    Ok(p)
}

fn commit(state: &mut LearnerState, p: Pending, x: Point) -> Result<Point> {
    if !state.set.contains(&x, ALGEBRAIC_IDENTITY) {
        return Err(Error::InternalConsistency(format!(
            "iterate {x} left the feasible set"
        )));
    }
    state.t = p.t;
    state.g_sum = p.g_sum;
    state.sq_sum = p.sq_sum;
    state.sup_sq_sum = p.sup_sq_sum;
    state.adj_sum = p.adj_sum;
    state.inv_rate = p.inv_rate;
    state.x_current = x.clone();
    Ok(x)
}

/// `argmin_X b.x + sum_i a_i x_i^2/2`; uniform positive curvature over a
/// ball is solved by projecting the unconstrained minimizer.
fn quadratic_step(b: &[f64], a: &[f64], set: &FeasibleSet) -> Result<Point> {
    if let FeasibleSet::L2Ball { radius } = *set {
        let a0 = a[0];
        if a0 > 0.0 && a.iter().all(|v| *v == a0) {
            let u = Point::new(b.iter().map(|v| -v / a0).collect())?;
            return project_l2_ball(&u, radius);
        }
    }
    diagonal_quadratic_argmin(b, a, set)
}

fn require_quadratic_schedule(state: &LearnerState) -> Result<()> {
    match &state.sched {
        LearningRateSchedule::EntropicWeight { .. } => {
            Err(unsupported("entropic weight needs entropic_ftrl_step"))
        }
        LearningRateSchedule::InverseT => {
            Err(unsupported("1/t rates belong to strongly_convex_ogd_step"))
        }
        LearningRateSchedule::AdaGradDiagonal { offset, .. }
            if state.centering == Centering::Centered && *offset == 0.0 =>
        {
            Err(invalid("centered AdaGrad needs a positive offset G0"))
        }
        _ => Ok(()),
    }
}

fn reject_simplex(state: &LearnerState) -> Result<()> {
    if state.set == FeasibleSet::Simplex {
        Err(unsupported("simplex needs entropic_ftrl_step"))
    } else {
        Ok(())
    }
}

pub(crate) fn check_dual_averaging(state: &LearnerState) -> Result<()> {
    if state.centering != Centering::Centered {
        return Err(unsupported("dual averaging needs centered regularization"));
    }
    if state.penalty.is_active() {
        return Err(unsupported("composite penalty needs ftrl_composite_l1_step"));
    }
    reject_simplex(state)?;
    require_quadratic_schedule(state)
}

pub(crate) fn check_proximal(state: &LearnerState) -> Result<()> {
    if state.centering != Centering::Proximal {
        return Err(unsupported("FTRL-Proximal needs proximal regularization"));
    }
    if state.penalty.is_active() {
        return Err(unsupported("composite penalty needs ftrl_composite_l1_step"));
    }
    reject_simplex(state)?;
    if state.set == FeasibleSet::Unconstrained && state.sched.is_per_coordinate() {
        return Err(unsupported(
            "per-coordinate adaptive rates need a bounded feasible set",
        ));
    }
    require_quadratic_schedule(state)
}

pub(crate) fn check_composite(state: &LearnerState) -> Result<()> {
    reject_simplex(state)?;
    if state.penalty.is_active() && matches!(state.set, FeasibleSet::L2Ball { .. }) {
        return Err(unsupported("L1 penalty over an L2 ball has no closed form"));
    }
    if state.centering == Centering::Proximal
        && state.set == FeasibleSet::Unconstrained
        && state.sched.is_per_coordinate()
    {
        return Err(unsupported(
            "per-coordinate adaptive rates need a bounded feasible set",
        ));
    }
    require_quadratic_schedule(state)
}

pub(crate) fn check_entropic(state: &LearnerState) -> Result<()> {
    if state.set != FeasibleSet::Simplex {
        return Err(unsupported("entropic FTRL needs the simplex"));
    }
    match state.sched {
        LearningRateSchedule::EntropicWeight { n, .. } if n == state.dim() => Ok(()),
        LearningRateSchedule::EntropicWeight { n, .. } => Err(invalid(format!(
            "entropic weight built for n={n} but learner has n={}",
            state.dim()
        ))),
        _ => Err(unsupported("entropic FTRL needs the entropic weight schedule")),
    }
}

pub(crate) fn check_strongly_convex(state: &LearnerState) -> Result<()> {
    if state.set != FeasibleSet::Unconstrained {
        return Err(unsupported("strongly convex OGD is FTL only without constraints"));
    }
    if state.sched != LearningRateSchedule::InverseT {
        return Err(unsupported("strongly convex OGD uses 1/t rates"));
    }
    Ok(())
}

/// Dual averaging: `x_{t+1} = argmin_X g_{1:t}.x + sum_i x_i^2 / (2 eta_{t,i})`,
/// i.e. `-eta_t g_{1:t}` followed by a lazy projection.
pub fn dual_averaging_step(state: &mut LearnerState, g: &Point) -> Result<Point> {
    check_dual_averaging(state)?;
    let p = absorb(state, g)?;
    let x = quadratic_step(&p.g_sum, &p.inv_rate, &state.set)?;
    commit(state, p, x)
}

/// FTRL-Proximal: `x_{t+1} = argmin_X (g_{1:t} - a_{1:t}).x + sum_i x_i^2 / (2 eta_{t,i})`.
pub fn ftrl_proximal_step(state: &mut LearnerState, g: &Point) -> Result<Point> {
    check_proximal(state)?;
    let p = absorb(state, g)?;
    let b: Vec<f64> = p.g_sum.iter().zip(&p.adj_sum).map(|(g, a)| g - a).collect();
    let x = quadratic_step(&b, &p.inv_rate, &state.set)?;
    commit(state, p, x)
}

/// FTRL with the L1 penalty kept exact: per-coordinate soft thresholding of
/// the accumulated linear term at `alpha_{1:t} lambda`.
pub fn ftrl_composite_l1_step(state: &mut LearnerState, g: &Point) -> Result<Point> {
    check_composite(state)?;
    let p = absorb(state, g)?;
    let b: Vec<f64> = match state.centering {
        Centering::Centered => p.g_sum.clone(),
        Centering::Proximal => p.g_sum.iter().zip(&p.adj_sum).map(|(g, a)| g - a).collect(),
    };
    let threshold = state.penalty.cumulative_weight(p.t);
    let x = if threshold == 0.0 {
        quadratic_step(&b, &p.inv_rate, &state.set)?
    } else {
        composite_l1_argmin(&b, &p.inv_rate, threshold, &state.set)?
    };
    commit(state, p, x)
}

/// Entropic FTRL: `x_{t+1} = softmax(-eta_t g_{1:t})`.
pub fn entropic_ftrl_step(state: &mut LearnerState, g: &Point) -> Result<Point> {
    check_entropic(state)?;
    let p = absorb(state, g)?;
    let eta = 1.0 / p.inv_rate[0];
    let z = Point::new(p.g_sum.iter().map(|v| -eta * v).collect())?;
    let x = softmax_simplex(&z);
    commit(state, p, x)
}

/// Online gradient descent with `eta_t = 1/t` for 1-strongly convex losses:
/// `x_{t+1} = x_t - g_t / t`.
pub fn strongly_convex_ogd_step(state: &mut LearnerState, g: &Point) -> Result<Point> {
    check_strongly_convex(state)?;
    let p = absorb(state, g)?;
    let x = strongly_convex_ogd_update(&state.x_current, g, p.t)?;
    commit(state, p, x)
}

/// The raw update `x - g / t` for round `t >= 1`.
pub fn strongly_convex_ogd_update(x: &Point, g: &Point, t: usize) -> Result<Point> {
    if t == 0 {
        return Err(invalid("round index must be >= 1"));
    }
    g.check_dim(x.dim())?;
    let step = 1.0 / t as f64;
    Point::new(x.iter().zip(g.iter()).map(|(a, b)| a - step * b).collect())
}
