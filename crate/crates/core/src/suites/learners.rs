use super::rng::SuiteRng;
use super::Check;
use crate::error::Result;
use crate::learners::{
    dual_averaging_step, ftrl_composite_l1_step, ftrl_proximal_step, Learner, LearnerState,
};
use crate::oracle::numeric_argmin_separable;
use crate::primitives::{Centering, CompositePenalty, FeasibleSet, LearningRateSchedule, Point};
use crate::tolerance::{max_abs_diff, ALGEBRAIC_IDENTITY, STATE_EQUIVALENCE};
use crate::OnlineLearner;

const STREAMS: usize = 100;

fn constant_rate_equivalence(rng: &mut SuiteRng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..STREAMS {
        let n = rng.int(1, 5);
        let eta = rng.uniform(0.05, 2.0);
        let sched = LearningRateSchedule::Constant { eta };
        let set = FeasibleSet::Unconstrained;
        let mut da = LearnerState::new(n, set, sched.clone(), CompositePenalty::none(), Centering::Centered)?;
        let mut prox = LearnerState::new(n, set, sched.clone(), CompositePenalty::none(), Centering::Proximal)?;
        let mut comp = LearnerState::new(n, set, sched, CompositePenalty::l1(0.0)?, Centering::Proximal)?;
        let mut g_sum = vec![0.0; n];
        for _ in 0..rng.int(1, 100) {
            let g = rng.normal_point(n, 2.0);
            g_sum.iter_mut().zip(g.iter()).for_each(|(s, v)| *s += v);
            let expected: Vec<f64> = g_sum.iter().map(|v| -eta * v).collect();
            for x in [
                dual_averaging_step(&mut da, &g)?,
                ftrl_proximal_step(&mut prox, &g)?,
                ftrl_composite_l1_step(&mut comp, &g)?,
            ] {
                worst = worst.max(max_abs_diff(&x, &expected));
            }
        }
    }
    Ok(worst)
}

/// Strongly convex OGD against the numeric minimizer of the accumulated
/// quadratic lower bounds `sum_s g_s.x + ||x - x_s||^2 / 2`.
fn follow_the_leader(rng: &mut SuiteRng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..STREAMS {
        let n = rng.int(1, 3);
        let mut learner = Learner::strongly_convex_ogd(n)?;
        let mut past: Vec<(Point, Point)> = Vec::new();
        for _ in 0..rng.int(1, 30) {
            let x = learner.current().clone();
            let g = rng.normal_point(n, 3.0);
            let next = learner.observe(&g)?;
            past.push((g, x));
            let bound = 10.0 * (1.0 + past.iter().map(|(g, x)| g.norm_inf() + x.norm_inf()).fold(0.0, f64::max));
            let oracle = numeric_argmin_separable(
                |i, v| {
                    past.iter()
                        .map(|(g, x)| g[i] * v + 0.5 * (v - x[i]) * (v - x[i]))
                        .sum()
                },
                &vec![(-bound, bound); n],
                1e-11,
            )?;
            worst = worst.max(max_abs_diff(&next, &oracle));
        }
    }
    Ok(worst)
}

fn feasibility(rng: &mut SuiteRng) -> Result<(f64, usize)> {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut entropic_increases = 0;
    for _ in 0..STREAMS {
        let n = rng.int(2, 5);
        let r = rng.uniform(0.2, 3.0);
        let mut learners = [Learner::dual_averaging(n, FeasibleSet::l2_ball(r)?, LearningRateSchedule::InverseSqrtT { scale: rng.uniform(0.1, 2.0), shift: 1 })?,
            Learner::ftrl_proximal(n, FeasibleSet::l2_ball(r)?, LearningRateSchedule::AdaGradDiagonal { scale: rng.uniform(0.1, 2.0), offset: 0.0 })?,
            Learner::ftrl_proximal(n, FeasibleSet::boxed(r)?, LearningRateSchedule::AdaGradDiagonal { scale: rng.uniform(0.1, 2.0), offset: 0.0 })?,
            Learner::composite_l1(n, FeasibleSet::boxed(r)?, LearningRateSchedule::InverseSqrtT { scale: rng.uniform(0.1, 2.0), shift: 0 }, Centering::Proximal, CompositePenalty::l1(rng.uniform(0.0, 1.0))?)?,
            Learner::entropic(n, 3.0)?];
        let rounds = rng.int(1, 60);
        for _ in 0..rounds {
            let g = rng.normal_point(n, 1.0);
            let g = Point::new(g.iter().map(|v| v.clamp(-3.0, 3.0)).collect())?;
            for learner in learners.iter_mut() {
                let before = learner.state().inverse_rates()[0];
                let x = learner.observe(&g)?;
                let violation = match learner.state().set() {
                    FeasibleSet::L2Ball { radius } => x.norm2() - radius * (1.0 + 1e-12),
                    FeasibleSet::Box { half_width } => x.norm_inf() - half_width,
                    FeasibleSet::Simplex => {
                        let neg = -x.iter().copied().fold(f64::INFINITY, f64::min);
                        neg.max((x.iter().sum::<f64>() - 1.0).abs() - 1e-12)
                    }
                    FeasibleSet::Unconstrained => f64::NEG_INFINITY,
                };
                worst = worst.max(violation);
                if matches!(learner.algorithm(), crate::learners::Algorithm::Entropic)
                    && learner.state().inverse_rates()[0] < before
                {
                    entropic_increases += 1;
                }
            }
        }
    }
    Ok((worst, entropic_increases))
}

fn permutation(rng: &mut SuiteRng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..STREAMS {
        let n = rng.int(2, 6);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.int(0, i));
        }
        let sched = LearningRateSchedule::AdaGradDiagonal { scale: rng.uniform(0.1, 2.0), offset: rng.uniform(0.0, 1.0) };
        let set = FeasibleSet::boxed(rng.uniform(0.1, 2.0))?;
        let mut a = Learner::ftrl_proximal(n, set, sched.clone())?;
        let mut b = Learner::ftrl_proximal(n, set, sched)?;
        for _ in 0..rng.int(1, 60) {
            let g = rng.normal_point(n, 2.0);
            let gp = Point::new(perm.iter().map(|&i| g[i]).collect())?;
            let x = a.observe(&g)?;
            let y = b.observe(&gp)?;
            let xp: Vec<f64> = perm.iter().map(|&i| x[i]).collect();
            worst = worst.max(max_abs_diff(&xp, &y));
        }
    }
    Ok(worst)
}

/// Learner equivalences, feasibility, monotone entropic rates and
/// per-coordinate decomposability.
pub fn learner_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 2);
    let (infeasible, increases) = feasibility(&mut rng)?;
    Ok(vec![
        Check::new("constant-rate-learners-agree", constant_rate_equivalence(&mut rng)?, ALGEBRAIC_IDENTITY, STREAMS),
        Check::new("strongly-convex-ogd-is-ftl", follow_the_leader(&mut rng)?, STATE_EQUIVALENCE, STREAMS),
        Check::new("iterates-feasible", infeasible, 0.0, STREAMS),
        Check::new("entropic-rate-nonincreasing", increases as f64, 0.0, STREAMS),
        Check::new("adagrad-permutation-equivariant", permutation(&mut rng)?, 0.0, STREAMS),
    ])
}
