use super::core::soft_threshold_gap;
use super::rng::SuiteRng;
use super::Check;
use crate::error::Result;
use crate::learners::Learner;
use crate::mirror::{mirror_descent_step, MirrorState};
use crate::oracle::{
    check_lemma_sum, check_smoothchange, default_bracket, numeric_argmin_constrained,
    numeric_argmin_separable, LinearL1, QuadraticObjective, SeparableConstraint,
};
use crate::primitives::{
    clamp_box, project_l2_ball, project_simplex, softmax_simplex, Centering, CompositePenalty,
    FeasibleSet, LearningRateSchedule, Point,
};
use crate::tolerance::{max_abs_diff, CLOSED_FORM_VS_ORACLE, SMOOTH_CHANGE_EQUALITY};
use crate::OnlineLearner;

const INSTANCES: usize = 1000;
const ORACLE_TOL: f64 = 1e-10;

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Numeric minimizer of `sum_i f(i, x_i)` over `set`; `scale` bounds the
/// magnitude of the linear and curvature terms to size the search box and
/// the multiplier range.
fn oracle_over(set: &FeasibleSet, n: usize, scale: f64, f: impl Fn(usize, f64) -> f64) -> Result<Point> {
    let sq = |_: usize, x: f64| x * x;
    let id = |_: usize, x: f64| x;
    match *set {
        FeasibleSet::Unconstrained => {
            let (lo, hi) = default_bracket(scale, 1.0, 1.0);
            numeric_argmin_separable(f, &vec![(lo, hi); n], ORACLE_TOL)
        }
        FeasibleSet::Box { half_width } => {
            numeric_argmin_separable(f, &vec![(-half_width, half_width); n], ORACLE_TOL)
        }
        FeasibleSet::L2Ball { radius } => {
            let con = SeparableConstraint { c: &sq, level: radius * radius, equality: false };
            numeric_argmin_constrained(f, &vec![(-radius, radius); n], &con, 100.0 * (scale / radius + scale + 1.0), ORACLE_TOL)
        }
        FeasibleSet::Simplex => {
            let con = SeparableConstraint { c: &id, level: 1.0, equality: true };
            numeric_argmin_constrained(f, &vec![(0.0, 1.0); n], &con, 100.0 * (scale + 1.0), ORACLE_TOL)
        }
    }
}

fn softmax_gap(rng: &mut SuiteRng, instances: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let n = rng.int(2, 5);
        let z = rng.normal_point(n, 3.0);
        let closed = softmax_simplex(&z);
        let scale = z.norm_inf() + (n as f64).ln() + 1.0;
        let numeric = oracle_over(&FeasibleSet::Simplex, n, scale, |i, x| -z[i] * x + xlogx(x))?;
        worst = worst.max(max_abs_diff(&closed, &numeric));
    }
    Ok(worst)
}

fn random_set(rng: &mut SuiteRng, allow_ball: bool) -> Result<FeasibleSet> {
    Ok(match rng.int(0, if allow_ball { 2 } else { 1 }) {
        0 => FeasibleSet::Unconstrained,
        1 => FeasibleSet::boxed(rng.uniform(0.2, 3.0))?,
        _ => FeasibleSet::l2_ball(rng.uniform(0.2, 3.0))?,
    })
}

fn random_schedule(rng: &mut SuiteRng, centered: bool, set: &FeasibleSet) -> LearningRateSchedule {
    let first = if set.is_bounded() { 0 } else { 1 };
    match rng.int(first, 2) {
        0 => LearningRateSchedule::AdaGradDiagonal {
            scale: rng.uniform(0.1, 3.0),
            offset: if centered { rng.uniform(0.1, 2.0) } else { rng.uniform(0.0, 2.0) },
        },
        1 => LearningRateSchedule::InverseSqrtT { scale: rng.uniform(0.1, 3.0), shift: if centered { 1 } else { rng.int(0, 1) as u32 } },
        _ => LearningRateSchedule::Constant { eta: rng.uniform(0.1, 3.0) },
    }
}

/// FTRL-Proximal, dual averaging and composite-L1 steps against the numeric
/// minimizer of `g_{1:t}.x + alpha_{1:t} lambda ||x||_1
/// + sum_s sigma_s ||x - c_s||^2 / 2` rebuilt from the played rounds.
fn proximal_gap(rng: &mut SuiteRng, instances: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let n = rng.int(1, 4);
        let composite = rng.coin(0.4);
        let centering = if rng.coin(0.5) { Centering::Proximal } else { Centering::Centered };
        let set = random_set(rng, !composite)?;
        let sched = random_schedule(rng, centering == Centering::Centered, &set);
        let mut learner = if composite {
            let penalty = CompositePenalty::l1(rng.uniform(0.0, 1.5))?;
            Learner::composite_l1(n, set, sched, centering, penalty)?
        } else if centering == Centering::Proximal {
            Learner::ftrl_proximal(n, set, sched)?
        } else {
            Learner::dual_averaging(n, set, sched)?
        };
        let proximal = learner.state().centering() == Centering::Proximal;
        // (sigma_s, center_s) for s = 0..t
        let mut terms: Vec<(Vec<f64>, Vec<f64>)> = vec![(learner.state().inverse_rates().to_vec(), learner.current().to_vec())];
        let mut g_sum = vec![0.0; n];
        let mut prev_inv = learner.state().inverse_rates().to_vec();
        let mut next = learner.current().clone();
        let gscale = rng.uniform(0.1, 3.0);
        for _ in 0..rng.int(1, 10) {
            let x = learner.current().to_vec();
            let g = rng.normal_point(n, gscale);
            g_sum.iter_mut().zip(g.iter()).for_each(|(s, v)| *s += v);
            next = learner.observe(&g)?;
            let inv = learner.state().inverse_rates().to_vec();
            let sigma: Vec<f64> = inv.iter().zip(&prev_inv).map(|(a, b)| a - b).collect();
            terms.push((sigma, if proximal { x } else { vec![0.0; n] }));
            prev_inv = inv;
        }
        let t = learner.round();
        let weight = learner.state().penalty().cumulative_weight(t);
        let scale = g_sum.iter().map(|v| v.abs()).fold(0.0, f64::max)
            / prev_inv.iter().copied().fold(f64::INFINITY, f64::min).max(1e-3)
            + terms.iter().flat_map(|(_, c)| c.iter()).map(|v| v.abs()).fold(0.0, f64::max);
        let numeric = oracle_over(&set, n, scale + 1.0, |i, v| {
            g_sum[i] * v
                + weight * v.abs()
                + terms.iter().map(|(s, c)| 0.5 * s[i] * (v - c[i]) * (v - c[i])).sum::<f64>()
        })?;
        worst = worst.max(max_abs_diff(&next, &numeric));
    }
    Ok(worst)
}

/// Mirror descent steps against the numeric minimizer of
/// `g_t.x + alpha_t lambda ||x||_1 + B(x, x_hat_t)`.
fn mirror_gap(rng: &mut SuiteRng, instances: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let entropic = rng.coin(0.25);
        let n = rng.int(if entropic { 2 } else { 1 }, 4);
        let (set, sched, penalty) = if entropic {
            let g_inf = rng.uniform(0.5, 3.0);
            (FeasibleSet::Simplex, LearningRateSchedule::EntropicWeight { g_inf, n }, CompositePenalty::none())
        } else {
            let set = random_set(rng, true)?;
            let penalty = if matches!(set, FeasibleSet::L2Ball { .. }) {
                CompositePenalty::none()
            } else {
                CompositePenalty::l1(rng.uniform(0.0, 1.5))?
            };
            let sched = random_schedule(rng, true, &set);
            (set, sched, penalty)
        };
        let mut md = MirrorState::new(n, set, sched, penalty)?;
        let gscale = if entropic { 1.0 } else { rng.uniform(0.1, 3.0) };
        for _ in 0..rng.int(0, 9) {
            let g = rng.normal_point(n, gscale);
            mirror_descent_step(&mut md, &Point::new(g.iter().map(|v| v.clamp(-3.0, 3.0)).collect())?)?;
        }
        let x_hat = md.current().clone();
        let g = rng.normal_point(n, gscale);
        let g = Point::new(g.iter().map(|v| v.clamp(-3.0, 3.0)).collect())?;
        let next = mirror_descent_step(&mut md, &g)?;
        let sigma = md.inverse_rates().to_vec();
        let weight = md.penalty().weight(md.round());
        let numeric = if entropic {
            let inv = sigma[0];
            oracle_over(&set, n, (g.norm_inf() + inv * 40.0) + 1.0, |i, v| {
                g[i] * v + inv * (xlogx(v) - v * x_hat[i].ln() - v + x_hat[i])
            })?
        } else {
            let scale = g.norm_inf() / sigma.iter().copied().fold(f64::INFINITY, f64::min) + x_hat.norm_inf();
            oracle_over(&set, n, scale + 1.0, |i, v| {
                g[i] * v + weight * v.abs() + 0.5 * sigma[i] * (v - x_hat[i]) * (v - x_hat[i])
            })?
        };
        worst = worst.max(max_abs_diff(&next, &numeric));
    }
    Ok(worst)
}

/// Euclidean projections onto the ball, the box and the simplex.
fn projection_gaps(rng: &mut SuiteRng, instances: usize) -> Result<[f64; 3]> {
    let mut worst = [0.0f64; 3];
    for _ in 0..instances {
        let n = rng.int(1, 5);
        let v = rng.normal_point(n, 3.0);
        let r = rng.uniform(0.2, 3.0);
        let dist = |i: usize, x: f64| 0.5 * (x - v[i]) * (x - v[i]);
        let scale = v.norm_inf() + 1.0;
        let ball = oracle_over(&FeasibleSet::l2_ball(r)?, n, scale, dist)?;
        worst[0] = worst[0].max(max_abs_diff(&project_l2_ball(&v, r)?, &ball));
        let boxed = oracle_over(&FeasibleSet::boxed(r)?, n, scale, dist)?;
        worst[1] = worst[1].max(max_abs_diff(&clamp_box(&v, r)?, &boxed));
        if n >= 2 {
            let simplex = oracle_over(&FeasibleSet::Simplex, n, scale, dist)?;
            worst[2] = worst[2].max(max_abs_diff(&project_simplex(&v), &simplex));
        }
    }
    Ok(worst)
}

/// Every closed-form solver against the numeric oracle on `instances`
/// random instances each.
pub fn oracle_certification(seed: u64, instances: usize) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 6);
    let tol = CLOSED_FORM_VS_ORACLE;
    let [ball, boxed, simplex] = projection_gaps(&mut rng, instances)?;
    Ok(vec![
        Check::new("soft-threshold-vs-oracle", soft_threshold_gap(&mut rng, instances)?, tol, instances),
        Check::new("softmax-vs-oracle", softmax_gap(&mut rng, instances)?, tol, instances),
        Check::new("proximal-step-vs-oracle", proximal_gap(&mut rng, instances)?, tol, instances),
        Check::new("mirror-step-vs-oracle", mirror_gap(&mut rng, instances)?, tol, instances),
        Check::new("ball-projection-vs-oracle", ball, tol, instances),
        Check::new("box-projection-vs-oracle", boxed, tol, instances),
        Check::new("simplex-projection-vs-oracle", simplex, tol, instances),
    ])
}

pub fn oracle_suite(seed: u64) -> Result<Vec<Check>> {
    oracle_certification(seed, INSTANCES)
}

/// Square-root sum inequality on random nonnegative sequences of length
/// 1 to 100, some with zero entries and zero prefixes.
pub fn lemma_sum_suite_with(seed: u64, sequences: usize) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 7);
    let mut failures = 0usize;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..sequences {
        let len = rng.int(1, 100);
        let zeros = rng.uniform(0.0, 0.5);
        let spread = rng.uniform(0.0, 3.0);
        let a: Vec<f64> = (0..len)
            .map(|_| if rng.coin(zeros) { 0.0 } else { (spread * rng.normal()).exp() })
            .collect();
        let (lhs, rhs, holds) = check_lemma_sum(&a)?;
        failures += usize::from(!holds);
        if rhs > 0.0 {
            worst_ratio = worst_ratio.max(lhs / rhs);
        }
    }
    Ok(vec![
        Check::new("sqrt-sum-inequality-holds", failures as f64, 0.0, sequences),
        Check::new("sqrt-sum-ratio", worst_ratio, 1.0, sequences),
    ])
}

pub fn lemma_sum_suite(seed: u64) -> Result<Vec<Check>> {
    lemma_sum_suite_with(seed, 1000)
}

/// Smooth-change inequalities on random quadratic / linear-plus-L1 pairs;
/// about a third are unconstrained with a purely linear perturbation, where
/// both inequalities are equalities.
pub fn smoothchange_suite_with(seed: u64, instances: usize) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 8);
    let (mut distance_fail, mut value_fail) = (0usize, 0usize);
    let mut equality_gap: f64 = 0.0;
    let mut pure_count = 0usize;
    for _ in 0..instances {
        let n = rng.int(1, 4);
        let pure = rng.coin(1.0 / 3.0);
        let phi1 = QuadraticObjective {
            curvature: (0..n).map(|_| rng.uniform(0.1, 5.0)).collect(),
            linear: (0..n).map(|_| rng.uniform(-3.0, 3.0)).collect(),
            half_width: if !pure && rng.coin(0.5) { Some(rng.uniform(0.05, 2.0)) } else { None },
        };
        let psi = LinearL1 {
            linear: (0..n).map(|_| rng.uniform(-3.0, 3.0)).collect(),
            l1: if pure { 0.0 } else { rng.uniform(0.0, 2.0) },
        };
        let r = check_smoothchange(&phi1, &psi, ORACLE_TOL)?;
        distance_fail += usize::from(!r.distance_holds);
        value_fail += usize::from(!r.value_holds);
        if let Some(gap) = r.equality_gap {
            pure_count += 1;
            equality_gap = equality_gap.max(gap);
        }
    }
    Ok(vec![
        Check::new("smoothchange-distance-holds", distance_fail as f64, 0.0, instances),
        Check::new("smoothchange-value-holds", value_fail as f64, 0.0, instances),
        Check::new("smoothchange-equality-gap", equality_gap, SMOOTH_CHANGE_EQUALITY, pure_count),
    ])
}

pub fn smoothchange_suite(seed: u64) -> Result<Vec<Check>> {
    smoothchange_suite_with(seed, 500)
}
