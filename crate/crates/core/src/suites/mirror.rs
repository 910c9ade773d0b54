use super::rng::SuiteRng;
use super::Check;
use crate::error::Result;
use crate::mirror::{
    greedy_trajectory, lazy_trajectory, md_as_ftrl_step, mirror_descent_step, MdFtrlState,
    MirrorState, ProjectionForm,
};
use crate::primitives::{CompositePenalty, FeasibleSet, LearningRateSchedule, Point};
use crate::streams::l1_adversary_next;
use crate::tolerance::{max_abs_diff, ALGEBRAIC_IDENTITY, PROJECTION_FORMS, STATE_EQUIVALENCE};

const STREAMS: usize = 100;

/// Largest coordinate gap between mirror descent and its FTRL form over
/// `streams` random instances (n <= 5, T <= 200, lambda in [0, 1], random
/// non-increasing rates, unconstrained or box).
pub fn md_ftrl_equivalence_gap(seed: u64, streams: usize) -> Result<f64> {
    let mut rng = SuiteRng::new(seed, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..streams {
        let n = rng.int(1, 5);
        let rounds = rng.int(1, 200);
        let lambda = rng.uniform(0.0, 1.0);
        let mut etas = vec![rng.uniform(0.2, 2.0)];
        for _ in 0..rounds {
            let last = *etas.last().expect("nonempty");
            etas.push(if rng.coin(0.3) { last } else { last * rng.uniform(0.9, 1.0) });
        }
        let sched = LearningRateSchedule::Explicit { etas };
        let set = if rng.coin(0.5) { FeasibleSet::Unconstrained } else { FeasibleSet::boxed(rng.uniform(0.5, 5.0))? };
        let penalty = CompositePenalty::l1(lambda)?;
        let mut md = MirrorState::new(n, set, sched.clone(), penalty)?;
        let mut ff = MdFtrlState::new(n, set, sched, penalty)?;
        let scale = rng.uniform(0.1, 3.0);
        for _ in 0..rounds {
            let g = rng.normal_point(n, scale);
            let a = mirror_descent_step(&mut md, &g)?;
            let b = md_as_ftrl_step(&mut ff, &g)?;
            worst = worst.max(max_abs_diff(&a, &b));
        }
    }
    Ok(worst)
}

/// Mirror descent iterates `x_hat_2..x_hat_{T+1}` on the one-dimensional
/// adversary, plus the gradients it realized.
pub fn oscillation_run(g: f64, lambda: f64, rounds: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let eta = 2.0 / (rounds as f64).sqrt();
    let mut md = MirrorState::new(1, FeasibleSet::Unconstrained, LearningRateSchedule::Constant { eta }, CompositePenalty::l1(lambda)?)?;
    let mut xs = Vec::with_capacity(rounds);
    let mut gs = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let grad = l1_adversary_next(md.current()[0], t, g, lambda);
        gs.push(grad);
        xs.push(mirror_descent_step(&mut md, &Point::scalar(grad)?)?[0]);
    }
    Ok((xs, gs))
}

/// Mirror descent equivalences and the oscillation on the L1 adversary.
pub fn mirror_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 4);
    let mut gd_gap: f64 = 0.0;
    for _ in 0..STREAMS {
        let n = rng.int(1, 5);
        let eta = rng.uniform(0.01, 2.0);
        let mut md = MirrorState::new(n, FeasibleSet::Unconstrained, LearningRateSchedule::Constant { eta }, CompositePenalty::none())?;
        let mut x = vec![0.0; n];
        for _ in 0..rng.int(1, 100) {
            let g = rng.normal_point(n, 2.0);
            x.iter_mut().zip(g.iter()).for_each(|(x, g)| *x -= eta * g);
            gd_gap = gd_gap.max(max_abs_diff(&mirror_descent_step(&mut md, &g)?, &x));
        }
    }
    let (xs, _) = oscillation_run(11.0, 0.5, 16)?;
    let osc = xs.iter().enumerate().map(|(k, x)| {
        let expected = if k % 2 == 0 { 2.625 } else { -2.625 };
        (x - expected).abs()
    });
    Ok(vec![
        Check::new("md-equals-ftrl-form", md_ftrl_equivalence_gap(seed, STREAMS)?, STATE_EQUIVALENCE, STREAMS),
        Check::new("md-without-penalty-is-gradient-descent", gd_gap, ALGEBRAIC_IDENTITY, STREAMS),
        Check::new("md-oscillates-on-l1-adversary", osc.fold(0.0, f64::max), ALGEBRAIC_IDENTITY, 1),
    ])
}

/// Largest within-family disagreement between the projection, explicit,
/// FTRL (and for greedy, implicit) forms on `streams` random ball-constrained
/// streams; returns `(lazy, greedy)`.
pub fn projection_form_gaps(seed: u64, streams: usize) -> Result<(f64, f64)> {
    let mut rng = SuiteRng::new(seed, 5);
    let (mut lazy, mut greedy) = (0.0f64, 0.0f64);
    for _ in 0..streams {
        let n = rng.int(1, 5);
        let set = FeasibleSet::l2_ball(rng.uniform(0.2, 3.0))?;
        let eta = rng.uniform(0.01, 1.0);
        let scale = rng.uniform(0.1, 5.0);
        let gs: Vec<Point> = (0..rng.int(1, 100)).map(|_| rng.normal_point(n, scale)).collect();
        let base = lazy_trajectory(&gs, eta, set, ProjectionForm::Projection)?;
        for form in [ProjectionForm::Explicit, ProjectionForm::Ftrl] {
            for (a, b) in base.iter().zip(lazy_trajectory(&gs, eta, set, form)?) {
                lazy = lazy.max(max_abs_diff(a, &b));
            }
        }
        let base = greedy_trajectory(&gs, eta, set, ProjectionForm::Projection)?;
        for form in [ProjectionForm::Explicit, ProjectionForm::Ftrl, ProjectionForm::Implicit] {
            for (a, b) in base.iter().zip(greedy_trajectory(&gs, eta, set, form)?) {
                greedy = greedy.max(max_abs_diff(a, &b));
            }
        }
    }
    Ok((lazy, greedy))
}

/// `|x_3^lazy - x_3^greedy|` on `X = [-1, 1]`, `eta = 1`, `g = (2, -2)`.
pub fn lazy_greedy_split() -> Result<f64> {
    let gs = [Point::scalar(2.0)?, Point::scalar(-2.0)?];
    let set = FeasibleSet::boxed(1.0)?;
    let lazy = lazy_trajectory(&gs, 1.0, set, ProjectionForm::Projection)?;
    let greedy = greedy_trajectory(&gs, 1.0, set, ProjectionForm::Projection)?;
    Ok((lazy[2][0] - greedy[2][0]).abs())
}

/// Lazy and greedy projection families: forms agree within a family, the
/// families differ on the crafted interval instance.
pub fn projection_forms_suite(seed: u64) -> Result<Vec<Check>> {
    let (lazy, greedy) = projection_form_gaps(seed, STREAMS)?;
    Ok(vec![
        Check::new("lazy-forms-agree", lazy, PROJECTION_FORMS, STREAMS),
        Check::new("greedy-forms-agree", greedy, PROJECTION_FORMS, STREAMS),
        Check::new("lazy-greedy-split-is-one", (lazy_greedy_split()? - 1.0).abs(), 0.0, 1),
    ])
}
