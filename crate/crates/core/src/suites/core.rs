use super::rng::SuiteRng;
use super::Check;
use crate::error::Result;
use crate::oracle::{default_bracket, numeric_argmin_1d};
use crate::primitives::{
    bregman_divergence, project_l2_ball, schedule_sigma, soft_threshold_argmin, softmax_simplex,
    Centering, LearningRateSchedule, Point, RegularizerBase, RegularizerSpec,
};
use crate::tolerance::{max_abs_diff, ALGEBRAIC_IDENTITY, CLOSED_FORM_VS_ORACLE};

const DRAWS: usize = 1000;

pub(super) fn soft_threshold_gap(rng: &mut SuiteRng, draws: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let b = rng.uniform(-5.0, 5.0);
        let lambda = if rng.coin(0.1) { 0.0 } else { rng.uniform(0.0, 3.0) };
        let a = rng.uniform(0.05, 5.0);
        let closed = soft_threshold_argmin(b, lambda, a)?;
        let (lo, hi) = default_bracket(b, a, 1.0);
        let numeric = numeric_argmin_1d(|x| b * x + lambda * x.abs() + 0.5 * a * x * x, lo, hi, 1e-10)?;
        worst = worst.max((closed - numeric).abs());
    }
    Ok(worst)
}

/// Closed-form prox, softmax, Bregman, schedule and projection invariants.
pub fn core_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 1);
    let mut checks = vec![Check::new(
        "soft-threshold-vs-oracle",
        soft_threshold_gap(&mut rng, DRAWS)?,
        CLOSED_FORM_VS_ORACLE,
        DRAWS,
    )];

    let (mut sum_gap, mut min_entry, mut shift_gap) = (0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..DRAWS {
        let n = rng.int(2, 8);
        let z = rng.normal_point(n, 10.0);
        let shift = rng.uniform(-50.0, 50.0);
        let x = softmax_simplex(&z);
        let y = softmax_simplex(&Point::new(z.iter().map(|v| v + shift).collect())?);
        sum_gap = sum_gap.max((x.iter().sum::<f64>() - 1.0).abs());
        min_entry = min_entry.min(x.iter().copied().fold(f64::INFINITY, f64::min));
        shift_gap = shift_gap.max(max_abs_diff(&x, &y));
        let argmax = |p: &Point| (0..p.dim()).max_by(|a, b| p[*a].total_cmp(&p[*b]));
        if argmax(&x) != argmax(&y) {
            shift_gap = f64::INFINITY;
        }
    }
    checks.push(Check::new("softmax-sums-to-one", sum_gap, 1e-12, DRAWS));
    // strictly positive entries: report the negated minimum against limit 0
    checks.push(Check::new("softmax-positive", -min_entry, 0.0, DRAWS).strict());
    checks.push(Check::new("softmax-shift-invariant", shift_gap, 1e-12, DRAWS));

    let (mut min_div, mut self_div) = (f64::INFINITY, 0.0f64);
    for _ in 0..DRAWS {
        let n = rng.int(2, 6);
        let spec = if rng.coin(0.5) {
            RegularizerSpec::quadratic((0..n).map(|_| rng.uniform(0.0, 4.0)).collect(), Centering::Centered)?
        } else {
            RegularizerSpec::entropic(rng.uniform(0.1, 3.0))?
        };
        let (u, v) = match spec.base() {
            RegularizerBase::Quadratic { .. } => {
                (rng.normal_point(n, 3.0), rng.normal_point(n, 3.0))
            }
            RegularizerBase::Entropic { .. } => {
                (softmax_simplex(&rng.normal_point(n, 2.0)), softmax_simplex(&rng.normal_point(n, 2.0)))
            }
        };
        min_div = min_div.min(bregman_divergence(&spec, &u, &v)?);
        self_div = self_div.max(bregman_divergence(&spec, &u, &u)?.abs());
    }
    checks.push(Check::new("bregman-nonnegative", -min_div, 1e-12, DRAWS));
    checks.push(Check::new("bregman-zero-on-diagonal", self_div, 1e-12, DRAWS));

    let (mut sigma_neg, mut sum_gap) = (0usize, 0.0f64);
    for _ in 0..DRAWS {
        let sched = match rng.int(0, 4) {
            0 => LearningRateSchedule::Constant { eta: rng.uniform(0.01, 5.0) },
            1 => LearningRateSchedule::InverseSqrtT { scale: rng.uniform(0.01, 5.0), shift: rng.int(0, 1) as u32 },
            2 => LearningRateSchedule::AdaGradDiagonal { scale: rng.uniform(0.01, 5.0), offset: rng.uniform(0.0, 2.0) },
            3 => LearningRateSchedule::InverseT,
            _ => LearningRateSchedule::EntropicWeight { g_inf: rng.uniform(0.1, 3.0), n: rng.int(2, 10) },
        };
        let mut stat = 0.0;
        let mut total = 0.0;
        for t in 0..50 {
            let prev = stat;
            if t > 0 {
                stat += rng.normal().powi(2);
            }
            let sigma = schedule_sigma(&sched, t, prev, stat)?;
            if sigma < 0.0 {
                sigma_neg += 1;
            }
            total += sigma;
            let inv = sched.inverse_rate(t, stat);
            sum_gap = sum_gap.max((total - inv).abs() / inv.max(1.0));
        }
    }
    checks.push(Check::new("schedule-sigma-nonnegative", sigma_neg as f64, 0.0, DRAWS));
    checks.push(Check::new("schedule-sigma-telescopes", sum_gap, 1e-9, DRAWS));

    let (mut idem, mut overshoot) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..DRAWS {
        let n = rng.int(1, 6);
        let r = rng.uniform(0.1, 5.0);
        let v = rng.normal_point(n, 4.0);
        let p = project_l2_ball(&v, r)?;
        let q = project_l2_ball(&p, r)?;
        idem = idem.max(max_abs_diff(&p, &q));
        overshoot = overshoot.max(p.norm2() - r * (1.0 + 1e-12));
    }
    checks.push(Check::new("ball-projection-idempotent", idem, ALGEBRAIC_IDENTITY, DRAWS));
    checks.push(Check::new("ball-projection-feasible", overshoot, 0.0, DRAWS));
    Ok(checks)
}
