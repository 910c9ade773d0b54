use std::fmt;

use super::rng::SuiteRng;
use super::Check;
use crate::bounds::{bound_series, comparator_for, evaluate, run_online, TheoremId};
use crate::error::Result;
use crate::learners::{BoundConfig, Learner};
use crate::primitives::{FeasibleSet, LearningRateSchedule};
use crate::streams::{random_linear_stream, GradientCap, LossStream, RandomQuadraticStream};
use crate::tolerance::leq;

const ROUNDS: usize = 200;

/// A learner configured so that one closed-form regret bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundPair {
    /// Dual averaging on an L2 ball, `eta_t = R / (sqrt(2) G sqrt(t + 1))`.
    DualAveraging,
    /// FTRL-Proximal on an L2 ball, `eta_t = sqrt(2) R / (G sqrt(t))`.
    FtrlProximal,
    /// Per-coordinate AdaGrad FTRL-Proximal on a box.
    AdaGrad,
    /// Entropic FTRL on the simplex.
    Entropic,
    /// FTL / OGD with `eta_t = 1/t` on 1-strongly convex losses.
    StronglyConvex,
    /// Fixed-rate dual averaging (lazy projected OGD) on an L2 ball.
    ConstantOgd,
}

impl BoundPair {
    pub const ALL: [BoundPair; 6] = [
        BoundPair::DualAveraging,
        BoundPair::FtrlProximal,
        BoundPair::AdaGrad,
        BoundPair::Entropic,
        BoundPair::StronglyConvex,
        BoundPair::ConstantOgd,
    ];

    pub fn theorem(&self) -> TheoremId {
        match self {
            BoundPair::DualAveraging => TheoremId::DaClosedForm,
            BoundPair::FtrlProximal => TheoremId::ProxClosedForm,
            BoundPair::AdaGrad => TheoremId::AdaGradPerCoord,
            BoundPair::Entropic => TheoremId::Entropic,
            BoundPair::StronglyConvex => TheoremId::StronglyConvexLog,
            BoundPair::ConstantOgd => TheoremId::NonAdaptive,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundPair::DualAveraging => "dual-averaging",
            BoundPair::FtrlProximal => "ftrl-proximal",
            BoundPair::AdaGrad => "adagrad-proximal",
            BoundPair::Entropic => "entropic",
            BoundPair::StronglyConvex => "sc-ogd",
            BoundPair::ConstantOgd => "constant-ogd",
        }
    }

    fn proximal(&self) -> bool {
        matches!(self, BoundPair::FtrlProximal | BoundPair::AdaGrad)
    }
}

impl fmt::Display for BoundPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Instance {
    learner: Learner,
    stream: Box<dyn LossStream>,
    cfg: BoundConfig,
    n: usize,
    set: FeasibleSet,
}

fn instance(pair: BoundPair, rng: &mut SuiteRng) -> Result<Instance> {
    let n = rng.int(if pair == BoundPair::Entropic { 2 } else { 1 }, 5);
    let r = rng.uniform(0.5, 3.0);
    let g = rng.uniform(0.5, 3.0);
    let seed = rng.seed();
    let sparsity = if rng.coin(0.5) { rng.uniform(0.0, 0.8) } else { 0.0 };
    let linear = |cap| -> Result<Box<dyn LossStream>> {
        Ok(Box::new(random_linear_stream(seed, n, cap, ROUNDS)?.with_sparsity(sparsity)))
    };
    let sqrt2 = std::f64::consts::SQRT_2;
    let cfg = BoundConfig::default();
    Ok(match pair {
        BoundPair::DualAveraging => {
            let set = FeasibleSet::l2_ball(r)?;
            let sched = LearningRateSchedule::InverseSqrtT { scale: r / (sqrt2 * g), shift: 1 };
            Instance { learner: Learner::dual_averaging(n, set, sched)?, stream: linear(GradientCap::L2(g))?, cfg: cfg.with_r(r).with_g(g), n, set }
        }
        BoundPair::FtrlProximal => {
            let set = FeasibleSet::l2_ball(r)?;
            let sched = LearningRateSchedule::InverseSqrtT { scale: sqrt2 * r / g, shift: 0 };
            Instance { learner: Learner::ftrl_proximal(n, set, sched)?, stream: linear(GradientCap::L2(g))?, cfg: cfg.with_r(r).with_g(g), n, set }
        }
        BoundPair::AdaGrad => {
            // |g_i| <= G / sqrt(n) keeps ||g||_2 <= G, and the box of half-width
            // R_inf sits inside the ball of radius R_inf sqrt(n)
            let root_n = (n as f64).sqrt();
            let set = FeasibleSet::boxed(r)?;
            let sched = LearningRateSchedule::AdaGradDiagonal { scale: sqrt2 * r, offset: 0.0 };
            Instance {
                learner: Learner::ftrl_proximal(n, set, sched)?,
                stream: linear(GradientCap::Sup(g / root_n))?,
                cfg: cfg.with_r_inf(r).with_g_inf(g / root_n).with_r(r * root_n).with_g(g),
                n,
                set,
            }
        }
        BoundPair::Entropic => Instance {
            learner: Learner::entropic(n, g)?,
            stream: linear(GradientCap::Sup(g))?,
            cfg: cfg.with_g_inf(g).with_n(n),
            n,
            set: FeasibleSet::Simplex,
        },
        BoundPair::StronglyConvex => Instance {
            learner: Learner::strongly_convex_ogd(n)?,
            stream: Box::new(RandomQuadraticStream::new(seed, n, r, ROUNDS)?),
            cfg: cfg.with_g(2.0 * r),
            n,
            set: FeasibleSet::Unconstrained,
        },
        BoundPair::ConstantOgd => {
            let set = FeasibleSet::l2_ball(r)?;
            let sched = LearningRateSchedule::Constant { eta: r / (g * (ROUNDS as f64).sqrt()) };
            Instance { learner: Learner::dual_averaging(n, set, sched)?, stream: linear(GradientCap::L2(g))?, cfg: cfg.with_r(r).with_g(g), n, set }
        }
    })
}

/// Violation counts of one learner/bound pairing over `streams` seeded runs
/// of 200 rounds: regret above the bound, regret above the strong FTRL
/// decomposition, a decreasing bound, and for proximal learners a weak
/// bound not strictly above the proximal bound. The AdaGrad pairing also
/// counts prefixes where the per-coordinate bound exceeds the
/// dimension-free closed form.
pub fn bound_suite(pair: BoundPair, seed: u64, streams: usize) -> Result<Vec<Check>> {
    let mut rng = SuiteRng::new(seed, 100 + pair as u64);
    let (mut above_bound, mut above_decomp, mut decreasing, mut weak, mut adagrad) = (0usize, 0usize, 0usize, 0usize, 0usize);
    for _ in 0..streams {
        let mut inst = instance(pair, &mut rng)?;
        let log = run_online(&mut inst.learner, inst.stream.as_mut(), ROUNDS)?;
        let comparator = comparator_for(&log.losses, &inst.set, inst.n)?;
        let record = evaluate(&log, &comparator, Some((pair.theorem(), &inst.cfg)))?;
        let bound = record.bound.as_deref().unwrap_or(&[]);
        above_bound += (0..record.rounds()).filter(|&t| !leq(record.cum_regret[t], bound[t])).count();
        above_decomp += (0..record.rounds())
            .filter(|&t| !leq(record.cum_regret[t], record.decomposition[t]))
            .count();
        decreasing += bound.windows(2).filter(|w| !leq(w[0], w[1])).count();
        if pair.proximal() {
            let strong = bound_series(TheoremId::FtrlProximal, &inst.cfg, &log.history, &comparator)?;
            let weak_series = bound_series(TheoremId::WeakProximal, &inst.cfg, &log.history, &comparator)?;
            let mut any_gradient = false;
            for t in 0..strong.len() {
                any_gradient |= log.history.gradients()[t].iter().any(|v| *v != 0.0);
                let ok = if any_gradient { weak_series[t] > strong[t] } else { weak_series[t] >= strong[t] };
                weak += usize::from(!ok);
            }
        }
        if pair == BoundPair::AdaGrad {
            let closed = bound_series(TheoremId::ProxClosedForm, &inst.cfg, &log.history, &comparator)?;
            adagrad += bound.iter().zip(&closed).filter(|(a, c)| !leq(**a, **c)).count();
        }
    }
    let name = pair.name();
    let mut checks = vec![
        Check::new(format!("{name}-regret-within-{}", pair.theorem()), above_bound as f64, 0.0, streams),
        Check::new(format!("{name}-decomposition-dominates-regret"), above_decomp as f64, 0.0, streams),
        Check::new(format!("{name}-bound-nondecreasing"), decreasing as f64, 0.0, streams),
    ];
    if pair.proximal() {
        checks.push(Check::new(format!("{name}-weak-bound-strictly-larger"), weak as f64, 0.0, streams));
    }
    if pair == BoundPair::AdaGrad {
        checks.push(Check::new("adagrad-within-prox-closed-form", adagrad as f64, 0.0, streams));
    }
    Ok(checks)
}
