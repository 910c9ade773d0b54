use std::fmt;
use std::str::FromStr;

use super::config::Config;
use crate::bounds::TheoremId;
use crate::error::{Error, Result};
use crate::learners::{BoundConfig, Learner};
use crate::mirror::{MirrorLearner, ProjectionFamily, ProjectionForm, ProjectionLearner};
use crate::primitives::{Centering, CompositePenalty, FeasibleSet, LearningRateSchedule};
use crate::streams::{
    random_linear_stream, read_svmlight, synthetic_logistic, GradientCap, L1Adversary,
    LogisticStream, LossStream, RandomQuadraticStream,
};
use crate::OnlineLearner;

/// Learners selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    DualAveraging,
    ConstantOgd,
    FtrlProximal,
    AdaGradProximal,
    AdaGradDa,
    FtrlL1,
    Entropic,
    ScOgd,
    MdL1,
    LazyProjection,
    GreedyProjection,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 11] = [
        LearnerKind::DualAveraging,
        LearnerKind::ConstantOgd,
        LearnerKind::FtrlProximal,
        LearnerKind::AdaGradProximal,
        LearnerKind::AdaGradDa,
        LearnerKind::FtrlL1,
        LearnerKind::Entropic,
        LearnerKind::ScOgd,
        LearnerKind::MdL1,
        LearnerKind::LazyProjection,
        LearnerKind::GreedyProjection,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LearnerKind::DualAveraging => "dual-averaging",
            LearnerKind::ConstantOgd => "constant-ogd",
            LearnerKind::FtrlProximal => "ftrl-proximal",
            LearnerKind::AdaGradProximal => "adagrad-proximal",
            LearnerKind::AdaGradDa => "adagrad-da",
            LearnerKind::FtrlL1 => "ftrl-l1",
            LearnerKind::Entropic => "entropic",
            LearnerKind::ScOgd => "sc-ogd",
            LearnerKind::MdL1 => "md-l1",
            LearnerKind::LazyProjection => "lazy-projection",
            LearnerKind::GreedyProjection => "greedy-projection",
        }
    }

    /// Bounds that hold for this learner as configured; the first is the
    /// default.
    pub fn bounds(&self) -> &'static [TheoremId] {
        use TheoremId::*;
        match self {
            LearnerKind::DualAveraging => &[DaClosedForm, GeneralFtrl],
            LearnerKind::ConstantOgd | LearnerKind::LazyProjection => {
                &[NonAdaptive, GeneralFtrl, FtrlProximal, WeakProximal]
            }
            LearnerKind::FtrlProximal => &[ProxClosedForm, FtrlProximal, WeakProximal, Composite, GeneralFtrl],
            LearnerKind::AdaGradProximal => &[AdaGradPerCoord, FtrlProximal, WeakProximal, Composite, GeneralFtrl],
            LearnerKind::AdaGradDa => &[GeneralFtrl],
            LearnerKind::FtrlL1 => &[Composite, GeneralFtrl],
            LearnerKind::Entropic => &[Entropic, GeneralFtrl],
            LearnerKind::ScOgd => &[StronglyConvexLog],
            LearnerKind::MdL1 | LearnerKind::GreedyProjection => &[MirrorDescent],
        }
    }

    /// Whether gradients are naturally bounded in the sup norm.
    fn sup_norm(&self) -> bool {
        matches!(self, LearnerKind::AdaGradProximal | LearnerKind::AdaGradDa | LearnerKind::Entropic)
    }

    fn default_set(&self, p: &Params) -> Result<FeasibleSet> {
        Ok(match self {
            LearnerKind::Entropic => FeasibleSet::Simplex,
            LearnerKind::ScOgd => FeasibleSet::Unconstrained,
            LearnerKind::AdaGradProximal | LearnerKind::AdaGradDa => FeasibleSet::boxed(p.r_inf)?,
            LearnerKind::FtrlL1 | LearnerKind::MdL1 if p.stream == StreamKind::Logistic => {
                FeasibleSet::Unconstrained
            }
            LearnerKind::FtrlL1 | LearnerKind::MdL1 => FeasibleSet::boxed(p.r_inf)?,
            _ => FeasibleSet::l2_ball(p.r)?,
        })
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown learner '{s}'")))
    }
}

/// Loss sources selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    RandomLinear,
    RandomQuadratic,
    L1Adversary,
    Logistic,
}

impl StreamKind {
    pub fn name(&self) -> &'static str {
        match self {
            StreamKind::RandomLinear => "random-linear",
            StreamKind::RandomQuadratic => "random-quadratic",
            StreamKind::L1Adversary => "l1-adversary",
            StreamKind::Logistic => "logistic",
        }
    }
}

impl FromStr for StreamKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [StreamKind::RandomLinear, StreamKind::RandomQuadratic, StreamKind::L1Adversary, StreamKind::Logistic]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown stream '{s}'")))
    }
}

/// Numeric settings shared by every learner and stream of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub stream: StreamKind,
    pub rounds: usize,
    pub seed: u64,
    pub n: usize,
    pub r: f64,
    pub g: f64,
    pub r_inf: f64,
    pub g_inf: f64,
    pub lambda: f64,
    pub eta: Option<f64>,
    pub set: Option<FeasibleSet>,
    pub data: Option<String>,
    pub active: Option<usize>,
}

fn parse_set(name: &str, r: f64, r_inf: f64) -> Result<FeasibleSet> {
    match name {
        "ball" => FeasibleSet::l2_ball(r),
        "box" => FeasibleSet::boxed(r_inf),
        "unconstrained" => Ok(FeasibleSet::Unconstrained),
        "simplex" => Ok(FeasibleSet::Simplex),
        other => Err(Error::InvalidArgument(format!("unknown set '{other}'"))),
    }
}

impl Params {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let stream: StreamKind = cfg.parsed("stream", StreamKind::RandomLinear)?;
        let r: f64 = cfg.parsed("R", 1.0)?;
        let g: f64 = cfg.parsed("G", 1.0)?;
        let r_inf = cfg.parsed("R_inf", r)?;
        let n = if stream == StreamKind::L1Adversary { 1 } else { cfg.parsed("n", 5)? };
        let params = Params {
            stream,
            rounds: cfg.parsed("T", 100)?,
            seed: cfg.parsed("seed", 0)?,
            n,
            r,
            g,
            r_inf,
            g_inf: cfg.parsed("G_inf", g)?,
            lambda: cfg.parsed("lambda", 0.0)?,
            eta: cfg.parsed_opt("eta")?,
            set: cfg.get("set").map(|s| parse_set(s, r, r_inf)).transpose()?,
            data: cfg.get("data").map(str::to_string),
            active: cfg.parsed_opt("active")?,
        };
        for (name, v) in [("R", params.r), ("G", params.g), ("R_inf", params.r_inf), ("G_inf", params.g_inf)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(params.lambda >= 0.0 && params.lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {}", params.lambda)));
        }
        if params.n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        Ok(params)
    }

    /// Constant rate for fixed-rate learners: `eta`, else `R / (G sqrt(T))`.
    fn constant_eta(&self) -> f64 {
        self.eta
            .unwrap_or_else(|| self.r / (self.g * (self.rounds.max(1) as f64).sqrt()))
    }

    /// The constants the closed-form bounds read.
    pub fn bound_config(&self) -> BoundConfig {
        BoundConfig::default()
            .with_r(self.r)
            .with_g(self.g)
            .with_r_inf(self.r_inf)
            .with_g_inf(self.g_inf)
            .with_n(self.n)
    }
}

/// Builds the named learner in dimension `p.n`.
pub fn build_learner(kind: LearnerKind, p: &Params) -> Result<Box<dyn OnlineLearner>> {
    let n = p.n;
    let set = match p.set {
        Some(s) => s,
        None => kind.default_set(p)?,
    };
    let sqrt2 = std::f64::consts::SQRT_2;
    let penalty = || CompositePenalty::l1(p.lambda);
    Ok(match kind {
        LearnerKind::DualAveraging => Box::new(Learner::dual_averaging(
            n,
            set,
            LearningRateSchedule::InverseSqrtT { scale: p.r / (sqrt2 * p.g), shift: 1 },
        )?),
        LearnerKind::ConstantOgd => Box::new(Learner::dual_averaging(
            n,
            set,
            LearningRateSchedule::Constant { eta: p.constant_eta() },
        )?),
        LearnerKind::FtrlProximal => Box::new(Learner::ftrl_proximal(
            n,
            set,
            LearningRateSchedule::InverseSqrtT { scale: sqrt2 * p.r / p.g, shift: 0 },
        )?),
        LearnerKind::AdaGradProximal => Box::new(Learner::ftrl_proximal(
            n,
            set,
            LearningRateSchedule::AdaGradDiagonal { scale: sqrt2 * p.r_inf, offset: 0.0 },
        )?),
        LearnerKind::AdaGradDa => Box::new(Learner::dual_averaging(
            n,
            set,
            LearningRateSchedule::AdaGradDiagonal { scale: p.r_inf, offset: p.g_inf },
        )?),
        LearnerKind::FtrlL1 => Box::new(Learner::composite_l1(
            n,
            set,
            LearningRateSchedule::InverseSqrtT { scale: sqrt2 * p.r / p.g, shift: 0 },
            Centering::Proximal,
            penalty()?,
        )?),
        LearnerKind::Entropic => {
            if set != FeasibleSet::Simplex {
                return Err(Error::UnsupportedCombination("entropic learner runs on the simplex".into()));
            }
            Box::new(Learner::entropic(n, p.g_inf)?)
        }
        LearnerKind::ScOgd => {
            if set != FeasibleSet::Unconstrained {
                return Err(Error::UnsupportedCombination("sc-ogd runs unconstrained".into()));
            }
            Box::new(Learner::strongly_convex_ogd(n)?)
        }
        LearnerKind::MdL1 => Box::new(MirrorLearner::new(
            n,
            set,
            LearningRateSchedule::InverseSqrtT { scale: sqrt2 * p.r / p.g, shift: 1 },
            penalty()?,
        )?),
        LearnerKind::LazyProjection => Box::new(ProjectionLearner::new(
            n,
            p.constant_eta(),
            set,
            ProjectionFamily::Lazy,
            ProjectionForm::Projection,
        )?),
        LearnerKind::GreedyProjection => Box::new(ProjectionLearner::new(
            n,
            p.constant_eta(),
            set,
            ProjectionFamily::Greedy,
            ProjectionForm::Projection,
        )?),
    })
}

/// Builds the configured stream; oblivious streams depend only on the seed,
/// so every learner of a comparison sees the same losses.
pub fn build_stream(kind: LearnerKind, p: &Params) -> Result<Box<dyn LossStream>> {
    Ok(match p.stream {
        StreamKind::RandomLinear => {
            let cap = if kind.sup_norm() { GradientCap::Sup(p.g_inf) } else { GradientCap::L2(p.g) };
            Box::new(random_linear_stream(p.seed, p.n, cap, p.rounds)?)
        }
        StreamKind::RandomQuadratic => Box::new(RandomQuadraticStream::new(p.seed, p.n, p.g / 2.0, p.rounds)?),
        StreamKind::L1Adversary => Box::new(L1Adversary::new(p.g, p.lambda, p.rounds)?),
        StreamKind::Logistic => {
            let examples = match &p.data {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
                    read_svmlight(&text)?
                }
                None => synthetic_logistic(p.seed, p.n, p.rounds, p.active.unwrap_or((p.n / 5).max(1)))?,
            };
            Box::new(LogisticStream::new(&examples, p.n)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in LearnerKind::ALL {
            assert_eq!(k.name().parse::<LearnerKind>().unwrap(), k);
            assert!(!k.bounds().is_empty());
        }
        assert!("sgd".parse::<LearnerKind>().is_err());
        assert!("nope".parse::<StreamKind>().is_err());
    }

    #[test]
    fn every_learner_builds_with_defaults() {
        let p = Params::from_config(&Config::parse("n = 3\nlambda = 0.1").unwrap()).unwrap();
        for k in LearnerKind::ALL {
            let l = build_learner(k, &p).unwrap();
            assert_eq!(l.dim(), 3, "{k}");
        }
    }

    #[test]
    fn entropic_needs_simplex() {
        let p = Params::from_config(&Config::parse("set = ball").unwrap()).unwrap();
        assert!(build_learner(LearnerKind::Entropic, &p).is_err());
    }
}
