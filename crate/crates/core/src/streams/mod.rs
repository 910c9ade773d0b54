//! Loss and gradient sources: the one-dimensional L1 adversary, seeded
//! random linear and quadratic streams, and online logistic regression over
//! svmlight data.

mod adversary;
mod logistic;
mod random;
mod svmlight;

pub use adversary::{l1_adversary_next, L1Adversary, ReplayStream};
pub use logistic::{logistic_example_gradient, logistic_loss, synthetic_logistic, LogisticStream};
pub use random::{random_linear_stream, GradientCap, RandomLinearStream, RandomQuadraticStream};
pub use svmlight::{parse_svmlight, parse_svmlight_line, read_svmlight, Example};

use crate::error::Result;
use crate::primitives::Point;

/// A convex loss revealed in one round.
#[derive(Debug, Clone, PartialEq)]
pub enum Loss {
    /// `f(x) = g . x`.
    Linear { g: Point },
    /// `f(x) = ||x - center||^2 / 2` (1-strongly convex).
    HalfSquared { center: Point },
    /// Negative log-likelihood of `label` under `sigmoid(features . x)`.
    Logistic { features: Point, label: f64 },
}

impl Loss {
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Loss::Linear { g } => g.dot(x),
            Loss::HalfSquared { center } => {
                0.5 * center
                    .iter()
                    .zip(x)
                    .map(|(c, v)| (v - c) * (v - c))
                    .sum::<f64>()
            }
            Loss::Logistic { features, label } => logistic_loss(x, features, *label),
        }
    }

    pub fn gradient(&self, x: &Point) -> Result<Point> {
        match self {
            Loss::Linear { g } => Ok(g.clone()),
            Loss::HalfSquared { center } => {
                Point::new(x.iter().zip(center.iter()).map(|(v, c)| v - c).collect())
            }
            Loss::Logistic { features, label } => logistic_example_gradient(x, features, *label),
        }
    }
}

/// One round of a stream: the loss and its subgradient at the played point.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamEvent {
    pub round: usize,
    pub gradient: Point,
    pub loss: Loss,
}

/// A single-consumer source of losses. The stream sees `x_t` before
/// revealing `f_t`, so adaptive adversaries are expressible.
pub trait LossStream: Send {
    fn dim(&self) -> usize;
    /// The loss of round `t` given the learner's choice `x`, or `None` once
    /// the stream is exhausted.
    fn next_event(&mut self, t: usize, x: &Point) -> Result<Option<StreamEvent>>;
}

pub(crate) fn linear_event(round: usize, g: Point) -> StreamEvent {
    StreamEvent {
        round,
        gradient: g.clone(),
        loss: Loss::Linear { g },
    }
}
