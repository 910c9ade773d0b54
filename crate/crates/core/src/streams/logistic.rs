use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::svmlight::Example;
use super::{Loss, LossStream, StreamEvent};
use crate::error::{invalid, Result};
use crate::primitives::Point;

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `-y ln p - (1 - y) ln(1 - p)` with `p = sigmoid(a . x)`.
pub fn logistic_loss(x: &[f64], a: &[f64], y: f64) -> f64 {
    let z: f64 = a.iter().zip(x).map(|(u, v)| u * v).sum();
    softplus(z) - y * z
}

/// `(sigmoid(a . x) - y) a`.
pub fn logistic_example_gradient(x: &Point, a: &Point, y: f64) -> Result<Point> {
    a.check_dim(x.dim())?;
    let residual = sigmoid(a.dot(x)) - y;
    Point::new(a.iter().map(|v| residual * v).collect())
}

/// Online logistic regression over a fixed list of examples.
#[derive(Debug, Clone)]
pub struct LogisticStream {
    examples: Vec<(Point, f64)>,
    n: usize,
}

impl LogisticStream {
    /// Densifies every example to dimension `n`.
    pub fn new(examples: &[Example], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        let examples = examples
            .iter()
            .map(|e| Ok((e.dense(n)?, e.label() as f64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LogisticStream { examples, n })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

impl LossStream for LogisticStream {
    fn dim(&self) -> usize {
        self.n
    }

    fn next_event(&mut self, t: usize, x: &Point) -> Result<Option<StreamEvent>> {
        let Some((a, y)) = t.checked_sub(1).and_then(|i| self.examples.get(i)) else {
            return Ok(None);
        };
        Ok(Some(StreamEvent {
            round: t,
            gradient: logistic_example_gradient(x, a, *y)?,
            loss: Loss::Logistic {
                features: a.clone(),
                label: *y,
            },
        }))
    }
}

/// Seeded synthetic data from a sparse logistic model: `active` of the `n`
/// true weights are nonzero, each feature is present with probability 0.3.
pub fn synthetic_logistic(seed: u64, n: usize, rounds: usize, active: usize) -> Result<Vec<Example>> {
    if n == 0 || active > n {
        return Err(invalid("need n >= 1 and active <= n"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = vec![0.0; n];
    for w in weights.iter_mut().take(active) {
        *w = 2.0 * rng.sample::<f64, _>(StandardNormal);
    }
    (0..rounds)
        .map(|_| {
            let mut features = BTreeMap::new();
            let mut z = 0.0;
            for (i, w) in weights.iter().enumerate() {
                if rng.gen::<f64>() < 0.3 {
                    let v: f64 = rng.sample(StandardNormal);
                    features.insert(i + 1, v);
                    z += w * v;
                }
            }
            let label = u8::from(rng.gen::<f64>() < sigmoid(z));
            Example::new(label, features)
        })
        .collect()
}
