use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{linear_event, Loss, LossStream, StreamEvent};
use crate::error::{invalid, Result};
use crate::primitives::Point;

/// Norm constraint every emitted gradient satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientCap {
    /// `||g||_2 <= G`.
    L2(f64),
    /// `||g||_inf <= G_inf`.
    Sup(f64),
}

impl GradientCap {
    fn value(&self) -> f64 {
        match *self {
            GradientCap::L2(v) | GradientCap::Sup(v) => v,
        }
    }
}

/// Seeded oblivious stream of linear losses: a fixed random drift plus
/// Gaussian noise, rescaled whenever a sample exceeds the cap.
#[derive(Debug, Clone)]
pub struct RandomLinearStream {
    rng: ChaCha8Rng,
    n: usize,
    cap: GradientCap,
    rounds: usize,
    emitted: usize,
    drift: Vec<f64>,
    sparsity: f64,
}

/// A deterministic (per seed) stream of `rounds` capped gradients in R^n.
pub fn random_linear_stream(
    seed: u64,
    n: usize,
    cap: GradientCap,
    rounds: usize,
) -> Result<RandomLinearStream> {
    if n == 0 {
        return Err(invalid("dimension must be >= 1"));
    }
    let c = cap.value();
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid(format!("gradient cap must be positive, got {c}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drift = (0..n)
        .map(|_| 0.5 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok(RandomLinearStream {
        rng,
        n,
        cap,
        rounds,
        emitted: 0,
        drift,
        sparsity: 0.0,
    })
}

impl RandomLinearStream {
    /// Each coordinate is independently zeroed with probability `p`.
    pub fn with_sparsity(mut self, p: f64) -> Self {
        self.sparsity = p.clamp(0.0, 1.0);
        self
    }

    fn sample(&mut self) -> Point {
        let scale = match self.cap {
            GradientCap::L2(g) => g / (self.n as f64).sqrt(),
            GradientCap::Sup(g) => g / 2.0,
        };
        let mut g: Vec<f64> = (0..self.n)
            .map(|i| {
                let z: f64 = self.rng.sample(StandardNormal);
                let keep = self.sparsity == 0.0 || self.rng.gen::<f64>() >= self.sparsity;
                if keep {
                    (self.drift[i] + z) * scale
                } else {
                    0.0
                }
            })
            .collect();
        let (norm, cap) = match self.cap {
            GradientCap::L2(c) => (g.iter().map(|v| v * v).sum::<f64>().sqrt(), c),
            GradientCap::Sup(c) => (g.iter().fold(0.0f64, |m, v| m.max(v.abs())), c),
        };
        if norm > cap {
            let s = cap / norm;
            g.iter_mut().for_each(|v| *v = (*v * s).clamp(-cap, cap));
            if let GradientCap::L2(c) = self.cap {
                let after = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                if after > c {
                    g.iter_mut().for_each(|v| *v *= c / after);
                }
            }
        }
        Point::new(g).expect("finite samples")
    }
}

impl Iterator for RandomLinearStream {
    type Item = Point;
    fn next(&mut self) -> Option<Point> {
        if self.emitted >= self.rounds {
            return None;
        }
        self.emitted += 1;
        Some(self.sample())
    }
}

impl LossStream for RandomLinearStream {
    fn dim(&self) -> usize {
        self.n
    }

    fn next_event(&mut self, t: usize, _x: &Point) -> Result<Option<StreamEvent>> {
        Ok(self.next().map(|g| linear_event(t, g)))
    }
}

/// Seeded stream of 1-strongly convex losses `||x - z_t||^2 / 2` with
/// centers inside the ball of the given radius, so gradients at points of
/// that ball are bounded by `2 * radius`.
#[derive(Debug, Clone)]
pub struct RandomQuadraticStream {
    rng: ChaCha8Rng,
    n: usize,
    radius: f64,
    rounds: usize,
    emitted: usize,
    drift: Vec<f64>,
}

impl RandomQuadraticStream {
    pub fn new(seed: u64, n: usize, radius: f64, rounds: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let drift = (0..n)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        Ok(RandomQuadraticStream {
            rng,
            n,
            radius,
            rounds,
            emitted: 0,
            drift,
        })
    }

    fn center(&mut self) -> Point {
        let scale = self.radius / (self.n as f64).sqrt();
        let mut z: Vec<f64> = (0..self.n)
            .map(|i| (0.5 * self.drift[i] + self.rng.sample::<f64, _>(StandardNormal)) * scale)
            .collect();
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > self.radius {
            z.iter_mut().for_each(|v| *v *= self.radius / norm);
        }
        Point::new(z).expect("finite samples")
    }
}

impl LossStream for RandomQuadraticStream {
    fn dim(&self) -> usize {
        self.n
    }

    fn next_event(&mut self, t: usize, x: &Point) -> Result<Option<StreamEvent>> {
        if self.emitted >= self.rounds {
            return Ok(None);
        }
        self.emitted += 1;
        let loss = Loss::HalfSquared {
            center: self.center(),
        };
        let gradient = loss.gradient(x)?;
        Ok(Some(StreamEvent {
            round: t,
            gradient,
            loss,
        }))
    }
}
