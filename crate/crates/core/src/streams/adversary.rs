use super::{linear_event, LossStream, StreamEvent};
use crate::error::{invalid, Error, Result};
use crate::primitives::Point;

/// The adaptive one-dimensional adversary that makes mirror descent with an
/// L1 penalty oscillate: `-(G + lambda)/2` in round 1, then `-G` when
/// `x_t <= 0` and `+G` when `x_t > 0`.
pub fn l1_adversary_next(x_t: f64, t: usize, g: f64, lambda: f64) -> f64 {
    if t <= 1 {
        -(g + lambda) / 2.0
    } else if x_t <= 0.0 {
        -g
    } else {
        g
    }
}

/// [`l1_adversary_next`] as a stream of linear losses.
#[derive(Debug, Clone)]
pub struct L1Adversary {
    g: f64,
    lambda: f64,
    rounds: usize,
}

impl L1Adversary {
    /// Requires `0 <= lambda < G`.
    pub fn new(g: f64, lambda: f64, rounds: usize) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(invalid(format!("G must be positive, got {g}")));
        }
        if !(0.0..g).contains(&lambda) {
            return Err(invalid(format!("need 0 <= lambda < G, got lambda={lambda}, G={g}")));
        }
        Ok(L1Adversary { g, lambda, rounds })
    }
}

impl LossStream for L1Adversary {
    fn dim(&self) -> usize {
        1
    }

    fn next_event(&mut self, t: usize, x: &Point) -> Result<Option<StreamEvent>> {
        if t > self.rounds {
            return Ok(None);
        }
        if x.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: x.dim(),
            });
        }
        let g = l1_adversary_next(x[0], t, self.g, self.lambda);
        Ok(Some(linear_event(t, Point::scalar(g)?)))
    }
}

/// Replays a fixed sequence of linear gradients regardless of the iterates.
#[derive(Debug, Clone)]
pub struct ReplayStream {
    gradients: Vec<Point>,
    dim: usize,
}

impl ReplayStream {
    pub fn new(gradients: Vec<Point>) -> Result<Self> {
        let dim = gradients.first().map(|g| g.dim()).unwrap_or(1);
        for g in &gradients {
            g.check_dim(dim)?;
        }
        Ok(ReplayStream { gradients, dim })
    }
}

impl LossStream for ReplayStream {
    fn dim(&self) -> usize {
        self.dim
    }

    fn next_event(&mut self, t: usize, _x: &Point) -> Result<Option<StreamEvent>> {
        Ok(t.checked_sub(1)
            .and_then(|i| self.gradients.get(i))
            .map(|g| linear_event(t, g.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adversary_examples() {
        assert_eq!(l1_adversary_next(0.0, 1, 11.0, 0.5), -5.75);
        assert_eq!(l1_adversary_next(2.625, 3, 11.0, 0.5), 11.0);
        assert_eq!(l1_adversary_next(0.0, 5, 11.0, 0.5), -11.0);
    }

    #[test]
    fn lambda_must_be_below_g() {
        assert!(L1Adversary::new(1.0, 1.0, 4).is_err());
        assert!(L1Adversary::new(1.0, -0.1, 4).is_err());
        assert!(L1Adversary::new(11.0, 0.5, 16).is_ok());
    }

    #[test]
    fn stream_ends_after_rounds() {
        let mut a = L1Adversary::new(2.0, 0.5, 2).unwrap();
        let x = Point::zeros(1);
        assert!(a.next_event(1, &x).unwrap().is_some());
        assert!(a.next_event(2, &x).unwrap().is_some());
        assert!(a.next_event(3, &x).unwrap().is_none());
    }
}
