use super::history::RunHistory;
use crate::error::{Error, Result};
use crate::primitives::Point;

/// An FTRL objective `h_{0:t} = f_{1:t} + r_{0:t}` that can be evaluated at
/// arbitrary points, together with its regularizer pieces.
pub trait FtrlObjective {
    /// Number of completed rounds T.
    fn rounds(&self) -> usize;
    /// `h_{0:t}(x)`.
    fn cumulative_objective(&self, t: usize, x: &[f64]) -> f64;
    /// `r_t(x)`.
    fn regularizer_increment(&self, t: usize, x: &[f64]) -> f64;
    /// `r_{0:t}(x)`.
    fn cumulative_regularizer(&self, t: usize, x: &[f64]) -> f64;
}

impl FtrlObjective for RunHistory {
    fn rounds(&self) -> usize {
        RunHistory::rounds(self)
    }

    fn cumulative_objective(&self, t: usize, x: &[f64]) -> f64 {
        self.objective(t, x)
    }

    fn regularizer_increment(&self, t: usize, x: &[f64]) -> f64 {
        self.increment(t, x)
    }

    fn cumulative_regularizer(&self, t: usize, x: &[f64]) -> f64 {
        self.regularizer(t, x)
    }
}

/// `r_{0:T}(x*) + sum_{t=1}^{T} [h_{0:t}(x_t) - h_{0:t}(x_{t+1}) - r_t(x_t)]`,
/// an upper bound on the regret against `x*` whenever every `x_{t+1}`
/// minimizes `h_{0:t}` and `r_0(x_1) >= 0`.
pub fn strong_ftrl_decomposition(
    objective: &dyn FtrlObjective,
    iterates: &[Point],
    comparator: &Point,
) -> Result<f64> {
    let prefix = strong_ftrl_prefix(objective, iterates, comparator)?;
    Ok(prefix
        .last()
        .copied()
        .unwrap_or_else(|| objective.cumulative_regularizer(0, comparator)))
}

/// The decomposition evaluated at every prefix `t = 1..=T`.
pub fn strong_ftrl_prefix(
    objective: &dyn FtrlObjective,
    iterates: &[Point],
    comparator: &Point,
) -> Result<Vec<f64>> {
    let rounds = objective.rounds();
    if iterates.len() != rounds + 1 {
        return Err(Error::LengthMismatch {
            left: iterates.len(),
            right: rounds + 1,
        });
    }
    let mut stability = 0.0;
    let mut out = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let x_t = &iterates[t - 1];
        let x_next = &iterates[t];
        stability += objective.cumulative_objective(t, x_t)
            - objective.cumulative_objective(t, x_next)
            - objective.regularizer_increment(t, x_t);
        out.push(objective.cumulative_regularizer(t, comparator) + stability);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{Geometry, PenaltyTrace, RoundTrace};

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn trace(rate: f64) -> RoundTrace {
        RoundTrace {
            inverse_rates: vec![rate],
            penalty: PenaltyTrace::None,
        }
    }

    #[test]
    fn single_round_equality() {
        let mut h = RunHistory::new(Geometry::QuadraticCentered, p(&[0.0]), trace(1.0)).unwrap();
        h.record(p(&[1.0]), 0.0, p(&[-1.0]), trace(1.0)).unwrap();
        let rhs = strong_ftrl_decomposition(&h, h.iterates(), &p(&[-1.0])).unwrap();
        assert!((rhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_gradients_leave_regularizer_only() {
        let mut h = RunHistory::new(Geometry::QuadraticCentered, p(&[0.0, 0.0]), trace_n(2.0)).unwrap();
        for _ in 0..3 {
            h.record(p(&[0.0, 0.0]), 0.0, p(&[0.0, 0.0]), trace_n(2.0)).unwrap();
        }
        let x = p(&[0.5, -1.0]);
        let rhs = strong_ftrl_decomposition(&h, h.iterates(), &x).unwrap();
        assert!((rhs - 1.25).abs() < 1e-15);
    }

    fn trace_n(rate: f64) -> RoundTrace {
        RoundTrace {
            inverse_rates: vec![rate, rate],
            penalty: PenaltyTrace::None,
        }
    }

    #[test]
    fn iterate_count_mismatch() {
        let h = RunHistory::new(Geometry::QuadraticCentered, p(&[0.0]), trace(1.0)).unwrap();
        assert!(strong_ftrl_decomposition(&h, &[p(&[0.0]), p(&[1.0])], &p(&[0.0])).is_err());
    }
}
