use crate::error::{Error, Result};

/// Prefix sums of `losses[s] - comparator_losses[s]`.
pub fn cumulative_regret(losses: &[f64], comparator_losses: &[f64]) -> Result<Vec<f64>> {
    if losses.len() != comparator_losses.len() {
        return Err(Error::LengthMismatch {
            left: losses.len(),
            right: comparator_losses.len(),
        });
    }
    let mut total = 0.0;
    Ok(losses
        .iter()
        .zip(comparator_losses)
        .map(|(l, c)| {
            total += l - c;
            total
        })
        .collect())
}

/// Per-round accounting of a finished run. All arrays have length T.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretRecord {
    pub loss: Vec<f64>,
    pub comp_loss: Vec<f64>,
    pub cum_regret: Vec<f64>,
    /// The active theorem bound at each prefix, when one was requested.
    pub bound: Option<Vec<f64>>,
    /// Strong FTRL decomposition at each prefix.
    pub decomposition: Vec<f64>,
}

impl RegretRecord {
    pub fn rounds(&self) -> usize {
        self.loss.len()
    }

    /// First round (1-based) where regret exceeds the bound.
    pub fn first_bound_violation(&self) -> Option<usize> {
        let bound = self.bound.as_ref()?;
        self.cum_regret
            .iter()
            .zip(bound)
            .position(|(r, b)| !crate::tolerance::leq(*r, *b))
            .map(|i| i + 1)
    }

    /// First round (1-based) where regret exceeds the decomposition.
    pub fn first_decomposition_violation(&self) -> Option<usize> {
        self.cum_regret
            .iter()
            .zip(&self.decomposition)
            .position(|(r, d)| !crate::tolerance::leq(*r, *d))
            .map(|i| i + 1)
    }
}
