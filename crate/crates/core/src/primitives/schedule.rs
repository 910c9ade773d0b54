use crate::error::{invalid, Error, Result};

/// A learning-rate family. `inverse_rate(t, stat)` returns `1/eta_t`, the
/// cumulative strong-convexity weight `sigma_{0:t}`.
///
/// `stat` is the accumulated statistic the family adapts to: the
/// per-coordinate sum of squared gradients for [`AdaGradDiagonal`], the sum
/// of squared sup-norms for [`EntropicWeight`], ignored otherwise.
///
/// [`AdaGradDiagonal`]: LearningRateSchedule::AdaGradDiagonal
/// [`EntropicWeight`]: LearningRateSchedule::EntropicWeight
#[derive(Debug, Clone, PartialEq)]
pub enum LearningRateSchedule {
    /// `eta_t = eta`.
    Constant { eta: f64 },
    /// `eta_t = scale / sqrt(t + shift)`, shift in {0, 1}; shift 0 gives
    /// `1/eta_0 = 0`.
    InverseSqrtT { scale: f64, shift: u32 },
    /// `eta_{t,i} = scale / sqrt(offset^2 + sum_{s<=t} g_{s,i}^2)`.
    AdaGradDiagonal { scale: f64, offset: f64 },
    /// `eta_t = 1/t` (`1/eta_0 = 0`).
    InverseT,
    /// `eta_t = sqrt(ln n) / sqrt(g_inf^2 + sum_{s<=t} ||g_s||_inf^2)`.
    EntropicWeight { g_inf: f64, n: usize },
    /// Caller-supplied `eta_0, eta_1, ...`; the last entry repeats.
    Explicit { etas: Vec<f64> },
}

impl LearningRateSchedule {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            LearningRateSchedule::Constant { eta } => positive("eta", *eta),
            LearningRateSchedule::InverseSqrtT { scale, shift } => {
                positive("scale", *scale)?;
                if *shift > 1 {
                    return Err(invalid(format!("shift must be 0 or 1, got {shift}")));
                }
                Ok(())
            }
            LearningRateSchedule::AdaGradDiagonal { scale, offset } => {
                positive("scale", *scale)?;
                if *offset >= 0.0 && offset.is_finite() {
                    Ok(())
                } else {
                    Err(invalid(format!("offset must be >= 0, got {offset}")))
                }
            }
            LearningRateSchedule::InverseT => Ok(()),
            LearningRateSchedule::EntropicWeight { g_inf, n } => {
                positive("g_inf", *g_inf)?;
                if *n < 2 {
                    return Err(invalid("entropic weight needs n >= 2"));
                }
                Ok(())
            }
            LearningRateSchedule::Explicit { etas } => {
                if etas.is_empty() {
                    return Err(invalid("explicit schedule needs at least eta_0"));
                }
                etas.iter().try_for_each(|e| positive("eta", *e))
            }
        }
    }

    /// `1/eta_t`; zero encodes an infinite rate.
    pub fn inverse_rate(&self, t: usize, stat: f64) -> f64 {
        match self {
            LearningRateSchedule::Constant { eta } => 1.0 / eta,
            LearningRateSchedule::InverseSqrtT { scale, shift } => {
                ((t + *shift as usize) as f64).sqrt() / scale
            }
            LearningRateSchedule::AdaGradDiagonal { scale, offset } => {
                (offset * offset + stat).sqrt() / scale
            }
            LearningRateSchedule::InverseT => t as f64,
            LearningRateSchedule::EntropicWeight { g_inf, n } => {
                (g_inf * g_inf + stat).sqrt() / (*n as f64).ln().sqrt()
            }
            LearningRateSchedule::Explicit { etas } => 1.0 / etas[t.min(etas.len() - 1)],
        }
    }

    /// `eta_t`, possibly `+inf`.
    pub fn rate(&self, t: usize, stat: f64) -> f64 {
        let inv = self.inverse_rate(t, stat);
        if inv == 0.0 {
            f64::INFINITY
        } else {
            1.0 / inv
        }
    }

    /// True when rates differ across coordinates.
    pub fn is_per_coordinate(&self) -> bool {
        matches!(self, LearningRateSchedule::AdaGradDiagonal { .. })
    }
}

/// `sigma_t = 1/eta_t - 1/eta_{t-1}` (and `sigma_0 = 1/eta_0`) for one
/// coordinate whose statistic moved from `prev_stat` to `stat`.
pub fn schedule_sigma(
    sched: &LearningRateSchedule,
    t: usize,
    prev_stat: f64,
    stat: f64,
) -> Result<f64> {
    let now = sched.inverse_rate(t, stat);
    if t == 0 {
        return Ok(now);
    }
    let before = sched.inverse_rate(t - 1, prev_stat);
    if now < before {
        return Err(Error::InvariantViolation(format!(
            "learning rate increased at round {t}: 1/eta went from {before} to {now}"
        )));
    }
    Ok(now - before)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sigma() {
        let s = LearningRateSchedule::Constant { eta: 0.5 };
        assert_eq!(schedule_sigma(&s, 0, 0.0, 0.0).unwrap(), 2.0);
        for t in 1..5 {
            assert_eq!(schedule_sigma(&s, t, 0.0, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn inverse_t_sigma_is_one() {
        let s = LearningRateSchedule::InverseT;
        assert_eq!(schedule_sigma(&s, 0, 0.0, 0.0).unwrap(), 0.0);
        for t in 1..10 {
            assert_eq!(schedule_sigma(&s, t, 0.0, 0.0).unwrap(), 1.0);
        }
        assert_eq!(s.rate(0, 0.0), f64::INFINITY);
    }

    #[test]
    fn adagrad_sigma_example() {
        let s = LearningRateSchedule::AdaGradDiagonal {
            scale: 2f64.sqrt(),
            offset: 0.0,
        };
        assert!((s.rate(1, 9.0) - 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((s.rate(2, 25.0) - 2f64.sqrt() / 5.0).abs() < 1e-15);
        let sigma = schedule_sigma(&s, 2, 9.0, 25.0).unwrap();
        assert!((sigma - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn increasing_rate_is_rejected() {
        let s = LearningRateSchedule::Explicit {
            etas: vec![1.0, 0.5, 0.8],
        };
        assert!(schedule_sigma(&s, 1, 0.0, 0.0).is_ok());
        assert!(matches!(
            schedule_sigma(&s, 2, 0.0, 0.0),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn validation() {
        assert!(LearningRateSchedule::Constant { eta: 0.0 }.validate().is_err());
        assert!(LearningRateSchedule::InverseSqrtT { scale: 1.0, shift: 2 }
            .validate()
            .is_err());
        assert!(LearningRateSchedule::AdaGradDiagonal { scale: 1.0, offset: -1.0 }
            .validate()
            .is_err());
        assert!(LearningRateSchedule::EntropicWeight { g_inf: 1.0, n: 1 }
            .validate()
            .is_err());
        assert!(LearningRateSchedule::Explicit { etas: vec![] }.validate().is_err());
    }
}
