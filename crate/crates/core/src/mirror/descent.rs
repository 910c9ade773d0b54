use super::psi::{extract_psi_subgradient, PsiSubgradient};
use crate::bounds::{Geometry, PenaltyTrace, RoundTrace};
use crate::error::{invalid, unsupported, Result};
use crate::primitives::{
    composite_l1_argmin, diagonal_quadratic_argmin, project_l2_ball, softmax_simplex,
    CompositePenalty, FeasibleSet, LearningRateSchedule, Point,
};
use crate::OnlineLearner;

/// Mirror descent state: the current point and the schedule statistics
/// needed to evaluate `sigma_{0:t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorState {
    t: usize,
    x_hat: Point,
    sched: LearningRateSchedule,
    sq_sum: Vec<f64>,
    sup_sq_sum: f64,
    inv_rate: Vec<f64>,
    penalty: CompositePenalty,
    set: FeasibleSet,
    last_psi: Option<PsiSubgradient>,
}

impl MirrorState {
    /// Starts at the minimum-norm feasible point (the uniform distribution
    /// for the entropic regularizer).
    pub fn new(
        n: usize,
        set: FeasibleSet,
        sched: LearningRateSchedule,
        penalty: CompositePenalty,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        set.validate()?;
        sched.validate()?;
        let entropic = matches!(sched, LearningRateSchedule::EntropicWeight { .. });
        match (entropic, set) {
            (true, FeasibleSet::Simplex) if !penalty.is_active() => {}
            (true, _) => {
                return Err(unsupported(
                    "entropic mirror descent needs the simplex and no L1 penalty",
                ))
            }
            (false, FeasibleSet::Simplex) => {
                return Err(unsupported("quadratic mirror descent over the simplex"))
            }
            (false, FeasibleSet::L2Ball { .. }) if penalty.is_active() => {
                return Err(unsupported("L1 penalty over an L2 ball has no closed form"))
            }
            _ => {}
        }
        Ok(MirrorState {
            t: 0,
            x_hat: set.min_norm_point(n),
            sq_sum: vec![0.0; n],
            sup_sq_sum: 0.0,
            inv_rate: vec![sched.inverse_rate(0, 0.0); n],
            sched,
            penalty,
            set,
            last_psi: None,
        })
    }

    pub fn round(&self) -> usize {
        self.t
    }

    /// `x_hat_{t+1}`.
    pub fn current(&self) -> &Point {
        &self.x_hat
    }

    /// `sigma_{0:t}`.
    pub fn inverse_rates(&self) -> &[f64] {
        &self.inv_rate
    }

    pub fn penalty(&self) -> &CompositePenalty {
        &self.penalty
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    /// `g^Psi_t` of the latest round.
    pub fn last_psi(&self) -> Option<&PsiSubgradient> {
        self.last_psi.as_ref()
    }
}

/// `x_hat_{t+1} = argmin_x g_t.x + alpha_t Psi(x) + B_{r_{0:t}}(x, x_hat_t)`.
///
/// Quadratic regularizers: per-coordinate soft thresholding of
/// `g_{t,i} - sigma_{0:t,i} x_hat_{t,i}` at `alpha_t lambda` with curvature
/// `sigma_{0:t,i}`, then the box clamp, or a ball projection. Entropic:
/// the multiplicative-weights update `x_i ∝ x_hat_i exp(-eta_t g_i)`.
pub fn mirror_descent_step(state: &mut MirrorState, g: &Point) -> Result<Point> {
    let n = state.x_hat.dim();
    g.check_dim(n)?;
    let t = state.t + 1;
    let sup = g.norm_inf();
    let sup_sq_sum = state.sup_sq_sum + sup * sup;
    let sq_sum: Vec<f64> = state.sq_sum.iter().zip(g.iter()).map(|(s, v)| s + v * v).collect();
    let inv: Vec<f64> = (0..n)
        .map(|i| {
            let stat = match state.sched {
                LearningRateSchedule::AdaGradDiagonal { .. } => sq_sum[i],
                LearningRateSchedule::EntropicWeight { .. } => sup_sq_sum,
                _ => 0.0,
            };
            state.sched.inverse_rate(t, stat)
        })
        .collect();
    for (i, (now, before)) in inv.iter().zip(&state.inv_rate).enumerate() {
        if now < before {
            return Err(crate::Error::InvariantViolation(format!(
                "learning rate increased at round {t}, coordinate {i}"
            )));
        }
        if *now <= 0.0 {
            return Err(invalid(format!(
                "regularizer has zero curvature at round {t}, coordinate {i}"
            )));
        }
    }
    let weight = state.penalty.weight(t);

    let (x_next, psi) = if let LearningRateSchedule::EntropicWeight { .. } = state.sched {
        let eta = 1.0 / inv[0];
        let z = Point::new(
            state
                .x_hat
                .iter()
                .zip(g.iter())
                .map(|(x, gi)| x.ln() - eta * gi)
                .collect(),
        )?;
        let x = softmax_simplex(&z);
        let psi = PsiSubgradient {
            value: Point::zeros(n),
            round: t,
        };
        (x, psi)
    } else {
        let b: Vec<f64> = (0..n).map(|i| g[i] - inv[i] * state.x_hat[i]).collect();
        let x = match state.set {
            FeasibleSet::L2Ball { radius } if inv.iter().all(|v| *v == inv[0]) => {
                let u = Point::new(
                    state
                        .x_hat
                        .iter()
                        .zip(g.iter())
                        .map(|(x, gi)| x - gi / inv[0])
                        .collect(),
                )?;
                project_l2_ball(&u, radius)?
            }
            FeasibleSet::L2Ball { .. } => diagonal_quadratic_argmin(&b, &inv, &state.set)?,
            _ => composite_l1_argmin(&b, &inv, weight, &state.set)?,
        };
        let psi = extract_psi_subgradient(&state.x_hat, &x, g, &inv, weight, &state.set, t)?;
        (x, psi)
    };

    state.t = t;
    state.sq_sum = sq_sum;
    state.sup_sq_sum = sup_sq_sum;
    state.inv_rate = inv;
    state.x_hat = x_next.clone();
    state.last_psi = Some(psi);
    Ok(x_next)
}

/// Quadratic mirror descent behind the common learner protocol.
#[derive(Debug, Clone)]
pub struct MirrorLearner {
    state: MirrorState,
}

impl MirrorLearner {
    pub fn new(n: usize, set: FeasibleSet, sched: LearningRateSchedule, penalty: CompositePenalty) -> Result<Self> {
        if matches!(sched, LearningRateSchedule::EntropicWeight { .. }) {
            return Err(unsupported(
                "the learner protocol covers quadratic mirror descent only",
            ));
        }
        Ok(MirrorLearner {
            state: MirrorState::new(n, set, sched, penalty)?,
        })
    }

    pub fn state(&self) -> &MirrorState {
        &self.state
    }
}

impl OnlineLearner for MirrorLearner {
    fn dim(&self) -> usize {
        self.state.x_hat.dim()
    }

    fn round(&self) -> usize {
        self.state.t
    }

    fn current(&self) -> &Point {
        &self.state.x_hat
    }

    fn observe(&mut self, g: &Point) -> Result<Point> {
        mirror_descent_step(&mut self.state, g)
    }

    fn trace(&self) -> RoundTrace {
        let t = self.state.t;
        let penalty = match &self.state.last_psi {
            Some(psi) => PenaltyTrace::Linearized {
                weight: self.state.penalty.weight(t),
                subgradient: psi.value.to_vec(),
            },
            None => PenaltyTrace::None,
        };
        RoundTrace {
            inverse_rates: self.state.inv_rate.clone(),
            penalty,
        }
    }

    fn geometry(&self) -> Geometry {
        Geometry::QuadraticProximal
    }

    fn set(&self) -> &FeasibleSet {
        &self.state.set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn plain_gradient_descent() {
        let mut s = MirrorState::new(2, FeasibleSet::Unconstrained, LearningRateSchedule::Constant { eta: 0.25 }, CompositePenalty::none()).unwrap();
        let mut x = vec![0.0, 0.0];
        for g in [[1.0, -2.0], [0.5, 4.0], [-3.0, 0.0]] {
            x = x.iter().zip(g).map(|(a, b)| a - 0.25 * b).collect();
            assert_eq!(mirror_descent_step(&mut s, &p(&g)).unwrap().as_slice(), x.as_slice());
        }
    }

    #[test]
    fn oscillation_example_first_step() {
        let mut s = MirrorState::new(1, FeasibleSet::Unconstrained, LearningRateSchedule::Constant { eta: 0.5 }, CompositePenalty::l1(0.5).unwrap()).unwrap();
        assert_eq!(mirror_descent_step(&mut s, &p(&[-5.75])).unwrap().as_slice(), &[2.625]);
        assert_eq!(mirror_descent_step(&mut s, &p(&[11.0])).unwrap().as_slice(), &[-2.625]);
        assert_eq!(s.last_psi().unwrap().value.as_slice(), &[-0.5]);
    }

    #[test]
    fn three_case_update_hits_zero() {
        let mut s = MirrorState::new(1, FeasibleSet::Unconstrained, LearningRateSchedule::Constant { eta: 1.0 }, CompositePenalty::l1(0.5).unwrap()).unwrap();
        // move to x_hat = 1 first, then |g - x/eta| = 0.2 <= 0.5
        mirror_descent_step(&mut s, &p(&[-1.5])).unwrap();
        assert_eq!(s.current().as_slice(), &[1.0]);
        assert_eq!(mirror_descent_step(&mut s, &p(&[1.2])).unwrap().as_slice(), &[0.0]);
        assert!((s.last_psi().unwrap().value[0] + 0.2).abs() < 1e-12);
    }

    #[test]
    fn entropic_is_multiplicative_weights() {
        let mut s = MirrorState::new(2, FeasibleSet::Simplex, LearningRateSchedule::EntropicWeight { g_inf: 1.0, n: 2 }, CompositePenalty::none()).unwrap();
        let x = mirror_descent_step(&mut s, &p(&[1.0, 0.0])).unwrap();
        let eta = 1.0 / s.inverse_rates()[0];
        let w = [0.5 * (-eta).exp(), 0.5];
        assert!((x[0] - w[0] / (w[0] + w[1])).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(MirrorState::new(2, FeasibleSet::l2_ball(1.0).unwrap(), LearningRateSchedule::Constant { eta: 1.0 }, CompositePenalty::l1(0.1).unwrap()).is_err());
        assert!(MirrorState::new(2, FeasibleSet::Simplex, LearningRateSchedule::Constant { eta: 1.0 }, CompositePenalty::none()).is_err());
        let mut zero = MirrorState::new(1, FeasibleSet::Unconstrained, LearningRateSchedule::InverseT, CompositePenalty::none()).unwrap();
        assert!(mirror_descent_step(&mut zero, &p(&[1.0])).is_ok());
        let mut shift0 = MirrorState::new(1, FeasibleSet::Unconstrained, LearningRateSchedule::Explicit { etas: vec![1.0, 2.0] }, CompositePenalty::none()).unwrap();
        assert!(matches!(mirror_descent_step(&mut shift0, &p(&[1.0])), Err(crate::Error::InvariantViolation(_))));
    }
}
