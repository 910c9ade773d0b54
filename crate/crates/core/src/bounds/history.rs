use crate::error::{Error, Result};
use crate::primitives::{entropy, Point};

/// Regularizer family a learner uses; determines how `r_t` and the dual
/// norms are rebuilt from a [`RoundTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// `r_t(x) = sum_i sigma_{t,i} x_i^2 / 2`.
    QuadraticCentered,
    /// `r_t(x) = sum_i sigma_{t,i} (x_i - x_{t,i})^2 / 2`, `r_0` centered at `x_1`.
    QuadraticProximal,
    /// `r_{0:t}(x) = (1/eta_t) (ln n + sum_i x_i ln x_i)`.
    Entropic,
    /// Follow-the-leader on the quadratic lower bounds of 1-strongly convex
    /// losses; every `r_t` is zero.
    StronglyConvex,
}

/// How the composite penalty of the latest round entered the update.
#[derive(Debug, Clone, PartialEq)]
pub enum PenaltyTrace {
    None,
    /// `alpha_t lambda ||x||_1` kept exact in the objective.
    Native { weight: f64 },
    /// Mirror-descent style: `alpha_t Psi` replaced by its linearization at
    /// `x_{t+1}` with subgradient `g^Psi_t`.
    Linearized { weight: f64, subgradient: Vec<f64> },
}

/// Per-round regularizer information reported by a learner.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    /// `sigma_{0:t}` per coordinate (quadratic) or `[1/eta_t]` (entropic);
    /// empty for strongly convex learners.
    pub inverse_rates: Vec<f64>,
    pub penalty: PenaltyTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyKind {
    None,
    Native,
    Linearized,
}

/// Everything a run leaves behind, stored as prefix accumulators so every
/// `h_{0:t}`, `r_t` and `r_{0:t}` evaluation is O(n).
#[derive(Debug, Clone)]
pub struct RunHistory {
    geometry: Geometry,
    n: usize,
    iterates: Vec<Point>,
    gradients: Vec<Point>,
    g_cum: Vec<Vec<f64>>,
    sq_cum: Vec<Vec<f64>>,
    sup_sq_cum: Vec<f64>,
    inv: Vec<Vec<f64>>,
    quad_b: Vec<Vec<f64>>,
    quad_c: Vec<f64>,
    penalty_kind: PenaltyKind,
    pen_weight: Vec<f64>,
    pen_cum: Vec<f64>,
    psi: Vec<Vec<f64>>,
    psi_cum: Vec<Vec<f64>>,
    psi_const: Vec<f64>,
    sc_const: Vec<f64>,
    sc_lin: Vec<Vec<f64>>,
}

impl RunHistory {
    /// Starts a history at round 0 with iterate `x_1`.
    pub fn new(geometry: Geometry, x1: Point, trace: RoundTrace) -> Result<Self> {
        let n = x1.dim();
        check_rates(geometry, n, &trace.inverse_rates)?;
        let inv0 = trace.inverse_rates.clone();
        let (b0, c0) = match geometry {
            Geometry::QuadraticProximal => (
                inv0.iter().zip(x1.iter()).map(|(s, c)| s * c).collect(),
                inv0.iter().zip(x1.iter()).map(|(s, c)| s * c * c).sum(),
            ),
            _ => (vec![0.0; n], 0.0),
        };
        Ok(RunHistory {
            geometry,
            n,
            iterates: vec![x1],
            gradients: Vec::new(),
            g_cum: vec![vec![0.0; n]],
            sq_cum: vec![vec![0.0; n]],
            sup_sq_cum: vec![0.0],
            inv: vec![inv0],
            quad_b: vec![b0],
            quad_c: vec![c0],
            penalty_kind: PenaltyKind::None,
            pen_weight: vec![0.0],
            pen_cum: vec![0.0],
            psi: vec![vec![0.0; n]],
            psi_cum: vec![vec![0.0; n]],
            psi_const: vec![0.0],
            sc_const: vec![0.0],
            sc_lin: vec![vec![0.0; n]],
        })
    }

    /// Appends round `t = rounds() + 1`: gradient `g_t`, the loss the learner
    /// incurred at `x_t`, the new iterate `x_{t+1}` and the learner's trace.
    pub fn record(&mut self, g: Point, loss_at_iterate: f64, next: Point, trace: RoundTrace) -> Result<()> {
        g.check_dim(self.n)?;
        next.check_dim(self.n)?;
        check_rates(self.geometry, self.n, &trace.inverse_rates)?;
        let t = self.rounds() + 1;
        let x_t = &self.iterates[t - 1];

        let mut g_cum = self.g_cum[t - 1].clone();
        let mut sq_cum = self.sq_cum[t - 1].clone();
        for i in 0..self.n {
            g_cum[i] += g[i];
            sq_cum[i] += g[i] * g[i];
        }
        let sup = g.norm_inf();

        let prev_inv = &self.inv[t - 1];
        let mut b = self.quad_b[t - 1].clone();
        let mut c = self.quad_c[t - 1];
        if matches!(self.geometry, Geometry::QuadraticCentered | Geometry::QuadraticProximal) {
            for i in 0..self.n {
                let sigma = trace.inverse_rates[i] - prev_inv[i];
                if sigma < 0.0 {
                    return Err(Error::InvariantViolation(format!(
                        "regularizer weight decreased at round {t}, coordinate {i}"
                    )));
                }
                if self.geometry == Geometry::QuadraticProximal {
                    b[i] += sigma * x_t[i];
                    c += sigma * x_t[i] * x_t[i];
                }
            }
        }

        let (kind, weight, sub) = match &trace.penalty {
            PenaltyTrace::None => (PenaltyKind::None, 0.0, None),
            PenaltyTrace::Native { weight } => (PenaltyKind::Native, *weight, None),
            PenaltyTrace::Linearized { weight, subgradient } => {
                if subgradient.len() != self.n {
                    return Err(Error::DimensionMismatch {
                        expected: self.n,
                        got: subgradient.len(),
                    });
                }
                (PenaltyKind::Linearized, *weight, Some(subgradient.clone()))
            }
        };
        if kind != PenaltyKind::None {
            if self.penalty_kind != PenaltyKind::None && self.penalty_kind != kind {
                return Err(Error::InternalConsistency(
                    "penalty switched between native and linearized".into(),
                ));
            }
            self.penalty_kind = kind;
        }
        let psi = sub.unwrap_or_else(|| vec![0.0; self.n]);
        let psi_cum: Vec<f64> = self.psi_cum[t - 1].iter().zip(&psi).map(|(a, b)| a + b).collect();
        let mut psi_const = self.psi_const[t - 1];
        if kind == PenaltyKind::Linearized {
            psi_const += weight * next.norm1() - next.dot(&psi);
        }

        let mut sc_lin = self.sc_lin[t - 1].clone();
        let mut sc_const = self.sc_const[t - 1];
        if self.geometry == Geometry::StronglyConvex {
            sc_const += loss_at_iterate - g.dot(x_t) + 0.5 * x_t.dot(x_t);
            for i in 0..self.n {
                sc_lin[i] += g[i] - x_t[i];
            }
        }

        self.gradients.push(g);
        self.iterates.push(next);
        self.g_cum.push(g_cum);
        self.sq_cum.push(sq_cum);
        self.sup_sq_cum.push(self.sup_sq_cum[t - 1] + sup * sup);
        self.inv.push(trace.inverse_rates);
        self.quad_b.push(b);
        self.quad_c.push(c);
        self.pen_weight.push(weight);
        self.pen_cum.push(self.pen_cum[t - 1] + weight);
        self.psi.push(psi);
        self.psi_cum.push(psi_cum);
        self.psi_const.push(psi_const);
        self.sc_const.push(sc_const);
        self.sc_lin.push(sc_lin);
        Ok(())
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn penalty_kind(&self) -> PenaltyKind {
        self.penalty_kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of recorded rounds T.
    pub fn rounds(&self) -> usize {
        self.gradients.len()
    }

    /// `x_1, ..., x_{T+1}`.
    pub fn iterates(&self) -> &[Point] {
        &self.iterates
    }

    /// `g_1, ..., g_T`.
    pub fn gradients(&self) -> &[Point] {
        &self.gradients
    }

    /// `g_{1:t}`.
    pub fn gradient_sum(&self, t: usize) -> &[f64] {
        &self.g_cum[t]
    }

    /// `sum_{s<=t} g_{s,i}^2`.
    pub fn squared_sums(&self, t: usize) -> &[f64] {
        &self.sq_cum[t]
    }

    /// `sum_{s<=t} ||g_s||_inf^2`.
    pub fn sup_squared_sum(&self, t: usize) -> f64 {
        self.sup_sq_cum[t]
    }

    /// `sigma_{0:t}` as reported by the learner.
    pub fn inverse_rates(&self, t: usize) -> &[f64] {
        &self.inv[t]
    }

    /// `alpha_{1:t} lambda`.
    pub fn penalty_cumulative(&self, t: usize) -> f64 {
        self.pen_cum[t]
    }

    /// True when no `r_t` with `t >= 1` adds curvature.
    pub fn is_fixed_regularizer(&self) -> bool {
        self.inv.iter().all(|w| w == &self.inv[0])
    }

    /// The strongly convex part of `r_{0:t}` (quadratic or entropic), without
    /// any penalty terms.
    pub fn base_regularizer(&self, t: usize, x: &[f64]) -> f64 {
        match self.geometry {
            Geometry::QuadraticCentered | Geometry::QuadraticProximal => {
                let a = &self.inv[t];
                let b = &self.quad_b[t];
                let mut v = 0.5 * self.quad_c[t];
                for i in 0..self.n {
                    v += 0.5 * a[i] * x[i] * x[i] - b[i] * x[i];
                }
                v.max(0.0)
            }
            Geometry::Entropic => self.inv[t][0] * entropy(x).unwrap_or(f64::INFINITY),
            Geometry::StronglyConvex => 0.0,
        }
    }

    fn penalty_regularizer(&self, t: usize, x: &[f64]) -> f64 {
        match self.penalty_kind {
            PenaltyKind::None => 0.0,
            PenaltyKind::Native => self.pen_cum[t] * l1(x),
            PenaltyKind::Linearized => self.psi_const[t] + dot(&self.psi_cum[t], x),
        }
    }

    /// `r_{0:t}(x)`, penalty terms included.
    pub fn regularizer(&self, t: usize, x: &[f64]) -> f64 {
        self.base_regularizer(t, x) + self.penalty_regularizer(t, x)
    }

    /// `r_t(x)`, penalty terms included.
    pub fn increment(&self, t: usize, x: &[f64]) -> f64 {
        let base = match self.geometry {
            Geometry::QuadraticCentered | Geometry::QuadraticProximal => {
                let proximal = self.geometry == Geometry::QuadraticProximal;
                let center = &self.iterates[t.saturating_sub(1)];
                let mut v = 0.0;
                for i in 0..self.n {
                    let sigma = if t == 0 {
                        self.inv[0][i]
                    } else {
                        self.inv[t][i] - self.inv[t - 1][i]
                    };
                    let d = if proximal { x[i] - center[i] } else { x[i] };
                    v += 0.5 * sigma * d * d;
                }
                v
            }
            Geometry::Entropic => {
                let w = if t == 0 {
                    self.inv[0][0]
                } else {
                    self.inv[t][0] - self.inv[t - 1][0]
                };
                w * entropy(x).unwrap_or(f64::INFINITY)
            }
            Geometry::StronglyConvex => 0.0,
        };
        let penalty = if t == 0 {
            0.0
        } else {
            match self.penalty_kind {
                PenaltyKind::None => 0.0,
                PenaltyKind::Native => self.pen_weight[t] * l1(x),
                PenaltyKind::Linearized => {
                    let next = &self.iterates[t];
                    let psi = &self.psi[t];
                    let mut v = self.pen_weight[t] * next.norm1();
                    for i in 0..self.n {
                        v += psi[i] * (x[i] - next[i]);
                    }
                    v
                }
            }
        };
        base + penalty
    }

    /// `h_{0:t}(x) = f_{1:t}(x) + r_{0:t}(x)` with the (lower-bounding)
    /// losses the learner actually optimized.
    pub fn objective(&self, t: usize, x: &[f64]) -> f64 {
        let losses = match self.geometry {
            Geometry::StronglyConvex => {
                self.sc_const[t] + dot(&self.sc_lin[t], x) + 0.5 * t as f64 * dot(x, x)
            }
            _ => dot(&self.g_cum[t], x),
        };
        losses + self.regularizer(t, x)
    }

    /// `||g||^2_{(k),*}`: the dual of the norm `r_{0:k}` is 1-strongly convex
    /// with respect to. Infinite when a nonzero coordinate meets zero curvature.
    pub fn dual_norm_sq(&self, k: usize, g: &[f64]) -> Result<f64> {
        match self.geometry {
            Geometry::QuadraticCentered | Geometry::QuadraticProximal => {
                let mut v = 0.0;
                for (gi, ai) in g.iter().zip(&self.inv[k]) {
                    if *gi == 0.0 {
                        continue;
                    }
                    if *ai == 0.0 {
                        return Ok(f64::INFINITY);
                    }
                    v += gi * gi / ai;
                }
                Ok(v)
            }
            Geometry::Entropic => {
                let sup = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if sup == 0.0 {
                    Ok(0.0)
                } else if self.inv[k][0] == 0.0 {
                    Ok(f64::INFINITY)
                } else {
                    Ok(sup * sup / self.inv[k][0])
                }
            }
            Geometry::StronglyConvex => Err(Error::UnsupportedCombination(
                "strongly convex runs have no regularizer norm".into(),
            )),
        }
    }
}

fn check_rates(geometry: Geometry, n: usize, rates: &[f64]) -> Result<()> {
    let expected = match geometry {
        Geometry::QuadraticCentered | Geometry::QuadraticProximal => n,
        Geometry::Entropic => 1,
        Geometry::StronglyConvex => 0,
    };
    if rates.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: rates.len(),
        });
    }
    if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InvalidArgument("inverse rates must be finite and >= 0".into()));
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn trace(rates: &[f64]) -> RoundTrace {
        RoundTrace {
            inverse_rates: rates.to_vec(),
            penalty: PenaltyTrace::None,
        }
    }

    #[test]
    fn proximal_regularizer_matches_direct_sum() {
        let mut h = RunHistory::new(Geometry::QuadraticProximal, p(&[0.0]), trace(&[1.0])).unwrap();
        h.record(p(&[1.0]), 0.0, p(&[-0.5]), trace(&[2.0])).unwrap();
        h.record(p(&[1.0]), -0.5, p(&[-0.8]), trace(&[3.0])).unwrap();
        let x = [0.7];
        let direct = 0.5 * 1.0 * 0.49 + 0.5 * 1.0 * 0.49 + 0.5 * 1.0 * (0.7f64 + 0.5).powi(2);
        assert!((h.regularizer(2, &x) - direct).abs() < 1e-12);
        assert!((h.increment(2, &x) - 0.5 * 1.44).abs() < 1e-12);
        assert_eq!(h.increment(2, &[-0.5]), 0.0);
        assert!((h.objective(2, &x) - (1.4 + direct)).abs() < 1e-12);
    }

    #[test]
    fn dual_norms() {
        let h = RunHistory::new(Geometry::QuadraticCentered, p(&[0.0, 0.0]), trace(&[2.0, 0.0])).unwrap();
        assert_eq!(h.dual_norm_sq(0, &[2.0, 0.0]).unwrap(), 2.0);
        assert_eq!(h.dual_norm_sq(0, &[0.0, 1.0]).unwrap(), f64::INFINITY);
        let e = RunHistory::new(Geometry::Entropic, p(&[0.5, 0.5]), trace(&[4.0])).unwrap();
        assert_eq!(e.dual_norm_sq(0, &[1.0, -2.0]).unwrap(), 1.0);
    }

    #[test]
    fn rejects_shrinking_weights() {
        let mut h = RunHistory::new(Geometry::QuadraticCentered, p(&[0.0]), trace(&[2.0])).unwrap();
        assert!(h.record(p(&[1.0]), 0.0, p(&[-0.5]), trace(&[1.0])).is_err());
    }
}
