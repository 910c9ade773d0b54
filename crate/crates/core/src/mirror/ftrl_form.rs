use super::psi::{check_ball_normal, check_l1_membership, PsiSubgradient};
use crate::error::{invalid, unsupported, Error, Result};
use crate::primitives::{
    composite_l1_argmin, diagonal_quadratic_argmin, schedule_sigma, CompositePenalty,
    FeasibleSet, LearningRateSchedule, Point,
};
use crate::tolerance::SUBGRADIENT_RESIDUAL;

/// Mirror descent rewritten as FTRL-Proximal: linear terms from the
/// observed gradients and the earlier penalty subgradients, proximal terms
/// centered at each past iterate, and only the current round's penalty
/// kept exact.
#[derive(Debug, Clone, PartialEq)]
pub struct MdFtrlState {
    t: usize,
    x: Point,
    g_sum: Vec<f64>,
    psi_sum: Vec<f64>,
    /// `sum_{s=0..t} sigma_s x_s`, with `x_0 := x_1`.
    centered_sum: Vec<f64>,
    /// `sum_{s=0..t} sigma_s`, accumulated round by round.
    curvature: Vec<f64>,
    sq_sum: Vec<f64>,
    sched: LearningRateSchedule,
    penalty: CompositePenalty,
    set: FeasibleSet,
    last_psi: Option<PsiSubgradient>,
}

impl MdFtrlState {
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
        match (&sched, set) {
            (LearningRateSchedule::EntropicWeight { .. }, _) => {
                return Err(unsupported("the FTRL form covers quadratic regularizers only"))
            }
            (_, FeasibleSet::Simplex) => {
                return Err(unsupported("quadratic mirror descent over the simplex"))
            }
            (_, FeasibleSet::L2Ball { .. }) if penalty.is_active() => {
                return Err(unsupported("L1 penalty over an L2 ball has no closed form"))
            }
            _ => {}
        }
        let x = set.min_norm_point(n);
        let sigma0 = schedule_sigma(&sched, 0, 0.0, 0.0)?;
        Ok(MdFtrlState {
            t: 0,
            centered_sum: x.iter().map(|v| sigma0 * v).collect(),
            x,
            g_sum: vec![0.0; n],
            psi_sum: vec![0.0; n],
            curvature: vec![sigma0; n],
            sq_sum: vec![0.0; n],
            sched,
            penalty,
            set,
            last_psi: None,
        })
    }

    pub fn round(&self) -> usize {
        self.t
    }

    pub fn current(&self) -> &Point {
        &self.x
    }

    /// `g^Psi_{1:t}`.
    pub fn psi_sum(&self) -> &[f64] {
        &self.psi_sum
    }

    pub fn last_psi(&self) -> Option<&PsiSubgradient> {
        self.last_psi.as_ref()
    }
}

/// `x_{t+1} = argmin (g_{1:t} + g^Psi_{1:t-1}).x + alpha_t Psi(x)
///   + sum_{s=0..t} sigma_s ||x - x_s||^2 / 2`, followed by extraction of
/// `g^Psi_t = -(b + a x_{t+1})` from the first-order condition.
pub fn md_as_ftrl_step(state: &mut MdFtrlState, g: &Point) -> Result<Point> {
    let n = state.x.dim();
    g.check_dim(n)?;
    let t = state.t + 1;
    let adaptive = state.sched.is_per_coordinate();
    let mut sq_sum = state.sq_sum.clone();
    let mut curvature = state.curvature.clone();
    let mut centered_sum = state.centered_sum.clone();
    let mut g_sum = state.g_sum.clone();
    for i in 0..n {
        sq_sum[i] += g[i] * g[i];
        let (prev, now) = if adaptive { (state.sq_sum[i], sq_sum[i]) } else { (0.0, 0.0) };
        let sigma = schedule_sigma(&state.sched, t, prev, now)?;
        curvature[i] += sigma;
        centered_sum[i] += sigma * state.x[i];
        g_sum[i] += g[i];
        if curvature[i] <= 0.0 {
            return Err(invalid(format!(
                "regularizer has zero curvature at round {t}, coordinate {i}"
            )));
        }
    }
    let b: Vec<f64> = (0..n)
        .map(|i| g_sum[i] + state.psi_sum[i] - centered_sum[i])
        .collect();
    let weight = state.penalty.weight(t);
    let x = match state.set {
        FeasibleSet::L2Ball { .. } => diagonal_quadratic_argmin(&b, &curvature, &state.set)?,
        _ => composite_l1_argmin(&b, &curvature, weight, &state.set)?,
    };
    let psi: Vec<f64> = (0..n).map(|i| -(b[i] + curvature[i] * x[i])).collect();
    check_psi(&psi, &x, &b, &curvature, weight, &state.set)?;

    state.t = t;
    state.x = x.clone();
    state.g_sum = g_sum;
    state.sq_sum = sq_sum;
    state.curvature = curvature;
    state.centered_sum = centered_sum;
    for (s, v) in state.psi_sum.iter_mut().zip(&psi) {
        *s += v;
    }
    state.last_psi = Some(PsiSubgradient {
        value: Point::new(psi)?,
        round: t,
    });
    Ok(x)
}

fn check_psi(
    psi: &[f64],
    x: &Point,
    b: &[f64],
    a: &[f64],
    weight: f64,
    set: &FeasibleSet,
) -> Result<()> {
    match *set {
        FeasibleSet::L2Ball { radius } => check_ball_normal(psi, x, radius),
        _ => {
            for i in 0..psi.len() {
                let tol = SUBGRADIENT_RESIDUAL * 1f64.max(b[i].abs()).max((a[i] * x[i]).abs());
                let boundary = matches!(*set, FeasibleSet::Box { half_width } if x[i].abs() >= half_width);
                if boundary {
                    let normal = psi[i] - weight * x[i].signum();
                    if normal * x[i].signum() < -tol {
                        return Err(Error::InternalConsistency(format!(
                            "coordinate {i}: normal-cone component points inward"
                        )));
                    }
                } else {
                    check_l1_membership(psi[i], x[i], weight, tol, i)?;
                }
            }
            Ok(())
        }
    }
}
