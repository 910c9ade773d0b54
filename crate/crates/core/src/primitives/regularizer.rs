use super::point::Point;
use crate::error::{invalid, Error, Result};

/// Where the incremental regularizers r_t are minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// Every r_t is minimized at the origin (dual averaging).
    Centered,
    /// r_t is minimized at the current iterate x_t.
    Proximal,
}

/// Functional form of a regularizer snapshot.
#[derive(Debug, Clone, PartialEq)]
pub enum RegularizerBase {
    /// `sum_i w_i x_i^2 / 2`.
    Quadratic { weights: Vec<f64> },
    /// `weight * (ln n + sum_i x_i ln x_i)`.
    Entropic { weight: f64 },
}

/// A regularizer snapshot, e.g. `r_{0:t}` at a fixed round.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizerSpec {
    base: RegularizerBase,
    centering: Centering,
}

impl RegularizerSpec {
    pub fn quadratic(weights: Vec<f64>, centering: Centering) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(invalid("quadratic weights must be finite and >= 0"));
        }
        Ok(RegularizerSpec {
            base: RegularizerBase::Quadratic { weights },
            centering,
        })
    }

    pub fn entropic(weight: f64) -> Result<Self> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(invalid("entropic weight must be finite and >= 0"));
        }
        Ok(RegularizerSpec {
            base: RegularizerBase::Entropic { weight },
            centering: Centering::Centered,
        })
    }

    pub fn base(&self) -> &RegularizerBase {
        &self.base
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }

    /// Value of the regularizer centered at the origin.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        match &self.base {
            RegularizerBase::Quadratic { weights } => {
                check_len(weights.len(), x.len())?;
                Ok(weights.iter().zip(x).map(|(w, v)| w * v * v / 2.0).sum())
            }
            RegularizerBase::Entropic { weight } => Ok(weight * entropy(x)?),
        }
    }
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        })
    }
}

/// `ln n + sum_i x_i ln x_i` with `0 ln 0 = 0`; zero at the uniform point.
pub fn entropy(x: &[f64]) -> Result<f64> {
    if x.iter().any(|v| *v < 0.0) {
        return Err(Error::Domain("entropy needs nonnegative coordinates".into()));
    }
    let n = x.len() as f64;
    Ok(n.ln() + x.iter().map(|v| xlogx(*v)).sum::<f64>())
}

fn xlogx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

/// `B_r(u, v) = r(u) - r(v) - grad r(v) . (u - v)`.
///
/// Quadratic: `sum_i w_i (u_i - v_i)^2 / 2`. Entropic:
/// `weight * sum_i [u_i ln(u_i/v_i) - u_i + v_i]`, the generalized KL
/// divergence, which reduces to KL(u || v) on the simplex.
pub fn bregman_divergence(reg: &RegularizerSpec, u: &Point, v: &Point) -> Result<f64> {
    check_len(u.dim(), v.dim())?;
    match &reg.base {
        RegularizerBase::Quadratic { weights } => {
            check_len(weights.len(), u.dim())?;
            Ok(weights
                .iter()
                .zip(u.iter().zip(v.iter()))
                .map(|(w, (a, b))| w * (a - b) * (a - b) / 2.0)
                .sum())
        }
        RegularizerBase::Entropic { weight } => {
            if v.iter().any(|b| *b <= 0.0) {
                return Err(Error::Domain(
                    "entropic divergence needs a strictly positive second argument".into(),
                ));
            }
            if u.iter().any(|a| *a < 0.0) {
                return Err(Error::Domain(
                    "entropic divergence needs a nonnegative first argument".into(),
                ));
            }
            let sum: f64 = u
                .iter()
                .zip(v.iter())
                .map(|(a, b)| xlogx(*a) - a * b.ln() - a + b)
                .sum();
            Ok(weight * sum.max(0.0))
        }
    }
}

/// Which rounds the composite penalty is active in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaSchedule {
    /// `alpha_t = 1` for every round.
    AllRounds,
    /// `alpha_1 = 1`, zero afterwards.
    FirstRoundOnly,
    /// No penalty.
    Zero,
}

/// The non-smooth term `alpha_t * lambda * ||x||_1` kept exact in updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositePenalty {
    lambda: f64,
    alpha: AlphaSchedule,
}

impl CompositePenalty {
    pub fn new(lambda: f64, alpha: AlphaSchedule) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(CompositePenalty { lambda, alpha })
    }

    /// An L1 penalty applied every round.
    pub fn l1(lambda: f64) -> Result<Self> {
        CompositePenalty::new(lambda, AlphaSchedule::AllRounds)
    }

    pub fn none() -> Self {
        CompositePenalty {
            lambda: 0.0,
            alpha: AlphaSchedule::Zero,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn schedule(&self) -> AlphaSchedule {
        self.alpha
    }

    pub fn is_active(&self) -> bool {
        self.lambda > 0.0 && self.alpha != AlphaSchedule::Zero
    }

    /// `alpha_t` for round `t >= 1`.
    pub fn alpha(&self, t: usize) -> f64 {
        match self.alpha {
            AlphaSchedule::AllRounds if t >= 1 => 1.0,
            AlphaSchedule::FirstRoundOnly if t == 1 => 1.0,
            _ => 0.0,
        }
    }

    /// `alpha_{1:t}`.
    pub fn alpha_sum(&self, t: usize) -> f64 {
        match self.alpha {
            AlphaSchedule::AllRounds => t as f64,
            AlphaSchedule::FirstRoundOnly => t.min(1) as f64,
            AlphaSchedule::Zero => 0.0,
        }
    }

    /// `alpha_t * lambda`.
    pub fn weight(&self, t: usize) -> f64 {
        self.alpha(t) * self.lambda
    }

    /// `alpha_{1:t} * lambda`.
    pub fn cumulative_weight(&self, t: usize) -> f64 {
        self.alpha_sum(t) * self.lambda
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn quadratic_divergence() {
        let r = RegularizerSpec::quadratic(vec![1.0, 1.0], Centering::Centered).unwrap();
        assert_eq!(bregman_divergence(&r, &p(&[1.0, 0.0]), &p(&[0.0, 0.0])).unwrap(), 0.5);
        assert_eq!(bregman_divergence(&r, &p(&[0.3, 2.0]), &p(&[0.3, 2.0])).unwrap(), 0.0);
    }

    #[test]
    fn entropic_divergence_is_kl() {
        let r = RegularizerSpec::entropic(1.0).unwrap();
        let u = p(&[0.5, 0.5]);
        let v = p(&[0.9, 0.1]);
        let direct: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * (a / b).ln()).sum();
        let d = bregman_divergence(&r, &u, &v).unwrap();
        assert!((d - direct).abs() < 1e-15);
        assert!((d - 0.510_825_623_765_990_7).abs() < 1e-12);
        assert!(bregman_divergence(&r, &v, &v).unwrap().abs() < 1e-15);
        assert!(matches!(
            bregman_divergence(&r, &u, &p(&[1.0, 0.0])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn entropy_is_zero_at_uniform() {
        assert!(entropy(&[0.25; 4]).unwrap().abs() < 1e-15);
        assert!((entropy(&[1.0, 0.0]).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn penalty_weights() {
        let all = CompositePenalty::l1(0.5).unwrap();
        assert_eq!(all.cumulative_weight(4), 2.0);
        assert_eq!(all.weight(3), 0.5);
        let first = CompositePenalty::new(0.5, AlphaSchedule::FirstRoundOnly).unwrap();
        assert_eq!(first.cumulative_weight(4), 0.5);
        assert_eq!(first.weight(2), 0.0);
        assert!(CompositePenalty::l1(-1.0).is_err());
        assert!(!CompositePenalty::none().is_active());
    }
}
