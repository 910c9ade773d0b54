use crate::error::{Error, Result};
use crate::primitives::{FeasibleSet, Point};
use crate::tolerance::SUBGRADIENT_RESIDUAL;

/// `g^Psi_t`, a subgradient of `alpha_t Psi` at `x_{t+1}` that certifies the
/// mirror-descent step as an FTRL step.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiSubgradient {
    pub value: Point,
    pub round: usize,
}

/// Closed-form `g^Psi_t` for an L1 penalty of weight `weight = alpha_t lambda`
/// plus the indicator of `set`, given one step
/// `x_{t+1} = argmin g.x + alpha_t Psi(x) + sum_i sigma_i (x_i - x_{t,i})^2 / 2`.
///
/// Off zero the L1 part is `weight * sign(x_{t+1,i})`; at zero, and on
/// active constraints, the value is the optimality residual
/// `sigma_i (x_{t,i} - x_{t+1,i}) - g_i`. The result is checked against that
/// residual and against subdifferential membership.
pub fn extract_psi_subgradient(
    x_t: &Point,
    x_next: &Point,
    g: &Point,
    sigma: &[f64],
    weight: f64,
    set: &FeasibleSet,
    round: usize,
) -> Result<PsiSubgradient> {
    let n = x_t.dim();
    x_next.check_dim(n)?;
    g.check_dim(n)?;
    if sigma.len() != n {
        return Err(Error::LengthMismatch {
            left: sigma.len(),
            right: n,
        });
    }
    let residual: Vec<f64> = (0..n)
        .map(|i| sigma[i] * (x_t[i] - x_next[i]) - g[i])
        .collect();
    let scale = |i: usize| 1.0f64.max(g[i].abs()).max((sigma[i] * x_t[i]).abs()).max((sigma[i] * x_next[i]).abs());

    let value: Vec<f64> = match *set {
        FeasibleSet::L2Ball { .. } => residual.clone(),
        FeasibleSet::Box { half_width } => (0..n)
            .map(|i| {
                if x_next[i].abs() >= half_width {
                    residual[i]
                } else {
                    l1_part(x_next[i], weight, residual[i])
                }
            })
            .collect(),
        FeasibleSet::Unconstrained if weight == 0.0 => vec![0.0; n],
        _ => (0..n)
            .map(|i| l1_part(x_next[i], weight, residual[i]))
            .collect(),
    };

    for i in 0..n {
        let tol = SUBGRADIENT_RESIDUAL * scale(i);
        if (value[i] - residual[i]).abs() > tol {
            return Err(Error::InternalConsistency(format!(
                "coordinate {i}: penalty subgradient {} does not close the optimality residual {}",
                value[i], residual[i]
            )));
        }
        let on_boundary = matches!(*set, FeasibleSet::Box { half_width } if x_next[i].abs() >= half_width);
        if on_boundary {
            // L1 part plus an outward normal-cone component
            let normal = value[i] - weight * x_next[i].signum();
            if normal * x_next[i].signum() < -tol {
                return Err(Error::InternalConsistency(format!(
                    "coordinate {i}: normal-cone component points inward"
                )));
            }
        } else if !matches!(set, FeasibleSet::L2Ball { .. }) {
            check_l1_membership(value[i], x_next[i], weight, tol, i)?;
        }
    }
    if let FeasibleSet::L2Ball { radius } = *set {
        check_ball_normal(&value, x_next, radius)?;
    }
    Ok(PsiSubgradient {
        value: Point::new(value)?,
        round,
    })
}

fn l1_part(x: f64, weight: f64, residual: f64) -> f64 {
    if x > 0.0 {
        weight
    } else if x < 0.0 {
        -weight
    } else {
        residual
    }
}

pub(crate) fn check_l1_membership(v: f64, x: f64, weight: f64, tol: f64, i: usize) -> Result<()> {
    let ok = if x == 0.0 {
        v.abs() <= weight + tol
    } else {
        (v - weight * x.signum()).abs() <= tol
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InternalConsistency(format!(
            "coordinate {i}: {v} is not in the L1 subdifferential at {x} (weight {weight})"
        )))
    }
}

/// The normal cone of a ball at `x` is `{mu x : mu >= 0}`, and `{0}` inside.
pub(crate) fn check_ball_normal(v: &[f64], x: &[f64], radius: f64) -> Result<()> {
    let vn = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let xn = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let tol = SUBGRADIENT_RESIDUAL * vn.max(1.0);
    if xn < radius * (1.0 - 1e-9) {
        if vn > tol {
            return Err(Error::InternalConsistency(
                "nonzero normal-cone vector at an interior point".into(),
            ));
        }
        return Ok(());
    }
    let mu = v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / (xn * xn);
    let off: f64 = v
        .iter()
        .zip(x)
        .map(|(a, b)| (a - mu * b).powi(2))
        .sum::<f64>()
        .sqrt();
    if mu < -tol || off > tol {
        return Err(Error::InternalConsistency(
            "ball normal-cone vector is not an outward multiple of the point".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn negative_coordinate_gives_minus_lambda() {
        let s = extract_psi_subgradient(&p(&[0.0]), &p(&[-0.3]), &p(&[0.8]), &[1.0], 0.5, &FeasibleSet::Unconstrained, 1).unwrap();
        assert!((s.value[0] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_coordinate_gives_residual() {
        let s = extract_psi_subgradient(&p(&[2.0]), &p(&[0.0]), &p(&[1.7]), &[1.0], 0.5, &FeasibleSet::Unconstrained, 3).unwrap();
        assert!((s.value[0] - 0.3).abs() < 1e-12);
        assert!(s.value[0].abs() <= 0.5);
        assert_eq!(s.round, 3);
    }

    #[test]
    fn no_penalty_is_zero() {
        let s = extract_psi_subgradient(&p(&[1.0, 2.0]), &p(&[0.5, 1.0]), &p(&[0.5, 1.0]), &[1.0, 1.0], 0.0, &FeasibleSet::Unconstrained, 1).unwrap();
        assert_eq!(s.value.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn inconsistent_step_is_rejected() {
        let r = extract_psi_subgradient(&p(&[0.0]), &p(&[-0.3]), &p(&[5.0]), &[1.0], 0.5, &FeasibleSet::Unconstrained, 1);
        assert!(matches!(r, Err(Error::InternalConsistency(_))));
    }

    #[test]
    fn box_boundary_carries_normal_cone() {
        // unclamped step would reach -2; the box stops it at -1
        let s = extract_psi_subgradient(&p(&[0.0]), &p(&[-1.0]), &p(&[2.0]), &[1.0], 0.0, &FeasibleSet::boxed(1.0).unwrap(), 1).unwrap();
        assert!((s.value[0] + 1.0).abs() < 1e-15);
    }
}
