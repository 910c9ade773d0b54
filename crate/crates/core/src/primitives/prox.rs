use super::point::{norm2, Point};
use super::sets::FeasibleSet;
use crate::error::{invalid, unsupported, Error, Result};

/// `argmin_x b x + lambda |x| + (a/2) x^2`: zero when `|b| <= lambda`,
/// otherwise `-(b - sign(b) lambda) / a`.
pub fn soft_threshold_argmin(b: f64, lambda: f64, a: f64) -> Result<f64> {
    if !b.is_finite() || !lambda.is_finite() || !a.is_finite() {
        return Err(invalid("soft threshold inputs must be finite"));
    }
    if lambda < 0.0 {
        return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    if a <= 0.0 {
        return Err(invalid(format!("curvature must be > 0, got {a}")));
    }
    Ok(soft(b, lambda, a))
}

fn soft(b: f64, lambda: f64, a: f64) -> f64 {
    if b.abs() <= lambda {
        0.0
    } else {
        -(b - b.signum() * lambda) / a
    }
}

/// `x_i = exp(z_i) / sum_j exp(z_j)`, computed with max-subtraction.
pub fn softmax_simplex(z: &Point) -> Point {
    let max = z.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let exps: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    Point::new(exps.into_iter().map(|e| e / total).collect())
        .expect("max-subtraction keeps softmax finite")
}

/// Exact minimizer of `b . x + sum_i a_i x_i^2 / 2` over `set`, with
/// `a_i >= 0`. Flat directions resolve to the minimum-norm minimizer.
pub fn diagonal_quadratic_argmin(b: &[f64], a: &[f64], set: &FeasibleSet) -> Result<Point> {
    check_inputs(b, a)?;
    let x = match *set {
        FeasibleSet::Unconstrained => unconstrained(b, a)?,
        FeasibleSet::Box { half_width } => b
            .iter()
            .zip(a)
            .map(|(bi, ai)| box_coordinate(*bi, 0.0, *ai, half_width))
            .collect(),
        FeasibleSet::L2Ball { radius } => ball_kkt(b, a, radius),
        FeasibleSet::Simplex => simplex_kkt(b, a)?,
    };
    Point::new(x)
}

/// Exact minimizer of `b . x + threshold ||x||_1 + sum_i a_i x_i^2 / 2`
/// over an unconstrained or box set. Coordinates with `a_i = 0` inside the
/// threshold band resolve to 0.
pub fn composite_l1_argmin(
    b: &[f64],
    a: &[f64],
    threshold: f64,
    set: &FeasibleSet,
) -> Result<Point> {
    check_inputs(b, a)?;
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(invalid(format!("threshold must be >= 0, got {threshold}")));
    }
    if threshold == 0.0 {
        return diagonal_quadratic_argmin(b, a, set);
    }
    let x = match *set {
        FeasibleSet::Unconstrained => b
            .iter()
            .zip(a)
            .map(|(bi, ai)| {
                if *ai > 0.0 {
                    Ok(soft(*bi, threshold, *ai))
                } else if bi.abs() <= threshold {
                    Ok(0.0)
                } else {
                    Err(Error::Unbounded(
                        "zero curvature with linear term above the L1 threshold".into(),
                    ))
                }
            })
            .collect::<Result<Vec<f64>>>()?,
        FeasibleSet::Box { half_width } => b
            .iter()
            .zip(a)
            .map(|(bi, ai)| box_coordinate(*bi, threshold, *ai, half_width))
            .collect(),
        FeasibleSet::L2Ball { .. } | FeasibleSet::Simplex => {
            return Err(unsupported(
                "L1 penalty is only solved in closed form over unconstrained or box sets",
            ))
        }
    };
    Point::new(x)
}

/// `argmin_{||x|| <= radius} -theta . x + ||x||^2 / (2 eta)` via the
/// closed-form KKT multiplier `mu = max(0, ||theta||/radius - 1/eta)`.
pub fn ball_conjugate_gradient(theta: &Point, eta: f64, radius: f64) -> Result<Point> {
    if !(eta > 0.0 && radius > 0.0) {
        return Err(invalid("eta and radius must be positive"));
    }
    let norm = theta.norm2();
    let mu = (norm / radius - 1.0 / eta).max(0.0);
    let scale = 1.0 / (1.0 / eta + mu);
    Point::new(theta.iter().map(|v| v * scale).collect())
}

fn check_inputs(b: &[f64], a: &[f64]) -> Result<()> {
    if b.len() != a.len() {
        return Err(Error::LengthMismatch {
            left: b.len(),
            right: a.len(),
        });
    }
    if b.iter().any(|v| !v.is_finite()) || a.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(invalid("linear terms must be finite and curvatures finite and >= 0"));
    }
    Ok(())
}

fn unconstrained(b: &[f64], a: &[f64]) -> Result<Vec<f64>> {
    b.iter()
        .zip(a)
        .map(|(bi, ai)| {
            if *ai > 0.0 {
                Ok(-bi / ai)
            } else if *bi == 0.0 {
                Ok(0.0)
            } else {
                Err(Error::Unbounded(
                    "zero curvature with a nonzero linear term on an unconstrained set".into(),
                ))
            }
        })
        .collect()
}

fn box_coordinate(b: f64, threshold: f64, a: f64, r: f64) -> f64 {
    if a > 0.0 {
        soft(b, threshold, a).clamp(-r, r)
    } else if b.abs() <= threshold {
        0.0
    } else {
        -r * b.signum()
    }
}

/// `x_i(mu) = -b_i / (a_i + mu)` with the smallest `mu >= 0` making
/// `||x(mu)|| <= radius`, found by bisection on the multiplier.
fn ball_kkt(b: &[f64], a: &[f64], radius: f64) -> Vec<f64> {
    let at = |mu: f64| -> Vec<f64> {
        b.iter()
            .zip(a)
            .map(|(bi, ai)| {
                let d = ai + mu;
                if d > 0.0 {
                    -bi / d
                } else {
                    0.0
                }
            })
            .collect()
    };
    let free_ok = b.iter().zip(a).all(|(bi, ai)| *ai > 0.0 || *bi == 0.0);
    if free_ok {
        let x = at(0.0);
        if norm2(&x) <= radius {
            return x;
        }
    }
    let mut lo = 0.0;
    let mut hi = norm2(b) / radius;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if norm2(&at(mid)) > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = at(hi);
    let norm = norm2(&x);
    if norm > radius {
        x.iter_mut().for_each(|v| *v *= radius / norm);
    }
    x
}

/// `x_i(nu) = max(0, -(b_i + nu) / a_i)` with `nu` chosen so the entries
/// sum to one. With all curvatures zero the minimum-norm minimizer spreads
/// mass uniformly over the tied minimal coordinates.
fn simplex_kkt(b: &[f64], a: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.iter().all(|ai| *ai == 0.0) {
        let min = b.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        let ties = b.iter().filter(|v| **v == min).count() as f64;
        return Ok(b.iter().map(|v| if *v == min { 1.0 / ties } else { 0.0 }).collect());
    }
    if a.contains(&0.0) {
        return Err(unsupported(
            "simplex solver needs all curvatures positive or all zero",
        ));
    }
    let mass = |nu: f64| -> f64 {
        b.iter()
            .zip(a)
            .map(|(bi, ai)| (-(bi + nu) / ai).max(0.0))
            .sum()
    };
    let bmax = b.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let bmin = b.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let amax = a.iter().fold(0.0f64, |m, v| m.max(*v));
    let mut lo = -bmax - amax;
    let mut hi = -bmin;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let nu = 0.5 * (lo + hi);
    let mut x: Vec<f64> = b
        .iter()
        .zip(a)
        .map(|(bi, ai)| (-(bi + nu) / ai).max(0.0))
        .collect();
    let total: f64 = x.iter().sum();
    if total > 0.0 {
        x.iter_mut().for_each(|v| *v /= total);
    } else {
        x = vec![1.0 / n as f64; n];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold_argmin(2.0, 3.0, 1.0).unwrap(), 0.0);
        assert_eq!(soft_threshold_argmin(5.0, 3.0, 2.0).unwrap(), -1.0);
        assert_eq!(soft_threshold_argmin(4.0, 0.0, 2.0).unwrap(), -2.0);
        // frozen from the numeric oracle on [-10, 10]
        assert!((soft_threshold_argmin(-5.0, 3.0, 2.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(soft_threshold_argmin(1.0, 1.0, 0.0).is_err());
        assert!(soft_threshold_argmin(f64::NAN, 1.0, 1.0).is_err());
        assert!(soft_threshold_argmin(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn softmax_examples() {
        let u = softmax_simplex(&Point::new(vec![0.0; 3]).unwrap());
        assert!(u.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        let x = softmax_simplex(&Point::new(vec![0.0, -(2f64.ln())]).unwrap());
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-15 && (x[1] - 1.0 / 3.0).abs() < 1e-15);
        let y = softmax_simplex(&Point::new(vec![1000.0, 1000.0]).unwrap());
        assert_eq!(y.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn quadratic_over_ball_matches_projection() {
        let set = FeasibleSet::l2_ball(1.0).unwrap();
        let x = diagonal_quadratic_argmin(&[3.0, 4.0], &[1.0, 1.0], &set).unwrap();
        assert!((x[0] + 0.6).abs() < 1e-12 && (x[1] + 0.8).abs() < 1e-12);
    }

    #[test]
    fn zero_curvature_tie_breaks() {
        let un = FeasibleSet::Unconstrained;
        assert_eq!(diagonal_quadratic_argmin(&[0.0], &[0.0], &un).unwrap()[0], 0.0);
        assert!(matches!(
            diagonal_quadratic_argmin(&[1.0], &[0.0], &un),
            Err(Error::Unbounded(_))
        ));
        let bx = FeasibleSet::boxed(2.0).unwrap();
        assert_eq!(diagonal_quadratic_argmin(&[1.0, 0.0], &[0.0, 0.0], &bx).unwrap().as_slice(), &[-2.0, 0.0]);
        let ball = FeasibleSet::l2_ball(2.0).unwrap();
        let x = diagonal_quadratic_argmin(&[3.0, 4.0], &[0.0, 0.0], &ball).unwrap();
        assert!((x[0] + 1.2).abs() < 1e-12 && (x[1] + 1.6).abs() < 1e-12);
        let s = diagonal_quadratic_argmin(&[1.0, 0.0, 0.0], &[0.0; 3], &FeasibleSet::Simplex).unwrap();
        assert_eq!(s.as_slice(), &[0.0, 0.5, 0.5]);
    }

    #[test]
    fn quadratic_over_simplex_is_projection() {
        let x = diagonal_quadratic_argmin(&[-0.2, -0.1], &[1.0, 1.0], &FeasibleSet::Simplex).unwrap();
        assert!((x[0] - 0.55).abs() < 1e-12 && (x[1] - 0.45).abs() < 1e-12);
    }

    #[test]
    fn composite_l1_box() {
        let bx = FeasibleSet::boxed(1.0).unwrap();
        let x = composite_l1_argmin(&[-5.0, 0.3, 4.0], &[1.0, 1.0, 10.0], 0.5, &bx).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 0.0, -0.35]);
        assert!(composite_l1_argmin(&[1.0], &[1.0], 0.5, &FeasibleSet::l2_ball(1.0).unwrap()).is_err());
    }

    #[test]
    fn conjugate_gradient_on_ball() {
        let th = Point::new(vec![3.0, 4.0]).unwrap();
        let x = ball_conjugate_gradient(&th, 1.0, 1.0).unwrap();
        assert!((x[0] - 0.6).abs() < 1e-15 && (x[1] - 0.8).abs() < 1e-15);
        let y = ball_conjugate_gradient(&th, 0.1, 1.0).unwrap();
        assert!((y[0] - 0.3).abs() < 1e-15);
    }
}
