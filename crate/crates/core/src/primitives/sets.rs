use super::point::{norm2, Point};
use crate::error::{invalid, Error, Result};

/// The feasible set X that iterates and comparators live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeasibleSet {
    Unconstrained,
    /// `{x : ||x||_2 <= radius}`.
    L2Ball { radius: f64 },
    /// `{x : |x_i| <= half_width for all i}`.
    Box { half_width: f64 },
    /// The probability simplex.
    Simplex,
}

impl FeasibleSet {
    pub fn l2_ball(radius: f64) -> Result<Self> {
        let s = FeasibleSet::L2Ball { radius };
        s.validate()?;
        Ok(s)
    }

    pub fn boxed(half_width: f64) -> Result<Self> {
        let s = FeasibleSet::Box { half_width };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FeasibleSet::L2Ball { radius: r } | FeasibleSet::Box { half_width: r }
                if !(r > 0.0 && r.is_finite()) =>
            {
                Err(invalid(format!("set size must be positive and finite, got {r}")))
            }
            _ => Ok(()),
        }
    }

    /// Membership up to an absolute tolerance (relative for the ball norm).
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match *self {
            FeasibleSet::Unconstrained => true,
            FeasibleSet::L2Ball { radius } => norm2(x) <= radius * (1.0 + tol),
            FeasibleSet::Box { half_width } => x.iter().all(|v| v.abs() <= half_width + tol),
            FeasibleSet::Simplex => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, v: &Point) -> Point {
        match *self {
            FeasibleSet::Unconstrained => v.clone(),
            FeasibleSet::L2Ball { radius } => ball(v, radius),
            FeasibleSet::Box { half_width } => clamp(v, half_width),
            FeasibleSet::Simplex => project_simplex(v),
        }
    }

    /// The minimum-norm feasible point: the origin, or the uniform
    /// distribution for the simplex.
    pub fn min_norm_point(&self, n: usize) -> Point {
        match self {
            FeasibleSet::Simplex => Point::new(vec![1.0 / n as f64; n]).expect("n >= 1"),
            _ => Point::zeros(n),
        }
    }

    /// A minimizer of `g_sum . x` over the set (the best fixed comparator for
    /// linear losses with cumulative gradient `g_sum`).
    pub fn linear_minimizer(&self, g_sum: &Point) -> Result<Point> {
        let n = g_sum.dim();
        match *self {
            FeasibleSet::Unconstrained => Err(Error::UnsupportedCombination(
                "linear loss has no minimizer over an unconstrained set".into(),
            )),
            FeasibleSet::L2Ball { radius } => {
                let norm = g_sum.norm2();
                if norm == 0.0 {
                    return Ok(Point::zeros(n));
                }
                Point::new(g_sum.iter().map(|g| -radius * g / norm).collect())
            }
            FeasibleSet::Box { half_width } => Point::new(
                g_sum
                    .iter()
                    .map(|g| {
                        if *g == 0.0 {
                            0.0
                        } else {
                            -half_width * g.signum()
                        }
                    })
                    .collect(),
            ),
            FeasibleSet::Simplex => {
                let mut best = 0;
                for (i, g) in g_sum.iter().enumerate() {
                    if *g < g_sum[best] {
                        best = i;
                    }
                }
                let mut x = vec![0.0; n];
                x[best] = 1.0;
                Point::new(x)
            }
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, FeasibleSet::Unconstrained)
    }
}

fn ball(v: &Point, radius: f64) -> Point {
    let norm = v.norm2();
    if norm <= radius {
        return v.clone();
    }
    let scale = radius / norm;
    let mut out: Vec<f64> = v.iter().map(|x| x * scale).collect();
    // guard against the scaled norm rounding just above the radius
    let after = norm2(&out);
    if after > radius {
        let fix = radius / after;
        out.iter_mut().for_each(|x| *x *= fix);
    }
    Point::new(out).expect("scaling keeps entries finite")
}

fn clamp(v: &Point, half_width: f64) -> Point {
    Point::new(v.iter().map(|x| x.clamp(-half_width, half_width)).collect())
        .expect("clamping keeps entries finite")
}

/// Radial projection onto `{x : ||x||_2 <= r}`.
pub fn project_l2_ball(v: &Point, r: f64) -> Result<Point> {
    FeasibleSet::l2_ball(r)?;
    Ok(ball(v, r))
}

/// Coordinate-wise clamp to `[-r, r]`.
pub fn clamp_box(v: &Point, r: f64) -> Result<Point> {
    FeasibleSet::boxed(r)?;
    Ok(clamp(v, r))
}

/// Euclidean projection onto the probability simplex (sort-and-threshold).
pub fn project_simplex(v: &Point) -> Point {
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, s) in sorted.iter().enumerate() {
        cumulative += s;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if s - candidate > 0.0 {
            theta = candidate;
        }
    }
    Point::new(v.iter().map(|x| (x - theta).max(0.0)).collect())
        .expect("projection keeps entries finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ball_projection_examples() {
        assert_eq!(project_l2_ball(&p(&[0.5, 0.0]), 1.0).unwrap(), p(&[0.5, 0.0]));
        let q = project_l2_ball(&p(&[3.0, 4.0]), 1.0).unwrap();
        assert!((q[0] - 0.6).abs() < 1e-15 && (q[1] - 0.8).abs() < 1e-15);
        assert_eq!(project_l2_ball(&p(&[-2.0]), 0.5).unwrap(), p(&[-0.5]));
        assert!(project_l2_ball(&p(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn box_clamp_examples() {
        assert_eq!(clamp_box(&p(&[1.5, -0.2]), 1.0).unwrap(), p(&[1.0, -0.2]));
        assert_eq!(clamp_box(&p(&[0.0, 0.0]), 1.0).unwrap(), p(&[0.0, 0.0]));
        assert_eq!(clamp_box(&p(&[-3.0]), 2.0).unwrap(), p(&[-2.0]));
    }

    #[test]
    fn best_comparator_examples() {
        let b = FeasibleSet::boxed(1.0).unwrap();
        assert_eq!(b.linear_minimizer(&p(&[2.0, -3.0, 0.0])).unwrap(), p(&[-1.0, 1.0, 0.0]));
        let ball = FeasibleSet::l2_ball(2.0).unwrap();
        let x = ball.linear_minimizer(&p(&[3.0, 4.0])).unwrap();
        assert!((x[0] + 1.2).abs() < 1e-15 && (x[1] + 1.6).abs() < 1e-15);
        assert_eq!(
            FeasibleSet::Simplex.linear_minimizer(&p(&[5.0, 1.0, 2.0])).unwrap(),
            p(&[0.0, 1.0, 0.0])
        );
        assert_eq!(
            FeasibleSet::Simplex.linear_minimizer(&p(&[1.0, 1.0])).unwrap(),
            p(&[1.0, 0.0])
        );
        assert!(FeasibleSet::Unconstrained.linear_minimizer(&p(&[1.0])).is_err());
        assert_eq!(ball.linear_minimizer(&p(&[0.0, 0.0])).unwrap(), p(&[0.0, 0.0]));
    }

    #[test]
    fn simplex_projection() {
        let x = project_simplex(&p(&[0.5, 0.5, 0.5]));
        for v in x.iter() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(project_simplex(&p(&[3.0, 0.0])), p(&[1.0, 0.0]));
        let y = project_simplex(&p(&[0.2, 0.1]));
        assert!((y[0] - 0.55).abs() < 1e-15 && (y[1] - 0.45).abs() < 1e-15);
    }
}
