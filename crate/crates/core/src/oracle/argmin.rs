use crate::error::{invalid, Error, Result};
use crate::primitives::Point;

const GRID: usize = 256;
const GOLDEN: f64 = 0.618_033_988_749_894_9;
const INNER_GRID: usize = 32;
const MAX_GOLDEN_STEPS: usize = 400;

/// Minimizes a convex scalar function on `[lo, hi]`: a coarse grid picks the
/// cell holding the minimum, golden-section search shrinks it below `tol`,
/// and a parabolic step is taken if it lowers the objective. A constant
/// objective returns the midpoint.
pub fn numeric_argmin_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    argmin_with_grid(f, lo, hi, tol, GRID)
}

fn argmin_with_grid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, grid: usize) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(invalid(format!("need finite lo < hi, got [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tol must be positive, got {tol}")));
    }
    let step = (hi - lo) / (grid - 1) as f64;
    let at = |k: usize| if k == grid - 1 { hi } else { lo + step * k as f64 };
    let values: Vec<f64> = (0..grid).map(|k| f(at(k))).collect();
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Domain("objective returned NaN".into()));
    }
    if values.iter().all(|v| *v == values[0]) {
        return Ok(0.5 * (lo + hi));
    }
    let best = (0..grid)
        .min_by(|a, b| values[*a].total_cmp(&values[*b]))
        .expect("grid is nonempty");
    let (mut a, mut b) = (at(best.saturating_sub(1)), at((best + 1).min(grid - 1)));

    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..MAX_GOLDEN_STEPS {
        if b - a <= tol.max(4.0 * f64::EPSILON * a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    for (cand, fv) in [(a, f(a)), (b, f(b)), (c, fc), (d, fd)] {
        if fv < fx {
            x = cand;
            fx = fv;
        }
    }
    Ok(polish(&f, x, fx, lo, hi))
}

/// Parabolic step through `x - h, x, x + h`, taken only when the quadratic
/// model also predicts `f(x +- h/2)`: smooth minima are then resolved far
/// below the golden-section limit, while kinks fail the model check.
fn polish(f: &impl Fn(f64) -> f64, x: f64, fx: f64, lo: f64, hi: f64) -> f64 {
    let h = 1e-3 * x.abs().max(1.0);
    if x - h < lo || x + h > hi {
        return x;
    }
    let (fm, fp) = (f(x - h), f(x + h));
    let c2 = 0.5 * (fp - 2.0 * fx + fm);
    let c1 = 0.5 * (fp - fm);
    if !(c2 > 0.0) {
        return x;
    }
    let model = |u: f64| fx + c1 * u + c2 * u * u;
    for u in [-0.5, 0.5] {
        if (f(x + u * h) - model(u)).abs() > 1e-6 * c2 {
            return x;
        }
    }
    let u = -c1 / (2.0 * c2);
    let cand = x + u * h;
    if u.abs() > 1.0 || !(lo..=hi).contains(&cand) || f(cand) > fx + 1e-6 * c2 {
        return x;
    }
    cand
}

/// Coordinate-wise [`numeric_argmin_1d`] of `sum_i f(i, x_i)` over the box
/// `bounds`.
pub fn numeric_argmin_separable(
    f: impl Fn(usize, f64) -> f64,
    bounds: &[(f64, f64)],
    tol: f64,
) -> Result<Point> {
    if bounds.is_empty() {
        return Err(invalid("need at least one coordinate"));
    }
    let x = bounds
        .iter()
        .enumerate()
        .map(|(i, (lo, hi))| numeric_argmin_1d(|v| f(i, v), *lo, *hi, tol))
        .collect::<Result<Vec<f64>>>()?;
    Point::new(x)
}

/// Search interval `[-h, h]` with `h = 100 max(|b|/a, radius)` for a
/// coordinate objective `b x + a x^2 / 2`; `a = 0` falls back to the radius.
pub fn default_bracket(b: f64, a: f64, radius: f64) -> (f64, f64) {
    let scale = if a > 0.0 { (b.abs() / a).max(radius) } else { radius };
    let h = 100.0 * scale.max(1.0);
    (-h, h)
}

/// One separable constraint `sum_i c(i, x_i) <= level` (or `= level`).
pub struct SeparableConstraint<'a> {
    pub c: &'a dyn Fn(usize, f64) -> f64,
    pub level: f64,
    pub equality: bool,
}

/// Minimizes a strictly convex separable objective under one separable
/// convex constraint by maximizing the concave dual over the multiplier
/// with [`numeric_argmin_1d`], each dual evaluation solving the coordinate
/// problems numerically. `multiplier_bound` caps `|mu|`.
pub fn numeric_argmin_constrained(
    f: impl Fn(usize, f64) -> f64,
    bounds: &[(f64, f64)],
    constraint: &SeparableConstraint<'_>,
    multiplier_bound: f64,
    tol: f64,
) -> Result<Point> {
    if !(multiplier_bound > 0.0 && multiplier_bound.is_finite()) {
        return Err(invalid("multiplier bound must be positive"));
    }
    if bounds.is_empty() {
        return Err(invalid("need at least one coordinate"));
    }
    let inner_tol = tol * 1e-2;
    let primal = |mu: f64| -> Result<Point> {
        let x = bounds
            .iter()
            .enumerate()
            .map(|(i, (lo, hi))| {
                argmin_with_grid(|v| f(i, v) + mu * (constraint.c)(i, v), *lo, *hi, inner_tol, INNER_GRID)
            })
            .collect::<Result<Vec<f64>>>()?;
        Point::new(x)
    };
    let neg_dual = |mu: f64| -> f64 {
        match primal(mu) {
            Ok(x) => {
                let value: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| f(i, *v) + mu * (constraint.c)(i, *v))
                    .sum();
                -(value - mu * constraint.level)
            }
            Err(_) => f64::NAN,
        }
    };
    let lo = if constraint.equality { -multiplier_bound } else { 0.0 };
    if !constraint.equality {
        // an inactive constraint leaves the unconstrained minimizer
        let free = primal(0.0)?;
        let used: f64 = free.iter().enumerate().map(|(i, v)| (constraint.c)(i, *v)).sum();
        if used <= constraint.level {
            return Ok(free);
        }
    }
    let mu = numeric_argmin_1d(neg_dual, lo, multiplier_bound, tol * 1e-3)?;
    primal(mu)
}

/// Central differences `(f(x + h e_i) - f(x - h e_i)) / 2h`.
pub fn finite_difference_subgradient(f: impl Fn(&Point) -> f64, x: &Point, h: f64) -> Point {
    let mut probe = x.to_vec();
    let g: Vec<f64> = (0..x.dim())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + h;
            let up = f(&Point::new(probe.clone()).expect("finite probe"));
            probe[i] = orig - h;
            let down = f(&Point::new(probe.clone()).expect("finite probe"));
            probe[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect();
    Point::new(g).expect("finite differences of a finite function")
}
