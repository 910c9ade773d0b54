use super::argmin::{default_bracket, numeric_argmin_separable};
use crate::error::{invalid, Result};
use crate::primitives::Point;
use crate::tolerance::leq;

/// `phi1(x) = sum_i q_i x_i^2 / 2 + c . x`, optionally restricted to
/// `|x_i| <= half_width`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    pub curvature: Vec<f64>,
    pub linear: Vec<f64>,
    pub half_width: Option<f64>,
}

/// `psi(x) = b . x + mu ||x||_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearL1 {
    pub linear: Vec<f64>,
    pub l1: f64,
}

/// Measured sides of the two smooth-change inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothChangeReport {
    pub x1: Point,
    pub x2: Point,
    /// `||x1 - x2||` in the norm induced by the curvature.
    pub distance: f64,
    /// `||b||_*` for the minimum-dual-norm `b` in the subdifferential of psi at `x1`.
    pub dual_norm: f64,
    /// `phi2(x1) - phi2(x2)`.
    pub value_gap: f64,
    /// Largest `phi2(x1) - phi2(x')` over probe points `x'`.
    pub probe_gap: f64,
    /// `|value_gap - dual_norm^2 / 2|` and `|distance - dual_norm|`,
    /// present when phi1 is unconstrained and psi is linear.
    pub equality_gap: Option<f64>,
    pub distance_gap: Option<f64>,
    pub distance_holds: bool,
    pub value_holds: bool,
}

/// Minimizes `phi1` and `phi2 = phi1 + psi` numerically and evaluates
/// `||x1 - x2|| <= ||b||_*` and `phi2(x1) - phi2(x') <= ||b||_*^2 / 2`.
pub fn check_smoothchange(phi1: &QuadraticObjective, psi: &LinearL1, tol: f64) -> Result<SmoothChangeReport> {
    let n = phi1.curvature.len();
    if n == 0 || phi1.linear.len() != n || psi.linear.len() != n {
        return Err(invalid("objective dimensions must agree and be >= 1"));
    }
    if phi1.curvature.iter().any(|q| !(*q > 0.0 && q.is_finite())) {
        return Err(invalid("phi1 must be strongly convex: curvatures must be positive"));
    }
    if !(psi.l1 >= 0.0 && psi.l1.is_finite()) {
        return Err(invalid("psi must be convex: L1 weight must be >= 0"));
    }
    if let Some(w) = phi1.half_width {
        if !(w > 0.0 && w.is_finite()) {
            return Err(invalid("box half-width must be positive"));
        }
    }
    let q = &phi1.curvature;
    let c = &phi1.linear;
    let b = &psi.linear;
    let phi1_i = |i: usize, x: f64| 0.5 * q[i] * x * x + c[i] * x;
    let phi2_i = |i: usize, x: f64| phi1_i(i, x) + b[i] * x + psi.l1 * x.abs();
    let phi2 = |x: &[f64]| (0..n).map(|i| phi2_i(i, x[i])).sum::<f64>();
    let bounds: Vec<(f64, f64)> = (0..n)
        .map(|i| match phi1.half_width {
            Some(w) => (-w, w),
            None => default_bracket(c[i].abs() + b[i].abs() + psi.l1, q[i], 1.0),
        })
        .collect();

    let x1 = numeric_argmin_separable(phi1_i, &bounds, tol)?;
    let x2 = numeric_argmin_separable(phi2_i, &bounds, tol)?;

    let sub: Vec<f64> = (0..n)
        .map(|i| {
            if x1[i] != 0.0 {
                b[i] + psi.l1 * x1[i].signum()
            } else {
                b[i].signum() * (b[i].abs() - psi.l1).max(0.0)
            }
        })
        .collect();
    let dual_norm = (0..n).map(|i| sub[i] * sub[i] / q[i]).sum::<f64>().sqrt();
    let distance = (0..n).map(|i| q[i] * (x1[i] - x2[i]).powi(2)).sum::<f64>().sqrt();
    let value_gap = phi2(&x1) - phi2(&x2);
    let half_sq = 0.5 * dual_norm * dual_norm;

    let probe_gap = (0..=20)
        .map(|k| {
            let s = k as f64 / 10.0 - 0.5;
            let probe: Vec<f64> = (0..n)
                .map(|i| {
                    let v = x1[i] + s * (x2[i] - x1[i]) * 2.0;
                    match phi1.half_width {
                        Some(w) => v.clamp(-w, w),
                        None => v,
                    }
                })
                .collect();
            phi2(&x1) - phi2(&probe)
        })
        .fold(f64::NEG_INFINITY, f64::max);

    let pure = phi1.half_width.is_none() && psi.l1 == 0.0;
    Ok(SmoothChangeReport {
        distance_holds: leq(distance, dual_norm),
        value_holds: leq(value_gap, half_sq) && leq(probe_gap, half_sq),
        equality_gap: pure.then(|| (value_gap - half_sq).abs()),
        distance_gap: pure.then(|| (distance - dual_norm).abs()),
        x1,
        x2,
        distance,
        dual_norm,
        value_gap,
        probe_gap,
    })
}

/// `lhs = sum_i a_i / sqrt(a_{1:i})` (zero prefixes contribute 0),
/// `rhs = 2 sqrt(a_{1:n})`, `holds = lhs <= rhs + 1e-12`.
pub fn check_lemma_sum(a: &[f64]) -> Result<(f64, f64, bool)> {
    if let Some(v) = a.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(invalid(format!("entries must be finite and >= 0, got {v}")));
    }
    let mut prefix = 0.0;
    let mut lhs = 0.0;
    for v in a {
        prefix += v;
        if prefix > 0.0 {
            lhs += v / prefix.sqrt();
        }
    }
    let rhs = 2.0 * prefix.sqrt();
    Ok((lhs, rhs, lhs <= rhs + 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::SMOOTH_CHANGE_EQUALITY;

    fn scalar(q: f64, c: f64, w: Option<f64>) -> QuadraticObjective {
        QuadraticObjective { curvature: vec![q], linear: vec![c], half_width: w }
    }

    #[test]
    fn linear_perturbation_is_tight() {
        let r = check_smoothchange(&scalar(1.0, 0.0, None), &LinearL1 { linear: vec![1.0], l1: 0.0 }, 1e-10).unwrap();
        assert!(r.x1[0].abs() < 1e-9, "{r:?}");
        assert!((r.x2[0] + 1.0).abs() < 1e-9, "{r:?}");
        assert!((r.value_gap - 0.5).abs() < 1e-12);
        assert!(r.equality_gap.unwrap() <= SMOOTH_CHANGE_EQUALITY);
        assert!(r.distance_holds && r.value_holds);
    }

    #[test]
    fn zero_perturbation() {
        let r = check_smoothchange(&scalar(2.0, 1.0, None), &LinearL1 { linear: vec![0.0], l1: 0.0 }, 1e-10).unwrap();
        assert!(r.distance.abs() < 1e-9 && r.dual_norm == 0.0);
        assert!(r.value_gap.abs() < 1e-12);
    }

    #[test]
    fn binding_box_is_strict() {
        let r = check_smoothchange(&scalar(1.0, 0.0, Some(0.1)), &LinearL1 { linear: vec![1.0], l1: 0.0 }, 1e-10).unwrap();
        assert!(r.distance < r.dual_norm - 0.5);
        assert!(r.value_gap < 0.5 * r.dual_norm.powi(2) - 0.1);
        assert!(r.equality_gap.is_none());
        assert!(r.distance_holds && r.value_holds);
    }

    #[test]
    fn rejects_nonconvex() {
        assert!(check_smoothchange(&scalar(-1.0, 0.0, None), &LinearL1 { linear: vec![1.0], l1: 0.0 }, 1e-8).is_err());
        assert!(check_smoothchange(&scalar(1.0, 0.0, None), &LinearL1 { linear: vec![1.0], l1: -0.1 }, 1e-8).is_err());
    }

    #[test]
    fn lemma_sum_examples() {
        let (l, r, h) = check_lemma_sum(&[1.0; 4]).unwrap();
        let expected = 1.0 + 1.0 / 2f64.sqrt() + 1.0 / 3f64.sqrt() + 0.5;
        assert!((l - expected).abs() < 1e-15 && r == 4.0 && h);
        assert!((l - 2.7845).abs() < 1e-4);
        assert_eq!(check_lemma_sum(&[0.0; 3]).unwrap(), (0.0, 0.0, true));
        assert_eq!(check_lemma_sum(&[4.0]).unwrap(), (2.0, 4.0, true));
        assert!(check_lemma_sum(&[1.0, -1.0]).is_err());
    }
}
