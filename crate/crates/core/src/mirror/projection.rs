use crate::bounds::{Geometry, PenaltyTrace, RoundTrace};
use crate::error::{invalid, unsupported, Result};
use crate::primitives::{
    ball_conjugate_gradient, clamp_box, diagonal_quadratic_argmin, FeasibleSet, Point,
};
use crate::OnlineLearner;

/// Equivalent ways of writing the same projected update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionForm {
    /// Euclidean projection of an unconstrained step.
    Projection,
    /// Mirror map: gradient step in the dual, then the constrained
    /// conjugate gradient back to the primal.
    Explicit,
    /// FTRL over the constraint set.
    Ftrl,
    /// One proximal step with the indicator kept exact (greedy family only).
    Implicit,
}

/// Constant-rate projected learner state, shared by all forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionState {
    t: usize,
    eta: f64,
    set: FeasibleSet,
    x: Point,
    g_sum: Vec<f64>,
    theta: Vec<f64>,
    psi_sum: Vec<f64>,
    /// `(x_t - x_{t+1}) / eta - g_t`, the indicator subgradient of the
    /// latest greedy step.
    last_normal: Vec<f64>,
}

impl ProjectionState {
    /// Starts at the origin; `set` must be an L2 ball or a box.
    pub fn new(n: usize, eta: f64, set: FeasibleSet) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be >= 1"));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        set.validate()?;
        if !matches!(set, FeasibleSet::L2Ball { .. } | FeasibleSet::Box { .. }) {
            return Err(unsupported("projection forms need an L2 ball or a box"));
        }
        Ok(ProjectionState {
            t: 0,
            eta,
            set,
            x: Point::zeros(n),
            g_sum: vec![0.0; n],
            theta: vec![0.0; n],
            psi_sum: vec![0.0; n],
            last_normal: vec![0.0; n],
        })
    }

    pub fn round(&self) -> usize {
        self.t
    }

    pub fn current(&self) -> &Point {
        &self.x
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }
}

fn conjugate(theta: &[f64], eta: f64, set: &FeasibleSet) -> Result<Point> {
    let theta = Point::new(theta.to_vec())?;
    match *set {
        FeasibleSet::L2Ball { radius } => ball_conjugate_gradient(&theta, eta, radius),
        FeasibleSet::Box { half_width } => {
            clamp_box(&Point::new(theta.iter().map(|v| eta * v).collect())?, half_width)
        }
        _ => Err(unsupported("projection forms need an L2 ball or a box")),
    }
}

/// Lazy projection: `x_{t+1} = Proj_X(-eta g_{1:t})`.
pub fn lazy_projection_step(state: &mut ProjectionState, g: &Point, form: ProjectionForm) -> Result<Point> {
    let n = state.x.dim();
    g.check_dim(n)?;
    let g_sum: Vec<f64> = state.g_sum.iter().zip(g.iter()).map(|(s, v)| s + v).collect();
    let theta: Vec<f64> = state.theta.iter().zip(g.iter()).map(|(s, v)| s - v).collect();
    let x = match form {
        ProjectionForm::Projection => {
            state.set.project(&Point::new(g_sum.iter().map(|v| -state.eta * v).collect())?)
        }
        ProjectionForm::Explicit => conjugate(&theta, state.eta, &state.set)?,
        ProjectionForm::Ftrl => {
            diagonal_quadratic_argmin(&g_sum, &vec![1.0 / state.eta; n], &state.set)?
        }
        ProjectionForm::Implicit => {
            return Err(unsupported("the implicit form belongs to the greedy family"))
        }
    };
    state.t += 1;
    state.g_sum = g_sum;
    state.theta = theta;
    state.x = x.clone();
    Ok(x)
}

/// Greedy projection: `x_{t+1} = Proj_X(x_t - eta g_t)`.
pub fn greedy_projection_step(state: &mut ProjectionState, g: &Point, form: ProjectionForm) -> Result<Point> {
    let n = state.x.dim();
    g.check_dim(n)?;
    let inv = 1.0 / state.eta;
    let g_sum: Vec<f64> = state.g_sum.iter().zip(g.iter()).map(|(s, v)| s + v).collect();
    let mut psi = None;
    let x = match form {
        ProjectionForm::Projection => state.set.project(&Point::new(
            state.x.iter().zip(g.iter()).map(|(x, v)| x - state.eta * v).collect(),
        )?),
        ProjectionForm::Explicit => {
            let theta: Vec<f64> = state.x.iter().zip(g.iter()).map(|(x, v)| x * inv - v).collect();
            conjugate(&theta, state.eta, &state.set)?
        }
        ProjectionForm::Implicit => {
            let b: Vec<f64> = state.x.iter().zip(g.iter()).map(|(x, v)| v - x * inv).collect();
            diagonal_quadratic_argmin(&b, &vec![inv; n], &state.set)?
        }
        ProjectionForm::Ftrl => {
            // earlier indicator subgradients linearized, current one exact
            let b: Vec<f64> = g_sum.iter().zip(&state.psi_sum).map(|(s, p)| s + p).collect();
            let x = diagonal_quadratic_argmin(&b, &vec![inv; n], &state.set)?;
            psi = Some(b.iter().zip(x.iter()).map(|(b, x)| -(b + x * inv)).collect::<Vec<f64>>());
            x
        }
    };
    if let Some(psi) = psi {
        for (s, v) in state.psi_sum.iter_mut().zip(psi) {
            *s += v;
        }
    }
    state.last_normal = (0..n).map(|i| (state.x[i] - x[i]) * inv - g[i]).collect();
    state.t += 1;
    state.g_sum = g_sum;
    state.x = x.clone();
    Ok(x)
}

/// Which projection family a [`ProjectionLearner`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionFamily {
    Lazy,
    Greedy,
}

/// Constant-rate lazy or greedy projection behind the common learner
/// protocol. Lazy projection is FTRL with the fixed regularizer
/// `||x||^2 / (2 eta)`; greedy projection is its mirror-descent form, whose
/// indicator subgradients are reported as a linearized penalty.
#[derive(Debug, Clone)]
pub struct ProjectionLearner {
    state: ProjectionState,
    family: ProjectionFamily,
    form: ProjectionForm,
}

impl ProjectionLearner {
    pub fn new(n: usize, eta: f64, set: FeasibleSet, family: ProjectionFamily, form: ProjectionForm) -> Result<Self> {
        if family == ProjectionFamily::Lazy && form == ProjectionForm::Implicit {
            return Err(unsupported("the implicit form belongs to the greedy family"));
        }
        Ok(ProjectionLearner {
            state: ProjectionState::new(n, eta, set)?,
            family,
            form,
        })
    }

    pub fn state(&self) -> &ProjectionState {
        &self.state
    }
}

impl OnlineLearner for ProjectionLearner {
    fn dim(&self) -> usize {
        self.state.x.dim()
    }

    fn round(&self) -> usize {
        self.state.t
    }

    fn current(&self) -> &Point {
        &self.state.x
    }

    fn observe(&mut self, g: &Point) -> Result<Point> {
        match self.family {
            ProjectionFamily::Lazy => lazy_projection_step(&mut self.state, g, self.form),
            ProjectionFamily::Greedy => greedy_projection_step(&mut self.state, g, self.form),
        }
    }

    fn trace(&self) -> RoundTrace {
        let penalty = match self.family {
            ProjectionFamily::Greedy if self.state.t > 0 => PenaltyTrace::Linearized {
                weight: 0.0,
                subgradient: self.state.last_normal.clone(),
            },
            _ => PenaltyTrace::None,
        };
        RoundTrace {
            inverse_rates: vec![1.0 / self.state.eta; self.state.x.dim()],
            penalty,
        }
    }

    fn geometry(&self) -> Geometry {
        match self.family {
            ProjectionFamily::Lazy => Geometry::QuadraticCentered,
            ProjectionFamily::Greedy => Geometry::QuadraticProximal,
        }
    }

    fn set(&self) -> &FeasibleSet {
        &self.state.set
    }
}

fn trajectory(
    gradients: &[Point],
    eta: f64,
    set: FeasibleSet,
    form: ProjectionForm,
    step: fn(&mut ProjectionState, &Point, ProjectionForm) -> Result<Point>,
) -> Result<Vec<Point>> {
    let n = gradients.first().map(|g| g.dim()).unwrap_or(1);
    let mut state = ProjectionState::new(n, eta, set)?;
    let mut out = Vec::with_capacity(gradients.len() + 1);
    out.push(state.current().clone());
    for g in gradients {
        out.push(step(&mut state, g, form)?);
    }
    Ok(out)
}

/// `x_1, ..., x_{T+1}` of the lazy family.
pub fn lazy_trajectory(gradients: &[Point], eta: f64, set: FeasibleSet, form: ProjectionForm) -> Result<Vec<Point>> {
    trajectory(gradients, eta, set, form, lazy_projection_step)
}

/// `x_1, ..., x_{T+1}` of the greedy family.
pub fn greedy_trajectory(gradients: &[Point], eta: f64, set: FeasibleSet, form: ProjectionForm) -> Result<Vec<Point>> {
    trajectory(gradients, eta, set, form, greedy_projection_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::{max_abs_diff, PROJECTION_FORMS};

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn lazy_and_greedy_differ_on_interval() {
        let gs = vec![p(&[2.0]), p(&[-2.0])];
        let set = FeasibleSet::boxed(1.0).unwrap();
        let lazy = lazy_trajectory(&gs, 1.0, set, ProjectionForm::Projection).unwrap();
        let greedy = greedy_trajectory(&gs, 1.0, set, ProjectionForm::Projection).unwrap();
        assert_eq!(lazy[1][0], -1.0);
        assert_eq!(greedy[1][0], -1.0);
        assert_eq!(lazy[2][0], 0.0);
        assert_eq!(greedy[2][0], 1.0);
    }

    fn gradients() -> Vec<Point> {
        (0..30)
            .map(|k| {
                let k = k as f64;
                p(&[(1.3 * k).sin() * 2.0, (0.7 * k).cos() - 0.4, 1.5 - 0.1 * k])
            })
            .collect()
    }

    #[test]
    fn lazy_forms_agree() {
        let gs = gradients();
        for set in [FeasibleSet::l2_ball(1.5).unwrap(), FeasibleSet::boxed(0.8).unwrap()] {
            let base = lazy_trajectory(&gs, 0.3, set, ProjectionForm::Projection).unwrap();
            for form in [ProjectionForm::Explicit, ProjectionForm::Ftrl] {
                let other = lazy_trajectory(&gs, 0.3, set, form).unwrap();
                for (a, b) in base.iter().zip(&other) {
                    assert!(max_abs_diff(a, b) <= PROJECTION_FORMS, "{form:?}: {a} vs {b}");
                }
            }
        }
        assert!(lazy_trajectory(&gs, 0.3, FeasibleSet::boxed(1.0).unwrap(), ProjectionForm::Implicit).is_err());
    }

    #[test]
    fn greedy_forms_agree() {
        let gs = gradients();
        for set in [FeasibleSet::l2_ball(1.5).unwrap(), FeasibleSet::boxed(0.8).unwrap()] {
            let base = greedy_trajectory(&gs, 0.3, set, ProjectionForm::Projection).unwrap();
            for form in [ProjectionForm::Explicit, ProjectionForm::Implicit, ProjectionForm::Ftrl] {
                let other = greedy_trajectory(&gs, 0.3, set, form).unwrap();
                for (a, b) in base.iter().zip(&other) {
                    assert!(max_abs_diff(a, b) <= PROJECTION_FORMS, "{form:?}: {a} vs {b}");
                }
            }
        }
    }
}
