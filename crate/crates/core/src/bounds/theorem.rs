use std::fmt;
use std::str::FromStr;

use super::history::{Geometry, PenaltyKind, RunHistory};
use crate::error::{invalid, unsupported, Error, Result};
use crate::learners::BoundConfig;
use crate::primitives::Point;

/// A regret bound formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// `r_{0:t-1}(x*) + 1/2 sum_s ||g_s||^2_{(s-1),*}`.
    GeneralFtrl,
    /// `r_{0:t}(x*) + 1/2 sum_s ||g_s||^2_{(s),*}` for proximal regularizers.
    FtrlProximal,
    /// FTRL-Proximal bound plus `alpha_{1:t} lambda ||x*||_1`.
    Composite,
    /// Bregman-sum form `sum_s B_{r_s}(x*, x_s) + alpha_{1:t} lambda ||x*||_1
    /// + 1/2 sum_s ||g_s||^2_{(s),*}`.
    MirrorDescent,
    /// `r_{0:t}(x*) + sum_s ||g_s||^2_{(s),*}`.
    WeakProximal,
    /// `(sqrt(2)/2) (R + ||x*||^2 / R) G sqrt(t)`.
    DaClosedForm,
    /// `2 sqrt(2) R G sqrt(t)`.
    ProxClosedForm,
    /// `sum_i 2 sqrt(2) R_inf sqrt(sum_{s<=t} g_{s,i}^2)`.
    AdaGradPerCoord,
    /// `2 sqrt((G_inf^2 + sum_{s<t} ||g_s||_inf^2) ln n)`, capped at
    /// `2 G_inf sqrt(t ln n)`.
    Entropic,
    /// `(G^2 / 2) (1 + ln t)`.
    StronglyConvexLog,
    /// `r_0(x*) + 1/2 sum_s ||g_s||^2_{(0),*}` for a fixed regularizer.
    NonAdaptive,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::GeneralFtrl,
        TheoremId::FtrlProximal,
        TheoremId::Composite,
        TheoremId::MirrorDescent,
        TheoremId::WeakProximal,
        TheoremId::DaClosedForm,
        TheoremId::ProxClosedForm,
        TheoremId::AdaGradPerCoord,
        TheoremId::Entropic,
        TheoremId::StronglyConvexLog,
        TheoremId::NonAdaptive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::GeneralFtrl => "general-ftrl",
            TheoremId::FtrlProximal => "ftrl-proximal",
            TheoremId::Composite => "composite",
            TheoremId::MirrorDescent => "mirror-descent",
            TheoremId::WeakProximal => "weak-proximal",
            TheoremId::DaClosedForm => "da-closed-form",
            TheoremId::ProxClosedForm => "prox-closed-form",
            TheoremId::AdaGradPerCoord => "adagrad-per-coord",
            TheoremId::Entropic => "entropic",
            TheoremId::StronglyConvexLog => "strongly-convex-log",
            TheoremId::NonAdaptive => "non-adaptive",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| invalid(format!("unknown bound id '{s}'")))
    }
}

/// The bound `id` at prefix `t` (1-based) for the recorded run and comparator.
pub fn bound_value(
    id: TheoremId,
    cfg: &BoundConfig,
    history: &RunHistory,
    t: usize,
    comparator: &Point,
) -> Result<f64> {
    if t == 0 || t > history.rounds() {
        return Err(invalid(format!(
            "prefix {t} outside 1..={}",
            history.rounds()
        )));
    }
    Ok(bound_series_upto(id, cfg, history, comparator, t)?[t - 1])
}

/// The bound `id` at every prefix `t = 1..=T`.
pub fn bound_series(
    id: TheoremId,
    cfg: &BoundConfig,
    history: &RunHistory,
    comparator: &Point,
) -> Result<Vec<f64>> {
    bound_series_upto(id, cfg, history, comparator, history.rounds())
}

/// Checks that `id` applies to the regularizers recorded in `history`.
pub fn check_compatible(id: TheoremId, history: &RunHistory) -> Result<()> {
    let geometry = history.geometry();
    let quadratic = matches!(
        geometry,
        Geometry::QuadraticCentered | Geometry::QuadraticProximal
    );
    let fixed = history.is_fixed_regularizer();
    let kind = history.penalty_kind();
    let penalty_free = kind == PenaltyKind::None
        || (kind == PenaltyKind::Native && history.penalty_cumulative(history.rounds()) == 0.0);
    let ok = match id {
        TheoremId::GeneralFtrl => {
            (quadratic || geometry == Geometry::Entropic) && kind != PenaltyKind::Linearized
        }
        TheoremId::FtrlProximal | TheoremId::WeakProximal => {
            penalty_free
                && (geometry == Geometry::QuadraticProximal
                    || (fixed && (quadratic || geometry == Geometry::Entropic)))
        }
        TheoremId::Composite => {
            kind != PenaltyKind::Linearized
                && (geometry == Geometry::QuadraticProximal || (fixed && quadratic))
        }
        TheoremId::MirrorDescent => {
            geometry == Geometry::QuadraticProximal && kind != PenaltyKind::Native
        }
        TheoremId::NonAdaptive => {
            penalty_free && fixed && (quadratic || geometry == Geometry::Entropic)
        }
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(unsupported(format!(
            "bound {id} does not apply to a {geometry:?} run with {kind:?} penalty"
        )))
    }
}

fn bound_series_upto(
    id: TheoremId,
    cfg: &BoundConfig,
    history: &RunHistory,
    x: &Point,
    upto: usize,
) -> Result<Vec<f64>> {
    x.check_dim(history.dim())?;
    check_compatible(id, history)?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let times = 1..=upto;
    let out = match id {
        TheoremId::DaClosedForm => {
            let (r, g) = (cfg.require_r()?, cfg.require_g()?);
            let norm_sq = x.dot(x);
            times
                .map(|t| sqrt2 / 2.0 * (r + norm_sq / r) * g * (t as f64).sqrt())
                .collect()
        }
        TheoremId::ProxClosedForm => {
            let (r, g) = (cfg.require_r()?, cfg.require_g()?);
            times.map(|t| 2.0 * sqrt2 * r * g * (t as f64).sqrt()).collect()
        }
        TheoremId::AdaGradPerCoord => {
            let r_inf = cfg.require_r_inf()?;
            times
                .map(|t| {
                    history
                        .squared_sums(t)
                        .iter()
                        .map(|s| 2.0 * sqrt2 * r_inf * s.sqrt())
                        .sum()
                })
                .collect()
        }
        TheoremId::Entropic => {
            let g_inf = cfg.require_g_inf()?;
            let n = cfg.n.unwrap_or(history.dim());
            if n < 2 {
                return Err(invalid("entropic bound needs n >= 2"));
            }
            let ln_n = (n as f64).ln();
            times
                .map(|t| {
                    let adaptive = 2.0 * ((g_inf * g_inf + history.sup_squared_sum(t - 1)) * ln_n).sqrt();
                    let cap = 2.0 * g_inf * (t as f64 * ln_n).sqrt();
                    adaptive.min(cap)
                })
                .collect()
        }
        TheoremId::StronglyConvexLog => {
            let g = cfg.require_g()?;
            times.map(|t| g * g / 2.0 * (1.0 + (t as f64).ln())).collect()
        }
        TheoremId::GeneralFtrl => {
            let mut sum = 0.0;
            let mut out = Vec::with_capacity(upto);
            for t in times {
                sum += history.dual_norm_sq(t - 1, &history.gradients()[t - 1])?;
                out.push(history.regularizer(t - 1, x) + 0.5 * sum);
            }
            out
        }
        TheoremId::FtrlProximal
        | TheoremId::WeakProximal
        | TheoremId::Composite
        | TheoremId::MirrorDescent => {
            let factor = if id == TheoremId::WeakProximal { 1.0 } else { 0.5 };
            let with_penalty = matches!(id, TheoremId::Composite | TheoremId::MirrorDescent);
            let mut sum = 0.0;
            let mut out = Vec::with_capacity(upto);
            for t in times {
                sum += history.dual_norm_sq(t, &history.gradients()[t - 1])?;
                let mut v = history.base_regularizer(t, x) + factor * sum;
                if with_penalty {
                    v += history.penalty_cumulative(t) * x.norm1();
                }
                out.push(v);
            }
            out
        }
        TheoremId::NonAdaptive => {
            let mut sum = 0.0;
            let r0 = history.regularizer(0, x);
            let mut out = Vec::with_capacity(upto);
            for t in times {
                sum += history.dual_norm_sq(0, &history.gradients()[t - 1])?;
                out.push(r0 + 0.5 * sum);
            }
            out
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{PenaltyTrace, RoundTrace};

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    fn flat_history(n: usize, rounds: usize, grads: &[f64]) -> RunHistory {
        let tr = || RoundTrace {
            inverse_rates: vec![1.0; n],
            penalty: PenaltyTrace::None,
        };
        let mut h = RunHistory::new(Geometry::QuadraticCentered, Point::zeros(n), tr()).unwrap();
        for t in 0..rounds {
            let g = p(&vec![grads[t % grads.len()]; n]);
            h.record(g, 0.0, Point::zeros(n), tr()).unwrap();
        }
        h
    }

    #[test]
    fn closed_form_examples() {
        let h = flat_history(1, 100, &[1.0]);
        let cfg = BoundConfig::default().with_r(1.0).with_g(1.0);
        let da = bound_value(TheoremId::DaClosedForm, &cfg, &h, 100, &p(&[1.0])).unwrap();
        assert!((da - 2f64.sqrt() * 10.0).abs() < 1e-12);
        let prox = bound_value(TheoremId::ProxClosedForm, &cfg, &h, 100, &p(&[1.0])).unwrap();
        assert!((prox - 2.0 * 2f64.sqrt() * 10.0).abs() < 1e-12);
        let sc = bound_value(TheoremId::StronglyConvexLog, &cfg, &h, 1, &p(&[0.0])).unwrap();
        assert_eq!(sc, 0.5);
    }

    #[test]
    fn adagrad_example() {
        let tr = || RoundTrace {
            inverse_rates: vec![1.0],
            penalty: PenaltyTrace::None,
        };
        let mut h = RunHistory::new(Geometry::QuadraticProximal, p(&[0.0]), tr()).unwrap();
        h.record(p(&[3.0]), 0.0, p(&[0.0]), tr()).unwrap();
        h.record(p(&[4.0]), 0.0, p(&[0.0]), tr()).unwrap();
        let cfg = BoundConfig::default().with_r_inf(1.0);
        let v = bound_value(TheoremId::AdaGradPerCoord, &cfg, &h, 2, &p(&[0.0])).unwrap();
        assert!((v - 10.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn missing_config_field() {
        let h = flat_history(1, 3, &[1.0]);
        let cfg = BoundConfig::default().with_r(1.0);
        assert!(matches!(
            bound_value(TheoremId::ProxClosedForm, &cfg, &h, 1, &p(&[0.0])),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn names_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.name().parse::<TheoremId>().unwrap(), id);
        }
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn weak_exceeds_proximal() {
        let h = flat_history(2, 10, &[1.0, -0.5]);
        let cfg = BoundConfig::default();
        let x = p(&[0.3, 0.3]);
        let a = bound_series(TheoremId::FtrlProximal, &cfg, &h, &x).unwrap();
        let b = bound_series(TheoremId::WeakProximal, &cfg, &h, &x).unwrap();
        assert!(a.iter().zip(&b).all(|(a, b)| b > a));
    }
}
