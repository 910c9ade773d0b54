use std::io::Write;

use super::catalog::{build_learner, build_stream, LearnerKind, Params, StreamKind};
use super::config::Config;
use super::format::format_g;
use super::CliError;
use crate::bounds::{check_compatible, comparator_for, evaluate, run_online, RegretRecord, TheoremId};
use crate::error::Result;
use crate::learners::Learner;
use crate::mirror::MirrorLearner;
use crate::primitives::{Centering, CompositePenalty, FeasibleSet, LearningRateSchedule, Point};
use crate::streams::l1_adversary_next;
use crate::suites::{run_suite, SuiteName, SuiteReport};
use crate::OnlineLearner;

/// A finished `run`: the per-round accounting and the bound it was held to.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub learner: LearnerKind,
    pub bound: TheoremId,
    pub record: RegretRecord,
}

fn learner_of(cfg: &Config) -> std::result::Result<LearnerKind, CliError> {
    let name = cfg
        .get("learner")
        .ok_or_else(|| CliError::Usage("config must name a learner".into()))?;
    name.parse().map_err(CliError::from)
}

fn bound_of(cfg: &Config, kind: LearnerKind) -> std::result::Result<TheoremId, CliError> {
    let bound = match cfg.get("bound") {
        Some(b) => b.parse()?,
        None => kind.bounds()[0],
    };
    if !kind.bounds().contains(&bound) {
        let allowed: Vec<&str> = kind.bounds().iter().map(|b| b.name()).collect();
        return Err(CliError::Usage(format!(
            "bound '{bound}' does not apply to learner '{kind}' (allowed: {})",
            allowed.join(", ")
        )));
    }
    Ok(bound)
}

/// Plays one learner against one stream and evaluates the configured bound
/// at every prefix against the best fixed comparator in hindsight.
pub fn run_experiment(cfg: &Config) -> std::result::Result<RunOutput, CliError> {
    let kind = learner_of(cfg)?;
    let bound = bound_of(cfg, kind)?;
    let params = Params::from_config(cfg)?;
    if params.stream == StreamKind::Logistic {
        return Err(CliError::Usage(
            "run needs a closed-form comparator; use compare for logistic streams".into(),
        ));
    }
    let mut learner = build_learner(kind, &params)?;
    let mut stream = build_stream(kind, &params)?;
    let log = run_online(learner.as_mut(), stream.as_mut(), params.rounds)?;
    if log.history.rounds() > 0 {
        check_compatible(bound, &log.history).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let comparator = comparator_for(&log.losses, &log.set, params.n)?;
    let record = if log.history.rounds() == 0 {
        RegretRecord {
            loss: Vec::new(),
            comp_loss: Vec::new(),
            cum_regret: Vec::new(),
            bound: Some(Vec::new()),
            decomposition: Vec::new(),
        }
    } else {
        evaluate(&log, &comparator, Some((bound, &params.bound_config())))?
    };
    Ok(RunOutput {
        learner: kind,
        bound,
        record,
    })
}

pub fn write_run_csv(out: &mut dyn Write, run: &RunOutput) -> std::io::Result<()> {
    writeln!(out, "round,loss,comp_loss,cum_regret,bound,decomposition")?;
    let r = &run.record;
    let bound = r.bound.as_deref().unwrap_or(&[]);
    for t in 0..r.rounds() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            t + 1,
            format_g(r.loss[t]),
            format_g(r.comp_loss[t]),
            format_g(r.cum_regret[t]),
            bound.get(t).map_or_else(String::new, |b| format_g(*b)),
            format_g(r.decomposition[t]),
        )?;
    }
    Ok(())
}

/// Per-round losses and sparsity of one learner in a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareTrace {
    pub learner: LearnerKind,
    pub loss: Vec<f64>,
    pub cum_loss: Vec<f64>,
    /// Nonzero coordinates of the iterate after each round.
    pub nonzeros: Vec<usize>,
}

impl CompareTrace {
    pub fn final_nonzeros(&self) -> Option<usize> {
        self.nonzeros.last().copied()
    }
}


fn trace_one(kind: LearnerKind, params: &Params) -> Result<CompareTrace> {
    let mut learner = build_learner(kind, params)?;
    let mut stream = build_stream(kind, params)?;
    let mut loss = Vec::with_capacity(params.rounds);
    let mut nonzeros = Vec::with_capacity(params.rounds);
    for t in 1..=params.rounds {
        let x = learner.current().clone();
        let Some(event) = stream.next_event(t, &x)? else {
            break;
        };
        loss.push(event.loss.value(&x));
        let next = learner.observe(&event.gradient)?;
        nonzeros.push(next.nonzeros());
    }
    let cum_loss = loss
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    Ok(CompareTrace {
        learner: kind,
        loss,
        cum_loss,
        nonzeros,
    })
}

/// Runs each learner on its own copy of the stream, one thread per learner.
pub fn compare_learners(kinds: &[LearnerKind], params: &Params) -> Result<Vec<CompareTrace>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = kinds
            .iter()
            .map(|&k| scope.spawn(move || trace_one(k, params)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("learner thread panicked"))
            .collect()
    })
}

/// Parses `learners = a,b,...` (at least two) and runs the comparison.
pub fn run_compare(cfg: &Config) -> std::result::Result<Vec<CompareTrace>, CliError> {
    let list = cfg
        .get("learners")
        .ok_or_else(|| CliError::Usage("config must list learners = a,b".into()))?;
    let kinds = list
        .split(',')
        .map(|s| s.trim().parse::<LearnerKind>())
        .collect::<Result<Vec<_>>>()?;
    if kinds.len() < 2 {
        return Err(CliError::Usage("compare needs at least two learners".into()));
    }
    let params = Params::from_config(cfg)?;
    Ok(compare_learners(&kinds, &params)?)
}

pub fn write_compare_csv(out: &mut dyn Write, traces: &[CompareTrace]) -> std::io::Result<()> {
    let header: Vec<String> = traces
        .iter()
        .map(|tr| {
            let l = tr.learner.name();
            format!("{l}_loss,{l}_cum_loss,{l}_nonzeros")
        })
        .collect();
    writeln!(out, "round,{}", header.join(","))?;
    let rounds = traces.iter().map(|tr| tr.loss.len()).min().unwrap_or(0);
    for t in 0..rounds {
        write!(out, "{}", t + 1)?;
        for tr in traces {
            write!(
                out,
                ",{},{},{}",
                format_g(tr.loss[t]),
                format_g(tr.cum_loss[t]),
                tr.nonzeros[t]
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Constants of the one-dimensional L1 oscillation example.
pub const REPRO_G: f64 = 11.0;
pub const REPRO_LAMBDA: f64 = 0.5;
pub const REPRO_ROUNDS: usize = 16;

/// Played points `x_t`, `t = 1..=T`, of mirror descent and composite FTRL
/// on the adaptive L1 adversary, plus the gradient prefix sums FTRL saw.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproL1 {
    pub x_md: Vec<f64>,
    pub x_ftrl: Vec<f64>,
    pub g_sums: Vec<f64>,
}

impl ReproL1 {
    /// Oscillation magnitude `(G - lambda) / sqrt(T)`.
    pub fn amplitude() -> f64 {
        (REPRO_G - REPRO_LAMBDA) / (REPRO_ROUNDS as f64).sqrt()
    }

    /// First round from which composite FTRL must sit at zero.
    pub fn zero_onset() -> usize {
        (REPRO_G / (2.0 * REPRO_LAMBDA) + 1.5).ceil() as usize
    }
}

/// Mirror descent faces the adversary; FTRL is fed the same gradients.
pub fn repro_l1() -> Result<ReproL1> {
    let eta = 2.0 / (REPRO_ROUNDS as f64).sqrt();
    let sched = LearningRateSchedule::Constant { eta };
    let penalty = CompositePenalty::l1(REPRO_LAMBDA)?;
    let mut md = MirrorLearner::new(1, FeasibleSet::Unconstrained, sched.clone(), penalty)?;
    let mut ftrl = Learner::composite_l1(1, FeasibleSet::Unconstrained, sched, Centering::Centered, penalty)?;
    let mut out = ReproL1 {
        x_md: Vec::with_capacity(REPRO_ROUNDS),
        x_ftrl: Vec::with_capacity(REPRO_ROUNDS),
        g_sums: Vec::with_capacity(REPRO_ROUNDS),
    };
    let mut g_sum = 0.0;
    for t in 1..=REPRO_ROUNDS {
        let x_md = md.current()[0];
        out.x_md.push(x_md);
        out.x_ftrl.push(ftrl.current()[0]);
        let g = l1_adversary_next(x_md, t, REPRO_G, REPRO_LAMBDA);
        g_sum += g;
        out.g_sums.push(g_sum);
        let g = Point::scalar(g)?;
        md.observe(&g)?;
        ftrl.observe(&g)?;
    }
    Ok(out)
}

/// Checks the oscillation and the zero region; returns the first failure.
pub fn check_repro_l1(r: &ReproL1) -> std::result::Result<(), String> {
    let amp = ReproL1::amplitude();
    for t in 2..=REPRO_ROUNDS {
        let expected = if t % 2 == 0 { amp } else { -amp };
        let x = r.x_md[t - 1];
        if (x - expected).abs() > 1e-12 {
            return Err(format!("x_md at t={t} is {x}, expected {expected}"));
        }
    }
    let onset = ReproL1::zero_onset();
    for t in onset..=REPRO_ROUNDS {
        let x = r.x_ftrl[t - 1];
        if x != 0.0 {
            return Err(format!("x_ftrl at t={t} is {x}, expected 0"));
        }
        // x_t is chosen from g_{1:t-1}; it is zero once |g_{1:t-1}| <= (t-1) lambda.
        let s = r.g_sums[t - 2];
        if s.abs() > (t - 1) as f64 * REPRO_LAMBDA {
            return Err(format!("|g_1:{}| = {} exceeds {} lambda", t - 1, s.abs(), t - 1));
        }
    }
    Ok(())
}

pub fn write_repro_csv(out: &mut dyn Write, r: &ReproL1) -> std::io::Result<()> {
    writeln!(out, "t,x_md,x_ftrl")?;
    for t in 0..r.x_md.len() {
        writeln!(out, "{},{},{}", t + 1, format_g(r.x_md[t]), format_g(r.x_ftrl[t]))?;
    }
    Ok(())
}

/// `all` expands to every suite.
pub fn parse_suites(name: &str) -> std::result::Result<Vec<SuiteName>, CliError> {
    if name == "all" {
        return Ok(SuiteName::ALL.to_vec());
    }
    Ok(vec![name.parse::<SuiteName>()?])
}

pub fn write_suite_report(out: &mut dyn Write, report: &SuiteReport) -> std::io::Result<()> {
    for check in &report.checks {
        writeln!(out, "{check}")?;
    }
    writeln!(
        out,
        "suite {}: {} ({} checks, {:.2}s)",
        report.suite,
        if report.passed() { "PASS" } else { "FAIL" },
        report.checks.len(),
        report.elapsed.as_secs_f64()
    )
}

pub fn verify(out: &mut dyn Write, suites: &[SuiteName], seed: u64) -> std::result::Result<(), CliError> {
    let mut failed = Vec::new();
    for &s in suites {
        let report = run_suite(s, seed)?;
        write_suite_report(out, &report)?;
        if !report.passed() {
            failed.push(s.name());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(format!("failing suites: {}", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Config {
        Config::parse(text).unwrap()
    }

    #[test]
    fn dual_averaging_run_stays_under_bound() {
        let run = run_experiment(&cfg("learner = dual-averaging\nT = 100\nseed = 3")).unwrap();
        assert_eq!(run.record.rounds(), 100);
        assert_eq!(run.bound, TheoremId::DaClosedForm);
        assert!(run.record.first_bound_violation().is_none());
    }

    #[test]
    fn mismatched_bound_is_usage() {
        let err = run_experiment(&cfg("learner = entropic\nbound = prox-closed-form")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn zero_rounds_gives_header_only() {
        let run = run_experiment(&cfg("learner = ftrl-proximal\nT = 0")).unwrap();
        let mut buf = Vec::new();
        write_run_csv(&mut buf, &run).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "round,loss,comp_loss,cum_regret,bound,decomposition\n");
    }

    #[test]
    fn every_learner_runs_under_its_bounds() {
        for kind in LearnerKind::ALL {
            let stream = if kind == LearnerKind::ScOgd { "random-quadratic" } else { "random-linear" };
            for bound in kind.bounds() {
                let text = format!("learner = {kind}\nbound = {bound}\nstream = {stream}\nT = 60\nn = 3\nlambda = 0.05");
                let run = run_experiment(&cfg(&text)).unwrap_or_else(|e| panic!("{kind}/{bound}: {e}"));
                assert_eq!(run.record.first_bound_violation(), None, "{kind}/{bound}");
            }
        }
    }

    #[test]
    fn repro_trajectories() {
        let r = repro_l1().unwrap();
        assert_eq!(r.x_md[0], 0.0);
        assert!((r.x_md[1] - 2.625).abs() < 1e-12);
        assert!((r.x_ftrl[1] - 2.625).abs() < 1e-12);
        assert!((r.x_md[2] + 2.625).abs() < 1e-12);
        assert_eq!(ReproL1::zero_onset(), 13);
        check_repro_l1(&r).unwrap();
    }

    #[test]
    fn compare_counts_nonzeros() {
        let traces = run_compare(&cfg("learners = ftrl-l1, md-l1\nstream = logistic\nn = 10\nT = 50\nlambda = 0.05")).unwrap();
        assert_eq!(traces.len(), 2);
        assert!(traces.iter().all(|t| t.loss.len() == 50 && t.final_nonzeros().unwrap() <= 10));
        assert_eq!(traces[0].loss, run_compare(&cfg("learners = ftrl-l1, md-l1\nstream = logistic\nn = 10\nT = 50\nlambda = 0.05")).unwrap()[0].loss);
    }

    #[test]
    fn unknown_suite_is_usage() {
        assert_eq!(parse_suites("nope").unwrap_err().exit_code(), 2);
        assert_eq!(parse_suites("all").unwrap().len(), SuiteName::ALL.len());
    }
}
