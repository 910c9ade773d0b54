//! Named property suites run by `ftrl verify` and by the acceptance tests.
//!
//! Every check reports a measured quantity and the limit it must not
//! exceed; inequalities that must hold on every run are reported as a
//! violation count with limit 0.

mod bounds;
mod core;
mod learners;
mod mirror;
mod oracle;
mod rng;
mod streams;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub use self::bounds::{bound_suite, BoundPair};
pub use self::core::core_suite;
pub use self::learners::learner_suite;
pub use self::mirror::{
    lazy_greedy_split, md_ftrl_equivalence_gap, mirror_suite, oscillation_run, projection_form_gaps,
    projection_forms_suite,
};
pub use self::oracle::{
    lemma_sum_suite, lemma_sum_suite_with, oracle_certification, oracle_suite, smoothchange_suite,
    smoothchange_suite_with,
};
pub use self::streams::streams_suite;

/// One measured property.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub limit: f64,
    pub instances: usize,
    /// Require `measured < limit` instead of `<=`.
    pub strict: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, limit: f64, instances: usize) -> Self {
        Check {
            name: name.into(),
            measured,
            limit,
            instances,
            strict: false,
        }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    /// `measured <= limit` (or `<` when strict); NaN fails.
    pub fn passed(&self) -> bool {
        if self.strict {
            self.measured < self.limit
        } else {
            self.measured <= self.limit
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: measured {:.3e} {} {:.3e} over {} instances",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            if self.strict { "<" } else { "<=" },
            self.limit,
            self.instances
        )
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// The check called `name`.
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// The suites `verify` accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    CoreInvariants,
    LearnerInvariants,
    MirrorEquivalence,
    ProjectionForms,
    Bounds,
    OracleClosedForm,
    LemmaSum,
    SmoothChange,
    Streams,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::CoreInvariants,
        SuiteName::LearnerInvariants,
        SuiteName::MirrorEquivalence,
        SuiteName::ProjectionForms,
        SuiteName::Bounds,
        SuiteName::OracleClosedForm,
        SuiteName::LemmaSum,
        SuiteName::SmoothChange,
        SuiteName::Streams,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SuiteName::CoreInvariants => "core-invariants",
            SuiteName::LearnerInvariants => "learner-invariants",
            SuiteName::MirrorEquivalence => "mirror-equivalence",
            SuiteName::ProjectionForms => "projection-forms",
            SuiteName::Bounds => "bounds",
            SuiteName::OracleClosedForm => "oracle-closed-form",
            SuiteName::LemmaSum => "lemma-sum",
            SuiteName::SmoothChange => "smoothchange",
            SuiteName::Streams => "streams",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// Runs one suite with the given seed.
pub fn run_suite(name: SuiteName, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match name {
        SuiteName::CoreInvariants => core_suite(seed)?,
        SuiteName::LearnerInvariants => learner_suite(seed)?,
        SuiteName::MirrorEquivalence => mirror_suite(seed)?,
        SuiteName::ProjectionForms => projection_forms_suite(seed)?,
        SuiteName::Bounds => {
            let mut all = Vec::new();
            for pair in BoundPair::ALL {
                all.extend(bound_suite(pair, seed, 200)?);
            }
            all
        }
        SuiteName::OracleClosedForm => oracle_suite(seed)?,
        SuiteName::LemmaSum => lemma_sum_suite(seed)?,
        SuiteName::SmoothChange => smoothchange_suite(seed)?,
        SuiteName::Streams => streams_suite(seed)?,
    };
    Ok(SuiteReport {
        suite: name,
        checks,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in SuiteName::ALL {
            assert_eq!(s.name().parse::<SuiteName>().unwrap(), s);
        }
        assert!("nope".parse::<SuiteName>().is_err());
    }

    #[test]
    fn check_comparisons() {
        assert!(Check::new("a", 1.0, 1.0, 1).passed());
        assert!(!Check::new("a", 1.0, 1.0, 1).strict().passed());
        assert!(!Check::new("a", f64::NAN, 1.0, 1).passed());
        assert!(Check::new("a", 0.5, 1.0, 3).to_string().starts_with("PASS a:"));
    }

    #[test]
    fn small_runs_pass() {
        for c in oracle_certification(11, 20).unwrap() {
            assert!(c.passed(), "{c}");
        }
        for c in bound_suite(BoundPair::AdaGrad, 11, 5).unwrap() {
            assert!(c.passed(), "{c}");
        }
        assert!(md_ftrl_equivalence_gap(11, 5).unwrap() <= crate::tolerance::STATE_EQUIVALENCE);
        assert_eq!(lazy_greedy_split().unwrap(), 1.0);
    }
}
