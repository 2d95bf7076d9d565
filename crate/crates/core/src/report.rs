//! Check reports shared by every verification suite.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One violated identity instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub constraint: String,
    pub indices: Vec<i64>,
    /// Extra location data such as the symbols or the monomial involved.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub context: String,
    /// `lhs − rhs` of the violated identity, in text form.
    pub residue: String,
}

impl Failure {
    pub fn new(constraint: impl Into<String>, indices: Vec<i64>, residue: impl fmt::Display) -> Self {
        Failure {
            constraint: constraint.into(),
            indices,
            context: String::new(),
            residue: residue.to_string(),
        }
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub checks: u64,
    pub failures: Vec<Failure>,
    pub status: Status,
    pub elapsed_us: u64,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Report {
        Report {
            suite: suite.into(),
            params: BTreeMap::new(),
            checks: 0,
            failures: Vec::new(),
            status: Status::Pass,
            elapsed_us: 0,
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl fmt::Display) -> Report {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn pass(&mut self) {
        self.checks += 1;
    }

    pub fn fail(&mut self, failure: Failure) {
        self.checks += 1;
        self.failures.push(failure);
        self.status = Status::Fail;
    }

    /// Records one check; `None` means it held.
    pub fn record(&mut self, outcome: Option<Failure>) {
        match outcome {
            None => self.pass(),
            Some(f) => self.fail(f),
        }
    }

    /// Folds another report's counts and failures into this one.
    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        if other.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.failures.extend(other.failures);
        self.elapsed_us += other.elapsed_us;
    }

    pub fn set_elapsed(&mut self, elapsed: Duration) {
        self.elapsed_us = elapsed.as_micros() as u64;
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> usize {
        self.failures.len()
    }

    /// Failures for a given constraint identifier.
    pub fn failures_of<'a>(&'a self, constraint: &'a str) -> impl Iterator<Item = &'a Failure> + 'a {
        self.failures.iter().filter(move |f| f.constraint == constraint)
    }
}

/// Number of failure lines printed in the text summary.
const SHOWN_FAILURES: usize = 20;

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite    {}", self.suite)?;
        for (k, v) in &self.params {
            writeln!(f, "param    {k} = {v}")?;
        }
        writeln!(f, "checks   {}", self.checks)?;
        writeln!(f, "failures {}", self.failures.len())?;
        for fail in self.failures.iter().take(SHOWN_FAILURES) {
            write!(f, "  FAIL {} {:?}", fail.constraint, fail.indices)?;
            if !fail.context.is_empty() {
                write!(f, " ({})", fail.context)?;
            }
            writeln!(f, ": residue {}", fail.residue)?;
        }
        if self.failures.len() > SHOWN_FAILURES {
            writeln!(f, "  ... {} more", self.failures.len() - SHOWN_FAILURES)?;
        }
        writeln!(f, "elapsed  {:.3} ms", self.elapsed_us as f64 / 1000.0)?;
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
        };
        write!(f, "status   {status}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_tracks_failures() {
        let mut r = Report::new("demo").param("window", 3);
        r.pass();
        assert!(r.is_pass());
        r.record(Some(Failure::new("jacobi", vec![1, 2, 3], "C:1")));
        assert!(!r.is_pass());
        assert_eq!((r.checks, r.failed()), (2, 1));

        let mut merged = Report::new("demo");
        merged.pass();
        merged.merge(r);
        assert_eq!(merged.checks, 3);
        assert_eq!(merged.status, Status::Fail);
    }
}
