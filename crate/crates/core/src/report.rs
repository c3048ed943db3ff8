//! Pass/fail reports shared by every verifier.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply for these parameters.
    Degenerate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    /// On failure, the first offending case; may be empty on success.
    pub witness: BTreeMap<String, String>,
    pub counts: BTreeMap<String, u64>,
    /// Recorded values such as scalars of proportionality.
    pub details: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> CheckReport {
        CheckReport {
            name: name.into(),
            status: Status::Pass,
            witness: BTreeMap::new(),
            counts: BTreeMap::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn fail(mut self, key: impl Into<String>, value: impl ToString) -> CheckReport {
        self.status = Status::Fail;
        self.witness.insert(key.into(), value.to_string());
        self
    }

    pub fn mark_failed(&mut self, key: impl Into<String>, value: impl ToString) {
        self.status = Status::Fail;
        self.witness.insert(key.into(), value.to_string());
    }

    pub fn witness(&mut self, key: impl Into<String>, value: impl ToString) {
        self.witness.insert(key.into(), value.to_string());
    }

    pub fn count(&mut self, key: impl Into<String>, n: u64) {
        *self.counts.entry(key.into()).or_insert(0) += n;
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl ToString) {
        self.details.insert(key.into(), value.to_string());
    }

    pub fn degenerate(mut self, why: impl ToString) -> CheckReport {
        self.status = Status::Degenerate;
        self.details.insert("reason".into(), why.to_string());
        self
    }

    /// Folds a sub-check in: failure of the part fails the whole, prefixing its witness keys.
    pub fn absorb(&mut self, part: &CheckReport) {
        if part.status == Status::Fail {
            self.status = Status::Fail;
        }
        for (k, v) in &part.witness {
            self.witness.insert(alloc::format!("{}.{}", part.name, k), v.clone());
        }
        for (k, v) in &part.counts {
            *self.counts.entry(alloc::format!("{}.{}", part.name, k)).or_insert(0) += v;
        }
        for (k, v) in &part.details {
            self.details.insert(alloc::format!("{}.{}", part.name, k), v.clone());
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.status)?;
        for (k, v) in &self.counts {
            write!(f, " {}={}", k, v)?;
        }
        for (k, v) in &self.witness {
            write!(f, "\n  witness {}: {}", k, v)?;
        }
        Ok(())
    }
}
