//! Plain check/report types shared by every verification suite.  The CLI
//! serializes these; the library keeps them dependency-free.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// One verified statement; `witness` carries the offending expression on
/// failure.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: String,
    pub statement: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(id: impl Into<String>, statement: impl Into<String>) -> Self {
        Check { id: id.into(), statement: statement.into(), status: Status::Pass, witness: None }
    }

    pub fn fail(
        id: impl Into<String>,
        statement: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Check {
            id: id.into(),
            statement: statement.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn of(
        id: impl Into<String>,
        statement: impl Into<String>,
        ok: bool,
        witness: impl Into<String>,
    ) -> Self {
        if ok {
            Check::pass(id, statement)
        } else {
            Check::fail(id, statement, witness)
        }
    }
}

/// A named batch of checks.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// Canonical ordering for output: sorted by check id.
    pub fn sorted(mut self) -> Report {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }
}
