use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Counterexamples kept per report; `failures` counts all of them.
pub const MAX_COUNTEREXAMPLES: usize = 32;

/// Outcome of one verification suite. `pass` holds iff `counterexamples`
/// is empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub statement: String,
    pub params: Map<String, Value>,
    pub range: String,
    pub checks: u64,
    pub pass: bool,
    pub failures: u64,
    pub counterexamples: Vec<Value>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    /// The report with its timing zeroed, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        VerifyReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

/// Check counts and counterexamples from a slice of the work. Tallies are
/// merged in a fixed order so reports do not depend on scheduling.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub checks: u64,
    pub failures: u64,
    pub examples: Vec<Value>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.fail(payload());
        }
    }

    pub fn fail(&mut self, payload: Value) {
        self.failures += 1;
        if self.examples.len() < MAX_COUNTEREXAMPLES {
            self.examples.push(payload);
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures += other.failures;
        let room = MAX_COUNTEREXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
        self
    }

    pub fn merge_all(parts: impl IntoIterator<Item = Tally>) -> Tally {
        parts.into_iter().fold(Tally::default(), Tally::merge)
    }
}

pub(crate) struct ReportBuilder {
    statement: &'static str,
    params: Map<String, Value>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(statement: &'static str, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        ReportBuilder {
            statement,
            params,
            start: Instant::now(),
        }
    }

    pub fn finish(self, range: impl Into<String>, tally: Tally) -> VerifyReport {
        VerifyReport {
            statement: self.statement.to_string(),
            params: self.params,
            range: range.into(),
            checks: tally.checks,
            pass: tally.failures == 0,
            failures: tally.failures,
            counterexamples: tally.examples,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}
