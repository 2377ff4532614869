//! Check reports: one record per identity, with a witness on failure.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Basis element (or pair) at which the identity first fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    /// Rendered `lhs − rhs`; never "0" for a failing check.
    pub difference: String,
}

impl Witness {
    pub fn new(at: Option<String>, difference: impl Into<String>) -> Self {
        Self {
            at,
            difference: difference.into(),
        }
    }

    pub fn at(label: impl Into<String>, difference: impl Into<String>) -> Self {
        Self::new(Some(label.into()), difference)
    }

    pub fn global(difference: impl Into<String>) -> Self {
        Self::new(None, difference)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    // wall-clock time is kept out of JSON so reports stay byte-identical
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    /// Time `f` and record its outcome.
    pub fn run(
        &mut self,
        id: &str,
        statement: &str,
        f: impl FnOnce() -> Result<(), Witness>,
    ) -> bool {
        let start = Instant::now();
        let outcome = f();
        let passed = outcome.is_ok();
        self.checks.push(Check {
            id: id.to_string(),
            statement: statement.to_string(),
            passed,
            witness: outcome.err(),
            elapsed: start.elapsed(),
        });
        passed
    }

    pub fn record(&mut self, id: &str, statement: &str, outcome: Result<(), Witness>) -> bool {
        self.run(id, statement, || outcome)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn elapsed(&self) -> Duration {
        self.checks.iter().map(|c| c.elapsed).sum()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.subject.is_empty() {
            writeln!(f, "{}", self.subject)?;
        }
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(
                f,
                "  [{mark}] {:<34} {}  ({:.1} ms)",
                c.id,
                c.statement,
                c.elapsed.as_secs_f64() * 1e3
            )?;
            if let Some(w) = &c.witness {
                match &w.at {
                    Some(at) => writeln!(f, "         at {at}: difference {}", w.difference)?,
                    None => writeln!(f, "         difference {}", w.difference)?,
                }
            }
        }
        let failed = self.failures().count();
        write!(
            f,
            "  {} checks, {} failed",
            self.checks.len(),
            failed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_deterministic_and_untimed() {
        let mut r = Report::new("demo");
        r.run("a", "x = x", || Ok(()));
        r.run("b", "y = z", || Err(Witness::at("g", "2·g")));
        assert!(!r.passed());
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("elapsed"));
        assert_eq!(json, serde_json::to_string(&r.clone()).unwrap());
        assert_eq!(r.failures().next().unwrap().id, "b");
    }
}
