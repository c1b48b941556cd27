//! Suite reports: per-check tallies plus every failing trial.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Outcome of one named check within one trial.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest residual that had to stay below the suite tolerance.
    pub residual: f64,
    pub detail: String,
}

impl Check {
    pub fn new(name: &'static str) -> Self {
        Check { name, passed: true, residual: 0.0, detail: String::new() }
    }

    /// Fold in one evaluation; the first failure's description is kept.
    pub fn record(&mut self, ok: bool, residual: f64, detail: impl FnOnce() -> String) {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        self.residual = self.residual.max(residual);
        if !ok && self.passed {
            self.passed = false;
            self.detail = detail();
        }
    }

    /// A residual-only evaluation against `tol`.
    pub fn bound(&mut self, residual: f64, tol: f64, detail: impl FnOnce() -> String) {
        self.record(residual < tol, residual, detail);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub evaluated: usize,
    pub failures: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub check: String,
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
    pub max_residual: f64,
}

impl Report {
    /// Assemble from per-trial outcomes given in trial order.
    pub fn assemble(suite: &str, seed: u64, outcomes: Vec<(u64, Vec<Check>)>) -> Report {
        let trials = outcomes.len();
        let mut checks: Vec<CheckSummary> = Vec::new();
        let mut failures = Vec::new();
        for (trial, list) in outcomes {
            for c in list {
                let idx = match checks.iter().position(|s| s.name == c.name) {
                    Some(i) => i,
                    None => {
                        checks.push(CheckSummary {
                            name: c.name.to_string(),
                            evaluated: 0,
                            failures: 0,
                            max_residual: 0.0,
                        });
                        checks.len() - 1
                    }
                };
                let s = &mut checks[idx];
                s.evaluated += 1;
                s.max_residual = s.max_residual.max(c.residual);
                if !c.passed {
                    s.failures += 1;
                    failures.push(Failure {
                        trial,
                        check: c.name.to_string(),
                        residual: c.residual,
                        detail: c.detail,
                    });
                }
            }
        }
        let max_residual = checks.iter().map(|c| c.max_residual).fold(0.0, f64::max);
        Report { suite: suite.to_string(), seed, trials, checks, failures, max_residual }
    }

    /// Concatenate several reports under one suite name.
    pub fn merge(suite: &str, seed: u64, parts: Vec<Report>) -> Report {
        let trials = parts.iter().map(|r| r.trials).max().unwrap_or(0);
        let mut checks = Vec::new();
        let mut failures = Vec::new();
        for r in parts {
            checks.extend(r.checks);
            failures.extend(r.failures);
        }
        let max_residual = checks.iter().map(|c: &CheckSummary| c.max_residual).fold(0.0, f64::max);
        Report { suite: suite.to_string(), seed, trials, checks, failures, max_residual }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures_of(&self, name: &str) -> impl Iterator<Item = &Failure> {
        let name = name.to_string();
        self.failures.iter().filter(move |f| f.check == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "suite {} seed {} trials {}: {verdict} (max residual {:.2e})",
            self.suite, self.seed, self.trials, self.max_residual
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:<28} {:>5} evaluated {:>5} failed  max residual {:.2e}",
                c.name, c.evaluated, c.failures, c.max_residual
            );
        }
        for f in self.failures.iter().take(20) {
            let _ = writeln!(out, "  failure trial {} {}: {} ({:.2e})", f.trial, f.check, f.detail, f.residual);
        }
        if self.failures.len() > 20 {
            let _ = writeln!(out, "  ... {} more failures", self.failures.len() - 20);
        }
        out
    }
}
