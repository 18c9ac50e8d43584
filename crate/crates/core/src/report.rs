//! Residual bookkeeping shared by the identity suites.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity_name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            identity_name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    /// Checks that were not evaluated, with the reason.
    pub notices: Vec<String>,
}

impl IdentityReport {
    pub fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(IdentityCheck::new(name, residual, tolerance));
    }

    pub fn notice(&mut self, msg: impl Into<String>) {
        self.notices.push(msg.into());
    }

    pub fn extend(&mut self, other: IdentityReport) {
        self.checks.extend(other.checks);
        self.notices.extend(other.notices);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |a, c| a.max(c.residual))
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.identity_name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
