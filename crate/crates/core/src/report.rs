use std::fmt;

use crate::error::Result;
use crate::subspace::Subspace;

/// One inclusion, equality or dimension comparison that fed a decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    /// `lhs ⊆ rhs`.
    pub fn inclusion(label: impl Into<String>, lhs: &Subspace, rhs: &Subspace) -> Result<Check> {
        Ok(Check {
            label: label.into(),
            holds: rhs.contains(lhs)?,
            detail: format!("dim {} vs dim {}", lhs.dim(), rhs.dim()),
        })
    }

    pub fn equality(label: impl Into<String>, lhs: &Subspace, rhs: &Subspace) -> Check {
        Check {
            label: label.into(),
            holds: lhs == rhs,
            detail: format!("dim {} vs dim {}", lhs.dim(), rhs.dim()),
        }
    }

    /// `lhs >= rhs`.
    pub fn at_least(label: impl Into<String>, lhs: usize, rhs: usize) -> Check {
        Check {
            label: label.into(),
            holds: lhs >= rhs,
            detail: format!("{lhs} vs {rhs}"),
        }
    }

    /// `lhs <= rhs`.
    pub fn at_most(label: impl Into<String>, lhs: usize, rhs: usize) -> Check {
        Check {
            label: label.into(),
            holds: lhs <= rhs,
            detail: format!("{lhs} vs {rhs}"),
        }
    }

    pub fn flag(label: impl Into<String>, holds: bool, detail: impl Into<String>) -> Check {
        Check {
            label: label.into(),
            holds,
            detail: detail.into(),
        }
    }
}

/// A yes/no answer with the checks that justify it.
///
/// `checks` decide the verdict (all must hold) and are listed in the order
/// of the statement they come from. `cross_checks` are independent
/// recomputations recorded alongside; they never change the verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionReport {
    pub criterion: String,
    pub verdict: bool,
    pub checks: Vec<Check>,
    pub cross_checks: Vec<Check>,
}

impl DecisionReport {
    pub fn new(criterion: impl Into<String>) -> DecisionReport {
        DecisionReport {
            criterion: criterion.into(),
            verdict: true,
            checks: Vec::new(),
            cross_checks: Vec::new(),
        }
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.verdict &= check.holds;
        self.checks.push(check);
        self
    }

    pub fn cross_check(&mut self, check: Check) -> &mut Self {
        self.cross_checks.push(check);
        self
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.holds)
    }

    /// The verdict agrees with its evidence.
    pub fn recomputes(&self) -> bool {
        self.verdict == self.checks.iter().all(|c| c.holds)
    }

    pub fn cross_checks_hold(&self) -> bool {
        self.cross_checks.iter().all(|c| c.holds)
    }

    pub fn cross_check_named(&self, label: &str) -> Option<&Check> {
        self.cross_checks.iter().find(|c| c.label == label)
    }

    pub fn check_named(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }
}

impl fmt::Display for DecisionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "criterion {}: verdict {}", self.criterion, self.verdict)?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {} ({})",
                if c.holds { "ok" } else { "FAIL" },
                c.label,
                c.detail
            )?;
        }
        if let Some(c) = self.first_failure() {
            writeln!(f, "  obstruction: {}", c.label)?;
        }
        for c in &self.cross_checks {
            writeln!(
                f,
                "  cross-check [{}] {} ({})",
                if c.holds { "ok" } else { "FAIL" },
                c.label,
                c.detail
            )?;
        }
        Ok(())
    }
}
