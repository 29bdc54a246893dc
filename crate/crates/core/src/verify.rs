//! Axiom-by-axiom verification reports.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AxiomCheck {
    pub axiom: String,
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<AxiomCheck>,
}

impl VerificationReport {
    pub fn new(subject: &str) -> Self {
        Self {
            subject: subject.to_string(),
            checks: Vec::new(),
        }
    }

    /// Records `deviation` for `axiom`; passes iff `deviation ≤ threshold`.
    pub fn record(&mut self, axiom: &str, deviation: f64, threshold: f64) {
        let passed = deviation.is_finite() && deviation <= threshold;
        self.checks.push(AxiomCheck {
            axiom: axiom.to_string(),
            deviation,
            passed,
        });
    }

    /// Records a boolean condition; deviation is 0 or 1.
    pub fn record_flag(&mut self, axiom: &str, holds: bool) {
        self.checks.push(AxiomCheck {
            axiom: axiom.to_string(),
            deviation: if holds { 0.0 } else { 1.0 },
            passed: holds,
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn deviation(&self, axiom: &str) -> Option<f64> {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .map(|c| c.deviation)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.deviation))
    }

    /// First failing axiom as an error.
    pub fn into_result(self) -> Result<Self> {
        let first = self
            .failures()
            .next()
            .map(|f| (f.axiom.clone(), f.deviation));
        match first {
            Some((axiom, deviation)) => Err(Error::AxiomViolation { axiom, deviation }),
            None => Ok(self),
        }
    }
}
