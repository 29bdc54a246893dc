//! Battery reports: JSON (schema-stable field order) and plain text.

use std::fmt::Write as _;

use qharm_core::harmonic::Verdict;
use qharm_core::measures::NONDEGENERACY_DEFINITION;
use qharm_core::scenario::ScenarioReport;
use qharm_core::Tolerance;
use serde::Serialize;

use crate::schema::LoadError;

pub const REPORT_VERSION: u32 = 1;

/// Exit status: every scenario passed.
pub const EXIT_OK: i32 = 0;
/// Some check, verification or expectation failed.
pub const EXIT_FAILURE: i32 = 1;
/// A file could not be read or violated the schema.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Serialize)]
pub struct LoadFailure {
    pub kind: &'static str,
    pub message: String,
}

impl From<&LoadError> for LoadFailure {
    fn from(e: &LoadError) -> Self {
        Self {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load_error: Option<LoadFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ScenarioReport>,
}

impl Entry {
    pub fn passed(&self) -> bool {
        self.load_error.is_none() && self.report.as_ref().is_some_and(ScenarioReport::passed)
    }

    pub fn first_failure(&self) -> Option<String> {
        if let Some(e) = &self.load_error {
            return Some(e.message.clone());
        }
        self.report.as_ref().and_then(|r| r.first_failure.clone())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub report_version: u32,
    pub stage: &'static str,
    pub tolerance: Tolerance,
    pub seed: u64,
    pub nondegeneracy_definition: &'static str,
    pub entries: Vec<Entry>,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
    pub exit_code: i32,
    pub wall_time_ms: f64,
}

impl BatteryReport {
    pub fn new(
        stage: &'static str,
        tolerance: Tolerance,
        seed: u64,
        entries: Vec<Entry>,
        wall_time_ms: f64,
    ) -> Self {
        let passed = entries.iter().filter(|e| e.passed()).count();
        let first_failure = entries
            .iter()
            .find_map(|e| e.first_failure().map(|f| format!("{}: {f}", e.source)));
        let mut rep = Self {
            report_version: REPORT_VERSION,
            stage,
            tolerance,
            seed,
            nondegeneracy_definition: NONDEGENERACY_DEFINITION,
            failed: entries.len() - passed,
            passed,
            entries,
            first_failure,
            exit_code: 0,
            wall_time_ms,
        };
        rep.exit_code = exit_code(&rep);
        rep
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            render_entry(&mut s, e);
        }
        let _ = writeln!(
            s,
            "\n{} scenario(s): {} passed, {} failed ({:.0} ms)",
            self.entries.len(),
            self.passed,
            self.failed,
            self.wall_time_ms
        );
        let _ = writeln!(s, "non-degeneracy: {}", self.nondegeneracy_definition);
        if let Some(f) = &self.first_failure {
            let _ = writeln!(s, "first failure: {f}");
        }
        s
    }
}

/// Derived from the entries alone.
pub fn exit_code(rep: &BatteryReport) -> i32 {
    let input_error = rep.entries.iter().any(|e| {
        e.load_error
            .as_ref()
            .is_some_and(|l| matches!(l.kind, "io" | "schema" | "too_large"))
    });
    if input_error {
        EXIT_INPUT
    } else if rep.entries.iter().all(Entry::passed) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn verdict_label(v: &Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::NotApplicable { .. } => "n/a ",
    }
}

fn render_entry(s: &mut String, e: &Entry) {
    let status = if e.passed() { "ok  " } else { "FAIL" };
    let Some(r) = &e.report else {
        let msg = e.load_error.as_ref().map_or("", |l| l.message.as_str());
        let _ = writeln!(s, "[{status}] {}: {msg}", e.source);
        return;
    };
    let _ = writeln!(
        s,
        "[{status}] {} ({}, dim A = {}, dim N = {}, {:.1} ms)",
        r.name, e.source, r.dim_group, r.dim_module, r.wall_time_ms
    );
    for v in &r.verification {
        let _ = writeln!(
            s,
            "    verify {:<14} max deviation {:.2e}{}",
            v.subject,
            v.max_deviation(),
            if v.passed() { "" } else { "  FAILED" }
        );
    }
    if let (Some(erg), Some(nd), Some(dim)) = (r.ergodic, &r.nondegeneracy, r.dim_harmonic) {
        let _ = writeln!(
            s,
            "    ergodic {erg}, non-degenerate {} (support ranks {:?}), dim H = {dim}, dim H_Γ = {}",
            nd.nondegenerate,
            nd.ranks,
            r.dim_group_harmonic.unwrap_or(0)
        );
    }
    if let Some(c) = &r.cesaro {
        let _ = writeln!(
            s,
            "    Cesàro mean vs E: {:.2e} at n = {}, {:.2e} at n = {}",
            c.deviation, c.steps, c.deviation_extended, c.steps_extended
        );
    }
    for chk in &r.checks {
        let mut line = format!("    [{}] {:<28}", verdict_label(&chk.verdict), chk.name);
        for (k, v) in &chk.metrics {
            let _ = write!(line, " {k}={v:.3e}");
        }
        if let Verdict::NotApplicable { reason } = &chk.verdict {
            let _ = write!(line, " ({reason})");
        }
        let _ = writeln!(s, "{}", line.trim_end());
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(
            s,
            "    oracle {}: kernel deviation {:.2e}, dim {} vs {}, span residual {:.2e}",
            if o.matches { "match" } else { "MISMATCH" },
            o.kernel_deviation,
            o.dim_quantum,
            o.dim_classical,
            o.harmonic_residual
        );
    }
    for m in &r.expectation_mismatches {
        let _ = writeln!(s, "    expectation mismatch: {m}");
    }
    if let Some(f) = &r.first_failure {
        let _ = writeln!(s, "    first failure: {f}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failed_load(kind: &'static str) -> Entry {
        Entry {
            source: "x.json".into(),
            load_error: Some(LoadFailure {
                kind,
                message: "boom".into(),
            }),
            report: None,
        }
    }

    fn battery(entries: Vec<Entry>) -> BatteryReport {
        BatteryReport::new("suite", Tolerance::default(), 0, entries, 0.0)
    }

    #[test]
    fn empty_battery_passes() {
        assert_eq!(battery(Vec::new()).exit_code, EXIT_OK);
    }

    #[test]
    fn verification_errors_are_failures_not_input_errors() {
        let rep = battery(vec![failed_load("verification")]);
        assert_eq!(rep.exit_code, EXIT_FAILURE);
        assert_eq!(rep.failed, 1);
        assert_eq!(rep.first_failure.as_deref(), Some("x.json: boom"));
    }

    #[test]
    fn input_errors_dominate() {
        for kind in ["io", "schema", "too_large"] {
            let rep = battery(vec![failed_load("verification"), failed_load(kind)]);
            assert_eq!(rep.exit_code, EXIT_INPUT, "{kind}");
        }
    }

    #[test]
    fn text_report_mentions_every_entry() {
        let text = battery(vec![failed_load("schema")]).to_text();
        assert!(text.contains("[FAIL] x.json: boom"));
        assert!(text.contains("1 scenario(s): 0 passed, 1 failed"));
    }
}
