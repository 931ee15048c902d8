//! Verification reports. Every relation family that gets checked produces a
//! [`RelationReport`]; suites bundle them with run metadata. Reports are the
//! machine-readable output of the CLI, so the schema is versioned.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationReport {
    /// Stable identifier of the relation family, e.g. "qq-orbit" or
    /// "fused-fierz-even".
    pub id: String,
    /// Human-readable anchor describing what the relation asserts.
    pub anchor: String,
    /// Maximum relative residual observed over all sample points/components.
    pub max_residual: f64,
    /// Tolerance the residual was compared against.
    pub tolerance: f64,
    pub pass: bool,
    /// Number of scalar checks aggregated into this report.
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl RelationReport {
    pub fn new(id: &str, anchor: &str, max_residual: f64, tolerance: f64, checks: usize) -> Self {
        RelationReport {
            id: id.to_string(),
            anchor: anchor.to_string(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            checks,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

/// Accumulates the worst residual over many scalar checks.
#[derive(Clone, Debug, Default)]
pub struct ResidualAcc {
    pub max: f64,
    pub count: usize,
}

impl ResidualAcc {
    pub fn new() -> Self {
        ResidualAcc { max: 0.0, count: 0 }
    }
    pub fn push(&mut self, r: f64) {
        if r.is_nan() {
            self.max = f64::INFINITY;
        } else {
            self.max = self.max.max(r);
        }
        self.count += 1;
    }
    pub fn report(&self, id: &str, anchor: &str, tol: f64) -> RelationReport {
        RelationReport::new(id, anchor, self.max, tol, self.count)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Suite {
    pub schema_version: u32,
    pub name: String,
    pub seed: u64,
    pub reports: Vec<RelationReport>,
    pub pass: bool,
}

impl Suite {
    pub fn new(name: &str, seed: u64, reports: Vec<RelationReport>) -> Self {
        let pass = reports.iter().all(|r| r.pass);
        Suite { schema_version: REPORT_SCHEMA_VERSION, name: name.to_string(), seed, reports, pass }
    }

    pub fn merge(name: &str, seed: u64, suites: Vec<Suite>) -> Suite {
        let mut reports = Vec::new();
        for s in suites {
            reports.extend(s.reports);
        }
        Suite::new(name, seed, reports)
    }

    /// One line per relation, for terminal output.
    pub fn human_table(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&format!(
                "{:4} {:38} residual {:9.3e}  tol {:8.1e}  [{}]\n",
                if r.pass { "ok" } else { "FAIL" },
                r.id,
                r.max_residual,
                r.tolerance,
                r.anchor
            ));
        }
        out.push_str(&format!(
            "suite {}: {}\n",
            self.name,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Default tolerance, overridable through the QFLAG_TOL environment variable.
pub fn env_tolerance(default: f64) -> f64 {
    match std::env::var("QFLAG_TOL") {
        Ok(s) => s.parse().unwrap_or(default),
        Err(_) => default,
    }
}
