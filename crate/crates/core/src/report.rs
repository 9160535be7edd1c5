//! Machine-readable run reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Summary of one pipeline run.  Times are wall-clock milliseconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input_length: usize,
    pub cl_length: usize,
    pub ri_clauses: usize,
    pub result_length: usize,
    pub result_axioms: usize,
    pub max_axiom_length: usize,
    pub stage_times_ms: BTreeMap<String, f64>,
    pub subsumption_budget_hit: bool,
    pub ui_status: Option<String>,
    pub widened_signature: Vec<String>,
}

pub fn emit_report(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_names() {
        let text = emit_report(&RunReport::default());
        for key in [
            "input_length",
            "cl_length",
            "result_length",
            "result_axioms",
            "max_axiom_length",
            "stage_times_ms",
            "subsumption_budget_hit",
            "ui_status",
        ] {
            assert!(text.contains(&format!("\"{key}\"")), "missing {key}");
        }
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, RunReport::default());
    }
}
