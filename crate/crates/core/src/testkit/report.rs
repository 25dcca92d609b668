use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CaseStatus {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseStatus::Pass => "PASS",
            CaseStatus::Fail => "FAIL",
            CaseStatus::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub status: CaseStatus,
    pub input: String,
    pub output: String,
    pub expected_output: String,
    /// Statevector mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub mode: String,
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl TestReport {
    pub fn new(mode: &str, cases: Vec<CaseResult>) -> Self {
        let count = |s| cases.iter().filter(|c| c.status == s).count();
        Self {
            mode: mode.to_string(),
            passed: count(CaseStatus::Pass),
            failed: count(CaseStatus::Fail),
            errors: count(CaseStatus::Error),
            cases,
            shots: None,
            seed: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    /// Names of the cases with the given status, in input order.
    pub fn names_with(&self, status: CaseStatus) -> Vec<&str> {
        self.cases
            .iter()
            .filter(|c| c.status == status)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn summary(&self) -> String {
        format!(
            "Summary: {} passed, {} failed, {} errors ({} cases)",
            self.passed,
            self.failed,
            self.errors,
            self.cases.len()
        )
    }

    /// One block per case followed by a summary line:
    ///
    /// ```text
    /// Testing test 1:
    /// Result:  FAIL
    /// Input:  [1, 1, 1, 0]
    /// Output:  [1, 1, 1, 0]
    /// Expected Output:  [1, 1, 1, 1]
    /// ```
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for case in &self.cases {
            let _ = writeln!(out, "Testing {}:", case.name);
            let _ = writeln!(out, "Result:  {}", case.status);
            let _ = writeln!(out, "Input:  {}", case.input);
            let _ = writeln!(out, "Output:  {}", case.output);
            let _ = writeln!(out, "Expected Output:  {}", case.expected_output);
            if let Some(f) = case.fidelity {
                let _ = writeln!(out, "Fidelity:  {f:.6}");
            }
            if let Some(msg) = &case.message {
                let _ = writeln!(out, "Error:  {msg}");
            }
            out.push('\n');
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_shape() {
        let report = TestReport::new(
            "pclass",
            vec![CaseResult {
                name: "test 1".into(),
                status: CaseStatus::Fail,
                input: "[1, 1, 1, 0]".into(),
                output: "[1, 1, 1, 0]".into(),
                expected_output: "[1, 1, 1, 1]".into(),
                fidelity: None,
                message: None,
            }],
        );
        assert_eq!(
            report.render_text(),
            "Testing test 1:\nResult:  FAIL\nInput:  [1, 1, 1, 0]\nOutput:  [1, 1, 1, 0]\n\
             Expected Output:  [1, 1, 1, 1]\n\nSummary: 0 passed, 1 failed, 0 errors (1 cases)\n"
        );
        assert!(!report.all_passed());
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["cases"][0]["status"], "FAIL");
    }
}
