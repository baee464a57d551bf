//! Pass/fail records shared by the verification suites.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One `{check, range, status}` line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub range: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, range: impl Into<String>, failures: &[String]) -> Self {
        let status = if failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        let detail = match failures.len() {
            0 => String::new(),
            n => {
                let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
                format!("{n} failure(s): {}", shown.join("; "))
            }
        };
        CheckReport {
            check: check.into(),
            range: range.into(),
            status,
            detail,
        }
    }

    /// Report for a computation that could not be carried out.
    pub fn errored(check: impl Into<String>, range: impl Into<String>, err: &crate::Error) -> Self {
        CheckReport {
            check: check.into(),
            range: range.into(),
            status: Status::Fail,
            detail: err.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Turns a fallible check into a report.
pub fn run_check(
    check: &str,
    range: &str,
    f: impl FnOnce() -> crate::Result<Vec<String>>,
) -> CheckReport {
    match f() {
        Ok(failures) => CheckReport::new(check, range, &failures),
        Err(e) => CheckReport::errored(check, range, &e),
    }
}
