//! Check reports and their JSON-lines form.

use std::time::Instant;

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub id: String,
    pub n: u32,
    pub inputs: Value,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub detail: Option<String>,
    pub elapsed_ms: f64,
}

impl CheckReport {
    pub fn new(id: impl Into<String>, n: u32, inputs: Value) -> CheckReport {
        CheckReport {
            id: id.into(),
            n,
            inputs,
            status: Status::Pass,
            lhs: Value::Null,
            rhs: Value::Null,
            detail: None,
            elapsed_ms: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record both sides; the status becomes fail unless they agree.
    pub fn compare(mut self, lhs: Value, rhs: Value) -> CheckReport {
        if lhs != rhs && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.lhs = lhs;
        self.rhs = rhs;
        self
    }

    pub fn fail(mut self, why: impl Into<String>) -> CheckReport {
        self.status = Status::Fail;
        self.detail = Some(why.into());
        self
    }

    pub fn inconclusive(mut self, why: impl Into<String>) -> CheckReport {
        if self.status != Status::Fail {
            self.status = Status::Inconclusive;
        }
        self.detail = Some(why.into());
        self
    }

    pub fn timed(mut self, t: Instant) -> CheckReport {
        self.elapsed_ms = t.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "n": self.n,
            "inputs": self.inputs,
            "status": self.status.as_str(),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "detail": self.detail,
            "elapsed_ms": self.elapsed_ms,
        })
    }
}

/// 0 if everything passed, 1 on any failure, 2 on inconclusives only.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if reports.iter().any(|r| r.status == Status::Inconclusive) {
        2
    } else {
        0
    }
}

/// Stable sort by check id.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.id.cmp(&b.id));
}
