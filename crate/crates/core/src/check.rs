//! Exact comparison records shared by the bound reports and the identity suite.

use std::fmt;

use serde::Serialize;

use crate::scalar::{format_scalar, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &Scalar, rhs: &Scalar) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
    /// The check could not be evaluated; counts as a failure.
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub graph: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub relation: Relation,
    pub status: Status,
}

impl CheckResult {
    pub fn compare(id: &str, graph: &str, lhs: Scalar, relation: Relation, rhs: Scalar) -> Self {
        let status = if relation.holds(&lhs, &rhs) { Status::Pass } else { Status::Fail };
        CheckResult { id: id.into(), graph: graph.into(), lhs, rhs, relation, status }
    }

    pub fn skipped(id: &str, graph: &str, reason: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            graph: graph.into(),
            lhs: Scalar::from_integer(0.into()),
            rhs: Scalar::from_integer(0.into()),
            relation: Relation::Eq,
            status: Status::Skipped(reason.into()),
        }
    }

    pub fn errored(id: &str, graph: &str, message: impl Into<String>) -> Self {
        CheckResult { status: Status::Error(message.into()), ..CheckResult::skipped(id, graph, "") }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self.status, Status::Skipped(_))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail | Status::Error(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "id": self.id,
            "graph": self.graph,
            "lhs": format_scalar(&self.lhs),
            "relation": self.relation.symbol(),
            "rhs": format_scalar(&self.rhs),
        });
        match &self.status {
            Status::Pass => v["status"] = "pass".into(),
            Status::Fail => v["status"] = "fail".into(),
            Status::Skipped(r) => {
                v["status"] = "skipped".into();
                v["reason"] = r.clone().into();
            }
            Status::Error(m) => {
                v["status"] = "error".into();
                v["reason"] = m.clone().into();
            }
        }
        v
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            Status::Skipped(r) => write!(f, "SKIP {} [{}]: {}", self.id, self.graph, r),
            Status::Error(m) => write!(f, "ERROR {} [{}]: {}", self.id, self.graph, m),
            s => write!(
                f,
                "{} {} [{}]: {} {} {}",
                if *s == Status::Pass { "PASS" } else { "FAIL" },
                self.id,
                self.graph,
                format_scalar(&self.lhs),
                self.relation.symbol(),
                format_scalar(&self.rhs)
            ),
        }
    }
}
