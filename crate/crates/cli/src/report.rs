//! Report schema v1 and its text rendering.

use crate::{RunConfig, EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK};
use serde_json::{json, Value};
use std::time::Duration;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Certified,
    NoneFound,
    Failed,
    InputError,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Certified => "certified",
            Status::NoneFound => "none-found",
            Status::Failed => "failed",
            Status::InputError => "input-error",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        [Status::Ok, Status::Certified, Status::NoneFound, Status::Failed, Status::InputError]
            .into_iter()
            .find(|x| x.as_str() == s)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok | Status::Certified => EXIT_OK,
            Status::NoneFound => EXIT_INCONCLUSIVE,
            Status::Failed => EXIT_FAILED,
            Status::InputError => EXIT_INPUT,
        }
    }
}

/// The deterministic part of a report; this is what the cache stores.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub certificates: Vec<Value>,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn ok(result: Value, summary: Vec<String>) -> Self {
        Outcome { status: Status::Ok, result, certificates: Vec::new(), summary }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "result": self.result,
            "certificates": self.certificates,
            "summary": self.summary,
        })
    }

    pub fn from_json(v: &Value) -> Option<Outcome> {
        let status = Status::parse(v.get("status")?.as_str()?)?;
        let result = v.get("result")?.clone();
        let certificates = v.get("certificates")?.as_array()?.clone();
        let summary = v.get("summary")?.as_array()?.iter().map(|s| s.as_str().map(String::from)).collect::<Option<_>>()?;
        Some(Outcome { status, result, certificates, summary })
    }
}

pub fn tool() -> Value {
    json!({ "name": "cmpl", "version": env!("CARGO_PKG_VERSION") })
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: Value,
    pub outcome: Outcome,
    pub timing_ms: u64,
    pub cache: Value,
    pub error: Option<String>,
}

impl Report {
    pub fn new(config: &RunConfig, outcome: Outcome, elapsed: Duration, enabled: bool, hit: bool, key: &str) -> Self {
        let cache = if enabled { json!({ "enabled": true, "hits": u32::from(hit), "key": key }) } else { json!({ "enabled": false, "hits": 0 }) };
        Report { config: config.echo(), outcome, timing_ms: elapsed.as_millis() as u64, cache, error: None }
    }

    pub fn failure(config: &RunConfig, msg: &str, elapsed: Duration) -> Self {
        let outcome = Outcome { status: Status::Failed, result: Value::Null, certificates: Vec::new(), summary: vec![format!("verification failed: {msg}")] };
        Report { config: config.echo(), outcome, timing_ms: elapsed.as_millis() as u64, cache: json!({ "enabled": false, "hits": 0 }), error: Some(msg.to_string()) }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.status.exit_code()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "tool": tool(),
            "config": self.config,
            "status": self.outcome.status.as_str(),
            "exit_code": self.exit_code(),
            "result": self.outcome.result,
            "certificates": self.outcome.certificates,
            "timing": { "elapsed_ms": self.timing_ms },
            "cache": self.cache,
        });
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for line in &self.outcome.summary {
            s.push_str(line);
            s.push('\n');
        }
        s.push_str(&format!("status: {}\n", self.outcome.status.as_str()));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_round_trip() {
        let o = Outcome { status: Status::NoneFound, result: json!({"a": [1]}), certificates: vec![json!({"k": 1})], summary: vec!["x".into()] };
        assert_eq!(Outcome::from_json(&o.to_json()), Some(o));
        assert!(Outcome::from_json(&json!({"status": "bogus"})).is_none());
        assert_eq!(Status::NoneFound.exit_code(), 2);
    }
}
