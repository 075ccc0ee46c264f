//! The report every CLI check prints.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Counterexample,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Counterexample => 1,
            Verdict::Error => 2,
        }
    }

    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Verdict::Pass
        } else {
            Verdict::Counterexample
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub check: String,
    pub inputs: IndexMap<String, Value>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    /// Wall-clock time, only filled in on request so that reports stay
    /// byte-for-byte reproducible.
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn new(check: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            check: check.into(),
            inputs: IndexMap::new(),
            verdict,
            witness: None,
            counterexample: None,
            details: None,
            elapsed_ms: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable input"),
        );
        self
    }

    pub fn witness(mut self, value: impl Serialize) -> Self {
        self.witness = Some(serde_json::to_value(value).expect("serializable witness"));
        self
    }

    pub fn counterexample(mut self, value: impl Serialize) -> Self {
        self.counterexample = Some(serde_json::to_value(value).expect("serializable counterexample"));
        self
    }

    pub fn details(mut self, value: impl Serialize) -> Self {
        self.details = Some(serde_json::to_value(value).expect("serializable details"));
        self
    }

    pub fn to_json(&self) -> String {
        crate::io::to_pretty_json(self)
    }

    pub fn to_text(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Counterexample => "COUNTEREXAMPLE",
            Verdict::Error => "ERROR",
        };
        let mut out = format!("{}: {verdict}\n", self.check);
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k}: {}\n", compact(v)));
        }
        for (name, field) in [
            ("witness", &self.witness),
            ("counterexample", &self.counterexample),
            ("details", &self.details),
        ] {
            if let Some(v) = field {
                out.push_str(&format!("{name}: {}\n", compact(v)));
            }
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed: {ms:.1} ms\n"));
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

/// JSON Schema (draft 2020-12) for [`Report`].
pub const REPORT_SCHEMA: &str = r#"{
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "check report",
  "type": "object",
  "required": ["check", "inputs", "verdict", "elapsed_ms"],
  "additionalProperties": false,
  "properties": {
    "check": {"type": "string"},
    "inputs": {"type": "object"},
    "verdict": {"enum": ["pass", "counterexample", "error"]},
    "witness": {},
    "counterexample": {},
    "details": {},
    "elapsed_ms": {"type": ["number", "null"]}
  }
}
"#;
