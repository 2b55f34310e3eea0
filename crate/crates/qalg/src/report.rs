//! Machine-readable reports: every check emits claims with a stable schema
//! `{"claim", "computed", "expected", "status", "witness"}` and deterministic
//! rendering as JSON, CSV, or text.

use crate::dist::approx_eq;
use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub claim: String,
    pub computed: Value,
    pub expected: Value,
    pub status: Status,
    pub witness: Value,
}

/// JSON value for an extended distance: a number, or the string `"inf"`.
pub fn dist_value(v: f64) -> Value {
    if v.is_infinite() {
        json!("inf")
    } else {
        json!(v)
    }
}

impl Claim {
    /// A claim comparing a computed distance to an expected one, within the
    /// crate tolerance (infinities compare exactly).
    pub fn dist(claim: impl Into<String>, computed: f64, expected: f64) -> Self {
        Claim {
            claim: claim.into(),
            computed: dist_value(computed),
            expected: dist_value(expected),
            status: if approx_eq(computed, expected) {
                Status::Pass
            } else {
                Status::Fail
            },
            witness: Value::Null,
        }
    }

    /// A claim that a check holds.
    pub fn flag(claim: impl Into<String>, pass: bool) -> Self {
        Claim {
            claim: claim.into(),
            computed: json!(pass),
            expected: json!(true),
            status: if pass { Status::Pass } else { Status::Fail },
            witness: Value::Null,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub title: String,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            claims: Vec::new(),
        }
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    pub fn pass(&self) -> bool {
        self.claims.iter().all(Claim::pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("claim,computed,expected,status,witness\n");
        for c in &self.claims {
            let status = if c.pass() { "pass" } else { "fail" };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&c.claim),
                csv_field(&compact(&c.computed)),
                csv_field(&compact(&c.expected)),
                status,
                csv_field(&compact(&c.witness)),
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for c in &self.claims {
            let status = if c.pass() { "pass" } else { "FAIL" };
            out.push_str(&format!(
                "  [{status}] {} (computed {}, expected {})\n",
                c.claim,
                compact(&c.computed),
                compact(&c.expected)
            ));
            if !c.witness.is_null() {
                out.push_str(&format!("         witness: {}\n", compact(&c.witness)));
            }
        }
        out.push_str(if self.pass() {
            "overall: pass\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Invalid(format!(
                "unknown format `{other}` (expected json, csv, or text)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}
