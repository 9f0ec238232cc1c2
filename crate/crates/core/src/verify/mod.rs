//! Identity registry, checker and linear-relation discovery.

mod discover;
mod expr;
mod registry;

use std::time::{Duration, Instant};

use serde::Serialize;

pub use discover::{discover, rank, Relation, EXTRA_ROWS};
pub use expr::{Expr, QuintupleSide, Value};
pub use registry::{registry, IdentityRecord};

use crate::bivariate::BivariateComparison;
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, ExactRational};
use crate::series::Comparison;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INSUFFICIENT_ORDER")]
    InsufficientOrder,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::InsufficientOrder => "INSUFFICIENT_ORDER",
        })
    }
}

/// First disagreement found; `z` is set for bivariate identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub z: Option<i64>,
    pub exponent: ExactRational,
    pub lhs: ExactRational,
    pub rhs: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    /// Both sides agree below `q^order_checked` (or disagree there, on FAIL).
    pub order_checked: ExactRational,
    pub mismatch: Option<Mismatch>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} order={}", self.id, self.status, fmt_rational(&self.order_checked));
        if let Some(m) = &self.mismatch {
            if let Some(z) = m.z {
                s.push_str(&format!(" z={z}"));
            }
            s.push_str(&format!(
                " exponent={} lhs={} rhs={}",
                fmt_rational(&m.exponent),
                fmt_rational(&m.lhs),
                fmt_rational(&m.rhs)
            ));
        }
        s
    }

    /// Machine form with fields `id, status, order, mismatch?, elapsed_ms`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct MismatchJson {
            #[serde(skip_serializing_if = "Option::is_none")]
            z: Option<i64>,
            exponent: String,
            lhs: String,
            rhs: String,
        }
        #[derive(Serialize)]
        struct ReportJson<'a> {
            id: &'a str,
            status: Status,
            order: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            mismatch: Option<MismatchJson>,
            elapsed_ms: u128,
        }
        let json = ReportJson {
            id: &self.id,
            status: self.status,
            order: fmt_rational(&self.order_checked),
            mismatch: self.mismatch.as_ref().map(|m| MismatchJson {
                z: m.z,
                exponent: fmt_rational(&m.exponent),
                lhs: fmt_rational(&m.lhs),
                rhs: fmt_rational(&m.rhs),
            }),
            elapsed_ms: self.elapsed.as_millis(),
        };
        serde_json::to_value(json).expect("plain data serializes")
    }
}

/// Evaluates both sides of `record` and compares them below the smaller of
/// `order` and what the evaluation could certify.
pub fn check_record(record: &IdentityRecord, order: &ExactRational) -> Result<VerificationReport> {
    let start = Instant::now();
    let lhs = record.lhs.eval(order)?;
    let rhs = record.rhs.eval(order)?;
    let (reached, mismatch) = match (lhs, rhs) {
        (Value::Series(a), Value::Series(b)) => {
            let reached = order.min(a.order()).min(b.order()).clone();
            let m = match a.compare(&b, &reached)? {
                Comparison::Agree => None,
                Comparison::Mismatch { exponent, lhs, rhs } => Some(Mismatch {
                    z: None,
                    exponent,
                    lhs,
                    rhs,
                }),
            };
            (reached, m)
        }
        (Value::Bivariate(a), Value::Bivariate(b)) => {
            let reached = order.min(a.q_order()).min(b.q_order()).clone();
            let m = match a.compare(&b, &reached)? {
                BivariateComparison::Agree => None,
                BivariateComparison::Mismatch { z, exponent, lhs, rhs } => Some(Mismatch {
                    z: Some(z),
                    exponent,
                    lhs,
                    rhs,
                }),
            };
            (reached, m)
        }
        _ => {
            return Err(Error::TypeMismatch(format!(
                "{}: one side is bivariate and the other is not",
                record.id
            )))
        }
    };
    let status = match (&mismatch, &reached < order) {
        (Some(_), _) => Status::Fail,
        (None, true) => Status::InsufficientOrder,
        (None, false) => Status::Pass,
    };
    Ok(VerificationReport {
        id: record.id.clone(),
        status,
        order_checked: reached,
        mismatch,
        elapsed: start.elapsed(),
    })
}

/// Looks up `id` in `records`.
pub fn find<'a>(records: &'a [IdentityRecord], id: &str) -> Result<&'a IdentityRecord> {
    records
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Checks the built-in identity `id` below `order`.
pub fn check(id: &str, order: &ExactRational) -> Result<VerificationReport> {
    let records = registry();
    check_record(find(&records, id)?, order)
}

/// Parses a registry file: one `id | order | lhs | rhs` record per line.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_registry(text: &str) -> Result<Vec<IdentityRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [id, order, lhs, rhs] = fields[..] else {
            return Err(Error::Parse(format!(
                "line {}: expected `id | order | lhs | rhs`",
                i + 1
            )));
        };
        if id.is_empty() {
            return Err(Error::Parse(format!("line {}: empty id", i + 1)));
        }
        let with_line = |e: Error| Error::Parse(format!("line {}: {e}", i + 1));
        out.push(IdentityRecord {
            id: id.to_string(),
            lhs: lhs.parse().map_err(with_line)?,
            rhs: rhs.parse().map_err(with_line)?,
            default_order: parse_rational(order).map_err(with_line)?,
            tag: String::new(),
        });
    }
    Ok(out)
}
