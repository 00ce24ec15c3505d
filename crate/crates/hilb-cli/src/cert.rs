//! Verification certificates and reports (JSON, schema 1).

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub identity: String,
    pub params: BTreeMap<String, Value>,
    pub bounds: BTreeMap<String, Value>,
    pub datum: String,
    /// "canonical" (symbolic zero), "evaluation" (bounded), or a combination.
    pub method: String,
    pub status: Status,
    /// Canonical text of the residual; empty on pass.
    pub residual_terms: Vec<String>,
    pub millis: u64,
}

impl Certificate {
    pub fn new(identity: &str, datum: &str, method: &str) -> Self {
        Certificate {
            schema: SCHEMA,
            identity: identity.into(),
            params: BTreeMap::new(),
            bounds: BTreeMap::new(),
            datum: datum.into(),
            method: method.into(),
            status: Status::Pass,
            residual_terms: vec![],
            millis: 0,
        }
    }
    pub fn param(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.params.insert(k.into(), v.into());
        self
    }
    pub fn bound(mut self, k: &str, v: impl Into<Value>) -> Self {
        self.bounds.insert(k.into(), v.into());
        self
    }
    /// Record a residual; an empty list passes.
    pub fn residual(mut self, terms: Vec<String>) -> Self {
        self.status = if terms.is_empty() { Status::Pass } else { Status::Fail };
        self.residual_terms = terms;
        self
    }
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
    /// Sort and dedup key: identity id, then parameters and datum.
    pub fn key(&self) -> (String, String, String) {
        (self.identity.clone(), serde_json::to_string(&self.params).unwrap(), self.datum.clone())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// identity id -> [passed, failed]
    pub by_identity: BTreeMap<String, [usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    /// Wall-clock data: generation time and total runtime. Everything outside this field and
    /// the per-certificate `millis` is a function of the configuration alone.
    pub timestamp: Value,
    pub suites: Vec<String>,
    pub summary: Summary,
    pub certificates: Vec<Certificate>,
}

pub fn summarize(certs: &[Certificate]) -> Summary {
    let mut s = Summary::default();
    for c in certs {
        s.total += 1;
        let e = s.by_identity.entry(c.identity.clone()).or_insert([0, 0]);
        if c.passed() {
            s.passed += 1;
            e[0] += 1;
        } else {
            s.failed += 1;
            e[1] += 1;
        }
    }
    s
}

/// Sort by (identity, params, datum) and drop duplicates, keeping the first.
pub fn normalize(mut certs: Vec<Certificate>) -> Vec<Certificate> {
    certs.sort_by_key(|c| c.key());
    certs.dedup_by(|a, b| a.key() == b.key());
    certs
}

pub fn make_report(suites: Vec<String>, certs: Vec<Certificate>, timestamp: Value) -> Report {
    let certs = normalize(certs);
    Report { schema: SCHEMA, timestamp, suites, summary: summarize(&certs), certificates: certs }
}

/// Merge reports: union of certificates, deduplicated by (id, params).
pub fn merge(reports: &[Report]) -> Report {
    let mut suites: Vec<String> = reports.iter().flat_map(|r| r.suites.clone()).collect();
    suites.sort();
    suites.dedup();
    let certs = reports.iter().flat_map(|r| r.certificates.clone()).collect();
    make_report(suites, certs, Value::Null)
}

/// The report with wall-clock fields blanked, for comparing runs.
pub fn without_clock(r: &Report) -> Report {
    let mut r = r.clone();
    r.timestamp = Value::Null;
    for c in &mut r.certificates {
        c.millis = 0;
    }
    r
}

pub fn to_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).unwrap() + "\n"
}

pub fn to_text(r: &Report) -> String {
    let mut s = String::new();
    for (id, [p, f]) in &r.summary.by_identity {
        s += &format!("{id:<28} pass {p:>6}  fail {f:>4}\n");
    }
    for c in r.certificates.iter().filter(|c| !c.passed()) {
        s += &format!("FAIL {} {} [{}]\n", c.identity, serde_json::to_string(&c.params).unwrap(), c.datum);
        for t in c.residual_terms.iter().take(5) {
            s += &format!("    {t}\n");
        }
    }
    s += &format!("total {}  passed {}  failed {}\n", r.summary.total, r.summary.passed, r.summary.failed);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(id: &str, n: i64, ok: bool) -> Certificate {
        Certificate::new(id, "d", "canonical").param("n", n).residual(if ok { vec![] } else { vec!["1 * Id".into()] })
    }

    #[test]
    fn merge_counts_and_dedup() {
        let a = make_report(vec!["x".into()], vec![c("a", 1, true), c("a", 2, true)], Value::Null);
        let b = make_report(vec!["y".into()], vec![c("b", 1, false), c("a", 1, true)], Value::Null);
        let m = merge(&[a, b]);
        assert_eq!((m.summary.total, m.summary.passed, m.summary.failed), (3, 2, 1));
        assert_eq!(m.summary.by_identity["a"], [2, 0]);
        let text = to_json(&m);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
