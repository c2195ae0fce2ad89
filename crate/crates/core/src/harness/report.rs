use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// How a measured value is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
}

/// One verified property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The statement being checked.
    pub anchor: String,
    #[serde(with = "lossless")]
    pub measured: f64,
    #[serde(with = "lossless")]
    pub threshold: f64,
    pub comparison: Comparison,
    pub pass: bool,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(id: &str, anchor: &str, measured: f64, threshold: f64, comparison: Comparison) -> Self {
        let pass = measured.is_finite()
            && match comparison {
                Comparison::AtMost => measured <= threshold,
                Comparison::AtLeast => measured >= threshold,
            };
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            measured,
            threshold,
            comparison,
            pass,
            wall_time_s: 0.0,
            note: None,
        }
    }

    pub fn failed(id: &str, anchor: &str, threshold: f64, comparison: Comparison, note: String) -> Self {
        let mut r = Self::new(id, anchor, f64::NAN, threshold, comparison);
        r.note = Some(note);
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64, records: Vec<CheckRecord>, wall_time_s: f64) -> Self {
        let pass = !records.is_empty() && records.iter().all(|r| r.pass);
        VerificationReport { suite: suite.into(), seed, records, pass, wall_time_s }
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One line per record plus a summary line.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let op = match r.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            out.push_str(&format!(
                "{} {:<40} {} {op} {}  ({:.2}s){}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.id,
                fmt17(r.measured),
                fmt17(r.threshold),
                r.wall_time_s,
                r.note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default()
            ));
        }
        out.push_str(&format!(
            "suite {}: {} ({} checks, {:.1}s)\n",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.records.len(),
            self.wall_time_s
        ));
        out
    }
}

/// Collects records, timing each measurement.
#[derive(Debug, Default)]
pub struct Recorder {
    records: Vec<CheckRecord>,
}

impl Recorder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `measure` and records `measured <= threshold`. Errors fail the check.
    pub fn at_most<F: FnOnce() -> Result<f64>>(&mut self, id: &str, anchor: &str, threshold: f64, measure: F) {
        self.check(id, anchor, threshold, Comparison::AtMost, measure)
    }

    pub fn at_least<F: FnOnce() -> Result<f64>>(&mut self, id: &str, anchor: &str, threshold: f64, measure: F) {
        self.check(id, anchor, threshold, Comparison::AtLeast, measure)
    }

    pub fn check<F: FnOnce() -> Result<f64>>(
        &mut self,
        id: &str,
        anchor: &str,
        threshold: f64,
        comparison: Comparison,
        measure: F,
    ) {
        let start = Instant::now();
        let mut rec = match measure() {
            Ok(v) => CheckRecord::new(id, anchor, v, threshold, comparison),
            Err(e) => CheckRecord::failed(id, anchor, threshold, comparison, e.to_string()),
        };
        rec.wall_time_s = start.elapsed().as_secs_f64();
        self.records.push(rec);
    }

    /// Records a runtime budget over the records whose ids start with `prefix`.
    pub fn runtime(&mut self, id: &str, anchor: &str, prefix: &str, budget_s: f64) {
        let total: f64 = self.records.iter().filter(|r| r.id.starts_with(prefix)).map(|r| r.wall_time_s).sum();
        self.records.push(CheckRecord::new(id, anchor, total, budget_s, Comparison::AtMost));
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.records.push(rec);
    }

    pub fn into_records(self) -> Vec<CheckRecord> {
        self.records
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// JSON has no NaN or infinities; those travel as strings.
mod lossless {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(|_| D::Error::custom(format!("not a number: {t}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn report_round_trips_including_non_finite_values() {
        let mut r = Recorder::new();
        r.at_most("a", "x <= 1", 1.0, || Ok(0.1 + 0.2));
        r.at_least("b", "x >= 1", 1e-2, || Ok(f64::INFINITY));
        r.at_most("c", "fails", 1.0, || Err(Error::Divergent("boom".into())));
        let rep = VerificationReport::new("demo", 42, r.into_records(), 0.5);
        assert!(!rep.pass);
        let back = VerificationReport::from_json(&rep.to_json()).unwrap();
        assert_eq!(back.records.len(), 3);
        assert_eq!(back.records[0].measured.to_bits(), (0.1f64 + 0.2).to_bits());
        assert!(back.records[2].measured.is_nan());
        assert_eq!(back.records[1], rep.records[1]);
    }

    #[test]
    fn overall_pass_needs_every_record() {
        let ok = CheckRecord::new("a", "", 0.5, 1.0, Comparison::AtMost);
        let bad = CheckRecord::new("b", "", 2.0, 1.0, Comparison::AtMost);
        assert!(VerificationReport::new("s", 1, vec![ok.clone()], 0.0).pass);
        assert!(!VerificationReport::new("s", 1, vec![ok, bad], 0.0).pass);
        assert!(!VerificationReport::new("s", 1, vec![], 0.0).pass);
    }

    #[test]
    fn nan_never_passes() {
        assert!(!CheckRecord::new("a", "", f64::NAN, 1.0, Comparison::AtMost).pass);
        assert!(!CheckRecord::new("a", "", f64::NAN, 1.0, Comparison::AtLeast).pass);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(f64::NAN), "NaN");
    }
}
