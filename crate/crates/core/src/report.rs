//! Verification reports shared by every `check_*` operation.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of a bounded verification sweep.
///
/// `cases` counts conclusive cases; cases whose witness could lie outside
/// the bounds are counted in `inconclusive` instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub bounds: BTreeMap<String, usize>,
    pub cases: u64,
    pub inconclusive: u64,
    /// Number of counterexamples found; at most a few are recorded verbatim.
    pub failures: u64,
    pub verdict: Verdict,
    pub counterexamples: Vec<String>,
    pub notes: Vec<String>,
}

/// Counterexamples kept per report; the total is still counted.
const MAX_RECORDED: usize = 20;

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            bounds: BTreeMap::new(),
            cases: 0,
            inconclusive: 0,
            failures: 0,
            verdict: Verdict::Pass,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn bound(mut self, name: &str, value: usize) -> Self {
        self.bounds.insert(name.to_string(), value);
        self
    }

    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn inconclusive_case(&mut self) {
        self.inconclusive += 1;
    }

    pub fn fail(&mut self, counterexample: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.failures += 1;
        if self.counterexamples.len() < MAX_RECORDED {
            self.counterexamples.push(counterexample.into());
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Settles the verdict: any counterexample fails, otherwise any
    /// inconclusive case makes the whole report inconclusive.
    pub fn finish(mut self) -> Self {
        if self.verdict != Verdict::Fail && self.inconclusive > 0 {
            self.verdict = Verdict::Inconclusive;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn has_failures(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Merges a sub-report into this one.
    pub fn absorb(&mut self, other: Report) {
        self.cases += other.cases;
        self.inconclusive += other.inconclusive;
        self.failures += other.failures;
        if other.verdict == Verdict::Fail {
            self.verdict = Verdict::Fail;
        }
        for c in other.counterexamples {
            if self.counterexamples.len() < MAX_RECORDED {
                self.counterexamples.push(format!("[{}] {c}", other.check));
            }
        }
        self.notes.extend(other.notes);
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check)?;
        let bounds: Vec<String> = self.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "bounds: {}", bounds.join(" "))?;
        writeln!(f, "cases: {}", self.cases)?;
        writeln!(f, "inconclusive: {}", self.inconclusive)?;
        writeln!(f, "counterexamples: {}", self.failures)?;
        for c in &self.counterexamples {
            writeln!(f, "  - {c}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let mut r = Report::new("x");
        r.case();
        assert_eq!(r.clone().finish().verdict, Verdict::Pass);
        r.inconclusive_case();
        assert_eq!(r.clone().finish().verdict, Verdict::Inconclusive);
        r.fail("boom");
        assert_eq!(r.clone().finish().verdict, Verdict::Fail);
    }

    #[test]
    fn json_line_schema() {
        let mut r = Report::new("L1").bound("max_nodes", 7);
        r.case();
        let v: serde_json::Value = serde_json::from_str(&r.finish().to_json_line()).unwrap();
        for key in ["check", "bounds", "cases", "verdict", "counterexamples"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["bounds"]["max_nodes"], 7);
    }
}
