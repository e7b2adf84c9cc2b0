use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One test outcome. Interval checks pass when |statistic − target| ≤ band;
/// KS and z-tests also carry a p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub name: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub target: Option<f64>,
    pub band: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TestRecord {
    /// |statistic − target| ≤ band.
    pub fn interval(name: impl Into<String>, statistic: f64, target: f64, band: f64) -> Self {
        let pass = (statistic - target).abs() <= band;
        Self {
            name: name.into(),
            statistic,
            p_value: None,
            target: Some(target),
            band: Some(band),
            pass,
            note: None,
        }
    }

    /// A check that was not run; counts as passing.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            statistic: 0.0,
            p_value: None,
            target: None,
            band: None,
            pass: true,
            note: Some(reason.into()),
        }
    }

    pub fn with_p_value(mut self, p: f64) -> Self {
        self.p_value = Some(p.clamp(0.0, 1.0));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tests: Vec<TestRecord>,
    pub verdict: Verdict,
    pub config_digest: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new()
    }
}

impl VerificationReport {
    pub fn new() -> Self {
        Self {
            tests: Vec::new(),
            verdict: Verdict::Pass,
            config_digest: String::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, t: TestRecord) {
        if !t.pass {
            self.verdict = Verdict::Fail;
        }
        self.tests.push(t);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for t in other.tests {
            self.push(t);
        }
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn get(&self, name: &str) -> Option<&TestRecord> {
        self.tests.iter().find(|t| t.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TestRecord> + '_ {
        self.tests.iter().filter(|t| !t.pass)
    }
}
