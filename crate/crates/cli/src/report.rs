use serde::Serialize;
use serde_json::{json, Map, Value};

use ripscollapse::complex::Simplex;
use ripscollapse::morse::{CheckStatus, ValidationReport};
use ripscollapse::DistanceValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One checked claim of a command.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Everything a command reports. All fields except `wall_time_ms` are a function of the input
/// bytes, the flags and the seed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: Option<String>,
    pub parameters: Map<String, Value>,
    pub results: Map<String, Value>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
    pub wall_time_ms: f64,
    /// Human-readable rendering printed without `--json -`.
    #[serde(skip)]
    pub text: String,
    /// Data written to standard output in place of the text report (which then goes to
    /// standard error).
    #[serde(skip)]
    pub payload: Option<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            input_digest: None,
            parameters: Map::new(),
            results: Map::new(),
            assertions: Vec::new(),
            passed: true,
            wall_time_ms: 0.0,
            text: String::new(),
            payload: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        self.text.push_str(text.as_ref());
        self.text.push('\n');
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) -> bool {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.record(name.into(), status, detail);
        passed
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.record(name.into(), Status::Skipped, Some(reason.into()));
    }

    fn record(&mut self, name: String, status: Status, detail: Option<String>) {
        if status == Status::Fail {
            self.passed = false;
        }
        let mark = match status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        match &detail {
            Some(d) => self.line(format!("[{mark}] {name}: {d}")),
            None => self.line(format!("[{mark}] {name}")),
        }
        self.assertions.push(Assertion { name, status, detail });
    }

    /// Records each validation check as an assertion prefixed by `label`.
    pub fn validation(&mut self, label: &str, report: &ValidationReport, names: &[String]) -> bool {
        for o in &report.outcomes {
            let name = format!("{label}: {}", o.check);
            match o.status {
                CheckStatus::Pass => {
                    self.check(name, true, None);
                }
                CheckStatus::Skipped => self.skip(name, "not requested"),
                CheckStatus::Fail => {
                    let witness = simplices(&o.witness, names);
                    let detail = format!("{} {}", o.detail.clone().unwrap_or_default(), witness.join(" "));
                    self.check(name, false, Some(detail.trim().to_string()));
                }
            }
        }
        report.ok()
    }

    pub fn assertions_failed(&self) -> Vec<&Assertion> {
        self.assertions.iter().filter(|a| a.status == Status::Fail).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn value(v: &DistanceValue) -> Value {
    json!({ "exact": v.to_string(), "float": v.to_f64() })
}

pub fn simplex(s: Simplex, names: &[String]) -> String {
    s.display_with(names).to_string()
}

pub fn simplices(list: &[Simplex], names: &[String]) -> Vec<String> {
    list.iter().map(|s| simplex(*s, names)).collect()
}
