use kzh_core::connections::{CheckResult, VerificationReport};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "kzh-report/1";

/// JSON report. serde_json maps are ordered by key, so identical inputs
/// serialize to identical bytes.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub verdicts: Vec<CheckResult>,
    pub tables: Map<String, Value>,
    pub notes: Vec<String>,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: Value) -> Self {
        Report { command: command.into(), seed, config, verdicts: Vec::new(), tables: Map::new(), notes: Vec::new(), timing_ms: None }
    }

    pub fn verdict(&mut self, name: &str, passed: bool, failures: Vec<String>) {
        self.verdicts.push(CheckResult { name: name.into(), passed, failures });
    }

    pub fn verdicts_from(&mut self, prefix: &str, r: &VerificationReport) {
        for c in &r.checks {
            let name = if prefix.is_empty() { c.name.clone() } else { format!("{prefix}.{}", c.name) };
            self.verdicts.push(CheckResult { name, ..c.clone() });
        }
    }

    pub fn table(&mut self, key: &str, v: Value) {
        self.tables.insert(key.into(), v);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> Value {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| json!({"name": v.name, "passed": v.passed, "failures": v.failures}))
            .collect();
        let mut out = json!({
            "schema": SCHEMA,
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "passed": self.passed(),
            "verdicts": verdicts,
            "tables": Value::Object(self.tables.clone()),
            "notes": self.notes,
        });
        if let Some(t) = self.timing_ms {
            out["timingMs"] = json!(t);
        }
        out
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report values are plain JSON");
        s.push('\n');
        s
    }

    /// One `PASS name` / `FAIL name` line per verdict.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for v in &self.verdicts {
            s.push_str(if v.passed { "PASS " } else { "FAIL " });
            s.push_str(&v.name);
            s.push('\n');
            for f in v.failures.iter().take(5) {
                s.push_str("    ");
                s.push_str(f);
                s.push('\n');
            }
        }
        s
    }
}
