/// Outcome of one exact identity check. `failures` names offending basis
/// terms and sample points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn from_failures(name: impl Into<String>, failures: Vec<String>) -> Self {
        CheckResult { name: name.into(), passed: failures.is_empty(), failures }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}
