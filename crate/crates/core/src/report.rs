use std::fmt;

/// One checked property: what was checked, on which object, and a witness
/// when it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, name: &str, subject: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            subject: subject.into(),
            passed,
            detail: if passed { String::new() } else { detail.into() },
        });
    }

    pub fn pass(&mut self, name: &str, subject: impl Into<String>) {
        self.record(name, subject, true, "");
    }

    /// Like `record`, but keeps the detail on success too.
    pub fn note(&mut self, name: &str, subject: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), subject: subject.into(), passed, detail: detail.into() });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "{mark} {} [{}]", c.name, c.subject)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
