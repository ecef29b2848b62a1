use std::fmt;

/// One failed identity, with enough provenance to locate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub indices: Vec<String>,
    pub monomial: Option<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.check, self.indices.join(","))?;
        if let Some(m) = &self.monomial {
            write!(f, " at {m}")?;
        }
        write!(f, ": lhs = {}, rhs = {}", self.lhs, self.rhs)
    }
}

/// Outcome of a validation pass. Passes iff no violations were recorded;
/// notes are informational and never fail a report.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub section: String,
    violations: Vec<Violation>,
    notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(section: impl Into<String>) -> Self {
        ValidationReport {
            section: section.into(),
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn violation(
        &mut self,
        check: impl Into<String>,
        indices: Vec<String>,
        monomial: Option<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
    ) {
        self.violations.push(Violation {
            check: check.into(),
            indices,
            monomial,
            lhs: lhs.into(),
            rhs: rhs.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn has_check(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    /// Appends everything from `other`, prefixing its check names with its section.
    pub fn absorb(&mut self, other: ValidationReport) {
        for mut v in other.violations {
            if !other.section.is_empty() && other.section != self.section {
                v.check = format!("{}/{}", other.section, v.check);
            }
            self.violations.push(v);
        }
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {}",
            self.section,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for v in &self.violations {
            writeln!(f, "  violation: {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
