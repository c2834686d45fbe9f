use std::fmt;

use crate::poly::Poly;

/// What a single named condition produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// An identity: passes iff the residual is the zero polynomial.
    Residual(Poly),
    /// A computed value reported for information; always passes.
    Value(Poly),
    /// A shape violation (wrong parity, momentum degree, weight); always fails.
    Shape(String),
    /// A logical claim evaluated on one instance.
    Claim { holds: bool, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub name: String,
    pub outcome: Outcome,
}

impl Condition {
    pub fn pass(&self) -> bool {
        match &self.outcome {
            Outcome::Residual(p) => p.is_zero(),
            Outcome::Value(_) => true,
            Outcome::Shape(_) => false,
            Outcome::Claim { holds, .. } => *holds,
        }
    }

    /// Canonical text of the residual, value or diagnostic.
    pub fn residual_text(&self) -> String {
        match &self.outcome {
            Outcome::Residual(p) | Outcome::Value(p) => p.to_string(),
            Outcome::Shape(msg) => format!("shape: {msg}"),
            Outcome::Claim { detail, .. } => detail.clone(),
        }
    }
}

/// Named conditions with exact residuals. The verdict is true iff every condition passes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub structure: String,
    pub conditions: Vec<Condition>,
}

impl VerificationReport {
    pub fn new(structure: impl Into<String>) -> Self {
        VerificationReport {
            structure: structure.into(),
            conditions: Vec::new(),
        }
    }

    pub fn residual(&mut self, name: impl Into<String>, residual: Poly) -> &mut Self {
        self.push(name, Outcome::Residual(residual))
    }

    pub fn value(&mut self, name: impl Into<String>, value: Poly) -> &mut Self {
        self.push(name, Outcome::Value(value))
    }

    pub fn shape(&mut self, name: impl Into<String>, msg: impl Into<String>) -> &mut Self {
        self.push(name, Outcome::Shape(msg.into()))
    }

    pub fn claim(&mut self, name: impl Into<String>, holds: bool, detail: impl Into<String>) -> &mut Self {
        self.push(
            name,
            Outcome::Claim {
                holds,
                detail: detail.into(),
            },
        )
    }

    pub fn push(&mut self, name: impl Into<String>, outcome: Outcome) -> &mut Self {
        self.conditions.push(Condition {
            name: name.into(),
            outcome,
        });
        self
    }

    /// Append every condition of `other`, prefixing names with `prefix` when non-empty.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) -> &mut Self {
        for c in other.conditions {
            let name = if prefix.is_empty() {
                c.name
            } else {
                format!("{prefix}: {}", c.name)
            };
            self.conditions.push(Condition { name, ..c });
        }
        self
    }

    pub fn verdict(&self) -> bool {
        self.conditions.iter().all(Condition::pass)
    }

    pub fn has_shape_errors(&self) -> bool {
        self.conditions
            .iter()
            .any(|c| matches!(c.outcome, Outcome::Shape(_)))
    }

    pub fn get(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Residual polynomial of the named condition, if it is a residual or value.
    pub fn residual_of(&self, name: &str) -> Option<&Poly> {
        match &self.get(name)?.outcome {
            Outcome::Residual(p) | Outcome::Value(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "structure: {}", self.structure)?;
        let width = self.conditions.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.conditions {
            let status = if c.pass() { "pass" } else { "FAIL" };
            writeln!(f, "  {:<width$}  {}  {}", c.name, status, c.residual_text())?;
        }
        write!(f, "verdict: {}", if self.verdict() { "pass" } else { "FAIL" })
    }
}
