//! Exact integer computations around bar and cobar constructions: nerves of
//! monoids, chain coalgebras of simplicial sets, presented dg rings and their
//! localizations, Kan loop groups, and weak equivalence checks for monoids.

use std::fmt;

use serde::Serialize;

pub mod barcobar;
pub mod dgcoalg;
pub mod exactlin;
pub mod loopgroup;
pub mod monoids;
pub mod rewrite;
pub mod signs;
pub mod simplicial;
pub mod suite;
pub mod weqcheck;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

/// Every law violation found by a validator; empty when valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn push(&mut self, kind: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            kind: kind.to_string(),
            detail: detail.into(),
        });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.kind, v.detail))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}
