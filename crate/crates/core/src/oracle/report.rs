//! Line-oriented disagreement records between the first-order embedding and
//! the direct LTL semantics.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub formula: String,
    pub trace: String,
    pub fo_verdict: bool,
    pub ltl_verdict: bool,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {} | {} | {}",
            self.formula, self.trace, self.fo_verdict, self.ltl_verdict
        )
    }
}

/// Tally of one fidelity run. Disagreements on formulas with `U` or `R`
/// over lasso traces are expected and kept apart from the rest.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FidelityReport {
    pub compared: usize,
    pub agreed: usize,
    /// Must stay empty.
    pub violations: Vec<Disagreement>,
    /// `U`/`R` on a lasso.
    pub until_release_lasso: Vec<Disagreement>,
}

impl FidelityReport {
    pub fn merge(&mut self, other: FidelityReport) {
        self.compared += other.compared;
        self.agreed += other.agreed;
        self.violations.extend(other.violations);
        self.until_release_lasso.extend(other.until_release_lasso);
    }

    /// `formula | trace | fo_verdict | ltl_verdict`, one record per line,
    /// violations first.
    pub fn lines(&self) -> String {
        let mut out = String::new();
        for d in self.violations.iter().chain(&self.until_release_lasso) {
            out.push_str(&d.to_string());
            out.push('\n');
        }
        out
    }
}
