//! Verification suite organized as a registry of named checks.
//!
//! Every check implements the [`Check`] trait and is registered in
//! [`registry`]; callers select checks by name at runtime or run the whole
//! suite. Each check reports a pass/fail outcome with its worst deviation
//! and the tolerance it was held to, so the CLI can print one line per check.

mod checks;

use crate::morse::MorseParams;

/// Inputs shared by all checks.
#[derive(Debug, Clone)]
pub struct CheckContext {
    pub params: MorseParams,
    /// Off-diagonal corruption hook (index, replacement value): lets the
    /// negative test confirm that a falsified operator is caught.
    pub corrupt_offdiag: Option<(usize, f64)>,
    /// Seed for the randomized identity sweeps.
    pub seed: u64,
}

impl CheckContext {
    pub fn new(params: MorseParams) -> Self {
        Self {
            params,
            corrupt_offdiag: None,
            seed: 0x4d6f727365, // "Morse"
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub passed: bool,
    /// Worst deviation observed (0 when the check is purely structural).
    pub max_deviation: f64,
    /// The tolerance the deviation was compared against.
    pub tolerance: f64,
    /// One-line human-readable summary.
    pub detail: String,
}

impl CheckOutcome {
    fn from_deviation(max_deviation: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            passed: max_deviation <= tolerance,
            max_deviation,
            tolerance,
            detail: detail.into(),
        }
    }

    fn failure(tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            passed: false,
            max_deviation: f64::INFINITY,
            tolerance,
            detail: detail.into(),
        }
    }
}

/// A named verification strategy.
pub trait Check: Send + Sync {
    /// Stable kebab-case identifier used for runtime selection.
    fn name(&self) -> &'static str;
    /// One-line description for listings.
    fn description(&self) -> &'static str;
    /// Whether the check needs the finite-difference oracle (opt-in: these
    /// are the slow ones).
    fn requires_oracle(&self) -> bool {
        false
    }
    fn run(&self, cx: &CheckContext) -> CheckOutcome;
}

/// All registered checks, in canonical execution order.
pub fn registry() -> Vec<Box<dyn Check>> {
    vec![
        Box::new(checks::FactorizationRoundTrip),
        Box::new(checks::TruncationSpectrum),
        Box::new(checks::PartnerSpectrum),
        Box::new(checks::PolynomialClosedForm),
        Box::new(checks::KernelRelation),
        Box::new(checks::ChristoffelDarboux),
        Box::new(checks::MeasureMass),
        Box::new(checks::GramIdentity),
        Box::new(checks::ThomaeIdentity),
        Box::new(checks::KernelSumFormula),
        Box::new(checks::KernelFormEquivalence),
        Box::new(checks::OracleEnergies),
        Box::new(checks::OracleMatrixElements),
    ]
}

/// Look up a single check by name.
pub fn find_check(name: &str) -> Option<Box<dyn Check>> {
    registry().into_iter().find(|c| c.name() == name)
}
