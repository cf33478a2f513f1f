use serde::{Deserialize, Serialize};

/// Outcome of a leapfrogging classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    Leapfrog,
    NonLeapfrog,
    /// `alpha >= 1/3`: the criteria do not apply.
    OutOfTheoremScope,
    /// The configuration can never leapfrog (equal opposite strengths, or a
    /// non-positive invariant in the opposite-sign regime).
    LeapfrogImpossible,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Leapfrog => "Leapfrog",
            VerdictKind::NonLeapfrog => "NonLeapfrog",
            VerdictKind::OutOfTheoremScope => "OutOfTheoremScope",
            VerdictKind::LeapfrogImpossible => "LeapfrogImpossible",
        }
    }
}

/// Classification together with the Hamiltonian value and the threshold it
/// was compared against. For `LeapfrogImpossible` both numbers are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict<T> {
    pub kind: VerdictKind,
    pub hamiltonian: T,
    pub threshold: T,
    pub detail: String,
}

/// Absolute tolerance under which boundary comparisons count as equality.
/// Equalities resolve to [`VerdictKind::NonLeapfrog`].
pub const BOUNDARY_TOL: f64 = 1e-12;
