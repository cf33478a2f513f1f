use thiserror::Error;

/// Errors raised by the model, the reduced systems and the integrator.
///
/// Scalars are carried as `f64` so the error type is independent of the
/// scalar the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("filaments overlap: (r1 - r2)^2 + (z1 - z2)^2 = {separation_sq:e}")]
    OverlappingFilaments { separation_sq: f64 },

    #[error("conserved-quantity invariant is not positive (d = {d:e}); leapfrogging is impossible")]
    InfeasibleInvariant { d: f64 },

    #[error("state does not satisfy the invariant relation (relative residual {residual:e})")]
    InvariantMismatch { residual: f64 },

    #[error("theta = {theta} lies outside the phase space")]
    DomainViolation { theta: f64 },

    #[error("state ({theta}, {w}) is within the guard radius of the singular point")]
    SingularPoint { theta: f64, w: f64 },

    #[error("alpha = {alpha} is outside (0, 1/3)")]
    AlphaOutOfRange { alpha: f64 },

    #[error("gamma = {gamma} must exceed 1")]
    GammaOutOfRange { gamma: f64 },

    #[error("alpha = {alpha} >= 1/3 is outside the scope of the leapfrogging criteria")]
    OutOfTheoremScope { alpha: f64 },

    #[error("root bracket [{lo}, {hi}] does not contain a sign change")]
    NoBracket { lo: f64, hi: f64 },

    #[error("point vortices coincide (distance {distance:e})")]
    CoincidentVortices { distance: f64 },

    #[error("filament samples {index} are in contact (distance {distance:e})")]
    FilamentContact { index: usize, distance: f64 },

    #[error("orbit detection inconclusive after t = {t}")]
    Inconclusive { t: f64 },

    #[error("orbit is not closed")]
    NotClosed,

    #[error("integration stopped early at t = {t}: {reason}")]
    IntegrationFailed { t: f64, reason: String },
}

impl Error {
    /// Stable machine-readable identifier of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::OverlappingFilaments { .. } => "OverlappingFilaments",
            Error::InfeasibleInvariant { .. } => "InfeasibleInvariant",
            Error::InvariantMismatch { .. } => "InvariantMismatch",
            Error::DomainViolation { .. } => "DomainViolation",
            Error::SingularPoint { .. } => "SingularPoint",
            Error::AlphaOutOfRange { .. } => "AlphaOutOfRange",
            Error::GammaOutOfRange { .. } => "GammaOutOfRange",
            Error::OutOfTheoremScope { .. } => "OutOfTheoremScope",
            Error::NoBracket { .. } => "NoBracket",
            Error::CoincidentVortices { .. } => "CoincidentVortices",
            Error::FilamentContact { .. } => "FilamentContact",
            Error::Inconclusive { .. } => "Inconclusive",
            Error::NotClosed => "NotClosed",
            Error::IntegrationFailed { .. } => "IntegrationFailed",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn f<T: num_traits::ToPrimitive>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
