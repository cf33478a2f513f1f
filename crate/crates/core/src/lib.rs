//! Dynamics of two interacting vortex filaments.
//!
//! The crate covers coaxial circular filaments (as a four-dimensional ODE
//! and as the reduced Hamiltonian systems in `(θ, W)`), a discrete
//! evaluator for the filament PDE, and the planar point-vortex limit of two
//! parallel straight lines. Its central question is whether a given
//! configuration leapfrogs, answered both by closed-form criteria
//! ([`classify`]) and by simulation ([`detect_closed_orbit`]).
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`.
//!
//! ```
//! use leapfrog_core::{classify, ModelParams, ReducedState, VerdictKind};
//!
//! let params = ModelParams::same_sign(1.0, 0.1, 1.0).unwrap();
//! let v = classify(&ReducedState::new(0.7, 0.0), &params).unwrap();
//! assert_eq!(v.kind, VerdictKind::Leapfrog);
//! ```

pub mod dynamics;
pub mod error;
pub mod filament;
pub mod fullode;
pub mod integrate;
pub mod model;
pub mod opposite_sign;
pub mod portrait;
pub mod roots;
pub mod same_sign;
pub mod scalar;
pub mod verdict;

pub use dynamics::{
    classify, classify_configuration, equilibria, hamiltonian, reduced_field, Classifier, ConfigurationVerdict,
    EquilibriumReport,
};
pub use error::{Error, Result};
pub use filament::{pde_check, pde_rhs, sample_circular_pair, DiscreteFilament, PdeCheck, Stencil};
pub use fullode::{field_augmented, field_physical, field_pointvortex, parallel_exact, AugmentedState, ParallelSetup};
pub use integrate::{
    detect_closed_orbit, detect_closed_orbit_with, integrate, integrate_with, OrbitOptions, OrbitOutcome, OrbitReport,
    StepControl, Termination, Trajectory,
};
pub use model::{
    canonicalize, physical_to_reduced, reduced_to_physical, CanonicalSetup, ModelParams, PhysicalState, ReducedState,
    Regime,
};
pub use num_complex::Complex;
pub use opposite_sign::{classify_opp, equilibria_opp, gamma_star, hamiltonian_opp, EquilibriumReportOpp};
pub use portrait::{hamiltonian_grid, orbit_period, trace_motion, MotionType, PortraitGrid};
pub use same_sign::{classify_same, equilibria_same, hamiltonian_same, EquilibriumReportSame};
pub use scalar::Scalar;
pub use verdict::{Verdict, VerdictKind};

pub type Params = ModelParams<f64>;
pub type Reduced = ReducedState<f64>;
pub type Physical = PhysicalState<f64>;
pub type Setup = CanonicalSetup<f64>;
pub type Report = EquilibriumReport<f64>;
pub type Judgement = Verdict<f64>;
pub type Grid = PortraitGrid<f64>;
pub type Filament = DiscreteFilament<f64>;
