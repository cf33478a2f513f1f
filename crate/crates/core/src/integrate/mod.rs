//! Adaptive time integration, conservation monitoring and closed-orbit
//! detection.

mod dopri5;
mod orbit;

pub use dopri5::{DenseStep, Dopri5, StepControl, StepFailure};
pub use orbit::{
    detect_closed_orbit, detect_closed_orbit_with, OrbitOptions, OrbitOutcome, OrbitReport, SectionCrossing,
};

use serde::Serialize;

use crate::dynamics::{hamiltonian, reduced_field};
use crate::error::{f, Error, Result};
use crate::model::{ModelParams, ReducedState};
use crate::scalar::Scalar;

/// How an integration run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    Completed,
    SingularityApproach,
    StepSizeUnderflow,
    StepBudgetExhausted,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Completed => "Completed",
            Termination::SingularityApproach => "SingularityApproach",
            Termination::StepSizeUnderflow => "StepSizeUnderflow",
            Termination::StepBudgetExhausted => "StepBudgetExhausted",
        }
    }
}

/// Accepted steps of one integration run.
#[derive(Debug, Clone)]
pub struct Trajectory<T, const N: usize> {
    pub times: Vec<T>,
    pub states: Vec<[T; N]>,
    /// Per sample, the largest relative deviation over all monitors.
    pub drift: Vec<T>,
    /// Maximum of `drift`.
    pub hamiltonian_drift: T,
    pub termination: Termination,
    /// Error that ended the run early, if any.
    pub detail: Option<String>,
}

impl<T: Scalar, const N: usize> Trajectory<T, N> {
    pub fn last_state(&self) -> &[T; N] {
        self.states.last().expect("trajectory always holds the initial state")
    }

    pub fn last_time(&self) -> T {
        *self.times.last().expect("trajectory always holds the initial state")
    }

    /// Turns an early termination into an error.
    pub fn into_result(self) -> Result<Self> {
        match self.termination {
            Termination::Completed => Ok(self),
            _ => Err(Error::IntegrationFailed {
                t: f(self.last_time()),
                reason: format!(
                    "{}: {}",
                    self.termination.as_str(),
                    self.detail.clone().unwrap_or_default()
                ),
            }),
        }
    }
}

/// A conserved quantity to watch along a trajectory.
pub type Monitor<'a, T, const N: usize> = &'a dyn Fn(&[T; N]) -> T;

fn relative_deviation<T: Scalar>(value: T, reference: T) -> T {
    let dev = (value - reference).abs();
    if reference != T::zero() {
        dev / reference.abs()
    } else {
        dev
    }
}

/// Integrates `field` from `state0` at `t = 0` up to `t_end`.
pub fn integrate<T, F, const N: usize>(
    field: F,
    state0: [T; N],
    t_end: T,
    rtol: T,
    atol: T,
    monitors: &[Monitor<'_, T, N>],
) -> Result<Trajectory<T, N>>
where
    T: Scalar,
    F: FnMut(T, &[T; N]) -> Result<[T; N]>,
{
    integrate_with(field, state0, t_end, StepControl::new(rtol, atol), monitors)
}

/// [`integrate`] with full control over the step-size controller.
pub fn integrate_with<T, F, const N: usize>(
    field: F,
    state0: [T; N],
    t_end: T,
    ctl: StepControl<T>,
    monitors: &[Monitor<'_, T, N>],
) -> Result<Trajectory<T, N>>
where
    T: Scalar,
    F: FnMut(T, &[T; N]) -> Result<[T; N]>,
{
    if !(t_end.is_finite() && t_end >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: format!("must be finite and non-negative, got {t_end}"),
        });
    }
    let mut stepper = Dopri5::new(field, T::zero(), state0, ctl)?;
    let reference: Vec<T> = monitors.iter().map(|m| m(&state0)).collect();
    let drift_at = |y: &[T; N]| {
        monitors
            .iter()
            .zip(&reference)
            .map(|(m, &r)| relative_deviation(m(y), r))
            .fold(T::zero(), |a, b| a.max(b))
    };

    let mut traj = Trajectory {
        times: vec![T::zero()],
        states: vec![state0],
        drift: vec![T::zero()],
        hamiltonian_drift: T::zero(),
        termination: Termination::Completed,
        detail: None,
    };
    while stepper.t() < t_end {
        match stepper.step(t_end) {
            Ok(()) => {
                let y = *stepper.y();
                let d = drift_at(&y);
                traj.times.push(stepper.t());
                traj.states.push(y);
                traj.drift.push(d);
                traj.hamiltonian_drift = traj.hamiltonian_drift.max(d);
            }
            Err(StepFailure::Singular(e)) => {
                traj.termination = Termination::SingularityApproach;
                traj.detail = Some(e.to_string());
                break;
            }
            Err(StepFailure::StepSizeUnderflow) => {
                traj.termination = Termination::StepSizeUnderflow;
                traj.detail = Some(format!("step below 1e-14 |t| at t = {}", stepper.t()));
                break;
            }
            Err(StepFailure::TooManySteps) => {
                traj.termination = Termination::StepBudgetExhausted;
                traj.detail = Some(format!("step budget exhausted at t = {}", stepper.t()));
                break;
            }
        }
    }
    Ok(traj)
}

/// Time-independent right-hand side of the reduced system as an array field.
pub fn reduced_rhs<T: Scalar>(params: ModelParams<T>) -> impl Fn(T, &[T; 2]) -> Result<[T; 2]> {
    move |_t, y| {
        let (a, b) = reduced_field(&ReducedState::from_array(*y), &params)?;
        Ok([a, b])
    }
}

/// Integrates the reduced system while monitoring H (or G).
pub fn integrate_reduced<T: Scalar>(
    state0: &ReducedState<T>,
    params: &ModelParams<T>,
    t_end: T,
    rtol: T,
    atol: T,
) -> Result<Trajectory<T, 2>> {
    params.check_state(state0)?;
    let p = *params;
    let h = move |y: &[T; 2]| hamiltonian(&ReducedState::from_array(*y), &p).unwrap_or_else(|_| T::nan());
    integrate(reduced_rhs(p), state0.to_array(), t_end, rtol, atol, &[&h])
}
