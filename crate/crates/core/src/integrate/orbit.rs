use serde::Serialize;

use super::dopri5::{Dopri5, StepControl, StepFailure};
use crate::error::{f, Error, Result};
use crate::model::{ModelParams, ReducedState, Regime};
use crate::roots::find_root;
use crate::scalar::{c, Scalar};

/// Tolerances of [`detect_closed_orbit_with`].
#[derive(Debug, Clone, Copy)]
pub struct OrbitOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Return distance on the section that counts as closure.
    pub closure_tol: T,
    /// Field magnitude at the start below which the state is a fixed point.
    pub fixed_point_tol: T,
    /// Escape once `|W| > escape_factor (|W0| + 1)` while moving away.
    pub escape_factor: T,
    /// Escape once θ is this close to an end of its domain.
    pub endpoint_margin: T,
    /// Opposite-sign orbits with θ above this are treated as escaped.
    pub theta_ceiling: T,
}

impl<T: Scalar> Default for OrbitOptions<T> {
    fn default() -> Self {
        Self {
            rtol: c(1e-10),
            atol: c(1e-12),
            closure_tol: c(1e-6),
            fixed_point_tol: c(1e-10),
            escape_factor: c(10.0),
            endpoint_margin: c(1e-6),
            theta_ceiling: c(50.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitOutcome {
    ClosedOrbit,
    FixedPoint,
    Escaped,
}

/// A transversal crossing of the section `W = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionCrossing<T> {
    pub t: T,
    pub state: ReducedState<T>,
    /// `W` increases through the section.
    pub upward: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport<T> {
    pub closed: bool,
    pub period: Option<T>,
    pub section_crossings: Vec<SectionCrossing<T>>,
    /// Smallest section distance between the reference crossing and a later
    /// crossing in the same direction; infinite if there was none.
    pub closure_distance: T,
    pub outcome: OrbitOutcome,
    pub detail: String,
}

/// [`detect_closed_orbit_with`] under the default options.
pub fn detect_closed_orbit<T, F>(
    field: F,
    state0: &ReducedState<T>,
    params: &ModelParams<T>,
    max_time: T,
) -> Result<OrbitReport<T>>
where
    T: Scalar,
    F: Fn(&ReducedState<T>) -> Result<(T, T)>,
{
    detect_closed_orbit_with(field, state0, params, max_time, &OrbitOptions::default())
}

/// Follows the orbit through `state0` until it closes on the section
/// `W = 0` or escapes.
///
/// The reference point is `state0` itself when `W0 = 0`, otherwise the first
/// section crossing; the orbit is closed when a later crossing in the same
/// direction lands within `closure_tol` of it. The period is the time
/// between those two crossings.
pub fn detect_closed_orbit_with<T, F>(
    field: F,
    state0: &ReducedState<T>,
    params: &ModelParams<T>,
    max_time: T,
    opts: &OrbitOptions<T>,
) -> Result<OrbitReport<T>>
where
    T: Scalar,
    F: Fn(&ReducedState<T>) -> Result<(T, T)>,
{
    params.check_state(state0)?;
    let (f1, f2) = field(state0)?;
    if f1.hypot(f2) <= opts.fixed_point_tol {
        return Ok(OrbitReport {
            closed: false,
            period: None,
            section_crossings: Vec::new(),
            closure_distance: T::zero(),
            outcome: OrbitOutcome::FixedPoint,
            detail: "fixed point".into(),
        });
    }

    let rhs = |_t: T, y: &[T; 2]| {
        let (a, b) = field(&ReducedState::from_array(*y))?;
        Ok([a, b])
    };
    let ctl = StepControl::new(opts.rtol, opts.atol);
    let mut stepper = Dopri5::new(rhs, T::zero(), state0.to_array(), ctl)?;

    let mut crossings = Vec::new();
    let mut reference: Option<SectionCrossing<T>> = None;
    if state0.w == T::zero() {
        let start = SectionCrossing {
            t: T::zero(),
            state: *state0,
            upward: f2 > T::zero(),
        };
        crossings.push(start);
        reference = Some(start);
    }
    let mut closure_distance = T::infinity();
    let escape_w = opts.escape_factor * (state0.w.abs() + T::one());
    let theta_max = params.theta_max();
    let report = |crossings, closure_distance, outcome, closed, period, detail: &str| OrbitReport {
        closed,
        period,
        section_crossings: crossings,
        closure_distance,
        outcome,
        detail: detail.to_string(),
    };

    while stepper.t() < max_time {
        let w_old = stepper.y()[1];
        if let Err(failure) = stepper.step(max_time) {
            return Err(match failure {
                StepFailure::Singular(e) => e,
                StepFailure::StepSizeUnderflow => Error::IntegrationFailed {
                    t: f(stepper.t()),
                    reason: "step size underflow".into(),
                },
                StepFailure::TooManySteps => Error::IntegrationFailed {
                    t: f(stepper.t()),
                    reason: "step budget exhausted".into(),
                },
            });
        }
        let y = *stepper.y();
        let w_new = y[1];

        let crossed = (w_old < T::zero() && w_new >= T::zero()) || (w_old > T::zero() && w_new <= T::zero());
        if crossed {
            let dense = *stepper.last_step().expect("a step was just accepted");
            let tc = find_root(|t| dense.eval(t)[1], dense.t0, dense.t1(), T::epsilon())?;
            let sc = dense.eval(tc);
            let crossing = SectionCrossing {
                t: tc,
                state: ReducedState::from_array(sc),
                upward: w_old < T::zero(),
            };
            crossings.push(crossing);
            match reference {
                None => reference = Some(crossing),
                Some(r) if r.upward == crossing.upward => {
                    let dist = (crossing.state.theta - r.state.theta).hypot(crossing.state.w - r.state.w);
                    closure_distance = closure_distance.min(dist);
                    if dist < opts.closure_tol {
                        let period = crossing.t - r.t;
                        return Ok(report(
                            crossings,
                            closure_distance,
                            OrbitOutcome::ClosedOrbit,
                            true,
                            Some(period),
                            "returned to the reference crossing",
                        ));
                    }
                }
                Some(_) => {}
            }
        }

        let (theta, w) = (y[0], y[1]);
        let w_dot = stepper.dy()[1];
        let near_end = theta < opts.endpoint_margin
            || (theta_max.is_finite() && theta > theta_max - opts.endpoint_margin)
            || (params.regime() == Regime::OppositeSign && theta > opts.theta_ceiling);
        if w.abs() > escape_w && w * w_dot > T::zero() {
            return Ok(report(
                crossings,
                closure_distance,
                OrbitOutcome::Escaped,
                false,
                None,
                "|W| diverging",
            ));
        }
        if near_end {
            return Ok(report(
                crossings,
                closure_distance,
                OrbitOutcome::Escaped,
                false,
                None,
                "theta reached the edge of its domain",
            ));
        }
    }
    Err(Error::Inconclusive { t: f(max_time) })
}
