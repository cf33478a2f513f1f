//! Phase-portrait data: Hamiltonian grids with per-cell verdicts, motion
//! tracing and closed-orbit periods.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{hamiltonian, reduced_field, Classifier};
use crate::error::{Error, Result};
use crate::integrate::{detect_closed_orbit, detect_closed_orbit_with, OrbitOptions, OrbitOutcome};
use crate::model::{CanonicalSetup, ModelParams, ReducedState, Regime};
use crate::scalar::{c, Scalar};
use crate::verdict::VerdictKind;

/// Cells closer than this to the singular point are masked.
pub const MASK_RADIUS: f64 = 1e-3;

/// Time budget when looking for a closed orbit.
pub const PERIOD_SEARCH_TIME: f64 = 1e5;

/// Hamiltonian values and verdicts on a uniform `(θ, W)` grid, stored row
/// major with one row per `W` sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortraitGrid<T> {
    pub theta_axis: Vec<T>,
    pub w_axis: Vec<T>,
    pub values: Vec<Option<T>>,
    pub verdicts: Vec<Option<VerdictKind>>,
    /// Classifier threshold, NaN when no classifier applies.
    pub threshold: T,
}

impl<T: Scalar> PortraitGrid<T> {
    pub fn shape(&self) -> (usize, usize) {
        (self.w_axis.len(), self.theta_axis.len())
    }

    fn index(&self, row: usize, col: usize) -> usize {
        row * self.theta_axis.len() + col
    }

    pub fn value(&self, row: usize, col: usize) -> Option<T> {
        self.values[self.index(row, col)]
    }

    pub fn verdict(&self, row: usize, col: usize) -> Option<VerdictKind> {
        self.verdicts[self.index(row, col)]
    }

    pub fn count(&self, kind: VerdictKind) -> usize {
        self.verdicts.iter().filter(|v| **v == Some(kind)).count()
    }

    /// Adjacent Leapfrog/NonLeapfrog pairs for which no cell within one
    /// grid step of the Leapfrog cell lies on the other side of the
    /// threshold level set.
    pub fn boundary_violations(&self) -> usize {
        let (rows, cols) = self.shape();
        let thr = self.threshold;
        let mut bad = 0;
        for r in 0..rows {
            for col in 0..cols {
                if self.verdict(r, col) != Some(VerdictKind::Leapfrog) {
                    continue;
                }
                let Some(va) = self.value(r, col) else { continue };
                let neighbours = [(0isize, 1isize), (0, -1), (1, 0), (-1, 0)];
                let on_boundary = neighbours.iter().any(|(dr, dc)| {
                    let (rr, cc) = (r as isize + dr, col as isize + dc);
                    rr >= 0
                        && cc >= 0
                        && (rr as usize) < rows
                        && (cc as usize) < cols
                        && self.verdict(rr as usize, cc as usize) == Some(VerdictKind::NonLeapfrog)
                });
                if !on_boundary {
                    continue;
                }
                let mut straddles = false;
                for dr in -1isize..=1 {
                    for dc in -1isize..=1 {
                        let (rr, cc) = (r as isize + dr, col as isize + dc);
                        if rr < 0 || cc < 0 || rr as usize >= rows || cc as usize >= cols {
                            continue;
                        }
                        if let Some(vb) = self.value(rr as usize, cc as usize) {
                            if (va - thr) * (vb - thr) <= T::zero() {
                                straddles = true;
                            }
                        }
                    }
                }
                if !straddles {
                    bad += 1;
                }
            }
        }
        bad
    }
}

/// `n` samples from `lo` to `hi`, built around the midpoint so that a range
/// symmetric about zero gives an axis symmetric to the last bit.
pub fn uniform_axis<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    let two = c::<T>(2.0);
    let mid = (lo + hi) / two;
    let half = (hi - lo) / two;
    let last = T::from_count(n - 1);
    (0..n)
        .map(|i| mid + half * (two * T::from_count(i) - last) / last)
        .collect()
}

/// Plot window used when none is given: θ ∈ [1e-3, π/2 − 1e-3] (same
/// sign) or [1e-3, 3] (opposite sign), W ∈ [−3, 3].
pub fn default_window<T: Scalar>(params: &ModelParams<T>) -> ((T, T), (T, T)) {
    let margin = c::<T>(1e-3);
    let theta = match params.regime() {
        Regime::SameSign => (margin, T::FRAC_PI_2() - margin),
        Regime::OppositeSign => (margin, c(3.0)),
    };
    (theta, (c(-3.0), c(3.0)))
}

fn check_window<T: Scalar>(
    params: &ModelParams<T>,
    theta_range: (T, T),
    w_range: (T, T),
    resolution: (usize, usize),
) -> Result<()> {
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: format!(
                "need at least 2 samples per axis, got {}x{}",
                resolution.0, resolution.1
            ),
        });
    }
    let (lo, hi) = theta_range;
    if !(lo > T::zero() && hi < params.theta_max() && lo < hi) {
        return Err(Error::InvalidParameter {
            name: "theta_range",
            reason: format!("[{lo}, {hi}] must be an increasing range inside the phase space"),
        });
    }
    if !(w_range.0 < w_range.1 && w_range.0.is_finite() && w_range.1.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "w_range",
            reason: format!("[{}, {}] must be a finite increasing range", w_range.0, w_range.1),
        });
    }
    Ok(())
}

/// Grid of H (or G) values with classifier verdicts. `resolution` is
/// `(n_theta, n_w)`; cells within [`MASK_RADIUS`] of the singular point are
/// masked. When the classifier does not apply (`α >= 1/3`) every unmasked
/// cell reports `OutOfTheoremScope`.
pub fn hamiltonian_grid<T: Scalar>(
    params: &ModelParams<T>,
    theta_range: (T, T),
    w_range: (T, T),
    resolution: (usize, usize),
) -> Result<PortraitGrid<T>> {
    check_window(params, theta_range, w_range, resolution)?;
    let theta_axis = uniform_axis(theta_range.0, theta_range.1, resolution.0);
    let w_axis = uniform_axis(w_range.0, w_range.1, resolution.1);

    let classifier = match Classifier::new(params) {
        Ok(cl) => Some(cl),
        Err(Error::OutOfTheoremScope { .. }) => None,
        Err(e) => return Err(e),
    };
    let threshold = classifier
        .as_ref()
        .and_then(|cl| cl.equilibria())
        .map(|eq| eq.threshold())
        .unwrap_or_else(T::nan);
    let mask = c::<T>(MASK_RADIUS);

    let cells: Vec<(Option<T>, Option<VerdictKind>)> = w_axis
        .par_iter()
        .flat_map_iter(|&w| {
            let classifier = &classifier;
            theta_axis.iter().map(move |&theta| {
                let state = ReducedState::new(theta, w);
                if params.singular_distance(&state) < mask {
                    return (None, None);
                }
                let value = hamiltonian(&state, params).ok();
                let verdict = match classifier {
                    Some(cl) => cl.classify(&state).ok().map(|v| v.kind),
                    None => Some(VerdictKind::OutOfTheoremScope),
                };
                (value, verdict)
            })
        })
        .collect();
    let (values, verdicts) = cells.into_iter().unzip();
    Ok(PortraitGrid {
        theta_axis,
        w_axis,
        values,
        verdicts,
        threshold,
    })
}

/// The three kinds of motion seen in the phase portraits, plus rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MotionType {
    /// Closed orbit around the singular point.
    Leapfrog,
    /// `W` changes sign exactly once over the whole orbit.
    SinglePassage,
    /// `W` never changes sign: the filaments approach and separate.
    Repulsion,
    Equilibrium,
}

/// Classifies the whole orbit through `state0` by simulation.
///
/// The past of the orbit is the future of `(θ0, −W0)` by the reversibility
/// of the field, so both halves are integrated forward until they close or
/// escape and their section crossings are counted.
pub fn trace_motion<T: Scalar>(state0: &ReducedState<T>, params: &ModelParams<T>, max_time: T) -> Result<MotionType> {
    let field = |s: &ReducedState<T>| reduced_field(s, params);
    let forward = detect_closed_orbit(field, state0, params, max_time)?;
    match forward.outcome {
        OrbitOutcome::ClosedOrbit => return Ok(MotionType::Leapfrog),
        OrbitOutcome::FixedPoint => return Ok(MotionType::Equilibrium),
        OrbitOutcome::Escaped => {}
    }
    let mirrored = ReducedState::new(state0.theta, -state0.w);
    let backward = detect_closed_orbit(field, &mirrored, params, max_time)?;
    if backward.outcome != OrbitOutcome::Escaped {
        return Err(Error::Inconclusive {
            t: crate::error::f(max_time),
        });
    }
    let mut crossings = forward.section_crossings.len() + backward.section_crossings.len();
    if state0.w == T::zero() {
        crossings -= 1;
    }
    match crossings {
        0 => Ok(MotionType::Repulsion),
        1 => Ok(MotionType::SinglePassage),
        _ => Err(Error::Inconclusive {
            t: crate::error::f(max_time),
        }),
    }
}

/// Motion type of every grid cell; masked cells and failed traces are
/// `None`. `resolution` is `(n_theta, n_w)`.
pub fn motion_grid<T: Scalar>(
    params: &ModelParams<T>,
    theta_range: (T, T),
    w_range: (T, T),
    resolution: (usize, usize),
    max_time: T,
) -> Result<Vec<Option<MotionType>>> {
    check_window(params, theta_range, w_range, resolution)?;
    let theta_axis = uniform_axis(theta_range.0, theta_range.1, resolution.0);
    let w_axis = uniform_axis(w_range.0, w_range.1, resolution.1);
    let mask = c::<T>(MASK_RADIUS);
    Ok(w_axis
        .par_iter()
        .flat_map_iter(|&w| {
            theta_axis.iter().map(move |&theta| {
                let state = ReducedState::new(theta, w);
                if params.singular_distance(&state) < mask {
                    return None;
                }
                trace_motion(&state, params, max_time).ok()
            })
        })
        .collect())
}

/// Period, in canonical time, of the closed orbit through `state0`.
pub fn orbit_period<T: Scalar>(state0: &ReducedState<T>, params: &ModelParams<T>) -> Result<T> {
    orbit_period_with(state0, params, &OrbitOptions::default())
}

pub fn orbit_period_with<T: Scalar>(
    state0: &ReducedState<T>,
    params: &ModelParams<T>,
    opts: &OrbitOptions<T>,
) -> Result<T> {
    let field = |s: &ReducedState<T>| reduced_field(s, params);
    let report = detect_closed_orbit_with(field, state0, params, c(PERIOD_SEARCH_TIME), opts)?;
    report.period.filter(|_| report.closed).ok_or(Error::NotClosed)
}

/// Period of the canonical problem converted to the user's time unit.
pub fn physical_period<T: Scalar>(setup: &CanonicalSetup<T>) -> Result<T> {
    Ok(setup.to_physical_time(orbit_period(&setup.reduced0, &setup.params)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_axis_is_bitwise_symmetric() {
        let a = uniform_axis(-3.0f64, 3.0, 41);
        for i in 0..a.len() {
            assert_eq!(a[i], -a[a.len() - 1 - i]);
        }
        assert_eq!(a[20], 0.0);
    }

    #[test]
    fn window_validation() {
        let p = ModelParams::same_sign(1.0f64, 0.1, 1.0).unwrap();
        assert!(hamiltonian_grid(&p, (0.0, 1.0), (-1.0, 1.0), (4, 4)).is_err());
        assert!(hamiltonian_grid(&p, (0.1, 1.0), (-1.0, 1.0), (1, 4)).is_err());
        assert!(hamiltonian_grid(&p, (0.1, 1.6), (-1.0, 1.0), (4, 4)).is_err());
    }

    #[test]
    fn out_of_scope_alpha_still_gives_values() {
        let p = ModelParams::same_sign(1.0f64, 0.4, 1.0).unwrap();
        let g = hamiltonian_grid(&p, (0.1, 1.4), (-1.0, 1.0), (5, 5)).unwrap();
        assert_eq!(g.count(VerdictKind::OutOfTheoremScope), 25);
        assert!(g.threshold.is_nan());
    }
}
