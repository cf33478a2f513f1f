//! Full physical fields.
//!
//! Coaxial circles in canonical units (`Γ2 = 1`, `Γ1 = b` with `b = β` or
//! `b = −γ`), with `ρ² = (R1 − R2)² + (z1 − z2)²`:
//!
//! ```text
//! R1' = −α R2 (z1 − z2) / ρ³        z1' = b / R1 + α R2 (R1 − R2) / ρ³
//! R2' =  α b R1 (z1 − z2) / ρ³      z2' = 1 / R2 − α b R1 (R1 − R2) / ρ³
//! ```
//!
//! Two parallel straight filaments reduce to point vortices in the
//! cross-section plane, `z1' = −iαΓ2 (z1 − z2)/D³`,
//! `z2' = −iαΓ1 (z2 − z1)/D³`, `D = |z1 − z2|`.

use num_complex::Complex;

use crate::dynamics::reduced_field;
use crate::error::{f, Error, Result};
use crate::model::{radii, ModelParams, PhysicalState, ReducedState, Regime};
use crate::scalar::{c, Scalar};

/// Squared separation below which the physical field refuses to evaluate.
pub const SEPARATION_SQ_GUARD: f64 = 1e-24;

/// Distance below which two point vortices count as coincident.
pub const COINCIDENCE_GUARD: f64 = 1e-12;

fn reduced_angle<T: Scalar>(s: &PhysicalState<T>, params: &ModelParams<T>) -> T {
    match params.regime() {
        Regime::SameSign => s.r2.atan2(params.ratio().sqrt() * s.r1),
        Regime::OppositeSign => (s.r2 / params.d().sqrt()).asinh(),
    }
}

/// Time derivative of `(R1, z1, R2, z2)` under the canonical strengths of
/// `params`.
pub fn field_physical<T: Scalar>(state: &PhysicalState<T>, params: &ModelParams<T>) -> Result<PhysicalState<T>> {
    let sep = state.separation_sq();
    if sep < c(SEPARATION_SQ_GUARD) {
        return Err(Error::SingularPoint {
            theta: f(reduced_angle(state, params)),
            w: f(state.z1 - state.z2),
        });
    }
    let b = params.signed_ratio();
    let alpha = params.alpha();
    let rho3 = sep * sep.sqrt();
    let (r1, r2) = (state.r1, state.r2);
    let w = state.z1 - state.z2;
    let dr = r1 - r2;
    Ok(PhysicalState {
        r1: -alpha * r2 * w / rho3,
        z1: b / r1 + alpha * r2 * dr / rho3,
        r2: alpha * b * r1 * w / rho3,
        z2: T::one() / r2 - alpha * b * r1 * dr / rho3,
    })
}

/// [`field_physical`] over `[R1, z1, R2, z2]` arrays.
pub fn physical_rhs<T: Scalar>(params: ModelParams<T>) -> impl Fn(T, &[T; 4]) -> Result<[T; 4]> {
    move |_t, y| Ok(field_physical(&PhysicalState::from_array(*y), &params)?.to_array())
}

/// Reduced state carried together with the individual axial positions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AugmentedState<T> {
    pub theta: T,
    pub w: T,
    pub z1: T,
    pub z2: T,
}

impl<T: Scalar> AugmentedState<T> {
    pub fn new(theta: T, w: T, z1: T, z2: T) -> Self {
        Self { theta, w, z1, z2 }
    }

    pub fn reduced(&self) -> ReducedState<T> {
        ReducedState::new(self.theta, self.w)
    }

    pub fn to_array(self) -> [T; 4] {
        [self.theta, self.w, self.z1, self.z2]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self {
            theta: a[0],
            w: a[1],
            z1: a[2],
            z2: a[3],
        }
    }

    /// Physical state with radii from the coordinate map of `params`.
    pub fn to_physical(&self, params: &ModelParams<T>) -> Result<PhysicalState<T>> {
        params.check_theta(self.theta)?;
        let (r1, r2) = radii(self.theta, params);
        Ok(PhysicalState::new(r1, self.z1, r2, self.z2))
    }
}

/// Reduced field plus the axial velocities reconstructing `z1`, `z2`.
pub fn field_augmented<T: Scalar>(state: &AugmentedState<T>, params: &ModelParams<T>) -> Result<AugmentedState<T>> {
    let (theta_dot, w_dot) = reduced_field(&state.reduced(), params)?;
    let (r1, r2) = radii(state.theta, params);
    let b = params.signed_ratio();
    let alpha = params.alpha();
    let dr = r1 - r2;
    let rho2 = dr * dr + state.w * state.w;
    let rho3 = rho2 * rho2.sqrt();
    Ok(AugmentedState {
        theta: theta_dot,
        w: w_dot,
        z1: b / r1 + alpha * r2 * dr / rho3,
        z2: T::one() / r2 - alpha * b * r1 * dr / rho3,
    })
}

/// [`field_augmented`] over `[θ, W, z1, z2]` arrays.
pub fn augmented_rhs<T: Scalar>(params: ModelParams<T>) -> impl Fn(T, &[T; 4]) -> Result<[T; 4]> {
    move |_t, y| Ok(field_augmented(&AugmentedState::from_array(*y), &params)?.to_array())
}

/// Two parallel straight filaments seen as point vortices in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelSetup<T> {
    pub gamma1: T,
    pub gamma2: T,
    pub alpha: T,
    pub p1: Complex<T>,
    pub p2: Complex<T>,
    /// Center of vorticity, defined iff `Γ1 + Γ2 ≠ 0`.
    pub center_c: Option<Complex<T>>,
    pub dist_d: T,
    /// Angular velocity `−α (Γ1 + Γ2) / D³` (zero when `Γ1 + Γ2 = 0`).
    pub omega: T,
    pub w0: Complex<T>,
}

impl<T: Scalar> ParallelSetup<T> {
    pub fn new(gamma1: T, gamma2: T, alpha: T, p1: Complex<T>, p2: Complex<T>) -> Result<Self> {
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be positive and finite, got {alpha}"),
            });
        }
        for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
            if !g.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite".into(),
                });
            }
        }
        let w0 = p1 - p2;
        let dist = w0.norm();
        if !(dist >= c(COINCIDENCE_GUARD)) {
            return Err(Error::CoincidentVortices { distance: f(dist) });
        }
        let total = gamma1 + gamma2;
        let (center_c, omega) = if total != T::zero() {
            let center = (p1 * gamma1 + p2 * gamma2) / total;
            (Some(center), -alpha * total / (dist * dist * dist))
        } else {
            (None, T::zero())
        };
        Ok(Self {
            gamma1,
            gamma2,
            alpha,
            p1,
            p2,
            center_c,
            dist_d: dist,
            omega,
            w0,
        })
    }

    /// Rotation period `2π/|ω|`, if the pair rotates.
    pub fn period(&self) -> Option<T> {
        (self.omega != T::zero()).then(|| T::TAU() / self.omega.abs())
    }

    /// Uniform velocity of the translating pair (`Γ1 + Γ2 = 0`).
    pub fn translation_velocity(&self) -> Complex<T> {
        let d3 = self.dist_d * self.dist_d * self.dist_d;
        Complex::new(T::zero(), -self.alpha * self.gamma2) * self.w0 / d3
    }
}

/// Velocities of the two point vortices at `positions`.
pub fn field_pointvortex<T: Scalar>(positions: [Complex<T>; 2], setup: &ParallelSetup<T>) -> Result<[Complex<T>; 2]> {
    let w = positions[0] - positions[1];
    let dist = w.norm();
    if !(dist >= c(COINCIDENCE_GUARD)) {
        return Err(Error::CoincidentVortices { distance: f(dist) });
    }
    let d3 = dist * dist * dist;
    let i = Complex::<T>::i();
    Ok([
        -i * w * (setup.alpha * setup.gamma2 / d3),
        i * w * (setup.alpha * setup.gamma1 / d3),
    ])
}

/// [`field_pointvortex`] over `[x1, x2, y1, y2]` arrays.
pub fn pointvortex_rhs<T: Scalar>(setup: ParallelSetup<T>) -> impl Fn(T, &[T; 4]) -> Result<[T; 4]> {
    move |_t, y| {
        let [v1, v2] = field_pointvortex([Complex::new(y[0], y[1]), Complex::new(y[2], y[3])], &setup)?;
        Ok([v1.re, v1.im, v2.re, v2.im])
    }
}

/// Closed-form positions at time `t`.
pub fn parallel_exact<T: Scalar>(t: T, setup: &ParallelSetup<T>) -> [Complex<T>; 2] {
    match setup.center_c {
        Some(center) => {
            let rot = Complex::from_polar(T::one(), setup.omega * t);
            [(setup.p1 - center) * rot + center, (setup.p2 - center) * rot + center]
        }
        None => {
            let shift = setup.translation_velocity() * t;
            [setup.p1 + shift, setup.p2 + shift]
        }
    }
}
