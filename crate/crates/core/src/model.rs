//! Model parameters, state types, and the exact maps between the physical
//! description of two coaxial circular filaments and the reduced `(θ, W)`
//! phase plane.
//!
//! Two conventions for the invariant scale `d` coexist, mirroring the two
//! conserved quantities:
//!
//! * same-sign strengths: `d² = β R1² + R2²`, with
//!   `R1 = d cos θ / √β`, `R2 = d sin θ`, `θ ∈ (0, π/2)`;
//! * opposite-sign strengths: `d = γ R1² − R2²`, with
//!   `R1 = √(d/γ) cosh θ`, `R2 = √d sinh θ`, `θ ∈ (0, ∞)`.
//!
//! In both regimes time is measured in units rescaled by the (positive)
//! strength of the second filament, see [`canonicalize`].

use serde::{Deserialize, Serialize};

use crate::error::{f, Error, Result};
use crate::scalar::{c, Scalar};

/// Relative tolerance when checking a physical state against the invariant
/// relation of the parameters.
pub const INVARIANT_RTOL: f64 = 1e-10;

/// Phase-space distance to the singular point below which fields and
/// Hamiltonians refuse to evaluate.
pub const SINGULAR_GUARD: f64 = 1e-12;

/// Sign relation between the two vorticity strengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    SameSign,
    OppositeSign,
}

/// Parameters of a canonical (rescaled, renamed) two-filament problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    regime: Regime,
    alpha: T,
    ratio: T,
    d: T,
}

impl<T: Scalar> ModelParams<T> {
    /// `ratio` is β for [`Regime::SameSign`] and γ = −β for
    /// [`Regime::OppositeSign`].
    pub fn new(regime: Regime, alpha: T, ratio: T, d: T) -> Result<Self> {
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be positive and finite, got {alpha}"),
            });
        }
        if !(ratio.is_finite() && ratio >= T::one()) {
            return Err(Error::InvalidParameter {
                name: "ratio",
                reason: format!("must be finite and >= 1, got {ratio}"),
            });
        }
        if !(d.is_finite() && d > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "d",
                reason: format!("must be positive and finite, got {d}"),
            });
        }
        Ok(Self {
            regime,
            alpha,
            ratio,
            d,
        })
    }

    pub fn same_sign(beta: T, alpha: T, d: T) -> Result<Self> {
        Self::new(Regime::SameSign, alpha, beta, d)
    }

    pub fn opposite_sign(gamma: T, alpha: T, d: T) -> Result<Self> {
        Self::new(Regime::OppositeSign, alpha, gamma, d)
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// β or γ, always `>= 1`.
    pub fn ratio(&self) -> T {
        self.ratio
    }

    pub fn d(&self) -> T {
        self.d
    }

    /// Strength ratio Γ1/Γ2 with its sign: β, or −γ in the opposite regime.
    pub fn signed_ratio(&self) -> T {
        match self.regime {
            Regime::SameSign => self.ratio,
            Regime::OppositeSign => -self.ratio,
        }
    }

    /// Angle of the singular point: θ_β = arctan(1/√β) or
    /// θ_γ = artanh(1/√γ). The latter is infinite for γ = 1.
    pub fn singular_angle(&self) -> T {
        let root = self.ratio.sqrt();
        match self.regime {
            Regime::SameSign => (T::one() / root).atan(),
            Regime::OppositeSign => {
                if self.ratio == T::one() {
                    T::infinity()
                } else {
                    (T::one() / root).atanh()
                }
            }
        }
    }

    /// Upper end of the θ domain.
    pub fn theta_max(&self) -> T {
        match self.regime {
            Regime::SameSign => T::FRAC_PI_2(),
            Regime::OppositeSign => T::infinity(),
        }
    }

    /// The conserved quantity evaluated on a pair of radii, in the same
    /// convention as [`ModelParams::d`].
    pub fn invariant(&self, r1: T, r2: T) -> T {
        match self.regime {
            Regime::SameSign => (self.ratio * r1 * r1 + r2 * r2).sqrt(),
            Regime::OppositeSign => self.ratio * r1 * r1 - r2 * r2,
        }
    }

    pub(crate) fn check_theta(&self, theta: T) -> Result<()> {
        if theta > T::zero() && theta < self.theta_max() {
            Ok(())
        } else {
            Err(Error::DomainViolation { theta: f(theta) })
        }
    }

    /// Checks that `state` lies in the open phase space, including the
    /// singular-point guard.
    pub fn check_state(&self, state: &ReducedState<T>) -> Result<()> {
        self.check_theta(state.theta)?;
        if self.singular_distance(state) < c(SINGULAR_GUARD) {
            return Err(Error::SingularPoint {
                theta: f(state.theta),
                w: f(state.w),
            });
        }
        Ok(())
    }

    /// Euclidean distance from `state` to the singular point `(θ_s, 0)`.
    pub fn singular_distance(&self, state: &ReducedState<T>) -> T {
        let dt = state.theta - self.singular_angle();
        dt.hypot(state.w)
    }
}

/// A point `(θ, W)` of the reduced phase plane; `W = z1 − z2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReducedState<T> {
    pub theta: T,
    pub w: T,
}

impl<T: Scalar> ReducedState<T> {
    pub fn new(theta: T, w: T) -> Self {
        Self { theta, w }
    }

    pub fn to_array(self) -> [T; 2] {
        [self.theta, self.w]
    }

    pub fn from_array(a: [T; 2]) -> Self {
        Self { theta: a[0], w: a[1] }
    }
}

/// Radii and axial positions of the two circular filaments.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhysicalState<T> {
    pub r1: T,
    pub z1: T,
    pub r2: T,
    pub z2: T,
}

impl<T: Scalar> PhysicalState<T> {
    pub fn new(r1: T, z1: T, r2: T, z2: T) -> Self {
        Self { r1, z1, r2, z2 }
    }

    /// Positive radii and non-overlapping circles.
    pub fn validate(&self) -> Result<()> {
        self.validate_coordinates()?;
        let sep = self.separation_sq();
        if sep <= T::zero() {
            return Err(Error::OverlappingFilaments { separation_sq: f(sep) });
        }
        Ok(())
    }

    /// Positive finite radii and finite axial positions; overlap allowed.
    pub fn validate_coordinates(&self) -> Result<()> {
        for (name, r) in [("r1", self.r1), ("r2", self.r2)] {
            if !(r.is_finite() && r > T::zero()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("radius must be positive and finite, got {r}"),
                });
            }
        }
        if !(self.z1.is_finite() && self.z2.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: "axial positions must be finite".into(),
            });
        }
        Ok(())
    }

    /// `(r1 − r2)² + (z1 − z2)²`.
    pub fn separation_sq(&self) -> T {
        let dr = self.r1 - self.r2;
        let dz = self.z1 - self.z2;
        dr * dr + dz * dz
    }

    /// Layout used by the four-dimensional field: `[r1, z1, r2, z2]`.
    pub fn to_array(self) -> [T; 4] {
        [self.r1, self.z1, self.r2, self.z2]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self {
            r1: a[0],
            z1: a[1],
            r2: a[2],
            z2: a[3],
        }
    }
}

/// Result of reducing a user configuration to canonical form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalSetup<T> {
    pub params: ModelParams<T>,
    pub reduced0: ReducedState<T>,
    /// The filaments were renamed so that `|Γ1| >= |Γ2|`.
    pub swapped: bool,
    /// The axial coordinate was mirrored (`z -> -z`), which flips the sign of
    /// both strengths so that the second one is positive.
    pub reflected: bool,
    /// Canonical time is `time_scale * t`; equals `|Γ2|` after renaming.
    pub time_scale: T,
    /// Physical state in the canonical frame (renamed, mirrored).
    pub phys0: PhysicalState<T>,
    /// Strengths in the canonical frame, before time rescaling.
    pub gammas: (T, T),
}

impl<T: Scalar> CanonicalSetup<T> {
    /// Maps a state of the canonical frame back to the user's frame.
    pub fn to_original(&self, state: &PhysicalState<T>) -> PhysicalState<T> {
        let mut s = *state;
        if self.reflected {
            s.z1 = -s.z1;
            s.z2 = -s.z2;
        }
        if self.swapped {
            s = PhysicalState::new(s.r2, s.z2, s.r1, s.z1);
        }
        s
    }

    /// The user's original strengths `(Γ1, Γ2)`.
    pub fn original_gammas(&self) -> (T, T) {
        let (mut g1, mut g2) = self.gammas;
        if self.reflected {
            g1 = -g1;
            g2 = -g2;
        }
        if self.swapped {
            std::mem::swap(&mut g1, &mut g2);
        }
        (g1, g2)
    }

    /// Strengths of the already rescaled problem: `(±ratio, 1)`.
    pub fn canonical_gammas(&self) -> (T, T) {
        (self.params.signed_ratio(), T::one())
    }

    /// Converts a duration in canonical time to physical time.
    pub fn to_physical_time(&self, tau: T) -> T {
        tau / self.time_scale
    }
}

/// Renames, mirrors and rescales a two-filament configuration into the
/// canonical form `ratio >= 1`, `Γ2 > 0` and computes the reduced initial
/// state.
pub fn canonicalize<T: Scalar>(gamma1: T, gamma2: T, phys0: PhysicalState<T>, alpha: T) -> Result<CanonicalSetup<T>> {
    for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
        if !(g.is_finite() && g != T::zero()) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("strength must be finite and non-zero, got {g}"),
            });
        }
    }
    if !(alpha.is_finite() && alpha > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("must be positive and finite, got {alpha}"),
        });
    }
    phys0.validate()?;

    let (mut g1, mut g2, mut phys) = (gamma1, gamma2, phys0);
    let swapped = g1.abs() < g2.abs();
    if swapped {
        std::mem::swap(&mut g1, &mut g2);
        phys = PhysicalState::new(phys.r2, phys.z2, phys.r1, phys.z1);
    }
    let reflected = g2 < T::zero();
    if reflected {
        g1 = -g1;
        g2 = -g2;
        phys.z1 = -phys.z1;
        phys.z2 = -phys.z2;
    }
    let time_scale = g2;
    let beta = g1 / g2;

    let params = if beta > T::zero() {
        let d = (beta * phys.r1 * phys.r1 + phys.r2 * phys.r2).sqrt();
        ModelParams::same_sign(beta, alpha, d)?
    } else {
        let gamma = -beta;
        let d = gamma * phys.r1 * phys.r1 - phys.r2 * phys.r2;
        if d <= T::zero() {
            return Err(Error::InfeasibleInvariant { d: f(d) });
        }
        ModelParams::opposite_sign(gamma, alpha, d)?
    };
    let reduced0 = physical_to_reduced(&phys, &params)?;

    Ok(CanonicalSetup {
        params,
        reduced0,
        swapped,
        reflected,
        time_scale,
        phys0: phys,
        gammas: (g1, g2),
    })
}

/// Reduced coordinates of a physical state lying on the invariant set of
/// `params`.
///
/// The invariant relation is checked to [`INVARIANT_RTOL`], relative to
/// `β R1² + R2²` (same sign) or `γ R1² + R2²` (opposite sign), the scale of
/// the terms whose difference forms the invariant.
pub fn physical_to_reduced<T: Scalar>(phys: &PhysicalState<T>, params: &ModelParams<T>) -> Result<ReducedState<T>> {
    phys.validate_coordinates()?;
    let ratio = params.ratio();
    let d = params.d();
    let (r1, r2) = (phys.r1, phys.r2);
    let theta = match params.regime() {
        Regime::SameSign => {
            let lhs = ratio * r1 * r1 + r2 * r2;
            let residual = (lhs - d * d).abs() / lhs;
            if !(residual <= c(INVARIANT_RTOL)) {
                return Err(Error::InvariantMismatch { residual: f(residual) });
            }
            r2.atan2(ratio.sqrt() * r1)
        }
        Regime::OppositeSign => {
            let scale = ratio * r1 * r1 + r2 * r2;
            let residual = (ratio * r1 * r1 - r2 * r2 - d).abs() / scale;
            if !(residual <= c(INVARIANT_RTOL)) {
                return Err(Error::InvariantMismatch { residual: f(residual) });
            }
            (r2 / d.sqrt()).asinh()
        }
    };
    Ok(ReducedState::new(theta, phys.z1 - phys.z2))
}

/// Radii `(r1, r2)` and separation `w` of a reduced state. Individual axial
/// positions need the augmented integration in [`crate::fullode`].
pub fn reduced_to_physical<T: Scalar>(red: &ReducedState<T>, params: &ModelParams<T>) -> Result<(T, T, T)> {
    params.check_theta(red.theta)?;
    let (r1, r2) = radii(red.theta, params);
    Ok((r1, r2, red.w))
}

/// Radii for an angle already known to be in the domain.
#[inline]
pub(crate) fn radii<T: Scalar>(theta: T, params: &ModelParams<T>) -> (T, T) {
    let d = params.d();
    let ratio = params.ratio();
    match params.regime() {
        Regime::SameSign => (d * theta.cos() / ratio.sqrt(), d * theta.sin()),
        Regime::OppositeSign => ((d / ratio).sqrt() * theta.cosh(), d.sqrt() * theta.sinh()),
    }
}
