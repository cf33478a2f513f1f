//! Reduced dynamics for two filaments whose strengths share a sign.
//!
//! With `s = √β sin θ − cos θ` and `A = (d²/β) s² + W²` the system reads
//!
//! ```text
//! θ' = α √β W / A^{3/2}
//! W' = (β^{3/2} sin θ − cos θ) / (d sin θ cos θ)
//!      − α d² (sin θ + √β cos θ) s / (√β A^{3/2})
//! ```
//!
//! and is Hamiltonian with
//!
//! ```text
//! H(θ, W) = (1/2d) log[(1 − sin θ)^{β^{3/2}} (1 − cos θ) / ((1 + sin θ)^{β^{3/2}} (1 + cos θ))]
//!           − α √β / √A.
//! ```
//!
//! Evaluation uses `s = √(1+β) sin(θ − θ_β)` and the half-angle form of the
//! logarithm so that values stay accurate near θ_β, 0 and π/2.

use serde::Serialize;

use crate::error::{f, Error, Result};
use crate::model::{ModelParams, ReducedState, Regime};
use crate::roots::{find_root, ROOT_XTOL};
use crate::scalar::{c, Scalar};
use crate::verdict::{Verdict, VerdictKind, BOUNDARY_TOL};

/// Distance kept from the ends of root brackets whose endpoints are
/// singular.
pub const BRACKET_SHRINK: f64 = 1e-9;

/// Equilibria of the same-sign system for `0 < α < 1/3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumReportSame<T> {
    pub theta_beta: T,
    /// Left equilibrium θ* in (0, θ_β).
    pub theta_star: T,
    /// Right equilibrium θ** in (θ_β, π/2).
    pub theta_star2: T,
    /// min{H(θ*, 0), H(θ**, 0)}.
    pub h_star: T,
}

pub(crate) fn require_same<T: Scalar>(params: &ModelParams<T>) -> Result<()> {
    match params.regime() {
        Regime::SameSign => Ok(()),
        Regime::OppositeSign => Err(Error::InvalidParameter {
            name: "regime",
            reason: "expected same-sign parameters".into(),
        }),
    }
}

struct Geometry<T> {
    sin: T,
    cos: T,
    /// √β sin θ − cos θ
    s: T,
    /// sin θ + √β cos θ
    q: T,
}

#[inline]
fn geometry<T: Scalar>(theta: T, params: &ModelParams<T>) -> Geometry<T> {
    let beta = params.ratio();
    let amp = (T::one() + beta).sqrt();
    let offset = theta - params.singular_angle();
    Geometry {
        sin: theta.sin(),
        cos: theta.cos(),
        s: amp * offset.sin(),
        q: amp * offset.cos(),
    }
}

/// `(F1, F2)` at an interior point of Ω_β.
pub fn field_same<T: Scalar>(state: &ReducedState<T>, params: &ModelParams<T>) -> Result<(T, T)> {
    require_same(params)?;
    params.check_state(state)?;
    Ok(field_unchecked(state.theta, state.w, params))
}

#[inline]
pub(crate) fn field_unchecked<T: Scalar>(theta: T, w: T, params: &ModelParams<T>) -> (T, T) {
    let beta = params.ratio();
    let rb = beta.sqrt();
    let d = params.d();
    let alpha = params.alpha();
    let g = geometry(theta, params);
    let a = d * d / beta * g.s * g.s + w * w;
    let a32 = a * a.sqrt();
    let f1 = alpha * rb * w / a32;
    let f2 = (beta * rb * g.sin - g.cos) / (d * g.sin * g.cos) - alpha * d * d * g.q * g.s / (rb * a32);
    (f1, f2)
}

/// `f(θ) = F2(θ, 0)`; zeros are the equilibria.
pub fn axis_field<T: Scalar>(theta: T, params: &ModelParams<T>) -> T {
    field_unchecked(theta, T::zero(), params).1
}

/// The conserved Hamiltonian at an interior point of Ω_β.
pub fn hamiltonian_same<T: Scalar>(state: &ReducedState<T>, params: &ModelParams<T>) -> Result<T> {
    require_same(params)?;
    params.check_state(state)?;
    Ok(hamiltonian_unchecked(state.theta, state.w, params))
}

#[inline]
pub(crate) fn hamiltonian_unchecked<T: Scalar>(theta: T, w: T, params: &ModelParams<T>) -> T {
    let beta = params.ratio();
    let rb = beta.sqrt();
    let d = params.d();
    let half = c::<T>(0.5);
    // log((1-cos)/(1+cos)) = 2 log tan(θ/2); log((1-sin)/(1+sin)) = 2 log tan(π/4 - θ/2)
    let log_part = (theta * half).tan().ln() + beta * rb * (T::FRAC_PI_4() - theta * half).tan().ln();
    let g = geometry(theta, params);
    let a = d * d / beta * g.s * g.s + w * w;
    log_part / d - params.alpha() * rb / a.sqrt()
}

/// `h_α(y) = β y³ − (2β + 1) y² + (β + 2) y − 1 + α (y² + β y)`.
pub fn equilibrium_cubic<T: Scalar>(y: T, beta: T, alpha: T) -> T {
    let two = c::<T>(2.0);
    ((beta * y - (two * beta + T::one())) * y + (beta + two)) * y - T::one() + alpha * y * (y + beta)
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < c(1.0 / 3.0) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { alpha: f(alpha) })
    }
}

/// The two equilibria `(θ*, 0)` and `(θ**, 0)` and the threshold H*.
///
/// θ* comes from the unique root of [`equilibrium_cubic`] in (0, 1) via
/// `θ* = arctan(y*/√β)`; θ** from bracketing `f` on (θ_β, π/2).
pub fn equilibria_same<T: Scalar>(params: &ModelParams<T>) -> Result<EquilibriumReportSame<T>> {
    require_same(params)?;
    check_alpha(params.alpha())?;
    let beta = params.ratio();
    let alpha = params.alpha();
    let xtol = c(ROOT_XTOL);
    let shrink = c::<T>(BRACKET_SHRINK);

    let y_star = find_root(|y| equilibrium_cubic(y, beta, alpha), T::zero(), T::one(), xtol)?;
    let theta_star = (y_star / beta.sqrt()).atan();

    let theta_beta = params.singular_angle();
    let theta_star2 = find_root(
        |th| axis_field(th, params),
        theta_beta + shrink,
        T::FRAC_PI_2() - shrink,
        xtol,
    )?;

    let h1 = hamiltonian_unchecked(theta_star, T::zero(), params);
    let h2 = hamiltonian_unchecked(theta_star2, T::zero(), params);
    Ok(EquilibriumReportSame {
        theta_beta,
        theta_star,
        theta_star2,
        h_star: h1.min(h2),
    })
}

/// Classifier with the equilibria precomputed, for repeated queries.
#[derive(Debug, Clone, Copy)]
pub struct SameSignClassifier<T> {
    params: ModelParams<T>,
    equilibria: EquilibriumReportSame<T>,
}

impl<T: Scalar> SameSignClassifier<T> {
    pub fn new(params: &ModelParams<T>) -> Result<Self> {
        require_same(params)?;
        if params.alpha() >= c(1.0 / 3.0) {
            return Err(Error::OutOfTheoremScope {
                alpha: f(params.alpha()),
            });
        }
        Ok(Self {
            params: *params,
            equilibria: equilibria_same(params)?,
        })
    }

    pub fn equilibria(&self) -> &EquilibriumReportSame<T> {
        &self.equilibria
    }

    pub fn classify(&self, state0: &ReducedState<T>) -> Result<Verdict<T>> {
        let h = hamiltonian_same(state0, &self.params)?;
        let eq = &self.equilibria;
        let tol = c::<T>(BOUNDARY_TOL);
        let threshold = eq.h_star;
        let verdict = |kind, detail: &str| Verdict {
            kind,
            hamiltonian: h,
            threshold,
            detail: detail.to_string(),
        };

        let theta = state0.theta;
        let on_boundary = (theta - eq.theta_star).abs() <= tol
            || (theta - eq.theta_star2).abs() <= tol
            || (h - threshold).abs() <= tol;
        if theta <= eq.theta_star - tol || theta >= eq.theta_star2 + tol {
            return Ok(verdict(
                VerdictKind::NonLeapfrog,
                "theta0 outside (theta*, theta**): the orbit cannot encircle the singular point",
            ));
        }
        if h >= threshold + tol {
            return Ok(verdict(
                VerdictKind::NonLeapfrog,
                "Hamiltonian above H*: the orbit escapes",
            ));
        }
        if on_boundary {
            return Ok(verdict(VerdictKind::NonLeapfrog, "separatrix/equilibrium-convergent"));
        }
        Ok(verdict(
            VerdictKind::Leapfrog,
            "theta0 in (theta*, theta**) and Hamiltonian below H*: closed orbit around the singular point",
        ))
    }
}

/// Leapfrogging verdict for a same-sign initial state.
pub fn classify_same<T: Scalar>(state0: &ReducedState<T>, params: &ModelParams<T>) -> Result<Verdict<T>> {
    SameSignClassifier::new(params)?.classify(state0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn params(beta: f64) -> ModelParams<f64> {
        ModelParams::same_sign(beta, 0.1, 1.0).unwrap()
    }

    /// The Hamiltonian exactly as written, with the logarithm of the ratio.
    fn hamiltonian_literal(theta: f64, w: f64, beta: f64, alpha: f64, d: f64) -> f64 {
        let (s, co) = theta.sin_cos();
        let b32 = beta.powf(1.5);
        let ratio = (1.0 - s).powf(b32) * (1.0 - co) / ((1.0 + s).powf(b32) * (1.0 + co));
        let a = d * d / beta * (beta.sqrt() * s - co).powi(2) + w * w;
        ratio.ln() / (2.0 * d) - alpha * beta.sqrt() / a.sqrt()
    }

    #[test]
    fn field_at_symmetric_point() {
        let (f1, f2) = field_same(&ReducedState::new(FRAC_PI_4, 1.0), &params(1.0)).unwrap();
        assert!((f1 - 0.1).abs() < 1e-15);
        assert!(f2.abs() < 1e-15);
    }

    #[test]
    fn field_matches_hamiltonian_gradient() {
        let p = params(2.0);
        let (th, w) = (0.5, 0.3);
        let h = 1e-5;
        let dh_dw =
            (hamiltonian_literal(th, w + h, 2.0, 0.1, 1.0) - hamiltonian_literal(th, w - h, 2.0, 0.1, 1.0)) / (2.0 * h);
        let dh_dth =
            (hamiltonian_literal(th + h, w, 2.0, 0.1, 1.0) - hamiltonian_literal(th - h, w, 2.0, 0.1, 1.0)) / (2.0 * h);
        let (f1, f2) = field_same(&ReducedState::new(th, w), &p).unwrap();
        assert!((f1 - dh_dw).abs() <= 1e-6 * f1.abs());
        assert!((f2 + dh_dth).abs() <= 1e-6 * f2.abs());
    }

    #[test]
    fn hamiltonian_reference_value() {
        let h = hamiltonian_same(&ReducedState::new(FRAC_PI_4, 1.0), &params(1.0)).unwrap();
        assert!((h - (-1.86275)).abs() < 1e-4);
        assert!((h - hamiltonian_literal(FRAC_PI_4, 1.0, 1.0, 0.1, 1.0)).abs() < 1e-13);
    }

    #[test]
    fn hamiltonian_symmetries() {
        let p = params(1.0);
        for &(th, w) in &[(0.2, 0.7), (0.9, -1.3), (1.3, 0.05)] {
            let h = hamiltonian_same(&ReducedState::new(th, w), &p).unwrap();
            let hm = hamiltonian_same(&ReducedState::new(th, -w), &p).unwrap();
            let hs = hamiltonian_same(&ReducedState::new(FRAC_PI_2 - th, w), &p).unwrap();
            assert_eq!(h, hm);
            assert!((h - hs).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_point_rejected() {
        let p = params(2.0);
        let s = ReducedState::new(p.singular_angle(), 0.0);
        assert!(matches!(field_same(&s, &p), Err(Error::SingularPoint { .. })));
        assert!(matches!(hamiltonian_same(&s, &p), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn cubic_bracket_endpoints() {
        for beta in [1.0f64, 2.0, 4.0, 10.0] {
            assert_eq!(equilibrium_cubic(0.0, beta, 0.1), -1.0);
            assert!((equilibrium_cubic(1.0, beta, 0.1) - 0.1 * (1.0 + beta)).abs() < 1e-14);
        }
    }

    #[test]
    fn beta_one_equilibria() {
        // bisection oracle on (y - 1)^3 + 0.1 y (y + 1)
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (mid - 1.0).powi(3) + 0.1 * mid * (mid + 1.0) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let eq = equilibria_same(&params(1.0)).unwrap();
        assert!((eq.theta_star - lo.atan()).abs() < 1e-13);
        assert!((lo - 0.5575).abs() < 1e-3);
        assert!((eq.theta_star - 0.5087).abs() < 1e-3);
        assert!((eq.theta_star2 - (FRAC_PI_2 - eq.theta_star)).abs() < 1e-10);
    }

    #[test]
    fn equilibria_reject_alpha_out_of_range() {
        let p = ModelParams::same_sign(1.0, 0.4, 1.0).unwrap();
        assert!(matches!(equilibria_same(&p), Err(Error::AlphaOutOfRange { .. })));
    }

    #[test]
    fn classify_examples() {
        let p = params(1.0);
        let v = classify_same(&ReducedState::new(0.7, 0.0), &p).unwrap();
        assert_eq!(v.kind, VerdictKind::Leapfrog);
        assert!(v.hamiltonian < v.threshold);
        let v = classify_same(&ReducedState::new(0.3, 0.0), &p).unwrap();
        assert_eq!(v.kind, VerdictKind::NonLeapfrog);
        let p = ModelParams::same_sign(1.0, 0.4, 1.0).unwrap();
        assert!(matches!(
            classify_same(&ReducedState::new(0.7, 0.0), &p),
            Err(Error::OutOfTheoremScope { .. })
        ));
    }

    #[test]
    fn classify_on_equilibrium_is_not_leapfrog() {
        let p = params(2.0);
        let eq = equilibria_same(&p).unwrap();
        for th in [eq.theta_star, eq.theta_star2] {
            let v = classify_same(&ReducedState::new(th, 0.0), &p).unwrap();
            assert_eq!(v.kind, VerdictKind::NonLeapfrog);
        }
    }
}
