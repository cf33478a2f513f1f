//! Reduced dynamics for two filaments with strengths of opposite sign.
//!
//! With `u = cosh θ − √γ sinh θ`, `v = sinh θ − √γ cosh θ` and
//! `B = (d/γ) u² + W²`:
//!
//! ```text
//! θ' = −α √γ W / B^{3/2}
//! W' = −(γ^{3/2}/cosh θ + 1/sinh θ)/√d + α d v u / (√γ B^{3/2})
//! G(θ, W) = (2 γ^{3/2} arctan(tanh(θ/2)) + log tanh(θ/2))/√d + α √γ / √B
//! ```
//!
//! `u` and `v` are evaluated as `√(γ−1) sinh(θ_γ − θ)` and
//! `−√(γ−1) cosh(θ_γ − θ)`, which requires γ > 1.

use serde::Serialize;

use crate::error::{f, Error, Result};
use crate::model::{ModelParams, ReducedState, Regime};
use crate::roots::{find_root, ROOT_XTOL};
use crate::same_sign::BRACKET_SHRINK;
use crate::scalar::{c, Scalar};
use crate::verdict::{Verdict, VerdictKind, BOUNDARY_TOL};

/// Equilibrium structure of the opposite-sign system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumReportOpp<T> {
    pub theta_gamma: T,
    pub gamma_star: T,
    /// Present iff γ > γ*.
    pub theta_star: Option<T>,
    /// θ̄ in (0, θ_γ) with G(θ̄, 0) = G(θ*, 0); present iff γ > γ*.
    pub theta_bar: Option<T>,
    /// π γ^{3/2} / (2 √d) when γ <= γ*, otherwise G(θ*, 0).
    pub g_threshold: T,
}

pub(crate) fn require_opp<T: Scalar>(params: &ModelParams<T>) -> Result<()> {
    if params.regime() != Regime::OppositeSign {
        return Err(Error::InvalidParameter {
            name: "regime",
            reason: "expected opposite-sign parameters".into(),
        });
    }
    if params.ratio() <= T::one() {
        return Err(Error::GammaOutOfRange {
            gamma: f(params.ratio()),
        });
    }
    Ok(())
}

#[inline]
fn uv<T: Scalar>(theta: T, params: &ModelParams<T>) -> (T, T) {
    let amp = (params.ratio() - T::one()).sqrt();
    let offset = params.singular_angle() - theta;
    (amp * offset.sinh(), -amp * offset.cosh())
}

/// `(G1, G2)` at an interior point of Ω_γ.
pub fn field_opp<T: Scalar>(state: &ReducedState<T>, params: &ModelParams<T>) -> Result<(T, T)> {
    require_opp(params)?;
    params.check_state(state)?;
    Ok(field_unchecked(state.theta, state.w, params))
}

#[inline]
pub(crate) fn field_unchecked<T: Scalar>(theta: T, w: T, params: &ModelParams<T>) -> (T, T) {
    let gamma = params.ratio();
    let rg = gamma.sqrt();
    let d = params.d();
    let alpha = params.alpha();
    let (u, v) = uv(theta, params);
    let b = d / gamma * u * u + w * w;
    let b32 = b * b.sqrt();
    let g1 = -alpha * rg * w / b32;
    let g2 = -(gamma * rg / theta.cosh() + T::one() / theta.sinh()) / d.sqrt() + alpha * d * v * u / (rg * b32);
    (g1, g2)
}

/// `g(θ) = G2(θ, 0)`.
pub fn axis_field<T: Scalar>(theta: T, params: &ModelParams<T>) -> T {
    field_unchecked(theta, T::zero(), params).1
}

/// The conserved Hamiltonian G at an interior point of Ω_γ.
pub fn hamiltonian_opp<T: Scalar>(state: &ReducedState<T>, params: &ModelParams<T>) -> Result<T> {
    require_opp(params)?;
    params.check_state(state)?;
    Ok(hamiltonian_unchecked(state.theta, state.w, params))
}

/// `log tanh(θ/2)` without cancellation at either end.
#[inline]
fn log_tanh_half<T: Scalar>(theta: T) -> T {
    let e = (-theta).exp();
    (-(-theta).exp_m1()).ln() - e.ln_1p()
}

#[inline]
pub(crate) fn hamiltonian_unchecked<T: Scalar>(theta: T, w: T, params: &ModelParams<T>) -> T {
    let gamma = params.ratio();
    let rg = gamma.sqrt();
    let d = params.d();
    let two = c::<T>(2.0);
    let psi = (two * gamma * rg * (theta / two).tanh().atan() + log_tanh_half(theta)) / d.sqrt();
    let (u, _) = uv(theta, params);
    let b = d / gamma * u * u + w * w;
    psi + params.alpha() * rg / b.sqrt()
}

/// Limit of G(θ, 0) as θ → ∞: π γ^{3/2} / (2 √d).
pub fn far_field_threshold<T: Scalar>(params: &ModelParams<T>) -> T {
    let gamma = params.ratio();
    T::PI() * gamma * gamma.sqrt() / (c::<T>(2.0) * params.d().sqrt())
}

/// `φ(η) = η⁴ − η³ − αη² + η − 1`, so that `h_α(η) = (η − 1) φ(η)` at
/// `y = η = γ^{1/2}`.
pub fn critical_quartic<T: Scalar>(eta: T, alpha: T) -> T {
    (((eta - T::one()) * eta - alpha) * eta + T::one()) * eta - T::one()
}

/// `h_α(y) = γ y³ + (1 − 2γ) y² + (γ − 2) y + 1 + α y (y − γ)`.
pub fn equilibrium_cubic<T: Scalar>(y: T, gamma: T, alpha: T) -> T {
    let two = c::<T>(2.0);
    ((gamma * y + (T::one() - two * gamma)) * y + (gamma - two)) * y + T::one() + alpha * y * (y - gamma)
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < c(1.0 / 3.0) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { alpha: f(alpha) })
    }
}

/// Critical strength ratio γ* = η*², η* the root of [`critical_quartic`] in
/// (1, 4).
pub fn gamma_star<T: Scalar>(alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let eta = find_root(
        |e| critical_quartic(e, alpha),
        T::one() + c(BRACKET_SHRINK),
        c(4.0),
        c(ROOT_XTOL),
    )?;
    Ok(eta * eta)
}

/// Equilibrium (if any), θ̄ and the leapfrogging threshold.
pub fn equilibria_opp<T: Scalar>(params: &ModelParams<T>) -> Result<EquilibriumReportOpp<T>> {
    require_opp(params)?;
    let alpha = params.alpha();
    let gamma = params.ratio();
    let gstar = gamma_star(alpha)?;
    let theta_gamma = params.singular_angle();
    if gamma <= gstar {
        return Ok(EquilibriumReportOpp {
            theta_gamma,
            gamma_star: gstar,
            theta_star: None,
            theta_bar: None,
            g_threshold: far_field_threshold(params),
        });
    }

    let xtol = c(ROOT_XTOL);
    let rg = gamma.sqrt();
    let y_star = find_root(|y| equilibrium_cubic(y, gamma, alpha), T::one(), rg, xtol)?;
    let theta_star = (y_star / rg).atanh();
    let g_star = hamiltonian_unchecked(theta_star, T::zero(), params);

    let shrink = c::<T>(BRACKET_SHRINK);
    let theta_bar = find_root(
        |th| hamiltonian_unchecked(th, T::zero(), params) - g_star,
        shrink,
        theta_gamma - shrink,
        xtol,
    )?;
    Ok(EquilibriumReportOpp {
        theta_gamma,
        gamma_star: gstar,
        theta_star: Some(theta_star),
        theta_bar: Some(theta_bar),
        g_threshold: g_star,
    })
}

/// Classifier with the equilibrium structure precomputed.
#[derive(Debug, Clone, Copy)]
pub struct OppositeSignClassifier<T> {
    params: ModelParams<T>,
    /// `None` for γ = 1, where leapfrogging is impossible.
    equilibria: Option<EquilibriumReportOpp<T>>,
}

impl<T: Scalar> OppositeSignClassifier<T> {
    pub fn new(params: &ModelParams<T>) -> Result<Self> {
        if params.regime() != Regime::OppositeSign {
            return Err(Error::InvalidParameter {
                name: "regime",
                reason: "expected opposite-sign parameters".into(),
            });
        }
        if params.ratio() == T::one() {
            return Ok(Self {
                params: *params,
                equilibria: None,
            });
        }
        if params.alpha() >= c(1.0 / 3.0) {
            return Err(Error::OutOfTheoremScope {
                alpha: f(params.alpha()),
            });
        }
        Ok(Self {
            params: *params,
            equilibria: Some(equilibria_opp(params)?),
        })
    }

    pub fn equilibria(&self) -> Option<&EquilibriumReportOpp<T>> {
        self.equilibria.as_ref()
    }

    pub fn classify(&self, state0: &ReducedState<T>) -> Result<Verdict<T>> {
        let Some(eq) = &self.equilibria else {
            return Ok(leapfrog_impossible(
                "equal and opposite strengths: the radii stay ordered and the filaments collide instead",
            ));
        };
        let g = hamiltonian_opp(state0, &self.params)?;
        let tol = c::<T>(BOUNDARY_TOL);
        let threshold = eq.g_threshold;
        let verdict = |kind, detail: &str| Verdict {
            kind,
            hamiltonian: g,
            threshold,
            detail: detail.to_string(),
        };

        if let (Some(theta_star), Some(theta_bar)) = (eq.theta_star, eq.theta_bar) {
            let theta = state0.theta;
            if theta <= theta_bar - tol || theta >= theta_star + tol {
                return Ok(verdict(
                    VerdictKind::NonLeapfrog,
                    "theta0 outside (theta_bar, theta*): the orbit cannot encircle the singular point",
                ));
            }
            if (theta - theta_bar).abs() <= tol || (theta - theta_star).abs() <= tol {
                return Ok(verdict(VerdictKind::NonLeapfrog, "separatrix/equilibrium-convergent"));
            }
        }
        if g <= threshold - tol {
            return Ok(verdict(
                VerdictKind::NonLeapfrog,
                "Hamiltonian below the threshold: the orbit escapes",
            ));
        }
        if (g - threshold).abs() <= tol {
            return Ok(verdict(VerdictKind::NonLeapfrog, "separatrix/equilibrium-convergent"));
        }
        Ok(verdict(
            VerdictKind::Leapfrog,
            "Hamiltonian above the threshold: closed orbit around the singular point",
        ))
    }
}

pub(crate) fn leapfrog_impossible<T: Scalar>(detail: &str) -> Verdict<T> {
    Verdict {
        kind: VerdictKind::LeapfrogImpossible,
        hamiltonian: T::nan(),
        threshold: T::nan(),
        detail: detail.to_string(),
    }
}

/// Leapfrogging verdict for an opposite-sign initial state.
pub fn classify_opp<T: Scalar>(state0: &ReducedState<T>, params: &ModelParams<T>) -> Result<Verdict<T>> {
    OppositeSignClassifier::new(params)?.classify(state0)
}
