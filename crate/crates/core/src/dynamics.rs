//! Regime-independent entry points over the reduced systems.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{canonicalize, CanonicalSetup, ModelParams, PhysicalState, ReducedState, Regime};
use crate::opposite_sign::{self, EquilibriumReportOpp, OppositeSignClassifier};
use crate::same_sign::{self, EquilibriumReportSame, SameSignClassifier};
use crate::scalar::Scalar;
use crate::verdict::Verdict;

/// `(θ', W')` of the reduced system selected by `params.regime()`.
pub fn reduced_field<T: Scalar>(state: &ReducedState<T>, params: &ModelParams<T>) -> Result<(T, T)> {
    match params.regime() {
        Regime::SameSign => same_sign::field_same(state, params),
        Regime::OppositeSign => opposite_sign::field_opp(state, params),
    }
}

/// H (same sign) or G (opposite sign).
pub fn hamiltonian<T: Scalar>(state: &ReducedState<T>, params: &ModelParams<T>) -> Result<T> {
    match params.regime() {
        Regime::SameSign => same_sign::hamiltonian_same(state, params),
        Regime::OppositeSign => opposite_sign::hamiltonian_opp(state, params),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EquilibriumReport<T> {
    Same(EquilibriumReportSame<T>),
    Opposite(EquilibriumReportOpp<T>),
}

impl<T: Scalar> EquilibriumReport<T> {
    /// The level the classifier compares against (H* or the G threshold).
    pub fn threshold(&self) -> T {
        match self {
            EquilibriumReport::Same(r) => r.h_star,
            EquilibriumReport::Opposite(r) => r.g_threshold,
        }
    }

    /// Equilibrium angles on the axis `W = 0`.
    pub fn equilibrium_angles(&self) -> Vec<T> {
        match self {
            EquilibriumReport::Same(r) => vec![r.theta_star, r.theta_star2],
            EquilibriumReport::Opposite(r) => r.theta_star.into_iter().collect(),
        }
    }
}

pub fn equilibria<T: Scalar>(params: &ModelParams<T>) -> Result<EquilibriumReport<T>> {
    match params.regime() {
        Regime::SameSign => same_sign::equilibria_same(params).map(EquilibriumReport::Same),
        Regime::OppositeSign => opposite_sign::equilibria_opp(params).map(EquilibriumReport::Opposite),
    }
}

/// Classifier for either regime with its equilibria computed once.
#[derive(Debug, Clone)]
pub enum Classifier<T> {
    Same(SameSignClassifier<T>),
    Opposite(OppositeSignClassifier<T>),
}

impl<T: Scalar> Classifier<T> {
    pub fn new(params: &ModelParams<T>) -> Result<Self> {
        Ok(match params.regime() {
            Regime::SameSign => Classifier::Same(SameSignClassifier::new(params)?),
            Regime::OppositeSign => Classifier::Opposite(OppositeSignClassifier::new(params)?),
        })
    }

    pub fn classify(&self, state0: &ReducedState<T>) -> Result<Verdict<T>> {
        match self {
            Classifier::Same(c) => c.classify(state0),
            Classifier::Opposite(c) => c.classify(state0),
        }
    }

    /// `None` when there is nothing to report (γ = 1).
    pub fn equilibria(&self) -> Option<EquilibriumReport<T>> {
        match self {
            Classifier::Same(c) => Some(EquilibriumReport::Same(*c.equilibria())),
            Classifier::Opposite(c) => c.equilibria().copied().map(EquilibriumReport::Opposite),
        }
    }
}

pub fn classify<T: Scalar>(state0: &ReducedState<T>, params: &ModelParams<T>) -> Result<Verdict<T>> {
    Classifier::new(params)?.classify(state0)
}

/// Verdict for a raw two-filament configuration.
#[derive(Debug, Clone)]
pub struct ConfigurationVerdict<T> {
    /// Absent when the opposite-sign invariant is non-positive.
    pub setup: Option<CanonicalSetup<T>>,
    pub verdict: Verdict<T>,
    pub equilibria: Option<EquilibriumReport<T>>,
}

/// Canonicalizes `(Γ1, Γ2, phys0)` and classifies it. A non-positive
/// opposite-sign invariant yields `LeapfrogImpossible` instead of an error.
pub fn classify_configuration<T: Scalar>(
    gamma1: T,
    gamma2: T,
    phys0: PhysicalState<T>,
    alpha: T,
) -> Result<ConfigurationVerdict<T>> {
    let setup = match canonicalize(gamma1, gamma2, phys0, alpha) {
        Ok(s) => s,
        Err(Error::InfeasibleInvariant { .. }) => {
            return Ok(ConfigurationVerdict {
                setup: None,
                verdict: opposite_sign::leapfrog_impossible("gamma R1^2 - R2^2 <= 0: the radii cannot alternate"),
                equilibria: None,
            })
        }
        Err(e) => return Err(e),
    };
    let classifier = Classifier::new(&setup.params)?;
    let verdict = classifier.classify(&setup.reduced0)?;
    Ok(ConfigurationVerdict {
        setup: Some(setup),
        verdict,
        equilibria: classifier.equilibria(),
    })
}
