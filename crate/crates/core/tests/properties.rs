use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;

use leapfrog_core::filament::{pde_rhs, sample_circular_pair, Stencil};
use leapfrog_core::{
    canonicalize, field_augmented, hamiltonian, physical_to_reduced, reduced_field, AugmentedState, ModelParams,
    PhysicalState, ReducedState, Regime,
};

fn same_params() -> impl Strategy<Value = ModelParams<f64>> {
    (1.0..6.0f64, 0.01..0.3f64, 0.3..3.0f64).prop_map(|(b, a, d)| ModelParams::same_sign(b, a, d).unwrap())
}

fn opp_params() -> impl Strategy<Value = ModelParams<f64>> {
    (1.01..20.0f64, 0.01..0.3f64, 0.3..3.0f64).prop_map(|(g, a, d)| ModelParams::opposite_sign(g, a, d).unwrap())
}

fn any_params() -> impl Strategy<Value = ModelParams<f64>> {
    prop_oneof![same_params(), opp_params()]
}

/// A state of `p` at least 0.02 away from the singular point.
fn interior(p: ModelParams<f64>) -> impl Strategy<Value = (ModelParams<f64>, ReducedState<f64>)> {
    let hi = match p.regime() {
        Regime::SameSign => FRAC_PI_2 - 0.01,
        Regime::OppositeSign => 4.0,
    };
    (0.01..hi, -4.0..4.0f64)
        .prop_map(|(th, w)| ReducedState::new(th, w))
        .prop_filter("near singular point", move |s| p.singular_distance(s) > 0.02)
        .prop_map(move |s| (p, s))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn same_sign_round_trip((p, s) in same_params().prop_flat_map(interior)) {
        let phys = AugmentedState::new(s.theta, s.w, s.w + 0.5, 0.5).to_physical(&p).unwrap();
        let back = physical_to_reduced(&phys, &p).unwrap();
        prop_assert!(close(back.theta, s.theta, 1e-12) && close(back.w, s.w, 1e-12));
    }

    #[test]
    fn opposite_sign_round_trip((p, s) in opp_params().prop_flat_map(interior)) {
        let phys = AugmentedState::new(s.theta, s.w, s.w - 1.0, -1.0).to_physical(&p).unwrap();
        let back = physical_to_reduced(&phys, &p).unwrap();
        prop_assert!(close(back.theta, s.theta, 1e-12) && close(back.w, s.w, 1e-12));
    }

    #[test]
    fn canonical_round_trip_recovers_user_state(
        g1 in prop_oneof![-5.0..-0.2f64, 0.2..5.0f64],
        g2 in prop_oneof![-5.0..-0.2f64, 0.2..5.0f64],
        r1 in 0.2..2.0f64, r2 in 0.2..2.0f64, z1 in -2.0..2.0f64, z2 in -2.0..2.0f64,
    ) {
        let phys = PhysicalState::new(r1, z1, r2, z2);
        prop_assume!(phys.validate().is_ok());
        let Ok(setup) = canonicalize(g1, g2, phys, 0.1) else { return Ok(()) };
        let p = setup.params;
        let rebuilt = AugmentedState::new(setup.reduced0.theta, setup.reduced0.w, setup.phys0.z1, setup.phys0.z2)
            .to_physical(&p)
            .unwrap();
        let user = setup.to_original(&rebuilt);
        for (a, b) in [(user.r1, r1), (user.r2, r2), (user.z1, z1), (user.z2, z2)] {
            prop_assert!(close(a, b, 1e-12), "{a} vs {b}");
        }
        let (o1, o2) = setup.original_gammas();
        prop_assert!(close(o1, g1, 1e-15) && close(o2, g2, 1e-15));
    }

    #[test]
    fn canonicalize_is_idempotent(
        g1 in prop_oneof![-5.0..-0.2f64, 0.2..5.0f64],
        g2 in prop_oneof![-5.0..-0.2f64, 0.2..5.0f64],
        r1 in 0.2..2.0f64, r2 in 0.2..2.0f64, w in -2.0..2.0f64,
    ) {
        let phys = PhysicalState::new(r1, w, r2, 0.0);
        prop_assume!(phys.validate().is_ok());
        let Ok(first) = canonicalize(g1, g2, phys, 0.1) else { return Ok(()) };
        let again = canonicalize(first.gammas.0, first.gammas.1, first.phys0, 0.1).unwrap();
        prop_assert!(!again.swapped && !again.reflected);
        prop_assert_eq!(again.params, first.params);
        prop_assert_eq!(again.reduced0, first.reduced0);
        prop_assert_eq!(again.time_scale, first.time_scale);
    }

    #[test]
    fn field_is_the_hamiltonian_gradient((p, s) in any_params().prop_flat_map(interior)) {
        let h = |th: f64, w: f64| hamiltonian(&ReducedState::new(th, w), &p).unwrap();
        let eps = 1e-5;
        let dh_dw = (h(s.theta, s.w + eps) - h(s.theta, s.w - eps)) / (2.0 * eps);
        let dh_dth = (h(s.theta + eps, s.w) - h(s.theta - eps, s.w)) / (2.0 * eps);
        let (f1, f2) = reduced_field(&s, &p).unwrap();
        let norm = f1.hypot(f2).max(1e-3);
        prop_assert!((f1 - dh_dw).hypot(f2 + dh_dth) / norm < 1e-5);
    }

    #[test]
    fn reversibility_parity((p, s) in any_params().prop_flat_map(interior)) {
        let m = ReducedState::new(s.theta, -s.w);
        let (a1, a2) = reduced_field(&s, &p).unwrap();
        let (b1, b2) = reduced_field(&m, &p).unwrap();
        prop_assert_eq!(a1, -b1);
        prop_assert_eq!(a2, b2);
        prop_assert_eq!(hamiltonian(&s, &p).unwrap(), hamiltonian(&m, &p).unwrap());
    }

    #[test]
    fn augmented_axial_speeds_reproduce_w((p, s) in any_params().prop_flat_map(interior), z in -3.0..3.0f64) {
        let d = field_augmented(&AugmentedState::new(s.theta, s.w, z + s.w, z), &p).unwrap();
        prop_assert!(close(d.w, d.z1 - d.z2, 1e-11), "{} vs {}", d.w, d.z1 - d.z2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pde_rhs_is_translation_invariant(
        r1 in 0.5..2.0f64, r2 in 0.5..2.0f64, w in 0.1..1.0f64,
        shift in prop::array::uniform3(-3.0..3.0f64),
    ) {
        let (fx, fy) = sample_circular_pair(&PhysicalState::new(r1, w, r2, 0.0), (1.3, -0.7), 32).unwrap();
        let a = pde_rhs(&fx, &fy, 0.1, Stencil::FourthOrder).unwrap();
        let b = pde_rhs(&fx.translated(shift), &fy.translated(shift), 0.1, Stencil::FourthOrder).unwrap();
        for (u, v) in a.iter().zip(&b) {
            for k in 0..3 {
                prop_assert!(close(u[k], v[k], 1e-9), "{} vs {}", u[k], v[k]);
            }
        }
    }

    #[test]
    fn pde_rhs_scales_with_strengths(
        r1 in 0.5..2.0f64, r2 in 0.5..2.0f64, w in 0.1..1.0f64, lambda in 0.1..10.0f64,
    ) {
        let (fx, fy) = sample_circular_pair(&PhysicalState::new(r1, w, r2, 0.0), (1.3, 0.7), 32).unwrap();
        let a = pde_rhs(&fx, &fy, 0.1, Stencil::FourthOrder).unwrap();
        let fx2 = fx.with_strength(lambda * fx.strength());
        let fy2 = fy.with_strength(lambda * fy.strength());
        let b = pde_rhs(&fx2, &fy2, 0.1, Stencil::FourthOrder).unwrap();
        for (u, v) in a.iter().zip(&b) {
            for k in 0..3 {
                prop_assert!(close(lambda * u[k], v[k], 1e-12));
            }
        }
    }
}
