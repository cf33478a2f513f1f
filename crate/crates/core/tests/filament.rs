use leapfrog_core::filament::{pde_check, pde_rhs, sample_circular_pair, Stencil};
use leapfrog_core::{AugmentedState, ModelParams, PhysicalState, ReducedState};

fn pair(p: &ModelParams<f64>, th: f64, w: f64) -> PhysicalState<f64> {
    AugmentedState::new(th, w, w, 0.0).to_physical(p).unwrap()
}

#[test]
fn lone_circle_moves_along_its_axis() {
    for r in [0.3f64, 1.0, 2.5] {
        let (fx, fy) = sample_circular_pair(&PhysicalState::new(r, 0.0, 1.0, 4.0), (1.0, 0.0), 256).unwrap();
        let v = pde_rhs(&fx, &fy, 0.1, Stencil::FourthOrder).unwrap();
        for u in &v {
            assert!(u[0].abs() < 1e-6 && u[1].abs() < 1e-6 && (u[2] - 1.0 / r).abs() < 1e-6);
        }
    }
}

#[test]
fn coaxial_pair_matches_circle_ode() {
    let p = ModelParams::same_sign(2.0, 0.1, 1.0).unwrap();
    let c = pde_check(&pair(&p, 0.4, 0.3), &p, 256, Stencil::FourthOrder).unwrap();
    assert!(c.max_error() < 1e-6, "{c:?}");
    assert!(c.max_azimuthal < 1e-10, "{c:?}");
    let q = ModelParams::opposite_sign(3.0, 0.1, 1.0).unwrap();
    let c = pde_check(&pair(&q, 0.8, -0.2), &q, 256, Stencil::FourthOrder).unwrap();
    assert!(c.max_error() < 1e-6 && c.max_azimuthal < 1e-10, "{c:?}");
}

#[test]
fn fourth_order_convergence() {
    let p = ModelParams::same_sign(1.0, 0.1, 1.0).unwrap();
    let phys = pair(&p, 0.6, 0.2);
    let errs: Vec<f64> = [16, 32, 64, 128]
        .iter()
        .map(|&n| pde_check(&phys, &p, n, Stencil::FourthOrder).unwrap().max_error())
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 3.5, "{errs:?}");
    }
}

#[test]
fn spectral_is_exact_on_circles() {
    let p = ModelParams::opposite_sign(4.0, 0.1, 1.0).unwrap();
    let c = pde_check(&pair(&p, 0.7, 0.1), &p, 32, Stencil::Spectral).unwrap();
    assert!(c.max_error() < 1e-10, "{c:?}");
}

#[test]
fn pde_check_is_deterministic() {
    let p = ModelParams::same_sign(1.0, 0.1, 1.0).unwrap();
    let s = ReducedState::new(0.5, 0.1);
    let a = pde_check(&pair(&p, s.theta, s.w), &p, 64, Stencil::FourthOrder).unwrap();
    let b = pde_check(&pair(&p, s.theta, s.w), &p, 64, Stencil::FourthOrder).unwrap();
    assert_eq!(a, b);
}
