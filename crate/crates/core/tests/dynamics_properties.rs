//! Linear flows, Gaussian evolution and propagators.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use qopt::dynamics::{
    evolve_gaussian, flow_expm, integrate_symplectic_flow, invariant_residual_check,
    propagator_basis, semigroup_defect, symplectic_defect, BasisElement, PropagatorSystem,
    QuadraticHamiltonian,
};
use qopt::gaussian::GaussianState;
use qopt::hermite::ln_factorial;

fn symmetric(entries: &[f64], d: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(d, d, |i, j| entries[(i * d + j) % entries.len()]);
    (&a + a.transpose()) * 0.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constant_flow_is_symplectic_and_matches_expm(
        n in 1usize..=2,
        b in prop::collection::vec(-1.0..1.0f64, 16),
        c in prop::collection::vec(-1.0..1.0f64, 4),
        t in 0.1..5.0f64,
    ) {
        let d = 2 * n;
        let tol = 1e-9;
        let h = QuadraticHamiltonian::constant(
            symmetric(&b, d),
            DVector::from_iterator(d, c.iter().cloned().take(d)),
        ).unwrap();
        let flow = integrate_symplectic_flow(&h, t, tol).unwrap();
        let ode = flow.at(t).unwrap();
        let exact = flow_expm(&h, t).unwrap();
        let scale = exact.lambda.abs().max().max(1.0);
        prop_assert!(flow.max_symplectic_defect() <= 100.0 * tol * scale * scale);
        prop_assert!((&ode.lambda - &exact.lambda).abs().max() <= 1e-6 * scale);
        prop_assert!((&ode.delta - &exact.delta).abs().max() <= 1e-6 * scale);
        prop_assert!(symplectic_defect(&exact.lambda) <= 1e-10 * scale * scale);
    }

    #[test]
    fn evolution_preserves_purity(
        b in prop::collection::vec(-1.0..1.0f64, 4),
        k in 1.0..2.0f64,
        t in 0.0..5.0f64,
        pq in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let mut m = symmetric(&b, 2) * 0.0;
        m[(0, 0)] = 0.5 * k;
        m[(1, 1)] = 0.5 * k;
        let state = GaussianState::new(DVector::from_vec(vec![pq.0, pq.1]), m).unwrap();
        let h = QuadraticHamiltonian::constant(symmetric(&b, 2), DVector::zeros(2)).unwrap();
        let flow = integrate_symplectic_flow(&h, 5.0, 1e-10).unwrap();
        let evolved = evolve_gaussian(&state, &flow, t).unwrap();
        prop_assert!((evolved.purity() - state.purity()).abs() <= 1e-9);
    }
}

#[test]
fn time_dependent_flow_is_symplectic() {
    let b = Arc::new(|t: f64| {
        DMatrix::from_row_slice(2, 2, &[1.0, 0.2 * t.sin(), 0.2 * t.sin(), 1.0 + 0.5 * (1.3 * t).cos()])
    });
    let c = Arc::new(|t: f64| DVector::from_vec(vec![0.1 * t.cos(), -0.3]));
    let h = QuadraticHamiltonian::time_dependent(1, b, c, vec![]).unwrap();
    let tol = 1e-9;
    let flow = integrate_symplectic_flow(&h, 20.0, tol).unwrap();
    assert!(flow.max_symplectic_defect() <= 100.0 * tol, "{}", flow.max_symplectic_defect());
}

#[test]
fn free_particle_initial_position_is_conserved() {
    // q₀(t) = q - p t / m is an integral of motion; its second moment stays put.
    let m = 1.7;
    let state = GaussianState::new(
        DVector::from_vec(vec![0.4, -0.3]),
        DMatrix::from_row_slice(2, 2, &[0.8, 0.2, 0.2, 0.6]),
    )
    .unwrap();
    let h = QuadraticHamiltonian::free_particle(m).unwrap();
    let flow = integrate_symplectic_flow(&h, 10.0, 1e-10).unwrap();
    let k = |s: &GaussianState, t: f64| {
        let d = s.disp();
        let (vp, vq, vpq) = (d[(0, 0)], d[(1, 1)], d[(0, 1)]);
        let mean = s.mean_q(0) - s.mean_p(0) * t / m;
        vq - 2.0 * vpq * t / m + vp * t * t / (m * m) + mean * mean
    };
    let k0 = k(&state, 0.0);
    for i in 0..=40 {
        let t = 0.25 * i as f64;
        let s = evolve_gaussian(&state, &flow, t).unwrap();
        assert!((k(&s, t) - k0).abs() <= 1e-8, "t={t}");
    }
}

#[test]
fn propagators_satisfy_invariant_equations() {
    let qs: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
    for (system, t) in [
        (PropagatorSystem::Free { mass: 1.0 }, 1.0),
        (PropagatorSystem::Free { mass: 2.5 }, 0.7),
        (PropagatorSystem::Oscillator { mass: 1.0, omega: 1.0 }, 0.8),
        (PropagatorSystem::Oscillator { mass: 1.3, omega: 2.0 }, 2.1),
    ] {
        let r = invariant_residual_check(&system, &qs, &qs, t, 1e-3).unwrap();
        assert!(r.momentum_residual <= 1e-4 && r.position_residual <= 1e-4, "{system:?}: {r:?}");
        assert_eq!(r.points, 81);
    }
}

#[test]
fn propagators_compose() {
    for system in [
        PropagatorSystem::Free { mass: 1.0 },
        PropagatorSystem::Oscillator { mass: 1.0, omega: 1.0 },
    ] {
        let d = semigroup_defect(&system, 0.3, -0.4, 0.6, 0.5).unwrap();
        assert!(d <= 1e-6, "{system:?}: {d}");
    }
}

#[test]
fn coherent_matrix_element_expands_in_fock_elements() {
    // ⟨α|U|β⟩ = e^{-|α|²/2 - |β|²/2} Σ_n (α*β)ⁿ/n! ⟨n|U|n⟩
    let (alpha, beta) = (Complex64::new(0.6, -0.3), Complex64::new(-0.2, 0.9));
    let (omega, t) = (1.3, 0.77);
    let direct = propagator_basis(
        &BasisElement::Coherent { alpha: [alpha.re, alpha.im], beta: [beta.re, beta.im] },
        omega,
        t,
    )
    .unwrap();
    let z = alpha.conj() * beta;
    let mut series = Complex64::new(0.0, 0.0);
    for n in 0..40u32 {
        let fock = propagator_basis(&BasisElement::Fock { n, m: n }, omega, t).unwrap();
        series += z.powu(n) / ln_factorial(n).exp() * fock;
    }
    series *= (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr()).exp();
    assert!((direct - series).norm() < 1e-14);
}
