//! Position-space propagators of the free particle and the oscillator,
//! checked against their integrals of motion and the composition law, and
//! oscillator matrix elements between number and coherent states.

use qopt::dynamics::{
    invariant_residual_check, propagator_basis, semigroup_defect, BasisElement, PropagatorSystem,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let qs: Vec<f64> = (0..11).map(|i| -1.0 + 0.2 * i as f64).collect();
    for system in [PropagatorSystem::Free { mass: 1.0 }, PropagatorSystem::Oscillator { mass: 1.0, omega: 1.5 }] {
        println!("{system:?}");
        for t in [0.4, 1.0] {
            let g = system.propagator(0.3, -0.2, t)?;
            let r = invariant_residual_check(&system, &qs, &qs, t, 1e-3)?;
            println!(
                "  t = {t}: G(0.3, -0.2) = {g:.5}  invariant residuals {:.1e} / {:.1e}",
                r.momentum_residual, r.position_residual
            );
        }
        println!("  G(t₁)G(t₂) vs G(t₁ + t₂): {:.1e}", semigroup_defect(&system, 0.3, -0.4, 0.6, 0.5)?);
    }

    let (omega, t) = (1.0, 0.75);
    println!("\noscillator matrix elements at ωt = {}", omega * t);
    for n in 0..3u32 {
        let v = propagator_basis(&BasisElement::Fock { n, m: n }, omega, t)?;
        println!("  <{n}|U|{n}> = {v:.5}");
    }
    let coherent = BasisElement::Coherent { alpha: [0.5, 0.0], beta: [0.5, 0.0] };
    println!("  <α|U|α> at α = 0.5: {:.5}", propagator_basis(&coherent, omega, t)?);
    Ok(())
}
