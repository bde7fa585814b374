//! Wigner and Husimi functions of Gaussian states, including a state built
//! from its position wavefunction, with normalization checks on a grid.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qopt::gaussian::{GaussianState, PureGaussianSpec};
use qopt::grid::UniformGrid;
use qopt::tomography::WignerGrid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // ψ(x) ∝ exp(-m x² + c x) with complex m: a displaced, correlated packet.
    let spec = PureGaussianSpec {
        m: DMatrix::from_element(1, 1, Complex64::new(0.8, -0.3)),
        c: DVector::from_element(1, Complex64::new(0.6, 0.4)),
    };
    let packet = GaussianState::from_pure_gaussian(&spec)?;
    let report = packet.validate();
    println!(
        "packet: <q> = {:.4}, <p> = {:.4}, purity {:.6}, smallest uncertainty eigenvalue {:.2e}",
        packet.mean_q(0),
        packet.mean_p(0),
        report.purity,
        report.min_uncertainty_eigenvalue
    );

    let axis = UniformGrid::symmetric(10.0, 201)?;
    for (name, state) in [
        ("vacuum", GaussianState::vacuum(1)),
        ("squeezed r=0.8", GaussianState::squeezed_vacuum(0.8)),
        ("thermal T=2ω", GaussianState::thermal_oscillator(2.0, 1.0)?),
        ("packet", packet),
    ] {
        let w = WignerGrid::from_fn(axis, axis, |q, p| state.wigner_qp(q, p).unwrap());
        let q = WignerGrid::from_fn(axis, axis, |q, p| {
            state.q_function(&[Complex64::new(q, p) * std::f64::consts::FRAC_1_SQRT_2]).unwrap()
        });
        println!(
            "{name:<15} W peak {:.4}  ∫W/2π = {:.10}  Q peak {:.4}  ∫Q/2π = {:.10}",
            w.peak(),
            w.normalization(),
            q.peak(),
            q.normalization()
        );
    }
    Ok(())
}
