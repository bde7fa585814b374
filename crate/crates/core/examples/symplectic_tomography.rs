//! Symplectic tomography: marginals of `X = μq + νp + δ`, and the
//! characteristic-function inversion compared with filtered backprojection.

use std::f64::consts::FRAC_1_SQRT_2;

use qopt::gaussian::GaussianState;
use qopt::grid::UniformGrid;
use qopt::tomography::{
    inverse_radon, sinogram_gaussian, symplectic_marginal, MarginalFamily, Sinogram,
    SymplecticInverter, WignerGrid,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a marginal along a scaled, shifted direction
    let vac = GaussianState::vacuum(1);
    let plane = UniformGrid::symmetric(7.0, 141)?;
    let w = WignerGrid::from_fn(plane, plane, |q, p| vac.wigner_qp(q, p).unwrap());
    let xs = UniformGrid::symmetric(6.0, 121)?;
    let m = symplectic_marginal(&w, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.5, xs)?;
    let pts = xs.points();
    let mass = xs.trapezoid(&m.values);
    let mean = xs.trapezoid(&pts.iter().zip(&m.values).map(|(x, v)| x * v).collect::<Vec<_>>());
    println!("μ = ν = 1/√2, δ = 0.5 on vacuum: mass {mass:.8}, mean {mean:.8}");

    // inversion of a squeezed state by both routes
    let sq = GaussianState::squeezed_vacuum(1.0);
    let sino = sinogram_gaussian(&sq, &Sinogram::uniform_angles(180), UniformGrid::symmetric(10.0, 257)?)?;
    let view = UniformGrid::symmetric(3.0, 31)?;
    let exact = WignerGrid::from_fn(view, view, |q, p| sq.wigner_qp(q, p).unwrap());
    let fbp = inverse_radon(&sino, view, view, 1e-2)?;
    let inverter = SymplecticInverter::new(&MarginalFamily::from_sinogram(&sino), 20.0, 201, 1e-2)?;
    let symp = inverter.grid(view, view);
    let peak = exact.peak();
    println!("squeezed r=1, peak {peak:.4}");
    println!("  backprojection vs exact  {:.3}%", 100.0 * fbp.max_abs_diff(&exact)? / peak);
    println!("  symplectic vs exact      {:.3}%", 100.0 * symp.max_abs_diff(&exact)? / peak);
    println!("  symplectic vs backproj.  {:.3}%", 100.0 * symp.max_abs_diff(&fbp)? / peak);
    Ok(())
}
