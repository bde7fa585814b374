//! Photon-number distributions of coherent, squeezed, thermal and
//! two-mode squeezed states, with their moments.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qopt::dynamics::flow_expm_constant;
use qopt::gaussian::{GaussianState, PndOptions};
use qopt::hermite::MultiIndex;

fn show(name: &str, state: &GaussianState) -> Result<(), Box<dyn std::error::Error>> {
    let m = state.photon_moments(0)?;
    let first: Vec<String> = (0..8u32)
        .map(|n| format!("{:.4}", state.photon_pnd(&MultiIndex::new(vec![n])).unwrap()))
        .collect();
    println!("{name:<18} <n> = {:.4}  Var n = {:.4}  P(0..7) = {}", m.mean, m.variance, first.join(" "));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show("coherent α=1.5", &GaussianState::coherent(&[Complex64::new(1.5, 0.0)]))?;
    show("squeezed r=1", &GaussianState::squeezed_vacuum(1.0))?;
    show("thermal T=ω", &GaussianState::thermal_oscillator(1.0, 1.0)?)?;

    // Two-mode squeezing H = κ(q₁q₂ - p₁p₂) in the ordering (p₁, p₂, q₁, q₂).
    let kappa = 0.6;
    let mut b = DMatrix::zeros(4, 4);
    b[(0, 1)] = -kappa;
    b[(1, 0)] = -kappa;
    b[(2, 3)] = kappa;
    b[(3, 2)] = kappa;
    let lambda = flow_expm_constant(&b, &DVector::zeros(4), 1.0).lambda;
    let pair = GaussianState::new(DVector::zeros(4), &lambda * lambda.transpose() * 0.5)?;
    let table = pair.photon_distribution(&PndOptions { mass_tol: 1e-10, max_total: 40 })?;
    println!("\ntwo-mode squeezed pair, mass {:.12} from {} entries", table.mass, table.entries.len());
    for (n, p) in table.entries.iter().filter(|(_, p)| *p > 1e-3) {
        println!("  P{:?} = {:.5}", n.entries(), p);
    }
    let off_diagonal: f64 = table
        .entries
        .iter()
        .filter(|(n, _)| n.entries()[0] != n.entries()[1])
        .map(|(_, p)| p.abs())
        .sum();
    println!("  probability with n₁ ≠ n₂: {off_diagonal:.2e}");
    println!("  each mode alone is thermal: purity {:.4}", pair.reduced(0)?.purity());
    Ok(())
}
