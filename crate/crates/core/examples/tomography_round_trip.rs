//! Homodyne marginals of three states and their filtered-backprojection
//! reconstruction, compared against the exact Wigner function.

use std::time::Instant;

use num_complex::Complex64;
use qopt::cats::CatState;
use qopt::gaussian::GaussianState;
use qopt::grid::UniformGrid;
use qopt::tomography::{inverse_radon, sinogram_from_fn, sinogram_gaussian, Sinogram, WignerGrid};

fn report(name: &str, exact: &WignerGrid, rec: &WignerGrid) {
    let err = rec.max_abs_diff(exact).unwrap();
    println!(
        "{name:<12} peak {:.4}  L∞ error {:.3e}  ({:.2}% of peak)",
        exact.peak(),
        err,
        100.0 * err / exact.peak()
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let thetas = Sinogram::uniform_angles(180);
    let xs = UniformGrid::symmetric(10.0, 257)?;
    let view = UniformGrid::symmetric(4.0, 81)?;
    let reg_s = 1e-2;
    let start = Instant::now();

    for (name, state) in [
        ("vacuum", GaussianState::vacuum(1)),
        ("squeezed r=1", GaussianState::squeezed_vacuum(1.0)),
    ] {
        let sino = sinogram_gaussian(&state, &thetas, xs)?;
        let rec = inverse_radon(&sino, view, view, reg_s)?;
        let exact = WignerGrid::from_fn(view, view, |q, p| state.wigner_qp(q, p).unwrap());
        report(name, &exact, &rec);
    }

    let cat = CatState::even(vec![Complex64::new(1.2, 0.0)])?;
    let w = |q: f64, p: f64| cat.wigner(&[q], &[p]).unwrap();
    let sino = sinogram_from_fn(w, &thetas, xs, 10.0, 801)?;
    println!("cat sinogram slice mass defect {:.1e}", sino.max_slice_defect());
    let rec = inverse_radon(&sino, view, view, reg_s)?;
    report("even cat", &WignerGrid::from_fn(view, view, w), &rec);

    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
