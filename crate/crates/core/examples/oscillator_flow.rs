//! Linear phase-space flows: a driven, modulated oscillator integrated as
//! a symplectic map, and a coherent state carried along by it.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qopt::dynamics::{evolve_gaussian, integrate_symplectic_flow, QuadraticHamiltonian};
use qopt::gaussian::GaussianState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // H = p²/2 + ω²(t) q²/2 - f(t) q with ω²(t) = 1 + 0.4 cos 2t and a
    // short force pulse; ordering (p, q).
    let b = Arc::new(|t: f64| DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0 + 0.4 * (2.0 * t).cos()])));
    let c = Arc::new(|t: f64| DVector::from_vec(vec![0.0, -(-(t - 3.0) * (t - 3.0)).exp()]));
    let h = QuadraticHamiltonian::time_dependent(1, b, c, vec![])?;
    let t_end = 12.0;
    let flow = integrate_symplectic_flow(&h, t_end, 1e-10)?;
    println!("{} steps, largest symplectic defect {:.2e}", flow.samples().len(), flow.max_symplectic_defect());

    let start = GaussianState::coherent(&[Complex64::new(1.0, 0.0)]);
    println!("{:>5} {:>9} {:>9} {:>9} {:>9} {:>9}", "t", "<q>", "<p>", "σ_qq", "σ_pp", "purity");
    for k in 0..=12 {
        let t = t_end * k as f64 / 12.0;
        let s = evolve_gaussian(&start, &flow, t)?;
        let m = s.disp();
        println!(
            "{t:>5.1} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.6}",
            s.mean_q(0),
            s.mean_p(0),
            m[(1, 1)],
            m[(0, 0)],
            s.purity()
        );
    }
    let lambda = flow.at(t_end)?.lambda;
    println!("Λ(t_end) =\n{lambda:.5}det Λ = {:.12}", lambda.determinant());
    Ok(())
}
