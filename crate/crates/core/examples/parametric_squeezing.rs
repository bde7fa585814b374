//! A parametric oscillator driven by a frequency jump: the complex
//! solution ε(t), the squeezing it produces and the resulting photon
//! statistics and wavefunctions.

use num_complex::Complex64;
use qopt::cats::Parity;
use qopt::parametric::{solve_epsilon, zero_correlation_squeeze, FrequencyProfile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // ω² = 1, then 4 for t ∈ [2, 3], then 1 again: a sudden double jump.
    let profile = FrequencyProfile::expression("if(t >= 2 && t < 3, 4, 1)")?;
    let traj = solve_epsilon(&profile, 8.0, 1e-11)?;
    println!("Wronskian defect over the run: {:.1e}", traj.wronskian_defect());
    println!("{:>4} {:>9} {:>9} {:>9} {:>9} {:>7} {:>8}", "t", "σ_x", "σ_p", "σ_xp", "r", "|μ|", "P(0)");
    for k in 0..=8 {
        let pt = traj.at(k as f64)?;
        let v = pt.variances();
        println!(
            "{:>4} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>7.4} {:>8.5}",
            k,
            v.sigma_x,
            v.sigma_p,
            v.sigma_xp,
            v.r,
            pt.squeeze_parameter().norm(),
            pt.vacuum_probability()
        );
    }

    let end = traj.at(8.0)?;
    let even: Vec<String> = (0..6u32).map(|m| format!("{:.5}", end.squeezed_vacuum_pnd(2 * m))).collect();
    println!("\nafter the pulse P(0, 2, .., 10) = {}", even.join(" "));

    // A constant frequency e^r reached after a quarter period gives a pure
    // position squeeze with no correlation.
    let (constant, t) = zero_correlation_squeeze(1.0);
    let pt = solve_epsilon(&constant, t, 1e-12)?.at(t)?;
    let v = pt.variances();
    println!("zero-correlation squeeze r = 1: σ_x = {:.6} (e^-2/2 = {:.6}), σ_xp = {:.1e}", v.sigma_x, (-2.0f64).exp() / 2.0, v.sigma_xp);

    println!("\nwavefunctions at t = 8, |ψ(x)|² on a few points");
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "x", "ground", "n = 2", "packet", "odd cat");
    let alpha = Complex64::new(1.0, 0.5);
    for i in 0..=6 {
        let x = -3.0 + i as f64;
        println!(
            "{x:>6.1} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            end.ground(x).norm_sqr(),
            end.number_state(2, x).norm_sqr(),
            end.packet(alpha, x).norm_sqr(),
            end.cat(alpha, Parity::Odd, x)?.norm_sqr()
        );
    }
    Ok(())
}
