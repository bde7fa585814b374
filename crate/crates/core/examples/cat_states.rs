//! Even and odd coherent-state superpositions: photon statistics, Mandel
//! parameters, two-mode correlations and Wigner negativity.

use num_complex::Complex64;
use qopt::cats::CatState;
use qopt::gaussian::PndOptions;
use qopt::hermite::MultiIndex;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>6} {:>9} {:>9} {:>9}", "|α|²", "parity", "<n>", "Mandel Q", "W(0,0)");
    for a2 in [0.25f64, 1.0, 4.0] {
        let a = Complex64::new(a2.sqrt(), 0.0);
        for (name, cat) in [("even", CatState::even(vec![a])?), ("odd", CatState::odd(vec![a])?)] {
            let m = cat.moments();
            println!(
                "{a2:>6} {name:>6} {:>9.5} {:>9.5} {:>9.5}",
                m.mean_n[0],
                m.mandel_q[0].unwrap(),
                cat.wigner(&[0.0], &[0.0])?
            );
        }
    }

    let cat = CatState::even(vec![Complex64::new(1.5, 0.0)])?;
    let p: Vec<String> = (0..10u32).map(|n| format!("{:.4}", cat.pnd(&MultiIndex::new(vec![n])).unwrap())).collect();
    println!("\neven cat α = 1.5, P(0..9) = {}", p.join(" "));

    // Two modes share a single parity, which correlates their photon numbers.
    let one = Complex64::new(1.0, 0.0);
    let pair = CatState::even(vec![one, one])?;
    let table = pair.pnd_table(&PndOptions { mass_tol: 1e-12, max_total: 60 });
    let m = pair.moments();
    println!("\ntwo-mode even cat, mass {:.12}", table.mass);
    println!("  Cov(n₁, n₂) = {:.5}", m.number_covariance[(0, 1)]);
    println!("  P(1, 0) = {:.5}  but P(1)P(0) from the marginals = {:.5}", pair.pnd(&MultiIndex::new(vec![1, 0]))?, {
        let marginal = |mode: usize, k: u32| -> f64 {
            table.entries.iter().filter(|(n, _)| n.entries()[mode] == k).map(|(_, p)| p).sum()
        };
        marginal(0, 1) * marginal(1, 0)
    });

    println!("\nodd cat α = 1.5 along p = 0");
    let odd = CatState::odd(vec![Complex64::new(1.5, 0.0)])?;
    for i in 0..=8 {
        let q = -4.0 + i as f64;
        println!(
            "  q = {q:>4.1}: W = {:>9.5}  Q = {:.5}",
            odd.wigner(&[q], &[0.0])?,
            odd.q_function(&[Complex64::new(q, 0.0) * std::f64::consts::FRAC_1_SQRT_2])?
        );
    }
    Ok(())
}
