//! Multivariable Hermite polynomials: single values, whole tables, the
//! reduction to classical polynomials and the closed-form Gaussian overlap.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qopt::hermite::{
    gaussian_hermite_overlap, hermite1d, mv_hermite_eval, mv_hermite_table, HermiteParams,
    MultiIndex, OverlapSpec,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // With R = 2 in one dimension the recursion reproduces H_n(y).
    let one_d = HermiteParams::new(DMatrix::from_element(1, 1, c(2.0, 0.0)), DVector::from_element(1, c(0.7, 0.0)))?;
    println!("one dimension, R = 2, y = 0.7");
    for n in 0..6u32 {
        let mv = mv_hermite_eval(&one_d, &MultiIndex::new(vec![n]))?;
        println!("  n = {n}: recursion {:>10.5}  classical {:>10.5}", mv.re, hermite1d(n, c(0.7, 0.0)).re);
    }

    // A complex symmetric 2x2 matrix, as it arises from a squeezed pair.
    let r = DMatrix::from_row_slice(2, 2, &[c(0.3, 0.1), c(-0.8, 0.0), c(-0.8, 0.0), c(0.2, -0.4)]);
    let y = DVector::from_vec(vec![c(0.5, 0.2), c(-0.1, 0.9)]);
    let params = HermiteParams::new(r.clone(), y)?;
    println!("\ntwo dimensions, all indices of total degree at most 3");
    for (n, v) in mv_hermite_table(&params, 3)? {
        println!("  H_{:?} = {:.5}", n.entries(), v);
    }

    // ∫ H_n(x) H_m(x) exp(-x²) dx with R = r = 2 is the orthogonality
    // integral 2ⁿ n! √π δ_nm.
    let spec = OverlapSpec {
        big_r: DMatrix::from_element(1, 1, c(2.0, 0.0)),
        small_r: DMatrix::from_element(1, 1, c(2.0, 0.0)),
        lambda: DMatrix::from_element(1, 1, c(1.0, 0.0)),
        d: DVector::from_element(1, c(0.0, 0.0)),
        c: DVector::from_element(1, c(0.0, 0.0)),
        m: DMatrix::from_element(1, 1, c(1.0, 0.0)),
    };
    println!("\nclassical orthogonality from the overlap formula");
    for n in 0..4u32 {
        let row: Vec<String> = (0..4u32)
            .map(|m| {
                let v = gaussian_hermite_overlap(&spec, &MultiIndex::new(vec![n]), &MultiIndex::new(vec![m])).unwrap();
                format!("{:>9.4}", v.re / std::f64::consts::PI.sqrt())
            })
            .collect();
        println!("  n = {n}: {}   (in units of √π)", row.join(""));
    }
    Ok(())
}
