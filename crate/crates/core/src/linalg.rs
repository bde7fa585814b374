//! Small matrix helpers shared by the state, dynamics and Hermite code.
//!
//! Phase-space vectors are ordered `Q = (p_1..p_N, q_1..q_N)` and the
//! ladder vectors `A = (a_1..a_N, a_1^†..a_N^†)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real symplectic metric `[[0, I], [-I, 0]]` (the 2N analog of `iσ_y`).
pub fn symplectic_metric(n_modes: usize) -> RMat {
    let mut s = RMat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        s[(k, n_modes + k)] = 1.0;
        s[(n_modes + k, k)] = -1.0;
    }
    s
}

/// `σ_{Nx} = [[0, I], [I, 0]]`.
pub fn sigma_x(n_modes: usize) -> CMat {
    let mut s = CMat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        s[(k, n_modes + k)] = Complex64::new(1.0, 0.0);
        s[(n_modes + k, k)] = Complex64::new(1.0, 0.0);
    }
    s
}

/// Imaginary antisymmetric `σ = [[0, iI], [-iI, 0]]` (the 2N analog of `-σ_y`).
pub fn ladder_metric(n_modes: usize) -> CMat {
    let mut s = CMat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        s[(k, n_modes + k)] = I;
        s[(n_modes + k, k)] = -I;
    }
    s
}

/// Unitary `U = (1/√2) [[-iI, iI], [I, I]]` mapping `(β, β*)` onto `(p, q)`.
pub fn quadrature_unitary(n_modes: usize) -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        u[(k, k)] = c(0.0, -h);
        u[(k, n_modes + k)] = c(0.0, h);
        u[(n_modes + k, k)] = c(h, 0.0);
        u[(n_modes + k, n_modes + k)] = c(h, 0.0);
    }
    u
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn to_complex_vec(v: &RVec) -> CVec {
    v.map(|x| Complex64::new(x, 0.0))
}

pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}

/// Largest entry of `|m - mᵀ|`.
pub fn asymmetry(m: &RMat) -> f64 {
    max_abs(&(m - m.transpose()))
}

pub fn asymmetry_c(m: &CMat) -> f64 {
    max_abs_c(&(m - m.transpose()))
}

/// 2-norm condition number from singular values; `inf` for singular input.
pub fn condition_number_c(m: &CMat) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `(det m)^{-1/2}` for a complex symmetric matrix with positive definite
/// real part. The branch is fixed by continuity from the real part: every
/// eigenvalue of such a matrix lies in the open right half-plane, so the
/// product of principal square roots is the analytic continuation.
pub fn inv_sqrt_det_right_half(m: &CMat) -> Complex64 {
    let eig = m
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is always triangular");
    eig.iter()
        .fold(Complex64::new(1.0, 0.0), |acc, l| acc / l.sqrt())
}

/// Cholesky-based positive definiteness test on a symmetric real matrix.
pub fn is_positive_definite(m: &RMat) -> bool {
    m.clone().cholesky().is_some()
}

/// Symmetric eigenvalues, ascending.
pub fn sym_eigenvalues(m: &RMat) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary_and_maps_ladder_to_quadratures() {
        let u = quadrature_unitary(2);
        let id = &u.adjoint() * &u;
        assert!(max_abs_c(&(id - CMat::identity(4, 4))) < 1e-14);
        // U† Σ U* reproduces the ladder metric.
        let sigma = &u.adjoint() * to_complex(&symplectic_metric(2)) * u.conjugate();
        assert!(max_abs_c(&(sigma - ladder_metric(2))) < 1e-14);
    }

    #[test]
    fn inv_sqrt_det_matches_scalar_branch() {
        let m = CMat::from_element(1, 1, c(2.0, 3.0));
        let v = inv_sqrt_det_right_half(&m);
        let expected = c(2.0, 3.0).sqrt().inv();
        assert!((v - expected).norm() < 1e-14);
    }
}
