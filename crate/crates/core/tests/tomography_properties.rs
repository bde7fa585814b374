//! Homodyne marginals and the two reconstruction routes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use qopt::cats::CatState;
use qopt::gaussian::GaussianState;
use qopt::grid::UniformGrid;
use qopt::tomography::{
    forward_marginal_gaussian, forward_marginal_numeric, inverse_radon, sinogram_from_fn,
    sinogram_gaussian, symplectic_marginal, MarginalFamily, Sinogram, SymplecticInverter,
    TomographyError, WignerGrid,
};

fn squeezed_grid(r: f64, n: usize) -> (GaussianState, WignerGrid) {
    let st = GaussianState::squeezed_vacuum(r);
    let axis = UniformGrid::symmetric(8.0, n).unwrap();
    let w = WignerGrid::from_fn(axis, axis, |q, p| st.wigner_qp(q, p).unwrap());
    (st, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cat_slices_are_normalized(re in -1.5..1.5f64, im in -1.5..1.5f64, odd in any::<bool>()) {
        let a = Complex64::new(re, im);
        prop_assume!(a.norm_sqr() > 1e-2);
        let cat = if odd { CatState::odd(vec![a]) } else { CatState::even(vec![a]) }.unwrap();
        let xs = UniformGrid::symmetric(10.0, 257).unwrap();
        let sino = sinogram_from_fn(|q, p| cat.wigner(&[q], &[p]).unwrap(), &Sinogram::uniform_angles(12), xs, 10.0, 801).unwrap();
        prop_assert!(sino.max_slice_defect() <= 1e-6, "{}", sino.max_slice_defect());
        prop_assert!(sino.values.iter().flatten().all(|v| v.is_finite()));
    }

    #[test]
    fn marginals_steer_with_scale_and_shift(
        k in 0.5..2.0f64,
        theta in 0.0..std::f64::consts::PI,
        delta in -1.0..1.0f64,
    ) {
        // scaling by 1/k magnifies interpolation error, hence the finer grid
        let (st, w) = squeezed_grid(0.5, 641);
        let xs = UniformGrid::symmetric(6.0, 49).unwrap();
        let (mu, nu) = (k * theta.cos(), -k * theta.sin());
        let m = symplectic_marginal(&w, mu, nu, delta, xs).unwrap();
        let unit = forward_marginal_gaussian(&st, theta).unwrap();
        for (x, v) in xs.points().iter().zip(&m.values) {
            let expected = unit.density((x - delta) / k) / k;
            prop_assert!((v - expected).abs() <= 1e-5, "X={} {} vs {}", x, v, expected);
        }
    }
}

#[test]
fn numeric_marginals_match_closed_form() {
    let (st, w) = squeezed_grid(0.5, 321);
    let thetas = Sinogram::uniform_angles(8);
    let xs = UniformGrid::symmetric(6.0, 61).unwrap();
    let numeric = forward_marginal_numeric(&w, &thetas, xs).unwrap();
    let exact = sinogram_gaussian(&st, &thetas, xs).unwrap();
    let diff = numeric
        .values
        .iter()
        .flatten()
        .zip(exact.values.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(diff <= 1e-5, "{diff}");
}

#[test]
fn truncated_support_is_rejected() {
    let st = GaussianState::squeezed_vacuum(1.5);
    let axis = UniformGrid::symmetric(2.0, 41).unwrap();
    let w = WignerGrid::from_fn(axis, axis, |q, p| st.wigner_qp(q, p).unwrap());
    let xs = UniformGrid::symmetric(4.0, 41).unwrap();
    assert!(matches!(
        forward_marginal_numeric(&w, &[0.0], xs),
        Err(TomographyError::InsufficientSupport { .. })
    ));
    assert!(matches!(
        symplectic_marginal(&w, 1.0, 0.0, 0.0, xs),
        Err(TomographyError::InsufficientSupport { .. })
    ));
}

#[test]
fn odd_cat_marginal_vanishes_at_origin() {
    let cat = CatState::odd(vec![Complex64::new(1.3, 0.0)]).unwrap();
    let xs = UniformGrid::symmetric(8.0, 161).unwrap();
    let sino = sinogram_from_fn(|q, p| cat.wigner(&[q], &[p]).unwrap(), &[0.0], xs, 10.0, 801).unwrap();
    let centre = sino.values[0][80];
    assert_eq!(xs.at(80), 0.0);
    assert!(centre.abs() <= 1e-10, "{centre}");
    assert!(sino.values[0].iter().cloned().fold(0.0, f64::max) > 0.1);
}

#[test]
fn inversion_preconditions() {
    let st = GaussianState::vacuum(1);
    let xs = UniformGrid::symmetric(6.0, 65).unwrap();
    let view = UniformGrid::symmetric(2.0, 5).unwrap();
    let coarse = sinogram_gaussian(&st, &Sinogram::uniform_angles(16), xs).unwrap();
    assert!(matches!(
        inverse_radon(&coarse, view, view, 1e-2),
        Err(TomographyError::TooFewAngles { found: 16, needed: 32 })
    ));
    let mut thetas = Sinogram::uniform_angles(40);
    thetas[3] += 0.01;
    let uneven = sinogram_gaussian(&st, &thetas, xs).unwrap();
    assert!(matches!(inverse_radon(&uneven, view, view, 1e-2), Err(TomographyError::NonUniformAngles)));
    let fine = sinogram_gaussian(&st, &Sinogram::uniform_angles(40), xs).unwrap();
    assert!(matches!(inverse_radon(&fine, view, view, 0.0), Err(TomographyError::BadRegularization(_))));
    let family = MarginalFamily::from_sinogram(&fine);
    assert!(SymplecticInverter::new(&family, 20.0, 201, -1.0).is_err());
}

/// The apodization `exp(-s y²/8)` blurs `W` by an isotropic Gaussian of
/// variance `s/4`; for a Gaussian state that is the state with `M + s/4`.
fn apodized(state: &GaussianState, reg_s: f64) -> GaussianState {
    let disp = state.disp() + DMatrix::identity(2, 2) * (reg_s / 4.0);
    GaussianState::new(state.mean().clone(), disp).unwrap()
}

#[test]
fn filtered_backprojection_converges_to_the_apodized_state() {
    let reg_s = 1e-2;
    let xs = UniformGrid::symmetric(10.0, 257).unwrap();
    let view = UniformGrid::symmetric(4.0, 41).unwrap();
    for st in [
        GaussianState::vacuum(1),
        GaussianState::squeezed_vacuum(1.0),
        GaussianState::coherent(&[Complex64::new(1.5, 0.5)]),
    ] {
        let truth = WignerGrid::from_fn(view, view, |q, p| st.wigner_qp(q, p).unwrap());
        let blurred = apodized(&st, reg_s);
        let smooth = WignerGrid::from_fn(view, view, |q, p| blurred.wigner_qp(q, p).unwrap());
        let sino = sinogram_gaussian(&st, &Sinogram::uniform_angles(180), xs).unwrap();
        let rec = inverse_radon(&sino, view, view, reg_s).unwrap();
        let residual = rec.max_abs_diff(&smooth).unwrap() / truth.peak();
        assert!(residual <= 2e-4, "{residual}");
        assert!(rec.max_abs_diff(&truth).unwrap() <= 0.02 * truth.peak());
    }
}

#[test]
fn more_angles_reduce_the_error() {
    // angular undersampling shows up for narrow features away from the origin
    let squeezed = GaussianState::squeezed_vacuum(1.0);
    let st = GaussianState::new(DVector::from_vec(vec![0.0, 2.0]), squeezed.disp().clone()).unwrap();
    let xs = UniformGrid::symmetric(10.0, 257).unwrap();
    let view = UniformGrid::symmetric(5.0, 101).unwrap();
    let truth = WignerGrid::from_fn(view, view, |q, p| st.wigner_qp(q, p).unwrap());
    let err = |count: usize| {
        let sino = sinogram_gaussian(&st, &Sinogram::uniform_angles(count), xs).unwrap();
        inverse_radon(&sino, view, view, 1e-2).unwrap().max_abs_diff(&truth).unwrap() / truth.peak()
    };
    let (coarse, fine) = (err(32), err(180));
    assert!(coarse > fine, "{coarse} vs {fine}");
    assert!(fine <= 0.02, "{fine}");
}

#[test]
fn rotating_the_state_shifts_the_sinogram() {
    let cat = CatState::even(vec![Complex64::new(1.1, 0.4)]).unwrap();
    let w = |q: f64, p: f64| cat.wigner(&[q], &[p]).unwrap();
    let count = 24;
    let shift = 5;
    let phi = std::f64::consts::PI * shift as f64 / count as f64;
    let (s, c) = phi.sin_cos();
    let rotated = |q: f64, p: f64| w(q * c - p * s, q * s + p * c);
    let thetas = Sinogram::uniform_angles(count);
    let xs = UniformGrid::symmetric(8.0, 81).unwrap();
    let base = sinogram_from_fn(w, &thetas, xs, 10.0, 801).unwrap();
    let turned = sinogram_from_fn(rotated, &thetas, xs, 10.0, 801).unwrap();
    // w'(X, Θ) = w(X, Θ - φ); angles below φ wrap through w(X, Θ + π) = w(-X, Θ)
    let mut worst: f64 = 0.0;
    for k in 0..count {
        let expected: Vec<f64> = if k >= shift {
            base.values[k - shift].clone()
        } else {
            base.values[k + count - shift].iter().rev().cloned().collect()
        };
        for (a, b) in turned.values[k].iter().zip(&expected) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst <= 1e-5, "{worst}");
}

#[test]
fn symplectic_route_reconstructs_vacuum_and_squeezed_states() {
    let xs = UniformGrid::symmetric(10.0, 257).unwrap();
    let thetas = Sinogram::uniform_angles(90);
    let vac = sinogram_gaussian(&GaussianState::vacuum(1), &thetas, xs).unwrap();
    let inv = SymplecticInverter::new(&MarginalFamily::from_sinogram(&vac), 20.0, 201, 1e-2).unwrap();
    let w0 = inv.eval(0.0, 0.0);
    assert!((w0 - 2.0).abs() <= 0.1, "{w0}");

    let sq = sinogram_gaussian(&GaussianState::squeezed_vacuum(1.0), &thetas, xs).unwrap();
    let view = UniformGrid::symmetric(3.0, 13).unwrap();
    let fbp = inverse_radon(&sq, view, view, 1e-2).unwrap();
    let sym = SymplecticInverter::new(&MarginalFamily::from_sinogram(&sq), 20.0, 201, 1e-2)
        .unwrap()
        .grid(view, view);
    let rel = sym.max_abs_diff(&fbp).unwrap() / fbp.peak();
    assert!(rel <= 0.05, "{rel}");
}

#[test]
fn symplectic_inversion_is_linear() {
    let xs = UniformGrid::symmetric(10.0, 129).unwrap();
    let thetas = Sinogram::uniform_angles(40);
    let a = sinogram_gaussian(&GaussianState::squeezed_vacuum(0.4), &thetas, xs).unwrap();
    let b = sinogram_gaussian(&GaussianState::coherent(&[Complex64::new(0.5, -0.3)]), &thetas, xs).unwrap();
    let mut mix = MarginalFamily::from_sinogram(&a);
    for (row, other) in mix.values.iter_mut().zip(&b.values) {
        for (v, o) in row.iter_mut().zip(other) {
            *v = 0.3 * *v + 0.7 * o;
        }
    }
    let eval = |f: &MarginalFamily, q, p| SymplecticInverter::new(f, 20.0, 201, 1e-2).unwrap().eval(q, p);
    for &(q, p) in &[(0.0, 0.0), (0.6, -0.2), (-1.0, 1.1)] {
        let combined = 0.3 * eval(&MarginalFamily::from_sinogram(&a), q, p)
            + 0.7 * eval(&MarginalFamily::from_sinogram(&b), q, p);
        assert!((eval(&mix, q, p) - combined).abs() <= 1e-6);
    }
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let st = GaussianState::squeezed_vacuum(0.3);
    let axis = UniformGrid::symmetric(3.0, 7).unwrap();
    let w = WignerGrid::from_fn(axis, axis, |q, p| st.wigner_qp(q, p).unwrap());
    let path = dir.path().join("w.csv");
    w.write_csv(&path).unwrap();
    assert_eq!(WignerGrid::read_csv(&path).unwrap(), w);

    let sino = sinogram_gaussian(&st, &Sinogram::uniform_angles(5), axis).unwrap();
    let path = dir.path().join("s.csv");
    sino.write_csv(&path).unwrap();
    assert_eq!(Sinogram::read_csv(&path).unwrap(), sino);
}
