//! Independent oracles shared by the property tests and the acceptance
//! suite.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qopt::hermite::{ln_factorial, mv_hermite_eval, HermiteParams, MultiIndex, OverlapSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Poly = HashMap<Vec<u32>, Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Truncated product of polynomials in `s` variables.
pub fn poly_mul(a: &Poly, b: &Poly, max_deg: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() <= max_deg {
                *out.entry(e).or_insert(c(0.0, 0.0)) += ca * cb;
            }
        }
    }
    out
}

/// Taylor coefficients of `exp(-½ aᵀRa + aᵀz)` up to total degree
/// `max_deg`, by summing the exponential series of the polynomial.
pub fn generating_coefficients(r: &DMatrix<Complex64>, z: &[Complex64], max_deg: u32) -> Poly {
    let s = z.len();
    let unit = |k: usize, times: u32| {
        let mut e = vec![0u32; s];
        e[k] += times;
        e
    };
    let mut f = Poly::new();
    for k in 0..s {
        *f.entry(unit(k, 1)).or_insert(c(0.0, 0.0)) += z[k];
        for j in 0..s {
            let mut e = unit(k, 1);
            e[j] += 1;
            *f.entry(e).or_insert(c(0.0, 0.0)) += -0.5 * r[(k, j)];
        }
    }
    let mut total = Poly::new();
    total.insert(vec![0; s], c(1.0, 0.0));
    let mut power = total.clone();
    for k in 1..=max_deg {
        power = poly_mul(&power, &f, max_deg);
        for (e, v) in &power {
            *total.entry(e.clone()).or_insert(c(0.0, 0.0)) += v / ln_factorial(k).exp();
        }
    }
    total
}

pub fn complex_symmetric(entries: &[(f64, f64)], s: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(s, s);
    let mut k = 0;
    for i in 0..s {
        for j in i..s {
            let v = c(entries[k].0, entries[k].1);
            m[(i, j)] = v;
            m[(j, i)] = v;
            k += 1;
        }
    }
    m
}

/// Trapezoid quadrature of the overlap integrand on a box wide enough
/// for the Gaussian weight to vanish at the edges.
pub fn overlap_by_quadrature(spec: &OverlapSpec, n: &MultiIndex, m: &MultiIndex, half_width: f64, pts: usize) -> Complex64 {
    let dim = spec.dim();
    let h = 2.0 * half_width / (pts - 1) as f64;
    let axis: Vec<f64> = (0..pts).map(|i| -half_width + i as f64 * h).collect();
    let eval = |x: &DVector<Complex64>| {
        let hn = mv_hermite_eval(&HermiteParams::new(spec.big_r.clone(), x.clone()).unwrap(), n).unwrap();
        let arg = &spec.lambda * x + &spec.d;
        let hm = mv_hermite_eval(&HermiteParams::new(spec.small_r.clone(), arg).unwrap(), m).unwrap();
        let quad = (x.transpose() * &spec.m * x)[(0, 0)];
        let lin = (spec.c.transpose() * x)[(0, 0)];
        hn * hm * (-quad + lin).exp()
    };
    let mut acc = c(0.0, 0.0);
    if dim == 1 {
        for &x in &axis {
            acc += eval(&DVector::from_element(1, c(x, 0.0)));
        }
        acc * h
    } else {
        for &x1 in &axis {
            for &x2 in &axis {
                acc += eval(&DVector::from_vec(vec![c(x1, 0.0), c(x2, 0.0)]));
            }
        }
        acc * h * h
    }
}

pub fn random_spec(rng: &mut ChaCha8Rng, dim: usize) -> OverlapSpec {
    let real_sym = |scale: f64, rng: &mut ChaCha8Rng| {
        let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-scale..scale));
        (&a + a.transpose()) * 0.5
    };
    let b = real_sym(0.3, rng);
    let m_real = DMatrix::identity(dim, dim) * 0.9 + &b;
    let to_c = |m: &DMatrix<f64>| m.map(|v| c(v, 0.0));
    let big_r = to_c(&real_sym(1.0, rng));
    let small_r = to_c(&real_sym(1.0, rng));
    let lambda = DMatrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), 0.0));
    let d = DVector::from_fn(dim, |_, _| c(rng.gen_range(-0.5..0.5), 0.0));
    let cv = DVector::from_fn(dim, |_, _| c(rng.gen_range(-0.5..0.5), 0.0));
    OverlapSpec {
        big_r,
        small_r,
        lambda,
        d,
        c: cv,
        m: to_c(&m_real),
    }
}
