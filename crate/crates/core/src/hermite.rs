//! One-variable and multivariable Hermite polynomials.
//!
//! The multivariable family is fixed by the generating function
//!
//! ```text
//! exp(-½ aᵀR a + aᵀR y) = Σ_n H_n^{R}(y) aⁿ / n!
//! ```
//!
//! with `R` complex symmetric. For `R = [[2]]` this is the classical
//! `H_n(t)`. Only the product `R y` enters the recursion
//!
//! ```text
//! H_{n+e_k} = (R y)_k H_n - Σ_j R_kj n_j H_{n-e_j}
//! ```
//!
//! so [`HermiteParams`] stores that linear coefficient directly; this keeps
//! singular `R` (coherent states have `R = 0`) usable. Internally the
//! recursion runs on `G_n = H_n / sqrt(n!)`, which stays bounded for the
//! photon-number sums where `H_nn / n!` is a probability.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{asymmetry_c, condition_number_c, inv_sqrt_det_right_half, max_abs_c, CMat, CVec};

/// Maximum asymmetry tolerated in `R` before it is symmetrized.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Condition number beyond which `R` is treated as degenerate when an
/// explicit argument `y` is requested.
pub const DEGENERACY_COND: f64 = 1e12;
/// Default cap on the number of table entries.
pub const DEFAULT_TABLE_CAP: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermiteError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric (max |R - Rᵀ| = {0:e})")]
    Asymmetric(f64),
    #[error("resource limit exceeded: {needed} indices requested, cap is {cap}")]
    ResourceLimit { needed: usize, cap: usize },
    #[error("Gaussian weight does not converge: real part of m is not positive definite")]
    NonConvergent,
    #[error("degenerate overlap: condition number {0:e} exceeds 1e12")]
    DegenerateOverlap(f64),
}

/// Multi-index `n = (n_1, ..., n_S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `(n, n)`: the index used for diagonal Fock matrix elements.
    pub fn doubled(&self) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&self.0);
        MultiIndex(v)
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// `ln(n!) = Σ ln(n_i!)`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&k| ln_factorial(k)).sum()
    }

    /// All indices of length `len` with total degree exactly `degree`,
    /// in lexicographically descending order of the first entry.
    pub fn of_total_degree(len: usize, degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; len];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in (0..=left).rev() {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, out);
            }
        }
        if len == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(0, degree, &mut cur, &mut out);
        out
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub fn ln_factorial(k: u32) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Evaluation context for `H_n^{R}(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteParams {
    r: CMat,
    linear: CVec,
}

impl HermiteParams {
    /// From the matrix `R` and argument `y`.
    pub fn new(r: CMat, y: CVec) -> Result<Self, HermiteError> {
        let r = symmetrized(r)?;
        if y.len() != r.nrows() {
            return Err(HermiteError::DimensionMismatch(format!(
                "R is {0}x{0}, y has length {1}",
                r.nrows(),
                y.len()
            )));
        }
        let linear = &r * y;
        Ok(HermiteParams { r, linear })
    }

    /// From `R` and the product `z = R y`; `y` itself need not exist.
    pub fn from_linear(r: CMat, linear: CVec) -> Result<Self, HermiteError> {
        let r = symmetrized(r)?;
        if linear.len() != r.nrows() {
            return Err(HermiteError::DimensionMismatch(format!(
                "R is {0}x{0}, linear term has length {1}",
                r.nrows(),
                linear.len()
            )));
        }
        Ok(HermiteParams { r, linear })
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.r
    }

    /// `R y`.
    pub fn linear(&self) -> &CVec {
        &self.linear
    }

    /// Solves `R y = z` for the explicit argument.
    pub fn argument(&self) -> Result<CVec, HermiteError> {
        let cond = if max_abs_c(&self.r) < 1e-12 {
            f64::INFINITY
        } else {
            condition_number_c(&self.r)
        };
        if !(cond <= DEGENERACY_COND) {
            return Err(HermiteError::DegenerateOverlap(cond));
        }
        self.r
            .clone()
            .lu()
            .solve(&self.linear)
            .ok_or(HermiteError::DegenerateOverlap(f64::INFINITY))
    }
}

fn symmetrized(r: CMat) -> Result<CMat, HermiteError> {
    if r.nrows() != r.ncols() || r.nrows() == 0 {
        return Err(HermiteError::DimensionMismatch(format!(
            "R must be square and nonempty, got {}x{}",
            r.nrows(),
            r.ncols()
        )));
    }
    let scale = r.iter().fold(1.0_f64, |a, x| a.max(x.norm()));
    let asym = asymmetry_c(&r);
    if asym > SYMMETRY_TOL * scale {
        return Err(HermiteError::Asymmetric(asym));
    }
    Ok((&r + r.transpose()).map(|x| x * 0.5))
}

/// Classical Hermite polynomial `H_n(t)`, generating function
/// `exp(-α² + 2tα) = Σ H_n(t) αⁿ/n!`.
pub fn hermite1d(n: u32, t: Complex64) -> Complex64 {
    let mut h_prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return h_prev;
    }
    let mut h = t * 2.0;
    for k in 1..n {
        let next = t * 2.0 * h - h_prev * (2.0 * k as f64);
        h_prev = h;
        h = next;
    }
    h
}

/// Number-state wavefunction `ψ_n(q) = ψ_0(q) (2ⁿ n!)^{-1/2} H_n(q √scale)`
/// with `scale = mω/ħ`. Evaluated by the normalized three-term recursion,
/// which is the same function without the overflow of `H_n` and `n!`.
pub fn fock_wavefunction(n: u32, q: f64, scale: f64) -> f64 {
    assert!(scale > 0.0, "scale must be positive");
    let x = q * scale.sqrt();
    let mut psi_prev = (scale / std::f64::consts::PI).powf(0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return psi_prev;
    }
    let mut psi = std::f64::consts::SQRT_2 * x * psi_prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * psi - (kf / (kf + 1.0)).sqrt() * psi_prev;
        psi_prev = psi;
        psi = next;
    }
    psi
}

/// `H_n^{R}(y)` at a single index by recursion over the box `0 ≤ k ≤ n`.
pub fn mv_hermite_eval(params: &HermiteParams, n: &MultiIndex) -> Result<Complex64, HermiteError> {
    Ok(mv_hermite_eval_scaled(params, n)? * (0.5 * n.ln_factorial()).exp())
}

/// `H_n^{R}(y) / sqrt(n!)`, free of the factorial growth of `H_n`.
pub fn mv_hermite_eval_scaled(
    params: &HermiteParams,
    n: &MultiIndex,
) -> Result<Complex64, HermiteError> {
    let s = params.dim();
    if n.len() != s {
        return Err(HermiteError::DimensionMismatch(format!(
            "index has length {}, parameters have dimension {s}",
            n.len()
        )));
    }
    Ok(scaled_box_value(params, n.entries()))
}

/// `H_n / sqrt(n!)` via the scaled recursion over the index box.
fn scaled_box_value(params: &HermiteParams, n: &[u32]) -> Complex64 {
    let s = n.len();
    let dims: Vec<usize> = n.iter().map(|&k| k as usize + 1).collect();
    let mut strides = vec![1usize; s];
    for i in (0..s.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let total: usize = dims.iter().product();
    let r = params.matrix();
    let z = params.linear();
    let mut vals = vec![Complex64::new(0.0, 0.0); total];
    vals[0] = Complex64::new(1.0, 0.0);
    let mut idx = vec![0u32; s];
    for flat in 1..total {
        // odometer increment, last coordinate fastest
        for pos in (0..s).rev() {
            if (idx[pos] as usize) + 1 < dims[pos] {
                idx[pos] += 1;
                break;
            }
            idx[pos] = 0;
        }
        let k = idx.iter().position(|&v| v > 0).unwrap();
        let prev = flat - strides[k];
        let mk = idx[k] as f64;
        let mut acc = z[k] * vals[prev];
        for j in 0..s {
            let nj = if j == k { idx[j] - 1 } else { idx[j] };
            if nj > 0 {
                acc -= r[(k, j)] * (nj as f64).sqrt() * vals[prev - strides[j]];
            }
        }
        vals[flat] = acc / mk.sqrt();
    }
    vals[total - 1]
}

fn count_indices(dim: usize, max_degree: u32) -> Option<usize> {
    // C(max_degree + dim, dim)
    let mut acc: u128 = 1;
    for i in 1..=dim as u128 {
        acc = acc * (max_degree as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

/// All `H_n` with total degree up to a bound, built level by level.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    params: HermiteParams,
    max_degree: u32,
    cap: usize,
    scaled: HashMap<MultiIndex, Complex64>,
}

impl HermiteTable {
    pub fn build(params: &HermiteParams, max_total_degree: u32) -> Result<Self, HermiteError> {
        Self::with_cap(params, max_total_degree, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(
        params: &HermiteParams,
        max_total_degree: u32,
        cap: usize,
    ) -> Result<Self, HermiteError> {
        let mut table = HermiteTable {
            params: params.clone(),
            max_degree: 0,
            cap,
            scaled: HashMap::new(),
        };
        table
            .scaled
            .insert(MultiIndex::zeros(params.dim()), Complex64::new(1.0, 0.0));
        table.extend_to(max_total_degree)?;
        Ok(table)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }

    /// Adds every level up to `degree`; existing levels are reused.
    pub fn extend_to(&mut self, degree: u32) -> Result<(), HermiteError> {
        if degree <= self.max_degree {
            return Ok(());
        }
        let s = self.params.dim();
        let needed = count_indices(s, degree).unwrap_or(usize::MAX);
        if needed > self.cap {
            return Err(HermiteError::ResourceLimit {
                needed,
                cap: self.cap,
            });
        }
        let r = self.params.matrix().clone();
        let z = self.params.linear().clone();
        for level in self.max_degree + 1..=degree {
            for m in MultiIndex::of_total_degree(s, level) {
                let k = m.0.iter().position(|&v| v > 0).unwrap();
                let mut n = m.clone();
                n.0[k] -= 1;
                let mut acc = z[k] * self.scaled[&n];
                for j in 0..s {
                    let nj = n.0[j];
                    if nj > 0 {
                        let mut lower = n.clone();
                        lower.0[j] -= 1;
                        acc -= r[(k, j)] * (nj as f64).sqrt() * self.scaled[&lower];
                    }
                }
                let val = acc / (m.0[k] as f64).sqrt();
                self.scaled.insert(m, val);
            }
            self.max_degree = level;
        }
        Ok(())
    }

    /// `H_n / sqrt(n!)`.
    pub fn scaled(&self, n: &MultiIndex) -> Option<Complex64> {
        self.scaled.get(n).copied()
    }

    /// `H_n`.
    pub fn get(&self, n: &MultiIndex) -> Option<Complex64> {
        self.scaled(n).map(|g| g * (0.5 * n.ln_factorial()).exp())
    }

    /// Ordered copy of the table with unscaled values.
    pub fn to_map(&self) -> BTreeMap<MultiIndex, Complex64> {
        self.scaled
            .iter()
            .map(|(k, g)| (k.clone(), g * (0.5 * k.ln_factorial()).exp()))
            .collect()
    }
}

/// Every `H_n` with `total_degree(n) ≤ max_total_degree`.
pub fn mv_hermite_table(
    params: &HermiteParams,
    max_total_degree: u32,
) -> Result<BTreeMap<MultiIndex, Complex64>, HermiteError> {
    Ok(HermiteTable::build(params, max_total_degree)?.to_map())
}

/// Ingredients of the Gaussian overlap
/// `∫ H_n^{R}(x) H_m^{r}(Λx + d) exp(-xᵀm x + cᵀx) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSpec {
    pub big_r: CMat,
    pub small_r: CMat,
    pub lambda: CMat,
    pub d: CVec,
    pub c: CVec,
    pub m: CMat,
}

impl OverlapSpec {
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    fn check(&self) -> Result<usize, HermiteError> {
        let n = self.dim();
        let square = |a: &CMat, name: &str| {
            if a.nrows() != n || a.ncols() != n {
                Err(HermiteError::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    a.nrows(),
                    a.ncols()
                )))
            } else {
                Ok(())
            }
        };
        square(&self.big_r, "R")?;
        square(&self.small_r, "r")?;
        square(&self.lambda, "Λ")?;
        square(&self.m, "m")?;
        if self.d.len() != n || self.c.len() != n {
            return Err(HermiteError::DimensionMismatch(format!(
                "d and c must have length {n}"
            )));
        }
        let re_m = self.m.map(|x| x.re);
        let re_sym = (&re_m + re_m.transpose()) * 0.5;
        if re_sym.cholesky().is_none() {
            return Err(HermiteError::NonConvergent);
        }
        Ok(n)
    }

    /// The 2N-dimensional Hermite parameters `(ρ, ρy)` of the closed form.
    pub fn combined_params(&self) -> Result<HermiteParams, HermiteError> {
        let n = self.check()?;
        let m = symmetrized(self.m.clone())?;
        let big_r = symmetrized(self.big_r.clone())?;
        let small_r = symmetrized(self.small_r.clone())?;
        let m_inv = m.clone().try_inverse().ok_or(HermiteError::NonConvergent)?;
        let half = Complex64::new(0.5, 0.0);

        let r1 = &big_r - (&big_r * &m_inv * &big_r) * half;
        let rl = &small_r * &self.lambda;
        let r2 = &small_r - (&rl * &m_inv * rl.transpose()) * half;
        let r12 = -(&big_r * &m_inv * rl.transpose()) * half;

        let mut rho = CMat::zeros(2 * n, 2 * n);
        rho.view_mut((0, 0), (n, n)).copy_from(&r1);
        rho.view_mut((n, n), (n, n)).copy_from(&r2);
        rho.view_mut((0, n), (n, n)).copy_from(&r12);
        rho.view_mut((n, 0), (n, n)).copy_from(&r12.transpose());

        let y1 = (&big_r * &m_inv * &self.c) * half;
        let y2 = (&rl * &m_inv * &self.c) * half + &small_r * &self.d;
        let mut linear = CVec::zeros(2 * n);
        linear.rows_mut(0, n).copy_from(&y1);
        linear.rows_mut(n, n).copy_from(&y2);
        HermiteParams::from_linear(rho, linear)
    }

    /// `π^{N/2} (det m)^{-1/2} exp(¼ cᵀ m⁻¹ c)`.
    pub fn prefactor(&self) -> Result<Complex64, HermiteError> {
        let n = self.check()?;
        let m_inv = self
            .m
            .clone()
            .try_inverse()
            .ok_or(HermiteError::NonConvergent)?;
        let quad = (self.c.transpose() * &m_inv * &self.c)[(0, 0)];
        Ok(std::f64::consts::PI.powf(n as f64 / 2.0)
            * inv_sqrt_det_right_half(&self.m)
            * (quad * 0.25).exp())
    }
}

/// Closed-form Gaussian overlap of two multivariable Hermite polynomials,
/// `π^{N/2}(det m)^{-1/2} exp(¼cm⁻¹c) H_{(n,m)}^{ρ}(y)`.
pub fn gaussian_hermite_overlap(
    spec: &OverlapSpec,
    n: &MultiIndex,
    m_idx: &MultiIndex,
) -> Result<Complex64, HermiteError> {
    let dim = spec.dim();
    if n.len() != dim || m_idx.len() != dim {
        return Err(HermiteError::DimensionMismatch(format!(
            "indices must have length {dim}"
        )));
    }
    let params = spec.combined_params()?;
    let h = mv_hermite_eval(&params, &n.concat(m_idx))?;
    Ok(spec.prefactor()? * h)
}
