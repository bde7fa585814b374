//! N-mode Gaussian states described by mean quadratures and the dispersion
//! matrix, with Wigner and Husimi evaluation and photon statistics.
//!
//! All quantities are dimensionless (`ħ = m = ω = 1`); see [`crate::units`]
//! for conversion at the boundary. Quadrature vectors are ordered
//! `Q = (p_1..p_N, q_1..q_N)`.
//!
//! # Q-function convention
//!
//! With `B = (β_1..β_N, β_1*..β_N*)` and `U` the unitary mapping `B` onto
//! `Q`, the Husimi function of a Gaussian state is
//!
//! ```text
//! Q(B) = P₀ exp(-½ Bᵀ(R + σ_x)B + Bᵀz)
//! R    = Uᵀ (M + ½)⁻¹ U - σ_x
//! z    = R y = Uᵀ (M + ½)⁻¹ ⟨Q⟩
//! P₀   = det(M + ½)^{-1/2} exp(-⟨Q⟩ (2M + 1)⁻¹ ⟨Q⟩)
//! ```
//!
//! and the photon-number distribution is `P_n = P₀ H_{nn}^{R}(y) / n!`.
//! This pair reproduces Poisson statistics for coherent states and the
//! squeezed-vacuum distribution; the `(β*, β)` ordering would conjugate
//! `R` by `σ_x`. [`CONVENTION_TAG`] records the choice.

use nalgebra::Cholesky;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermite::{mv_hermite_eval_scaled, HermiteError, HermiteParams, HermiteTable, MultiIndex};
use crate::linalg::{
    asymmetry, c, condition_number_c, max_abs_c, quadrature_unitary, sigma_x, sym_eigenvalues,
    symplectic_metric, to_complex, to_complex_vec, CMat, CVec, RMat, RVec,
};

/// Resolved ordering/sign convention of the Q-function parametrization.
pub const CONVENTION_TAG: &str = "B=(beta,beta*);R=U^T(M+1/2)^-1U-sx;Ry=U^T(M+1/2)^-1<Q>";

/// Round-off below this magnitude is clipped to zero in probabilities.
pub const NEGATIVE_CLIP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dispersion matrix is not symmetric (defect {0:e})")]
    Asymmetric(f64),
    #[error("singular matrix: {0}")]
    Singular(&'static str),
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("wave function is not normalizable: real part of m is not positive definite")]
    NonNormalizable,
    #[error("probability {value:e} at n = {index} is below the round-off threshold")]
    NegativeProbability { index: MultiIndex, value: f64 },
    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },
    #[error(transparent)]
    Hermite(#[from] HermiteError),
}

/// Gaussian state `(⟨Q⟩, M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: RVec,
    disp: RMat,
}

/// Serialized form `{n_modes, mean, disp}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianStateDoc {
    pub n_modes: usize,
    pub mean: Vec<f64>,
    pub disp: Vec<Vec<f64>>,
}

/// Output of [`GaussianState::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub symmetry_defect: f64,
    /// Smallest eigenvalue of the Hermitian matrix `M + (i/2)Σ`.
    pub min_uncertainty_eigenvalue: f64,
    pub purity: f64,
    pub satisfies_uncertainty: bool,
}

/// Parameters of the Husimi function, see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct QRep {
    pub n_modes: usize,
    pub r: CMat,
    /// `z = R y`.
    pub linear: CVec,
    pub p0: f64,
}

impl QRep {
    pub fn hermite_params(&self) -> Result<HermiteParams, HermiteError> {
        HermiteParams::from_linear(self.r.clone(), self.linear.clone())
    }

    /// Explicit Hermite argument `y`; fails when `R` is degenerate
    /// (for example `R = 0` for coherent states).
    pub fn y(&self) -> Result<CVec, HermiteError> {
        self.hermite_params()?.argument()
    }
}

/// Pure state `Ψ ∝ exp(-xᵀm x + cᵀx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureGaussianSpec {
    pub m: CMat,
    pub c: CVec,
}

/// Stopping rule for photon-number enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PndOptions {
    /// Stop once the accumulated probability reaches `1 - mass_tol`.
    pub mass_tol: f64,
    /// Largest total photon number enumerated.
    pub max_total: u32,
}

impl Default for PndOptions {
    fn default() -> Self {
        PndOptions {
            mass_tol: 1e-10,
            max_total: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Truncation {
    MassReached,
    DegreeCap,
}

/// Truncated photon-number distribution, ordered by total photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct PndTable {
    pub entries: Vec<(MultiIndex, f64)>,
    pub mass: f64,
    pub max_total: u32,
    pub truncation: Truncation,
}

impl PndTable {
    pub fn cap_hit(&self) -> bool {
        self.truncation == Truncation::DegreeCap
    }

    /// Distribution of the total photon number `Σ n_i`.
    pub fn totals(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.max_total as usize + 1];
        for (n, p) in &self.entries {
            out[n.total_degree() as usize] += p;
        }
        out
    }
}

/// Photon-number mean and variance of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonMoments {
    pub mean: f64,
    pub variance: f64,
    /// Mean of the truncated series, for consistency checks.
    pub series_mean: f64,
    pub series_mass: f64,
}

fn check_probability(index: &MultiIndex, v: f64) -> Result<f64, GaussianError> {
    if v < -NEGATIVE_CLIP {
        Err(GaussianError::NegativeProbability {
            index: index.clone(),
            value: v,
        })
    } else {
        Ok(v.max(0.0))
    }
}

impl GaussianState {
    pub fn new(mean: RVec, disp: RMat) -> Result<Self, GaussianError> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(GaussianError::DimensionMismatch(format!(
                "mean must have even positive length, got {dim}"
            )));
        }
        if disp.nrows() != dim || disp.ncols() != dim {
            return Err(GaussianError::DimensionMismatch(format!(
                "dispersion is {}x{}, expected {dim}x{dim}",
                disp.nrows(),
                disp.ncols()
            )));
        }
        let scale = disp.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
        let defect = asymmetry(&disp);
        if defect > 1e-10 * scale {
            return Err(GaussianError::Asymmetric(defect));
        }
        let disp = (&disp + disp.transpose()) * 0.5;
        Ok(GaussianState {
            n_modes: dim / 2,
            mean,
            disp,
        })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState {
            n_modes,
            mean: RVec::zeros(2 * n_modes),
            disp: RMat::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    /// Coherent state `|α_1..α_N⟩`: means `(√2 Im α, √2 Re α)`, `M = ½I`.
    pub fn coherent(alpha: &[Complex64]) -> Self {
        let n = alpha.len();
        let mut s = Self::vacuum(n);
        for (k, a) in alpha.iter().enumerate() {
            s.mean[k] = std::f64::consts::SQRT_2 * a.im;
            s.mean[n + k] = std::f64::consts::SQRT_2 * a.re;
        }
        s
    }

    /// Single-mode thermal state of an oscillator of frequency `omega` at
    /// temperature `temperature` (energy units, `k_B = ħ = 1`):
    /// `σ = ½ coth(ω / 2T)`.
    pub fn thermal_oscillator(temperature: f64, omega: f64) -> Result<Self, GaussianError> {
        if !(temperature > 0.0) {
            return Err(GaussianError::NonPositiveTemperature(temperature));
        }
        if !(omega > 0.0) {
            return Err(GaussianError::NonPositiveFrequency(omega));
        }
        let x = omega / (2.0 * temperature);
        let sigma = 0.5 / x.tanh();
        Ok(GaussianState {
            n_modes: 1,
            mean: RVec::zeros(2),
            disp: RMat::identity(2, 2) * sigma,
        })
    }

    /// Quadrature-squeezed vacuum with `σ_q = ½e^{-2r}`, `σ_p = ½e^{2r}`.
    pub fn squeezed_vacuum(r: f64) -> Self {
        GaussianState {
            n_modes: 1,
            mean: RVec::zeros(2),
            disp: RMat::from_diagonal(&RVec::from_vec(vec![
                0.5 * (2.0 * r).exp(),
                0.5 * (-2.0 * r).exp(),
            ])),
        }
    }

    /// Dispersion blocks of the pure state `exp(-xᵀm x + cᵀx)`:
    /// `σ_pp = 2(m⁻¹ + m*⁻¹)⁻¹`, `σ_qq = ½(m + m*)⁻¹`,
    /// `σ_pq = (i/2)(m - m*)(m + m*)⁻¹`; means by completing the square.
    pub fn from_pure_gaussian(spec: &PureGaussianSpec) -> Result<Self, GaussianError> {
        let n = spec.m.nrows();
        if spec.m.ncols() != n || spec.c.len() != n || n == 0 {
            return Err(GaussianError::DimensionMismatch(
                "m must be square and match c".into(),
            ));
        }
        let m = (&spec.m + spec.m.transpose()).map(|x| x * 0.5);
        let re = m.map(|x| x.re);
        let im = m.map(|x| x.im);
        let chol = Cholesky::new(re.clone()).ok_or(GaussianError::NonNormalizable)?;
        let m_inv = m
            .clone()
            .try_inverse()
            .ok_or(GaussianError::Singular("m"))?;
        let sum_inv = (&m_inv + m_inv.conjugate())
            .try_inverse()
            .ok_or(GaussianError::Singular("m⁻¹ + m*⁻¹"))?;
        let sigma_pp = (sum_inv * c(2.0, 0.0)).map(|x| x.re);
        let re_inv = chol.inverse();
        let sigma_qq = &re_inv * 0.25;
        let sigma_pq = -(&im * &re_inv) * 0.5;

        let mean_q = &re_inv * spec.c.map(|x| x.re) * 0.5;
        let mean_p = -(&im * &mean_q) * 2.0 + spec.c.map(|x| x.im);

        let mut disp = RMat::zeros(2 * n, 2 * n);
        disp.view_mut((0, 0), (n, n)).copy_from(&sigma_pp);
        disp.view_mut((n, n), (n, n)).copy_from(&sigma_qq);
        disp.view_mut((0, n), (n, n)).copy_from(&sigma_pq);
        disp.view_mut((n, 0), (n, n)).copy_from(&sigma_pq.transpose());
        let mut mean = RVec::zeros(2 * n);
        mean.rows_mut(0, n).copy_from(&mean_p);
        mean.rows_mut(n, n).copy_from(&mean_q);
        GaussianState::new(mean, disp)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &RVec {
        &self.mean
    }

    pub fn disp(&self) -> &RMat {
        &self.disp
    }

    pub fn mean_p(&self, j: usize) -> f64 {
        self.mean[j]
    }

    pub fn mean_q(&self, j: usize) -> f64 {
        self.mean[self.n_modes + j]
    }

    /// Reduced single-mode state of mode `j`.
    pub fn reduced(&self, j: usize) -> Result<GaussianState, GaussianError> {
        if j >= self.n_modes {
            return Err(GaussianError::ModeOutOfRange {
                index: j,
                n_modes: self.n_modes,
            });
        }
        let idx = [j, self.n_modes + j];
        let mean = RVec::from_vec(idx.iter().map(|&i| self.mean[i]).collect());
        let disp = RMat::from_fn(2, 2, |a, b| self.disp[(idx[a], idx[b])]);
        Ok(GaussianState {
            n_modes: 1,
            mean,
            disp,
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let n2 = 2 * self.n_modes;
        let half_sigma = symplectic_metric(self.n_modes) * 0.5;
        // Hermitian M + (i/2)Σ embedded as the real symmetric [[M, -S], [S, M]].
        let mut emb = RMat::zeros(2 * n2, 2 * n2);
        emb.view_mut((0, 0), (n2, n2)).copy_from(&self.disp);
        emb.view_mut((n2, n2), (n2, n2)).copy_from(&self.disp);
        emb.view_mut((0, n2), (n2, n2)).copy_from(&(-&half_sigma));
        emb.view_mut((n2, 0), (n2, n2)).copy_from(&half_sigma);
        let emb = (&emb + emb.transpose()) * 0.5;
        let min_eig = sym_eigenvalues(&emb)[0];
        let det = self.disp.determinant();
        let purity = if det > 0.0 {
            (4f64.powi(self.n_modes as i32) * det).powf(-0.5).clamp(0.0, 1.0)
        } else {
            0.0
        };
        ValidationReport {
            symmetry_defect: asymmetry(&self.disp),
            min_uncertainty_eigenvalue: min_eig,
            purity,
            satisfies_uncertainty: min_eig >= -1e-10,
        }
    }

    pub fn purity(&self) -> f64 {
        self.validate().purity
    }

    /// `W(Q) = (det M)^{-1/2} exp(-½ (Q-⟨Q⟩)ᵀ M⁻¹ (Q-⟨Q⟩))`, normalized to
    /// `∫ W dΓ / (2π)^N = 1`.
    pub fn wigner(&self, q: &RVec) -> Result<f64, GaussianError> {
        if q.len() != 2 * self.n_modes {
            return Err(GaussianError::DimensionMismatch(format!(
                "phase-space point has length {}, expected {}",
                q.len(),
                2 * self.n_modes
            )));
        }
        let chol = Cholesky::new(self.disp.clone()).ok_or(GaussianError::Singular("M"))?;
        let d = q - &self.mean;
        let sol = chol.solve(&d);
        let det = chol.determinant();
        Ok(det.powf(-0.5) * (-0.5 * d.dot(&sol)).exp())
    }

    /// Single-mode convenience for `W(q, p)`.
    pub fn wigner_qp(&self, q: f64, p: f64) -> Result<f64, GaussianError> {
        self.wigner(&RVec::from_vec(vec![p, q]))
    }

    pub fn to_qrep(&self) -> Result<QRep, GaussianError> {
        let n = self.n_modes;
        let shifted = &self.disp + RMat::identity(2 * n, 2 * n) * 0.5;
        let chol = Cholesky::new(shifted).ok_or(GaussianError::Singular("M + ½I"))?;
        let k = chol.inverse();
        let kc = to_complex(&k);
        let u = quadrature_unitary(n);
        let r = u.transpose() * &kc * &u - sigma_x(n);
        let linear = u.transpose() * (&kc * to_complex_vec(&self.mean));
        let quad = self.mean.dot(&(&k * &self.mean));
        let p0 = chol.determinant().powf(-0.5) * (-0.5 * quad).exp();
        Ok(QRep {
            n_modes: n,
            r,
            linear,
            p0,
        })
    }

    /// Inverse of [`to_qrep`](Self::to_qrep):
    /// `M = U (R + σ_x)⁻¹ Uᵀ - ½`, `⟨Q⟩ = U (R + σ_x)⁻¹ z`.
    pub fn from_qrep(rep: &QRep) -> Result<Self, GaussianError> {
        let n = rep.n_modes;
        if rep.r.nrows() != 2 * n || rep.linear.len() != 2 * n {
            return Err(GaussianError::DimensionMismatch(
                "QRep blocks do not match n_modes".into(),
            ));
        }
        let a = &rep.r + sigma_x(n);
        if condition_number_c(&a) > 1e14 {
            return Err(GaussianError::Singular("R + σ_x"));
        }
        let a_inv = a.try_inverse().ok_or(GaussianError::Singular("R + σ_x"))?;
        let u = quadrature_unitary(n);
        let m = &u * &a_inv * u.transpose();
        let mean = &u * (&a_inv * &rep.linear);
        let disp = m.map(|x| x.re) - RMat::identity(2 * n, 2 * n) * 0.5;
        GaussianState::new(mean.map(|x| x.re), disp)
    }

    /// Husimi function at `β` (one complex amplitude per mode).
    pub fn q_function(&self, beta: &[Complex64]) -> Result<f64, GaussianError> {
        self.to_qrep()?.eval(beta)
    }

    /// `P_n = P₀ H_{nn}^{R}(y) / n!`.
    pub fn photon_pnd(&self, n: &MultiIndex) -> Result<f64, GaussianError> {
        if n.len() != self.n_modes {
            return Err(GaussianError::DimensionMismatch(format!(
                "index has length {}, state has {} modes",
                n.len(),
                self.n_modes
            )));
        }
        let rep = self.to_qrep()?;
        let g = mv_hermite_eval_scaled(&rep.hermite_params()?, &n.doubled())?;
        check_probability(n, rep.p0 * g.re)
    }

    /// Photon-number distribution enumerated by total photon number until
    /// the accumulated mass reaches `1 - mass_tol` or `max_total` is hit.
    pub fn photon_distribution(&self, opts: &PndOptions) -> Result<PndTable, GaussianError> {
        let rep = self.to_qrep()?;
        let params = rep.hermite_params()?;
        let mut table = HermiteTable::build(&params, 0)?;
        let mut entries = Vec::new();
        let mut mass = 0.0;
        let mut truncation = Truncation::DegreeCap;
        let mut reached = 0;
        for total in 0..=opts.max_total {
            table.extend_to(2 * total)?;
            for n in MultiIndex::of_total_degree(self.n_modes, total) {
                let g = table.scaled(&n.doubled()).expect("table level present");
                let p = check_probability(&n, rep.p0 * g.re)?;
                mass += p;
                entries.push((n, p));
            }
            reached = total;
            if mass >= 1.0 - opts.mass_tol {
                truncation = Truncation::MassReached;
                break;
            }
        }
        Ok(PndTable {
            entries,
            mass,
            max_total: reached,
            truncation,
        })
    }

    /// `⟨n_j⟩ = ½(σ_pp + σ_qq - 1) + ½(⟨p⟩² + ⟨q⟩²)`; the variance comes
    /// from the reduced single-mode distribution.
    pub fn photon_moments(&self, j: usize) -> Result<PhotonMoments, GaussianError> {
        self.photon_moments_with(j, &PndOptions::default())
    }

    pub fn photon_moments_with(
        &self,
        j: usize,
        opts: &PndOptions,
    ) -> Result<PhotonMoments, GaussianError> {
        let red = self.reduced(j)?;
        let (sp, sq) = (red.disp[(0, 0)], red.disp[(1, 1)]);
        let (mp, mq) = (red.mean[0], red.mean[1]);
        let mean = 0.5 * (sp + sq - 1.0) + 0.5 * (mp * mp + mq * mq);
        let table = red.photon_distribution(opts)?;
        let (mut m1, mut m2) = (0.0, 0.0);
        for (n, p) in &table.entries {
            let k = n.entries()[0] as f64;
            m1 += k * p;
            m2 += k * k * p;
        }
        Ok(PhotonMoments {
            mean,
            variance: m2 - m1 * m1,
            series_mean: m1,
            series_mass: table.mass,
        })
    }

    pub fn to_doc(&self) -> GaussianStateDoc {
        GaussianStateDoc {
            n_modes: self.n_modes,
            mean: self.mean.iter().cloned().collect(),
            disp: self
                .disp
                .row_iter()
                .map(|r| r.iter().cloned().collect())
                .collect(),
        }
    }

    pub fn from_doc(doc: &GaussianStateDoc) -> Result<Self, GaussianError> {
        let dim = 2 * doc.n_modes;
        if doc.mean.len() != dim || doc.disp.len() != dim || doc.disp.iter().any(|r| r.len() != dim)
        {
            return Err(GaussianError::DimensionMismatch(format!(
                "document for {} modes needs a {dim}-vector and {dim}x{dim} matrix",
                doc.n_modes
            )));
        }
        let disp = RMat::from_fn(dim, dim, |i, j| doc.disp[i][j]);
        GaussianState::new(RVec::from_vec(doc.mean.clone()), disp)
    }
}

impl Serialize for GaussianState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = GaussianStateDoc::deserialize(d)?;
        GaussianState::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

impl QRep {
    /// `Q(B) = P₀ exp(-½Bᵀ(R + σ_x)B + Bᵀz)` with `B = (β, β*)`.
    pub fn eval(&self, beta: &[Complex64]) -> Result<f64, GaussianError> {
        let n = self.n_modes;
        if beta.len() != n {
            return Err(GaussianError::DimensionMismatch(format!(
                "β has length {}, expected {n}",
                beta.len()
            )));
        }
        let mut b = CVec::zeros(2 * n);
        for (k, x) in beta.iter().enumerate() {
            b[k] = *x;
            b[n + k] = x.conj();
        }
        let a = &self.r + sigma_x(n);
        let quad = (b.transpose() * &a * &b)[(0, 0)];
        let lin = (b.transpose() * &self.linear)[(0, 0)];
        let expo = -0.5 * quad + lin;
        Ok(self.p0 * expo.re.exp())
    }

    /// Largest imaginary residue of `M` recovered by [`GaussianState::from_qrep`];
    /// zero for representations produced from a real state.
    pub fn reality_defect(&self) -> f64 {
        let n = self.n_modes;
        match (&self.r + sigma_x(n)).try_inverse() {
            Some(a_inv) => {
                let u = quadrature_unitary(n);
                max_abs_c(&(&u * a_inv * u.transpose()).map(|x| Complex64::new(x.im, 0.0)))
            }
            None => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn coherent_constructor() {
        let s = GaussianState::coherent(&[c(1.0, 0.0)]);
        assert!(close(s.mean_q(0), std::f64::consts::SQRT_2, 1e-15));
        assert_eq!(s.mean_p(0), 0.0);
        assert_eq!(s.disp(), &(RMat::identity(2, 2) * 0.5));
        let v = GaussianState::coherent(&[c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v, GaussianState::vacuum(2));
    }

    #[test]
    fn vacuum_wigner_values() {
        let v = GaussianState::vacuum(1);
        assert!(close(v.wigner_qp(0.0, 0.0).unwrap(), 2.0, 1e-14));
        let (q, p) = (0.6, 0.8);
        assert!(close(v.wigner_qp(q, p).unwrap(), 2.0 * (-1.0f64).exp(), 1e-14));
        let s = GaussianState::new(
            RVec::from_vec(vec![0.3, -1.0]),
            RMat::from_row_slice(2, 2, &[1.2, 0.3, 0.3, 0.6]),
        )
        .unwrap();
        let peak = s.wigner(s.mean()).unwrap();
        assert!(close(peak, s.disp().determinant().powf(-0.5), 1e-14));
    }

    #[test]
    fn thermal_width_and_validation() {
        let t = GaussianState::thermal_oscillator(1.0, 1.0).unwrap();
        let sigma = 0.5 / (0.5f64).tanh();
        assert!(close(t.disp()[(0, 0)], sigma, 1e-15));
        assert!(close(sigma, 1.0820, 1e-4));
        assert!(t.validate().purity < 1.0);
        assert!(matches!(
            GaussianState::thermal_oscillator(0.0, 1.0),
            Err(GaussianError::NonPositiveTemperature(_))
        ));
    }

    #[test]
    fn validation_report() {
        let v = GaussianState::vacuum(1).validate();
        assert!(v.min_uncertainty_eigenvalue.abs() < 1e-14);
        assert!(close(v.purity, 1.0, 1e-14));
        assert!(v.satisfies_uncertainty);
        let bad = GaussianState::new(RVec::zeros(2), RMat::identity(2, 2) * 0.25).unwrap();
        assert!(!bad.validate().satisfies_uncertainty);
    }

    #[test]
    fn qrep_of_vacuum_and_coherent() {
        let rep = GaussianState::vacuum(2).to_qrep().unwrap();
        assert!(close(rep.p0, 1.0, 1e-15));
        assert!(max_abs_c(&rep.r) < 1e-15);
        let a = c(0.7, -0.4);
        let rep = GaussianState::coherent(&[a]).to_qrep().unwrap();
        assert!(close(rep.p0, (-a.norm_sqr()).exp(), 1e-14));
        // linear term is (α*, α)
        assert!((rep.linear[0] - a.conj()).norm() < 1e-14);
        assert!((rep.linear[1] - a).norm() < 1e-14);
        assert!(rep.y().is_err());
    }

    #[test]
    fn qrep_round_trip_vacuum() {
        let v = GaussianState::vacuum(1);
        let back = GaussianState::from_qrep(&v.to_qrep().unwrap()).unwrap();
        assert!((back.disp() - v.disp()).abs().max() < 1e-14);
        let zero = QRep {
            n_modes: 1,
            r: CMat::zeros(2, 2),
            linear: CVec::zeros(2),
            p0: 1.0,
        };
        let back = GaussianState::from_qrep(&zero).unwrap();
        assert!((back.disp() - v.disp()).abs().max() < 1e-15);
    }

    #[test]
    fn q_function_vacuum_and_coherent_peak() {
        let v = GaussianState::vacuum(1);
        let (q, p): (f64, f64) = (0.4, -1.1);
        let b = c(q, p) / std::f64::consts::SQRT_2;
        assert!(close(
            v.q_function(&[b]).unwrap(),
            (-(p * p + q * q) / 2.0).exp(),
            1e-14
        ));
        let a = c(1.3, 0.2);
        assert!(close(GaussianState::coherent(&[a]).q_function(&[a]).unwrap(), 1.0, 1e-13));
    }

    #[test]
    fn pure_gaussian_constructor() {
        let vac = GaussianState::from_pure_gaussian(&PureGaussianSpec {
            m: CMat::from_element(1, 1, c(0.5, 0.0)),
            c: CVec::zeros(1),
        })
        .unwrap();
        assert!((vac.disp() - GaussianState::vacuum(1).disp()).abs().max() < 1e-15);

        let r: f64 = 0.4;
        let sq = GaussianState::from_pure_gaussian(&PureGaussianSpec {
            m: CMat::from_element(1, 1, c(0.5 * (2.0 * r).exp(), 0.0)),
            c: CVec::zeros(1),
        })
        .unwrap();
        assert!(close(sq.disp()[(1, 1)], 0.5 * (-2.0 * r).exp(), 1e-15));
        assert!(close(sq.disp()[(0, 0)], 0.5 * (2.0 * r).exp(), 1e-14));

        let corr = GaussianState::from_pure_gaussian(&PureGaussianSpec {
            m: CMat::from_element(1, 1, c(0.7, 0.3)),
            c: CVec::from_element(1, c(0.2, -0.5)),
        })
        .unwrap();
        assert!(corr.disp()[(0, 1)].abs() > 0.1);
        assert!(close(corr.validate().purity, 1.0, 1e-10));

        assert!(matches!(
            GaussianState::from_pure_gaussian(&PureGaussianSpec {
                m: CMat::from_element(1, 1, c(-0.1, 0.0)),
                c: CVec::zeros(1),
            }),
            Err(GaussianError::NonNormalizable)
        ));
    }

    #[test]
    fn pnd_vacuum() {
        let v = GaussianState::vacuum(2);
        assert!(close(v.photon_pnd(&MultiIndex::zeros(2)).unwrap(), 1.0, 1e-15));
        assert_eq!(v.photon_pnd(&MultiIndex::new(vec![1, 0])).unwrap(), 0.0);
        assert!(v.photon_pnd(&MultiIndex::zeros(1)).is_err());
    }

    #[test]
    fn coherent_moments() {
        let a = c(0.9, 0.5);
        let opts = PndOptions {
            mass_tol: 1e-15,
            max_total: 64,
        };
        let m = GaussianState::coherent(&[a]).photon_moments_with(0, &opts).unwrap();
        assert!(close(m.mean, a.norm_sqr(), 1e-14));
        assert!(close(m.variance, a.norm_sqr(), 1e-9));
        let v = GaussianState::vacuum(1).photon_moments(0).unwrap();
        assert_eq!((v.mean, v.variance), (0.0, 0.0));
    }

    #[test]
    fn squeezed_mean_photon_number() {
        let m = GaussianState::squeezed_vacuum(1.0).photon_moments(0).unwrap();
        assert!(close(m.mean, 1f64.sinh().powi(2), 1e-14));
        assert!(close(m.mean, 1.3811, 1e-4));
    }

    #[test]
    fn doc_round_trip() {
        let s = GaussianState::coherent(&[c(0.1, 0.2), c(-0.3, 0.0)]);
        let json = serde_json::to_string(&s).unwrap();
        let back: GaussianState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<GaussianState>(r#"{"n_modes":1,"mean":[0],"disp":[[1]]}"#)
            .is_err());
    }
}
