//! Linear integrals of motion for quadratic Hamiltonians
//! `H = ½ Qᵀ B(t) Q + C(t)ᵀ Q`, state evolution and closed-form propagators.
//!
//! The invariants `I(t) = Λ(t) Q + Δ(t)` satisfy `Λ̇ = ΛΣB`, `Δ̇ = ΛΣC`
//! with `Λ(0) = I`, `Δ(0) = 0`. A Wigner function evolves by substitution,
//! `W(Q, t) = W₀(ΛQ + Δ)`, so Gaussian states are pushed forward with
//! `Λ⁻¹`. In the ladder basis `A = U⁻¹Q` the same invariants read
//! `M A + N` with `M = U†ΛU`, `N = U†Δ`, and obey `Ṁ = MσD`, `Ṅ = MσE`
//! for `D = UᵀBU`, `E = UᵀC`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{GaussianError, GaussianState};
use crate::linalg::{
    asymmetry, c, ladder_metric, quadrature_unitary, symplectic_metric, to_complex,
    to_complex_vec, CMat, CVec, RMat, RVec, I,
};
use crate::ode::{Dopri5, OdeError};
use crate::parametric::{FrequencyProfile, ParametricError, ProfileSpec};

/// Caustic guard band: `|sin ωt|` below this is rejected.
pub const CAUSTIC_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("B(t) is not symmetric (defect {defect:e} at t = {t})")]
    Asymmetric { t: f64, defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Hamiltonian is time dependent; closed-form exponential needs constant B, C")]
    NotConstant,
    #[error("time {t} outside the flow range [{t_min}, {t_max}]")]
    OutOfRange { t: f64, t_min: f64, t_max: f64 },
    #[error("too close to a caustic: ωt = {omega_t} (|sin ωt| < 1e-8)")]
    Caustic { omega_t: f64 },
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("mass and frequency must be positive")]
    NonPositiveParameter,
    #[error("singular invariant matrix Λ at t = {0}")]
    Singular(f64),
    #[error("semigroup check is degenerate: combined time sits on a caustic")]
    DegenerateSemigroup,
    #[error("invalid Hamiltonian spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Parametric(#[from] ParametricError),
}

pub type MatrixFn = Arc<dyn Fn(f64) -> RMat + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(f64) -> RVec + Send + Sync>;

/// `H = ½ Qᵀ B(t) Q + C(t)ᵀ Q` with `Q = (p, q)`.
#[derive(Clone)]
pub struct QuadraticHamiltonian {
    n_modes: usize,
    b: MatrixFn,
    c: VectorFn,
    constant: Option<(RMat, RVec)>,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for QuadraticHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadraticHamiltonian")
            .field("n_modes", &self.n_modes)
            .field("constant", &self.constant.is_some())
            .finish()
    }
}

fn check_symmetric(b: &RMat, t: f64) -> Result<(), DynamicsError> {
    let scale = b.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    let defect = asymmetry(b);
    if defect > 1e-12 * scale {
        return Err(DynamicsError::Asymmetric { t, defect });
    }
    Ok(())
}

impl QuadraticHamiltonian {
    pub fn constant(b: RMat, c: RVec) -> Result<Self, DynamicsError> {
        let dim = b.nrows();
        if dim == 0 || dim % 2 != 0 || b.ncols() != dim || c.len() != dim {
            return Err(DynamicsError::DimensionMismatch(format!(
                "B is {}x{}, C has length {}; need 2N x 2N and 2N",
                b.nrows(),
                b.ncols(),
                c.len()
            )));
        }
        check_symmetric(&b, 0.0)?;
        let b = (&b + b.transpose()) * 0.5;
        let (bf, cf) = (b.clone(), c.clone());
        Ok(QuadraticHamiltonian {
            n_modes: dim / 2,
            b: Arc::new(move |_| bf.clone()),
            c: Arc::new(move |_| cf.clone()),
            constant: Some((b, c)),
            breakpoints: Vec::new(),
        })
    }

    /// Time-dependent `B(t)`, `C(t)`; symmetry of `B` is checked at every
    /// evaluation during integration.
    pub fn time_dependent(
        n_modes: usize,
        b: MatrixFn,
        c: VectorFn,
        breakpoints: Vec<f64>,
    ) -> Result<Self, DynamicsError> {
        let b0 = b(0.0);
        if b0.nrows() != 2 * n_modes || b0.ncols() != 2 * n_modes || c(0.0).len() != 2 * n_modes
        {
            return Err(DynamicsError::DimensionMismatch(
                "B(0), C(0) do not match n_modes".into(),
            ));
        }
        check_symmetric(&b0, 0.0)?;
        Ok(QuadraticHamiltonian {
            n_modes,
            b,
            c,
            constant: None,
            breakpoints,
        })
    }

    /// `p²/2m`.
    pub fn free_particle(mass: f64) -> Result<Self, DynamicsError> {
        Self::constant_force(mass, 0.0)
    }

    /// `p²/2m - f q`.
    pub fn constant_force(mass: f64, force: f64) -> Result<Self, DynamicsError> {
        if !(mass > 0.0) {
            return Err(DynamicsError::NonPositiveParameter);
        }
        Self::constant(
            RMat::from_diagonal(&RVec::from_vec(vec![1.0 / mass, 0.0])),
            RVec::from_vec(vec![0.0, -force]),
        )
    }

    /// `p²/2m + mω²q²/2`.
    pub fn oscillator(mass: f64, omega: f64) -> Result<Self, DynamicsError> {
        if !(mass > 0.0 && omega > 0.0) {
            return Err(DynamicsError::NonPositiveParameter);
        }
        Self::constant(
            RMat::from_diagonal(&RVec::from_vec(vec![1.0 / mass, mass * omega * omega])),
            RVec::zeros(2),
        )
    }

    /// `p²/2 + ω²(t) q²/2`.
    pub fn parametric(profile: FrequencyProfile) -> Self {
        let breakpoints = profile.breakpoints();
        QuadraticHamiltonian {
            n_modes: 1,
            b: Arc::new(move |t| {
                RMat::from_diagonal(&RVec::from_vec(vec![1.0, profile.omega_squared(t)]))
            }),
            c: Arc::new(|_| RVec::zeros(2)),
            constant: None,
            breakpoints,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn b(&self, t: f64) -> RMat {
        (self.b)(t)
    }

    pub fn c(&self, t: f64) -> RVec {
        (self.c)(t)
    }

    pub fn constant_parts(&self) -> Option<&(RMat, RVec)> {
        self.constant.as_ref()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

/// JSON forms of a Hamiltonian.
///
/// `{"preset": "free", "mass": 1, "force": 0}`,
/// `{"preset": "oscillator", "mass": 1, "omega": 1}`,
/// `{"preset": "parametric", "omega2": <profile>}` or
/// `{"B": [[...]], "C": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianSpec {
    Preset {
        preset: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        force: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega2: Option<ProfileSpec>,
    },
    Matrices {
        #[serde(rename = "B")]
        b: Vec<Vec<f64>>,
        #[serde(rename = "C", default)]
        c: Option<Vec<f64>>,
    },
}

impl HamiltonianSpec {
    pub fn build(&self) -> Result<QuadraticHamiltonian, DynamicsError> {
        match self {
            HamiltonianSpec::Preset {
                preset,
                mass,
                omega,
                force,
                omega2,
            } => {
                let mass = mass.unwrap_or(1.0);
                match preset.as_str() {
                    "free" => QuadraticHamiltonian::constant_force(mass, force.unwrap_or(0.0)),
                    "oscillator" => QuadraticHamiltonian::oscillator(mass, omega.unwrap_or(1.0)),
                    "parametric" => {
                        let spec = omega2.clone().ok_or_else(|| {
                            DynamicsError::BadSpec("parametric preset needs \"omega2\"".into())
                        })?;
                        Ok(QuadraticHamiltonian::parametric(FrequencyProfile::try_from(
                            spec,
                        )?))
                    }
                    other => Err(DynamicsError::BadSpec(format!(
                        "unknown preset {other:?} (expected free, oscillator or parametric)"
                    ))),
                }
            }
            HamiltonianSpec::Matrices { b, c } => {
                let n = b.len();
                if b.iter().any(|row| row.len() != n) {
                    return Err(DynamicsError::BadSpec("B must be square".into()));
                }
                let bm = RMat::from_fn(n, n, |i, j| b[i][j]);
                let cv = match c {
                    Some(c) => RVec::from_vec(c.clone()),
                    None => RVec::zeros(n),
                };
                QuadraticHamiltonian::constant(bm, cv)
            }
        }
    }
}

/// One point of the real flow.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub lambda: RMat,
    pub delta: RVec,
}

impl FlowSample {
    /// `‖ΛΣΛᵀ - Σ‖∞` (maximum absolute row sum).
    pub fn symplectic_defect(&self) -> f64 {
        symplectic_defect(&self.lambda)
    }

    /// `t`, then `Λ` row by row, then `Δ`.
    pub fn flatten(&self) -> Vec<f64> {
        let mut row = vec![self.t];
        row.extend(self.lambda.transpose().iter());
        row.extend(self.delta.iter());
        row
    }
}

pub fn symplectic_defect(lambda: &RMat) -> f64 {
    let n = lambda.nrows() / 2;
    let s = symplectic_metric(n);
    let d = lambda * &s * lambda.transpose() - s;
    d.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Column names matching [`FlowSample::flatten`].
pub fn flow_csv_header(n_modes: usize) -> Vec<String> {
    let d = 2 * n_modes;
    let mut h = vec!["t".to_string()];
    for i in 0..d {
        for j in 0..d {
            h.push(format!("L{i}{j}"));
        }
    }
    for i in 0..d {
        h.push(format!("D{i}"));
    }
    h
}

fn pack(lambda: &RMat, delta: &RVec) -> Vec<f64> {
    let mut y: Vec<f64> = lambda.iter().cloned().collect();
    y.extend(delta.iter());
    y
}

fn unpack(d: usize, y: &[f64]) -> (RMat, RVec) {
    (
        RMat::from_column_slice(d, d, &y[..d * d]),
        RVec::from_column_slice(&y[d * d..]),
    )
}

/// Right-hand side of `Λ̇ = ΛΣB`, `Δ̇ = ΛΣC` on the packed state; records
/// the largest asymmetry of `B` seen.
fn real_rhs<'a>(
    h: &'a QuadraticHamiltonian,
    worst: &'a mut (f64, f64),
) -> impl FnMut(f64, &[f64], &mut [f64]) + 'a {
    let d = 2 * h.n_modes;
    let sigma = symplectic_metric(h.n_modes);
    move |t, y, dy| {
        let b = h.b(t);
        let scale = b.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
        let defect = asymmetry(&b) / scale;
        if defect > worst.1 {
            *worst = (t, defect);
        }
        let (lambda, _) = unpack(d, y);
        let ls = &lambda * &sigma;
        let dl = &ls * b;
        let dd = &ls * h.c(t);
        dy[..d * d].copy_from_slice(dl.as_slice());
        dy[d * d..].copy_from_slice(dd.as_slice());
    }
}

/// Samples of `(Λ, Δ)` from integrating the flow equations.
#[derive(Debug, Clone)]
pub struct SymplecticFlow {
    hamiltonian: QuadraticHamiltonian,
    tol: f64,
    samples: Vec<FlowSample>,
}

pub fn integrate_symplectic_flow(
    h: &QuadraticHamiltonian,
    t_end: f64,
    tol: f64,
) -> Result<SymplecticFlow, DynamicsError> {
    let d = 2 * h.n_modes;
    let y0 = pack(&RMat::identity(d, d), &RVec::zeros(d));
    let mut worst = (0.0, 0.0);
    let sol = Dopri5::new(tol).integrate(real_rhs(h, &mut worst), 0.0, &y0, t_end, &h.breakpoints)?;
    if worst.1 > 1e-12 {
        return Err(DynamicsError::Asymmetric {
            t: worst.0,
            defect: worst.1,
        });
    }
    let samples = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&t, y)| {
            let (lambda, delta) = unpack(d, y);
            FlowSample { t, lambda, delta }
        })
        .collect();
    Ok(SymplecticFlow {
        hamiltonian: h.clone(),
        tol,
        samples,
    })
}

impl SymplecticFlow {
    pub fn samples(&self) -> &[FlowSample] {
        &self.samples
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn n_modes(&self) -> usize {
        self.hamiltonian.n_modes
    }

    pub fn range(&self) -> (f64, f64) {
        let a = self.samples[0].t;
        let b = self.samples[self.samples.len() - 1].t;
        (a.min(b), a.max(b))
    }

    /// Largest symplectic defect over the stored samples.
    pub fn max_symplectic_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(FlowSample::symplectic_defect)
            .fold(0.0, f64::max)
    }

    /// `(Λ, Δ)` at any time in range, re-integrated from the nearest
    /// preceding sample.
    pub fn at(&self, t: f64) -> Result<FlowSample, DynamicsError> {
        let (t_min, t_max) = self.range();
        let slack = 1e-12 * t_min.abs().max(t_max.abs()).max(1.0);
        if !(t >= t_min - slack && t <= t_max + slack) {
            return Err(DynamicsError::OutOfRange { t, t_min, t_max });
        }
        let t = t.clamp(t_min, t_max);
        let forward = self.samples[self.samples.len() - 1].t >= self.samples[0].t;
        let j = if forward {
            self.samples.partition_point(|s| s.t <= t).max(1) - 1
        } else {
            self.samples.partition_point(|s| s.t >= t).max(1) - 1
        };
        let base = &self.samples[j];
        if base.t == t {
            return Ok(base.clone());
        }
        let d = 2 * self.hamiltonian.n_modes;
        let mut worst = (0.0, 0.0);
        let sol = Dopri5::new(self.tol).integrate(
            real_rhs(&self.hamiltonian, &mut worst),
            base.t,
            &pack(&base.lambda, &base.delta),
            t,
            &self.hamiltonian.breakpoints,
        )?;
        let (lambda, delta) = unpack(d, sol.last().1);
        Ok(FlowSample { t, lambda, delta })
    }
}

/// `Λ = exp(ΣBt)`, `Δ = ∫₀ᵗ exp(ΣBτ) ΣC dτ`, both read off the exponential
/// of the augmented matrix `[[ΣB, ΣC], [0, 0]] t`.
pub fn flow_expm_constant(b: &RMat, c: &RVec, t: f64) -> FlowSample {
    let d = b.nrows();
    let sigma = symplectic_metric(d / 2);
    let mut aug = RMat::zeros(d + 1, d + 1);
    aug.view_mut((0, 0), (d, d)).copy_from(&(&sigma * b * t));
    aug.view_mut((0, d), (d, 1)).copy_from(&(&sigma * c * t));
    let e = aug.exp();
    FlowSample {
        t,
        lambda: e.view((0, 0), (d, d)).into_owned(),
        delta: e.view((0, d), (d, 1)).column(0).into_owned(),
    }
}

pub fn flow_expm(h: &QuadraticHamiltonian, t: f64) -> Result<FlowSample, DynamicsError> {
    let (b, c) = h.constant.as_ref().ok_or(DynamicsError::NotConstant)?;
    Ok(flow_expm_constant(b, c, t))
}

/// Pushes a state through the flow: `⟨Q⟩' = Λ⁻¹(⟨Q⟩ - Δ)`,
/// `M' = Λ⁻¹ M Λ⁻ᵀ`, so that `W(Q, t) = W₀(ΛQ + Δ)`.
pub fn evolve_gaussian_with(
    state: &GaussianState,
    sample: &FlowSample,
) -> Result<GaussianState, DynamicsError> {
    let d = 2 * state.n_modes();
    if sample.lambda.nrows() != d {
        return Err(DynamicsError::DimensionMismatch(format!(
            "flow is {}-dimensional, state has dimension {d}",
            sample.lambda.nrows()
        )));
    }
    let inv = sample
        .lambda
        .clone()
        .try_inverse()
        .ok_or(DynamicsError::Singular(sample.t))?;
    let mean = &inv * (state.mean() - &sample.delta);
    let disp = &inv * state.disp() * inv.transpose();
    let disp = (&disp + disp.transpose()) * 0.5;
    Ok(GaussianState::new(mean, disp)?)
}

pub fn evolve_gaussian(
    state: &GaussianState,
    flow: &SymplecticFlow,
    t: f64,
) -> Result<GaussianState, DynamicsError> {
    evolve_gaussian_with(state, &flow.at(t)?)
}

pub type CMatrixFn = Arc<dyn Fn(f64) -> CMat + Send + Sync>;
pub type CVectorFn = Arc<dyn Fn(f64) -> CVec + Send + Sync>;

/// Hamiltonian in ladder form `H = ½ Aᵀ D(t) A + E(t)ᵀ A`.
#[derive(Clone)]
pub struct LadderHamiltonian {
    n_modes: usize,
    d: CMatrixFn,
    e: CVectorFn,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for LadderHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LadderHamiltonian")
            .field("n_modes", &self.n_modes)
            .finish()
    }
}

impl LadderHamiltonian {
    pub fn new(n_modes: usize, d: CMatrixFn, e: CVectorFn, breakpoints: Vec<f64>) -> Self {
        LadderHamiltonian {
            n_modes,
            d,
            e,
            breakpoints,
        }
    }

    /// `D = UᵀBU`, `E = UᵀC`.
    pub fn from_quadratic(h: &QuadraticHamiltonian) -> Self {
        let u = quadrature_unitary(h.n_modes);
        let ut = u.transpose();
        let (hb, hc) = (h.clone(), h.clone());
        let (u1, ut1, ut2) = (u.clone(), ut.clone(), ut);
        LadderHamiltonian {
            n_modes: h.n_modes,
            d: Arc::new(move |t| &ut1 * to_complex(&hb.b(t)) * &u1),
            e: Arc::new(move |t| &ut2 * to_complex_vec(&hc.c(t))),
            breakpoints: h.breakpoints.clone(),
        }
    }

    pub fn d(&self, t: f64) -> CMat {
        (self.d)(t)
    }

    pub fn e(&self, t: f64) -> CVec {
        (self.e)(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFlowSample {
    pub t: f64,
    pub m: CMat,
    pub n: CVec,
}

#[derive(Debug, Clone)]
pub struct ComplexFlow {
    pub samples: Vec<ComplexFlowSample>,
    pub tol: f64,
}

/// Integrates `Ṁ = MσD`, `Ṅ = MσE` from `M(0) = I`, `N(0) = 0`.
pub fn integrate_complex_flow(
    h: &LadderHamiltonian,
    t_end: f64,
    tol: f64,
) -> Result<ComplexFlow, DynamicsError> {
    let d = 2 * h.n_modes;
    let sigma = ladder_metric(h.n_modes);
    let size = d * d + d;
    let mut y0 = vec![0.0; 2 * size];
    for k in 0..d {
        y0[2 * (k * d + k)] = 1.0;
    }
    let unpack_c = move |y: &[f64]| -> (CMat, CVec) {
        let vals: Vec<Complex64> = y.chunks(2).map(|p| c(p[0], p[1])).collect();
        (
            CMat::from_column_slice(d, d, &vals[..d * d]),
            CVec::from_column_slice(&vals[d * d..]),
        )
    };
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let (m, _) = unpack_c(y);
        let ms = &m * &sigma;
        let dm = &ms * h.d(t);
        let dn = &ms * h.e(t);
        for (k, v) in dm.iter().chain(dn.iter()).enumerate() {
            dy[2 * k] = v.re;
            dy[2 * k + 1] = v.im;
        }
    };
    let sol = Dopri5::new(tol).integrate(rhs, 0.0, &y0, t_end, &h.breakpoints)?;
    let samples = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&t, y)| {
            let (m, n) = unpack_c(y);
            ComplexFlowSample { t, m, n }
        })
        .collect();
    Ok(ComplexFlow { samples, tol })
}

/// Ladder-basis image of a real sample: `(U†ΛU, U†Δ)`.
pub fn to_ladder_basis(sample: &FlowSample) -> ComplexFlowSample {
    let u = quadrature_unitary(sample.lambda.nrows() / 2);
    let ua = u.adjoint();
    ComplexFlowSample {
        t: sample.t,
        m: &ua * to_complex(&sample.lambda) * &u,
        n: &ua * to_complex_vec(&sample.delta),
    }
}

/// Systems with closed-form position propagators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum PropagatorSystem {
    Free { mass: f64 },
    Oscillator { mass: f64, omega: f64 },
}

impl PropagatorSystem {
    pub fn hamiltonian(&self) -> Result<QuadraticHamiltonian, DynamicsError> {
        match *self {
            PropagatorSystem::Free { mass } => QuadraticHamiltonian::free_particle(mass),
            PropagatorSystem::Oscillator { mass, omega } => {
                QuadraticHamiltonian::oscillator(mass, omega)
            }
        }
    }

    fn check(&self, t: f64) -> Result<(), DynamicsError> {
        let ok = match *self {
            PropagatorSystem::Free { mass } => mass > 0.0,
            PropagatorSystem::Oscillator { mass, omega } => mass > 0.0 && omega > 0.0,
        };
        if !ok {
            return Err(DynamicsError::NonPositiveParameter);
        }
        if !(t > 0.0) {
            return Err(DynamicsError::NonPositiveTime(t));
        }
        Ok(())
    }

    /// `G(q, q', t)` for complex arguments (the function is entire in
    /// `q`, `q'`; complex arguments serve contour quadrature).
    pub fn propagator_complex(
        &self,
        q: Complex64,
        qp: Complex64,
        t: f64,
    ) -> Result<Complex64, DynamicsError> {
        self.check(t)?;
        let quarter = Complex64::from_polar(1.0, -PI / 4.0);
        match *self {
            PropagatorSystem::Free { mass } => {
                let amp = (mass / (2.0 * PI * t)).sqrt();
                let dq = q - qp;
                Ok(quarter * amp * (I * mass * dq * dq / (2.0 * t)).exp())
            }
            PropagatorSystem::Oscillator { mass, omega } => {
                let wt = omega * t;
                let (s, cs) = wt.sin_cos();
                if s.abs() < CAUSTIC_GUARD {
                    return Err(DynamicsError::Caustic { omega_t: wt });
                }
                let crossings = (wt / PI).floor();
                let maslov = Complex64::from_polar(1.0, -FRAC_PI_2 * crossings);
                let amp = (mass * omega / (2.0 * PI * s.abs())).sqrt();
                let phase = I * (mass * omega / (2.0 * s)) * ((q * q + qp * qp) * cs - 2.0 * q * qp);
                Ok(quarter * maslov * amp * phase.exp())
            }
        }
    }

    /// `G(q, q', t) = ⟨q| e^{-iHt} |q'⟩` (`ħ = 1`).
    pub fn propagator(&self, q: f64, qp: f64, t: f64) -> Result<Complex64, DynamicsError> {
        self.propagator_complex(c(q, 0.0), c(qp, 0.0), t)
    }

    /// Coefficients `(a, b)` of the `i(a x² - 2b x)` dependence of
    /// `G(q, x, t₁) G(x, q', t₂)` on the intermediate point.
    fn composition_coefficients(&self, q: f64, qp: f64, t1: f64, t2: f64) -> (f64, f64) {
        match *self {
            PropagatorSystem::Free { mass } => (
                0.5 * mass * (1.0 / t1 + 1.0 / t2),
                0.5 * mass * (q / t1 + qp / t2),
            ),
            PropagatorSystem::Oscillator { mass, omega } => {
                let (s1, c1) = (omega * t1).sin_cos();
                let (s2, c2) = (omega * t2).sin_cos();
                let k = 0.5 * mass * omega;
                (k * (c1 / s1 + c2 / s2), k * (q / s1 + qp / s2))
            }
        }
    }
}

pub fn propagator_position(
    system: &PropagatorSystem,
    q: f64,
    qp: f64,
    t: f64,
) -> Result<Complex64, DynamicsError> {
    system.propagator(q, qp, t)
}

/// `|∫ G(q, x, t₁) G(x, q', t₂) dx - G(q, q', t₁ + t₂)|`, the integral taken
/// along the steepest-descent line through the saddle of the integrand.
pub fn semigroup_defect(
    system: &PropagatorSystem,
    q: f64,
    qp: f64,
    t1: f64,
    t2: f64,
) -> Result<f64, DynamicsError> {
    let (a, b) = system.composition_coefficients(q, qp, t1, t2);
    if !a.is_finite() || a.abs() < 1e-12 {
        return Err(DynamicsError::DegenerateSemigroup);
    }
    let centre = b / a;
    let dir = Complex64::from_polar(1.0 / a.abs().sqrt(), a.signum() * PI / 4.0);
    let (half_width, n) = (9.0, 721);
    let h = 2.0 * half_width / (n - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let s = -half_width + k as f64 * h;
        let x = c(centre, 0.0) + dir * s;
        sum += system.propagator_complex(c(q, 0.0), x, t1)?
            * system.propagator_complex(x, c(qp, 0.0), t2)?;
    }
    let integral = sum * dir * h;
    Ok((integral - system.propagator(q, qp, t1 + t2)?).norm())
}

/// Maximum residuals of the invariant equations
/// `p₀(t) G = i ∂_{q'} G` and `q₀(t) G = q' G` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub momentum_residual: f64,
    pub position_residual: f64,
    pub max_abs_propagator: f64,
    pub points: usize,
    pub step: f64,
}

/// Applies `I(t) = ΛQ + Δ` (with `p = -i∂_q`) to `G(·, q', t)` by central
/// differences of step `h` on the product grid `qs × qps`.
pub fn invariant_residual_check(
    system: &PropagatorSystem,
    qs: &[f64],
    qps: &[f64],
    t: f64,
    h: f64,
) -> Result<ResidualReport, DynamicsError> {
    let flow = flow_expm(&system.hamiltonian()?, t)?;
    let (l, dl) = (&flow.lambda, &flow.delta);
    let g = |q: f64, qp: f64| system.propagator(q, qp, t);
    let mut report = ResidualReport {
        momentum_residual: 0.0,
        position_residual: 0.0,
        max_abs_propagator: 0.0,
        points: 0,
        step: h,
    };
    for &q in qs {
        for &qp in qps {
            let g0 = g(q, qp)?;
            let dq = (g(q + h, qp)? - g(q - h, qp)?) / (2.0 * h);
            let dqp = (g(q, qp + h)? - g(q, qp - h)?) / (2.0 * h);
            let p_g = -I * dq;
            let p0 = p_g * l[(0, 0)] + g0 * (l[(0, 1)] * q + dl[0]) - I * dqp;
            let q0 = p_g * l[(1, 0)] + g0 * (l[(1, 1)] * q + dl[1]) - g0 * qp;
            report.momentum_residual = report.momentum_residual.max(p0.norm());
            report.position_residual = report.position_residual.max(q0.norm());
            report.max_abs_propagator = report.max_abs_propagator.max(g0.norm());
            report.points += 1;
        }
    }
    Ok(report)
}

/// Matrix element of the oscillator propagator in a basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "lowercase")]
pub enum BasisElement {
    /// `⟨α| e^{-iHt} |β⟩`.
    Coherent { alpha: [f64; 2], beta: [f64; 2] },
    /// `⟨n| e^{-iHt} |m⟩`.
    Fock { n: u32, m: u32 },
}

pub fn propagator_basis(elem: &BasisElement, omega: f64, t: f64) -> Result<Complex64, DynamicsError> {
    if !(t >= 0.0) {
        return Err(DynamicsError::NonPositiveTime(t));
    }
    let wt = omega * t;
    match *elem {
        BasisElement::Fock { n, m } => Ok(if n == m {
            Complex64::from_polar(1.0, -wt * (n as f64 + 0.5))
        } else {
            Complex64::new(0.0, 0.0)
        }),
        BasisElement::Coherent { alpha, beta } => {
            let (a, b) = (c(alpha[0], alpha[1]), c(beta[0], beta[1]));
            let e = -0.5 * a.norm_sqr() - 0.5 * b.norm_sqr()
                + a.conj() * b * Complex64::from_polar(1.0, -wt);
            Ok(Complex64::from_polar(1.0, -0.5 * wt) * e.exp())
        }
    }
}

/// `Λ(t) = [[1, 0], [-t/m, 1]]` of the free particle.
pub fn free_lambda(mass: f64, t: f64) -> RMat {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -t / mass, 1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn free_and_oscillator_flows() {
        let free = QuadraticHamiltonian::free_particle(2.0).unwrap();
        let flow = integrate_symplectic_flow(&free, 3.0, 1e-10).unwrap();
        let s = flow.at(2.5).unwrap();
        assert!(max_abs(&(&s.lambda - free_lambda(2.0, 2.5))) < 1e-12);
        let osc = QuadraticHamiltonian::oscillator(1.0, 1.0).unwrap();
        let flow = integrate_symplectic_flow(&osc, 7.0, 1e-10).unwrap();
        let t: f64 = 6.3;
        let s = flow.at(t).unwrap();
        let rot = RMat::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]);
        assert!(max_abs(&(&s.lambda - rot)) < 1e-9);
        assert!(flow.max_symplectic_defect() < 1e-8);
        assert!(flow.at(7.5).is_err());
    }

    #[test]
    fn constant_force_delta() {
        let (m, f, t) = (1.5, 0.7, 2.0);
        let h = QuadraticHamiltonian::constant_force(m, f).unwrap();
        let flow = integrate_symplectic_flow(&h, t, 1e-11).unwrap();
        let s = flow.at(t).unwrap();
        assert!((s.delta[0] + f * t).abs() < 1e-10);
        assert!((s.delta[1] - f * t * t / (2.0 * m)).abs() < 1e-10);
        let e = flow_expm(&h, t).unwrap();
        assert!((&e.delta - &s.delta).abs().max() < 1e-10);
    }

    #[test]
    fn expm_zero_and_oscillator_period() {
        let h = QuadraticHamiltonian::constant(RMat::zeros(2, 2), RVec::zeros(2)).unwrap();
        assert_eq!(flow_expm(&h, 3.0).unwrap().lambda, RMat::identity(2, 2));
        let osc = QuadraticHamiltonian::oscillator(1.0, 2.0).unwrap();
        let s = flow_expm(&osc, PI).unwrap();
        assert!(max_abs(&(s.lambda - RMat::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn small_frequency_limit() {
        let t = 1.7;
        let osc = flow_expm(&QuadraticHamiltonian::oscillator(1.0, 1e-6).unwrap(), t).unwrap();
        assert!(max_abs(&(osc.lambda - free_lambda(1.0, t))) < 1e-4);
    }

    #[test]
    fn complex_flow_of_stationary_oscillator() {
        let h = QuadraticHamiltonian::oscillator(1.0, 1.0).unwrap();
        let flow = integrate_complex_flow(&LadderHamiltonian::from_quadratic(&h), 2.0, 1e-11).unwrap();
        let s = flow.samples.last().unwrap();
        assert_eq!(flow.samples[0].m, CMat::identity(2, 2));
        assert!((s.m[(0, 0)] - Complex64::from_polar(1.0, 2.0)).norm() < 1e-9);
        assert!((s.m[(1, 1)] - Complex64::from_polar(1.0, -2.0)).norm() < 1e-9);
        assert!(s.m[(0, 1)].norm() < 1e-9);
        let via_real = to_ladder_basis(&flow_expm(&h, 2.0).unwrap());
        assert!(crate::linalg::max_abs_c(&(via_real.m - &s.m)) < 1e-9);
    }

    #[test]
    fn free_vacuum_spreads() {
        let h = QuadraticHamiltonian::free_particle(1.0).unwrap();
        let flow = integrate_symplectic_flow(&h, 1.0, 1e-10).unwrap();
        let s = evolve_gaussian(&GaussianState::vacuum(1), &flow, 1.0).unwrap();
        assert!((s.disp()[(1, 1)] - 1.0).abs() < 1e-9);
        assert!((s.disp()[(0, 1)] - 0.5).abs() < 1e-9);
        assert!((s.disp()[(0, 0)] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn oscillator_quarter_period_propagator() {
        let sys = PropagatorSystem::Oscillator {
            mass: 1.0,
            omega: 1.0,
        };
        let (q, qp) = (0.3, -0.8);
        let g = sys.propagator(q, qp, PI / 2.0).unwrap();
        let expected = (1.0 / (2.0 * PI)).sqrt()
            * Complex64::from_polar(1.0, -PI / 4.0)
            * (-I * q * qp).exp();
        assert!((g - expected).norm() < 1e-14);
        assert!(matches!(
            sys.propagator(0.0, 0.0, PI),
            Err(DynamicsError::Caustic { .. })
        ));
        assert!(sys.propagator(0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn free_propagator_is_translation_invariant() {
        let sys = PropagatorSystem::Free { mass: 1.3 };
        let a = sys.propagator(0.4, -0.2, 0.9).unwrap();
        let b = sys.propagator(1.4, 0.8, 0.9).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn fock_basis_values() {
        let v = propagator_basis(&BasisElement::Fock { n: 0, m: 0 }, 1.0, 2.0 * PI).unwrap();
        assert!((v + 1.0).norm() < 1e-15);
        let v = propagator_basis(&BasisElement::Fock { n: 1, m: 2 }, 1.0, 0.3).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn spec_json_forms() {
        let h: HamiltonianSpec =
            serde_json::from_str(r#"{"preset":"oscillator","omega":2}"#).unwrap();
        assert!(h.build().unwrap().constant_parts().is_some());
        let h: HamiltonianSpec =
            serde_json::from_str(r#"{"preset":"parametric","omega2":{"preset":"free"}}"#).unwrap();
        assert!(h.build().unwrap().constant_parts().is_none());
        let h: HamiltonianSpec = serde_json::from_str(r#"{"B":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(h.build().unwrap().n_modes(), 1);
        let h: HamiltonianSpec = serde_json::from_str(r#"{"B":[[1,2],[0,1]]}"#).unwrap();
        assert!(matches!(h.build(), Err(DynamicsError::Asymmetric { .. })));
        let h: HamiltonianSpec = serde_json::from_str(r#"{"preset":"parametric"}"#).unwrap();
        assert!(h.build().is_err());
    }
}
