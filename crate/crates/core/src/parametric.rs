//! Oscillator with time-dependent frequency, described by the complex
//! classical solution `ε(t)` of `ε̈ + ω²(t) ε = 0`, `ε(0) = 1`, `ε̇(0) = i`.
//!
//! The integral of motion `A = (i/√2)(ε p - ε̇ q)` generates squeezed and
//! correlated packets, number states and even/odd coherent states whose
//! wavefunctions are evaluated here. The square-root branch of `ε^{-1/2}`
//! follows `arg ε` continuously from `t = 0`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use evalexpr::{Context, EvalexprError, EvalexprResult, Node, Value};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cats::{ln_cosh, ln_sinh, Parity};
use crate::gaussian::GaussianState;
use crate::hermite::ln_factorial;
use crate::linalg::{RMat, RVec, I};
use crate::ode::{Dopri5, OdeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParametricError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("time {t} outside the trajectory range [0, {t_end}]")]
    OutOfRange { t: f64, t_end: f64 },
    #[error("end time must be finite and nonnegative, got {0}")]
    BadEndTime(f64),
    #[error("invalid frequency profile: {0}")]
    BadProfile(String),
    #[error("odd cat state requires α ≠ 0")]
    ZeroAmplitudeOdd,
}

/// Which form `ω²(t)` was given in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    PresetFree,
    PresetOscillator,
    PresetRepulsive,
    Constant,
    Tabulated,
    Expression,
}

#[derive(Clone)]
enum Source {
    Free,
    Oscillator,
    Repulsive,
    Constant(f64),
    Table(Vec<(f64, f64)>),
    Expression { text: String, tree: Arc<Node> },
}

/// `ω²(t)`.
#[derive(Clone)]
pub struct FrequencyProfile {
    source: Source,
}

impl fmt::Debug for FrequencyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Free => write!(f, "FrequencyProfile(free)"),
            Source::Oscillator => write!(f, "FrequencyProfile(oscillator)"),
            Source::Repulsive => write!(f, "FrequencyProfile(repulsive)"),
            Source::Constant(w2) => write!(f, "FrequencyProfile(constant {w2})"),
            Source::Table(t) => write!(f, "FrequencyProfile(table, {} nodes)", t.len()),
            Source::Expression { text, .. } => write!(f, "FrequencyProfile({text:?})"),
        }
    }
}

/// Variables and functions visible to `ω²(t)` expressions.
struct TimeContext {
    t: Value,
    pi: Value,
}

impl Context for TimeContext {
    fn get_value(&self, identifier: &str) -> Option<&Value> {
        match identifier {
            "t" => Some(&self.t),
            "pi" => Some(&self.pi),
            _ => None,
        }
    }

    fn call_function(&self, identifier: &str, argument: &Value) -> EvalexprResult<Value> {
        let f: fn(f64) -> f64 = match identifier {
            "sin" => f64::sin,
            "cos" => f64::cos,
            "tan" => f64::tan,
            "exp" => f64::exp,
            "ln" => f64::ln,
            "sqrt" => f64::sqrt,
            "sinh" => f64::sinh,
            "cosh" => f64::cosh,
            "tanh" => f64::tanh,
            "abs" => f64::abs,
            _ => return Err(EvalexprError::FunctionIdentifierNotFound(identifier.into())),
        };
        Ok(Value::Float(f(argument.as_number()?)))
    }

    fn are_builtin_functions_disabled(&self) -> bool {
        false
    }

    fn set_builtin_functions_disabled(&mut self, _disabled: bool) -> EvalexprResult<()> {
        Err(EvalexprError::CustomMessage(
            "builtin functions cannot be disabled".into(),
        ))
    }
}

fn eval_expression(tree: &Node, t: f64) -> EvalexprResult<f64> {
    tree.eval_number_with_context(&TimeContext {
        t: Value::Float(t),
        pi: Value::Float(PI),
    })
}

impl FrequencyProfile {
    /// `ω² = 0`, `ε = 1 + it`.
    pub fn free() -> Self {
        FrequencyProfile { source: Source::Free }
    }

    /// `ω² = 1`, `ε = e^{it}`.
    pub fn oscillator() -> Self {
        FrequencyProfile {
            source: Source::Oscillator,
        }
    }

    /// `ω² = -1`, `ε = cosh t + i sinh t`.
    pub fn repulsive() -> Self {
        FrequencyProfile {
            source: Source::Repulsive,
        }
    }

    pub fn constant(omega_squared: f64) -> Result<Self, ParametricError> {
        if !omega_squared.is_finite() {
            return Err(ParametricError::BadProfile(format!(
                "constant ω² must be finite, got {omega_squared}"
            )));
        }
        Ok(FrequencyProfile {
            source: Source::Constant(omega_squared),
        })
    }

    /// Linear interpolation through `(t, ω²)` nodes, held constant outside.
    pub fn tabulated(mut nodes: Vec<(f64, f64)>) -> Result<Self, ParametricError> {
        if nodes.is_empty() {
            return Err(ParametricError::BadProfile("table is empty".into()));
        }
        if nodes.iter().any(|(t, w)| !t.is_finite() || !w.is_finite()) {
            return Err(ParametricError::BadProfile("table has non-finite entries".into()));
        }
        if nodes.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(ParametricError::BadProfile(
                "table times must be strictly increasing".into(),
            ));
        }
        nodes.shrink_to_fit();
        Ok(FrequencyProfile {
            source: Source::Table(nodes),
        })
    }

    /// Arithmetic expression in `t`, e.g. `"1 + 0.5*sin(2*t)"`.
    pub fn expression(text: &str) -> Result<Self, ParametricError> {
        let tree = evalexpr::build_operator_tree(text)
            .map_err(|e| ParametricError::BadProfile(format!("{text:?}: {e}")))?;
        eval_expression(&tree, 0.0)
            .map_err(|e| ParametricError::BadProfile(format!("{text:?}: {e}")))?;
        Ok(FrequencyProfile {
            source: Source::Expression {
                text: text.to_string(),
                tree: Arc::new(tree),
            },
        })
    }

    pub fn kind(&self) -> ProfileKind {
        match self.source {
            Source::Free => ProfileKind::PresetFree,
            Source::Oscillator => ProfileKind::PresetOscillator,
            Source::Repulsive => ProfileKind::PresetRepulsive,
            Source::Constant(_) => ProfileKind::Constant,
            Source::Table(_) => ProfileKind::Tabulated,
            Source::Expression { .. } => ProfileKind::Expression,
        }
    }

    /// `ω²(t)`; expressions that fail to evaluate give `NaN`.
    pub fn omega_squared(&self, t: f64) -> f64 {
        match &self.source {
            Source::Free => 0.0,
            Source::Oscillator => 1.0,
            Source::Repulsive => -1.0,
            Source::Constant(w2) => *w2,
            Source::Table(nodes) => interpolate(nodes, t),
            Source::Expression { tree, .. } => eval_expression(tree, t).unwrap_or(f64::NAN),
        }
    }

    /// Times where `ω²` has a kink; the integrator steps onto them.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.source {
            Source::Table(nodes) => nodes.iter().map(|n| n.0).collect(),
            _ => Vec::new(),
        }
    }

    /// `(ε, ε̇)` in closed form for constant `ω²`.
    pub fn closed_form(&self, t: f64) -> Option<(Complex64, Complex64)> {
        let w2 = match self.source {
            Source::Free => 0.0,
            Source::Oscillator => 1.0,
            Source::Repulsive => -1.0,
            Source::Constant(w2) => w2,
            _ => return None,
        };
        Some(constant_solution(w2, t))
    }
}

fn constant_solution(w2: f64, t: f64) -> (Complex64, Complex64) {
    if w2 > 0.0 {
        let k = w2.sqrt();
        let (s, c) = (k * t).sin_cos();
        (Complex64::new(c, s / k), Complex64::new(-k * s, c))
    } else if w2 < 0.0 {
        let g = (-w2).sqrt();
        let (s, c) = ((g * t).sinh(), (g * t).cosh());
        (Complex64::new(c, s / g), Complex64::new(g * s, c))
    } else {
        (Complex64::new(1.0, t), I)
    }
}

fn interpolate(nodes: &[(f64, f64)], t: f64) -> f64 {
    let first = nodes[0];
    let last = nodes[nodes.len() - 1];
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let j = nodes.partition_point(|n| n.0 <= t);
    let (t0, w0) = nodes[j - 1];
    let (t1, w1) = nodes[j];
    w0 + (w1 - w0) * (t - t0) / (t1 - t0)
}

/// JSON forms: `{"preset": "free" | "oscillator" | "repulsive"}`,
/// `{"constant": w2}`, `{"table": [[t, w2], ...]}` or an expression string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Preset { preset: String },
    Constant { constant: f64 },
    Table { table: Vec<[f64; 2]> },
    Expression(String),
}

impl TryFrom<ProfileSpec> for FrequencyProfile {
    type Error = ParametricError;

    fn try_from(spec: ProfileSpec) -> Result<Self, Self::Error> {
        match spec {
            ProfileSpec::Preset { preset } => match preset.as_str() {
                "free" => Ok(Self::free()),
                "oscillator" => Ok(Self::oscillator()),
                "repulsive" => Ok(Self::repulsive()),
                other => Err(ParametricError::BadProfile(format!(
                    "unknown preset {other:?} (expected free, oscillator or repulsive)"
                ))),
            },
            ProfileSpec::Constant { constant } => Self::constant(constant),
            ProfileSpec::Table { table } => {
                Self::tabulated(table.into_iter().map(|r| (r[0], r[1])).collect())
            }
            ProfileSpec::Expression(text) => Self::expression(&text),
        }
    }
}

impl From<&FrequencyProfile> for ProfileSpec {
    fn from(p: &FrequencyProfile) -> Self {
        match &p.source {
            Source::Free => ProfileSpec::Preset {
                preset: "free".into(),
            },
            Source::Oscillator => ProfileSpec::Preset {
                preset: "oscillator".into(),
            },
            Source::Repulsive => ProfileSpec::Preset {
                preset: "repulsive".into(),
            },
            Source::Constant(w2) => ProfileSpec::Constant { constant: *w2 },
            Source::Table(nodes) => ProfileSpec::Table {
                table: nodes.iter().map(|&(t, w)| [t, w]).collect(),
            },
            Source::Expression { text, .. } => ProfileSpec::Expression(text.clone()),
        }
    }
}

impl Serialize for FrequencyProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProfileSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrequencyProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = ProfileSpec::deserialize(d)?;
        FrequencyProfile::try_from(spec).map_err(serde::de::Error::custom)
    }
}

/// `ε`, `ε̇` and the continuous branch of `arg ε` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonPoint {
    pub t: f64,
    pub eps: Complex64,
    pub eps_dot: Complex64,
    /// `arg ε`, continuous from `arg ε(0) = 0`.
    pub phase: f64,
}

/// Spacing of stored samples for closed-form trajectories.
const CLOSED_FORM_SPACING: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct EpsilonTrajectory {
    profile: FrequencyProfile,
    tol: f64,
    closed_form: bool,
    samples: Vec<EpsilonPoint>,
    wronskian_defect: f64,
}

fn unwrap_phase(reference: f64, z: Complex64) -> f64 {
    let mut d = z.arg() - reference;
    d -= 2.0 * PI * (d / (2.0 * PI)).round();
    reference + d
}

fn wronskian(eps: Complex64, eps_dot: Complex64) -> Complex64 {
    eps * eps_dot.conj() - eps.conj() * eps_dot
}

/// `|εε̇* - ε*ε̇ + 2i|`.
pub fn wronskian_defect(eps: Complex64, eps_dot: Complex64) -> f64 {
    (wronskian(eps, eps_dot) + 2.0 * I).norm()
}

fn check_end_time(t_end: f64) -> Result<(), ParametricError> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(ParametricError::BadEndTime(t_end));
    }
    Ok(())
}

/// Solves for `ε(t)` on `[0, t_end]`. Constant profiles use the closed
/// form; everything else goes through the adaptive integrator.
pub fn solve_epsilon(
    profile: &FrequencyProfile,
    t_end: f64,
    tol: f64,
) -> Result<EpsilonTrajectory, ParametricError> {
    check_end_time(t_end)?;
    if profile.closed_form(0.0).is_none() {
        return solve_epsilon_numeric(profile, t_end, tol);
    }
    if !(tol > 0.0) {
        return Err(OdeError::BadTolerance(tol).into());
    }
    let steps = ((t_end / CLOSED_FORM_SPACING).ceil() as usize).max(1);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut phase = 0.0;
    for k in 0..=steps {
        let t = t_end * k as f64 / steps as f64;
        let (eps, eps_dot) = profile.closed_form(t).expect("constant profile");
        phase = unwrap_phase(phase, eps);
        samples.push(EpsilonPoint {
            t,
            eps,
            eps_dot,
            phase,
        });
    }
    Ok(EpsilonTrajectory::from_samples(profile.clone(), tol, true, samples))
}

/// Always integrates numerically, even when a closed form exists.
pub fn solve_epsilon_numeric(
    profile: &FrequencyProfile,
    t_end: f64,
    tol: f64,
) -> Result<EpsilonTrajectory, ParametricError> {
    check_end_time(t_end)?;
    let sol = Dopri5::new(tol).integrate(
        rhs(profile),
        0.0,
        &[1.0, 0.0, 0.0, 1.0],
        t_end,
        &profile.breakpoints(),
    )?;
    let mut phase = 0.0;
    let samples = sol
        .t
        .iter()
        .zip(&sol.y)
        .map(|(&t, y)| {
            let eps = Complex64::new(y[0], y[1]);
            phase = unwrap_phase(phase, eps);
            EpsilonPoint {
                t,
                eps,
                eps_dot: Complex64::new(y[2], y[3]),
                phase,
            }
        })
        .collect();
    Ok(EpsilonTrajectory::from_samples(
        profile.clone(),
        tol,
        false,
        samples,
    ))
}

/// State `(Re ε, Im ε, Re ε̇, Im ε̇)`.
fn rhs(profile: &FrequencyProfile) -> impl FnMut(f64, &[f64], &mut [f64]) + '_ {
    move |t, y, dy| {
        let w2 = profile.omega_squared(t);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -w2 * y[0];
        dy[3] = -w2 * y[1];
    }
}

impl EpsilonTrajectory {
    fn from_samples(
        profile: FrequencyProfile,
        tol: f64,
        closed_form: bool,
        samples: Vec<EpsilonPoint>,
    ) -> Self {
        let wronskian_defect = samples
            .iter()
            .map(|s| wronskian_defect(s.eps, s.eps_dot))
            .fold(0.0, f64::max);
        EpsilonTrajectory {
            profile,
            tol,
            closed_form,
            samples,
            wronskian_defect,
        }
    }

    pub fn profile(&self) -> &FrequencyProfile {
        &self.profile
    }

    pub fn samples(&self) -> &[EpsilonPoint] {
        &self.samples
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map(|s| s.t).unwrap_or(0.0)
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn is_closed_form(&self) -> bool {
        self.closed_form
    }

    /// Largest `|εε̇* - ε*ε̇ + 2i|` over the stored samples.
    pub fn wronskian_defect(&self) -> f64 {
        self.wronskian_defect
    }

    /// `ε`, `ε̇` at an arbitrary time in range. Between samples of a
    /// numerical trajectory the equation is re-integrated from the
    /// preceding sample.
    pub fn at(&self, t: f64) -> Result<EpsilonPoint, ParametricError> {
        let t_end = self.t_end();
        let slack = 1e-12 * t_end.max(1.0);
        if !(t >= -slack && t <= t_end + slack) {
            return Err(ParametricError::OutOfRange { t, t_end });
        }
        let t = t.clamp(0.0, t_end);
        let j = self.samples.partition_point(|s| s.t <= t).max(1) - 1;
        let base = self.samples[j];
        if base.t == t {
            return Ok(base);
        }
        let (eps, eps_dot) = match self.profile.closed_form(t).filter(|_| self.closed_form) {
            Some(v) => v,
            None => {
                let y0 = [base.eps.re, base.eps.im, base.eps_dot.re, base.eps_dot.im];
                let sol = Dopri5::new(self.tol).integrate(
                    rhs(&self.profile),
                    base.t,
                    &y0,
                    t,
                    &self.profile.breakpoints(),
                )?;
                let y = sol.last().1;
                (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]))
            }
        };
        Ok(EpsilonPoint {
            t,
            eps,
            eps_dot,
            phase: unwrap_phase(base.phase, eps),
        })
    }
}

/// Position and momentum variances and the correlation coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Variances {
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub sigma_xp: f64,
    /// From `σ_x σ_p = ¼ / (1 - r²)`, signed like `σ_xp`.
    pub r: f64,
}

impl EpsilonPoint {
    pub fn variances(&self) -> Variances {
        let sigma_x = 0.5 * self.eps.norm_sqr();
        let sigma_p = 0.5 * self.eps_dot.norm_sqr();
        let sigma_xp = 0.5 * (self.eps.conj() * self.eps_dot).re;
        let r_abs = (1.0 - 0.25 / (sigma_x * sigma_p)).max(0.0).sqrt();
        let r = if sigma_xp < 0.0 { -r_abs } else { r_abs };
        Variances {
            sigma_x,
            sigma_p,
            sigma_xp,
            r,
        }
    }

    /// Zero-mean Gaussian state with the packet's dispersion matrix.
    /// The packet is pure, so integration error in `det M = ¼` is
    /// removed by rescaling; otherwise odd photon numbers could pick up
    /// small negative probabilities.
    pub fn gaussian_state(&self) -> GaussianState {
        let v = self.variances();
        let det = v.sigma_x * v.sigma_p - v.sigma_xp * v.sigma_xp;
        let disp = RMat::from_row_slice(2, 2, &[v.sigma_p, v.sigma_xp, v.sigma_xp, v.sigma_x])
            / (2.0 * det.sqrt());
        GaussianState::new(RVec::zeros(2), disp).expect("2x2 symmetric dispersion")
    }

    /// Vacuum probability `2 (|ε|² + |ε̇|² + 2)^{-1/2}`.
    pub fn vacuum_probability(&self) -> f64 {
        2.0 / (self.eps.norm_sqr() + self.eps_dot.norm_sqr() + 2.0).sqrt()
    }

    /// `μ = (ε* - iε̇*) / (2(ε* + iε̇*))`; `|μ| < ½`.
    pub fn squeeze_parameter(&self) -> Complex64 {
        let (e, d) = (self.eps.conj(), self.eps_dot.conj());
        (e - I * d) / ((e + I * d) * 2.0)
    }

    /// Photon-number probability of the squeezed vacuum; odd `n` give 0.
    pub fn squeezed_vacuum_pnd(&self, n: u32) -> f64 {
        if n % 2 == 1 {
            return 0.0;
        }
        let m = n / 2;
        let w0 = self.vacuum_probability();
        if m == 0 {
            return w0;
        }
        let mu2 = self.squeeze_parameter().norm_sqr();
        if mu2 == 0.0 {
            return 0.0;
        }
        let ln_binom = ln_factorial(n) - 2.0 * ln_factorial(m);
        w0 * (ln_binom + m as f64 * mu2.ln()).exp()
    }

    /// `ε^{-1/2}` on the continuous branch.
    fn inv_sqrt_eps(&self) -> Complex64 {
        Complex64::from_polar(self.eps.norm().powf(-0.5), -0.5 * self.phase)
    }

    /// `Ψ₀(x) = π^{-1/4} ε^{-1/2} exp(iε̇x² / 2ε)`.
    pub fn ground(&self, x: f64) -> Complex64 {
        let chirp = I * self.eps_dot / self.eps * (0.5 * x * x);
        self.inv_sqrt_eps() * chirp.exp() * PI.powf(-0.25)
    }

    /// Coherent packet `Ψ_α = Ψ₀ exp(-|α|²/2 - α²ε*/2ε + √2αx/ε)`.
    pub fn packet(&self, alpha: Complex64, x: f64) -> Complex64 {
        let e = -0.5 * alpha.norm_sqr() - alpha * alpha * self.eps.conj() / (self.eps * 2.0)
            + alpha * SQRT_2 * x / self.eps;
        self.ground(x) * e.exp()
    }

    /// `Ψ_m = (ε*/2ε)^{m/2} (m!)^{-1/2} Ψ₀ H_m(x/|ε|)`.
    pub fn number_state(&self, m: u32, x: f64) -> Complex64 {
        let phase = Complex64::from_polar(1.0, -(m as f64) * self.phase);
        self.ground(x) * phase * normalized_hermite(m, x / self.eps.norm())
    }

    /// Even (`cosh`) or odd (`sinh`) superposition of `Ψ_α` and `Ψ_{-α}`.
    pub fn cat(&self, alpha: Complex64, parity: Parity, x: f64) -> Result<Complex64, ParametricError> {
        let a2 = alpha.norm_sqr();
        let arg = alpha * SQRT_2 * x / self.eps;
        let (ln_norm, shape) = match parity {
            Parity::Even => (ln_cosh(a2), arg.cosh()),
            Parity::Odd => {
                if a2 == 0.0 {
                    return Err(ParametricError::ZeroAmplitudeOdd);
                }
                (ln_sinh(a2), arg.sinh())
            }
        };
        let squeeze = (-alpha * alpha * self.eps.conj() / (self.eps * 2.0)).exp();
        Ok(self.ground(x) * squeeze * shape * (-0.5 * ln_norm).exp())
    }
}

/// `H_m(u) / sqrt(2^m m!)` by the stable three-term recursion.
fn normalized_hermite(m: u32, u: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = SQRT_2 * u;
    for k in 1..m {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn variances_correlation(
    traj: &EpsilonTrajectory,
    t: f64,
) -> Result<Variances, ParametricError> {
    Ok(traj.at(t)?.variances())
}

pub fn squeezed_vacuum_pnd(
    traj: &EpsilonTrajectory,
    t: f64,
    n: u32,
) -> Result<f64, ParametricError> {
    Ok(traj.at(t)?.squeezed_vacuum_pnd(n))
}

pub fn packet_wavefunction_eval(
    traj: &EpsilonTrajectory,
    t: f64,
    alpha: Complex64,
    x: f64,
) -> Result<Complex64, ParametricError> {
    Ok(traj.at(t)?.packet(alpha, x))
}

pub fn squeezed_number_wavefunction(
    traj: &EpsilonTrajectory,
    t: f64,
    m_level: u32,
    x: f64,
) -> Result<Complex64, ParametricError> {
    Ok(traj.at(t)?.number_state(m_level, x))
}

pub fn parametric_cat_wavefunction(
    traj: &EpsilonTrajectory,
    t: f64,
    alpha: Complex64,
    parity: Parity,
    x: f64,
) -> Result<Complex64, ParametricError> {
    traj.at(t)?.cat(alpha, parity, x)
}

/// Time at which the constant profile `ω² = e^{2r}` produces a
/// zero-correlation squeeze with `|ε|² = e^{-2r}`.
pub fn zero_correlation_squeeze(r: f64) -> (FrequencyProfile, f64) {
    let kappa = r.exp();
    (
        FrequencyProfile::constant(kappa * kappa).expect("finite"),
        FRAC_PI_2 / kappa,
    )
}
