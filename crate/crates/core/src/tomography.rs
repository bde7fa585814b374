//! Homodyne marginals and their inversion.
//!
//! The homodyne variable is `X(Θ) = q cosΘ - p sinΘ`. Its distribution is
//! the line integral `w(X, Θ) = ∫ W(X cosΘ + v sinΘ, -X sinΘ + v cosΘ) dv / 2π`,
//! normalized to `∫ w dX = 1` under `∫ W dq dp / 2π = 1`.
//!
//! Inversion uses filtered backprojection,
//!
//! ```text
//! W(q, p) = (1/2π) ∫₀^π dΘ ∫ dX w(X, Θ) h(q cosΘ - p sinΘ - X)
//! h(u)    = ∫ dy |y| exp(-s y²/8) e^{iyu}
//! ```
//!
//! where the Gaussian apodization with `s = reg_s` keeps the ramp filter
//! bounded; the exact inverse is the `s → 0` limit. The symplectic variant
//! works with `X = μq + νp + δ` and inverts through the characteristic
//! function, `W(q, p) = (1/2π) ∫ dμ dν ∫ dX w(X, μ, ν) e^{i(X - μq - νp)}`.

use std::f64::consts::PI;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::GaussianState;
use crate::grid::{GridError, UniformGrid};

/// Minimum number of projection angles for reconstruction.
pub const MIN_ANGLES: usize = 32;
/// Boundary-to-peak ratio above which a grid is rejected as too small.
pub const SUPPORT_RATIO: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum TomographyError {
    #[error("forward marginal in closed form needs a single-mode state, got {0} modes")]
    NotSingleMode(usize),
    #[error("grid does not cover the support: boundary/peak = {ratio:e} > 1e-8")]
    InsufficientSupport { ratio: f64 },
    #[error("{found} angles given, at least {needed} required")]
    TooFewAngles { found: usize, needed: usize },
    #[error("angles must be uniformly spaced on [0, π)")]
    NonUniformAngles,
    #[error("regularization must be positive, got {0}")]
    BadRegularization(f64),
    #[error("degenerate direction (μ, ν) = (0, 0)")]
    DegenerateDirection,
    #[error("(μ, ν) directions cover too few distinct angles: {found} < {needed}")]
    InsufficientCoverage { found: usize, needed: usize },
    #[error("data shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed data in {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> TomographyError + '_ {
    move |source| TomographyError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Marginal of a Gaussian state along one direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianMarginal {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianMarginal {
    pub fn density(&self, x: f64) -> f64 {
        let d = x - self.mean;
        (-0.5 * d * d / self.variance).exp() / (2.0 * PI * self.variance).sqrt()
    }
}

/// Closed-form marginal of `X = q cosΘ - p sinΘ` for a single-mode state.
pub fn forward_marginal_gaussian(
    state: &GaussianState,
    theta: f64,
) -> Result<GaussianMarginal, TomographyError> {
    if state.n_modes() != 1 {
        return Err(TomographyError::NotSingleMode(state.n_modes()));
    }
    let (s, c) = theta.sin_cos();
    let m = state.disp();
    let (sp, sq, spq) = (m[(0, 0)], m[(1, 1)], m[(0, 1)]);
    Ok(GaussianMarginal {
        mean: state.mean_q(0) * c - state.mean_p(0) * s,
        variance: sq * c * c + sp * s * s - 2.0 * spq * s * c,
    })
}

/// `W(q, p)` sampled on a product grid; `values[i * ps.n + j] = W(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub qs: UniformGrid,
    pub ps: UniformGrid,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct WignerGridMeta {
    kind: String,
    q: UniformGrid,
    p: UniformGrid,
}

impl WignerGrid {
    pub fn from_fn<F>(qs: UniformGrid, ps: UniformGrid, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let pv = ps.points();
        let values = (0..qs.n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let q = qs.at(i);
                pv.iter().map(move |&p| (q, p)).collect::<Vec<_>>()
            })
            .map(|(q, p)| f(q, p))
            .collect();
        WignerGrid { qs, ps, values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ps.n + j]
    }

    /// `∫ W dq dp / 2π` by the trapezoid rule.
    pub fn normalization(&self) -> f64 {
        let rows: Vec<f64> = (0..self.qs.n)
            .map(|i| self.ps.trapezoid(&self.values[i * self.ps.n..(i + 1) * self.ps.n]))
            .collect();
        self.qs.trapezoid(&rows) / (2.0 * PI)
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }

    /// Largest `|W|` on the grid boundary relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let (nq, np) = (self.qs.n, self.ps.n);
        let mut b = 0.0_f64;
        for i in 0..nq {
            b = b.max(self.get(i, 0).abs()).max(self.get(i, np - 1).abs());
        }
        for j in 0..np {
            b = b.max(self.get(0, j).abs()).max(self.get(nq - 1, j).abs());
        }
        b / self.peak()
    }

    /// Bicubic (Catmull-Rom) interpolation; zero outside the grid.
    pub fn interpolate(&self, q: f64, p: f64) -> f64 {
        let (hq, hp) = (self.qs.step(), self.ps.step());
        let u = (q - self.qs.min) / hq;
        let v = (p - self.ps.min) / hp;
        if !(u >= 0.0 && v >= 0.0 && u <= (self.qs.n - 1) as f64 && v <= (self.ps.n - 1) as f64) {
            return 0.0;
        }
        let (i0, j0) = (u.floor() as isize, v.floor() as isize);
        let (fu, fv) = (u - i0 as f64, v - j0 as f64);
        let wu = catmull_rom(fu);
        let wv = catmull_rom(fv);
        let mut acc = 0.0;
        for (a, wa) in wu.iter().enumerate() {
            let i = i0 - 1 + a as isize;
            if i < 0 || i >= self.qs.n as isize {
                continue;
            }
            for (b, wb) in wv.iter().enumerate() {
                let j = j0 - 1 + b as isize;
                if j < 0 || j >= self.ps.n as isize {
                    continue;
                }
                acc += wa * wb * self.get(i as usize, j as usize);
            }
        }
        acc
    }

    /// Largest `|a - b|` over the shared grid.
    pub fn max_abs_diff(&self, other: &WignerGrid) -> Result<f64, TomographyError> {
        if self.qs != other.qs || self.ps != other.ps {
            return Err(TomographyError::Shape("grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// CSV `q,p,W` plus a `.json` sidecar with the grid description.
    pub fn write_csv(&self, path: &Path) -> Result<(), TomographyError> {
        let mut out = String::from("q,p,W\n");
        for i in 0..self.qs.n {
            for j in 0..self.ps.n {
                push_row(&mut out, [self.qs.at(i), self.ps.at(j), self.get(i, j)]);
            }
        }
        fs::write(path, out).map_err(io_err(path))?;
        let meta = WignerGridMeta {
            kind: "wigner_grid".into(),
            q: self.qs,
            p: self.ps,
        };
        write_sidecar(path, &meta)
    }

    pub fn read_csv(path: &Path) -> Result<Self, TomographyError> {
        let meta: WignerGridMeta = read_sidecar(path)?;
        let rows = read_rows(path, 3)?;
        if rows.len() != meta.q.n * meta.p.n {
            return Err(TomographyError::Parse {
                path: path.into(),
                message: format!("expected {} rows, found {}", meta.q.n * meta.p.n, rows.len()),
            });
        }
        Ok(WignerGrid {
            qs: meta.q,
            ps: meta.p,
            values: rows.iter().map(|r| r[2]).collect(),
        })
    }
}

fn catmull_rom(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

/// Marginals `w(X, Θ)` on an angle list and a uniform `X` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    pub thetas: Vec<f64>,
    pub xs: UniformGrid,
    /// One slice per angle.
    pub values: Vec<Vec<f64>>,
    /// `|1 - ∫ w dX|` of each slice before renormalization.
    pub slice_defects: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SinogramMeta {
    kind: String,
    theta: Vec<f64>,
    x: UniformGrid,
    slice_defects: Vec<f64>,
}

impl Sinogram {
    /// Builds slices from a density per angle, renormalizing each slice to
    /// unit mass and recording the defect.
    pub fn from_slices(thetas: Vec<f64>, xs: UniformGrid, mut values: Vec<Vec<f64>>) -> Self {
        let slice_defects = values
            .iter_mut()
            .map(|slice| {
                let mass = xs.trapezoid(slice);
                if mass > 0.0 {
                    slice.iter_mut().for_each(|v| *v /= mass);
                }
                (1.0 - mass).abs()
            })
            .collect();
        Sinogram {
            thetas,
            xs,
            values,
            slice_defects,
        }
    }

    pub fn max_slice_defect(&self) -> f64 {
        self.slice_defects.iter().cloned().fold(0.0, f64::max)
    }

    /// Equally spaced angles `kπ/K`, `k = 0..K`.
    pub fn uniform_angles(count: usize) -> Vec<f64> {
        (0..count).map(|k| PI * k as f64 / count as f64).collect()
    }

    /// CSV `theta,X,w` plus a `.json` sidecar.
    pub fn write_csv(&self, path: &Path) -> Result<(), TomographyError> {
        let mut out = String::from("theta,X,w\n");
        for (theta, slice) in self.thetas.iter().zip(&self.values) {
            for (i, w) in slice.iter().enumerate() {
                push_row(&mut out, [*theta, self.xs.at(i), *w]);
            }
        }
        fs::write(path, out).map_err(io_err(path))?;
        let meta = SinogramMeta {
            kind: "sinogram".into(),
            theta: self.thetas.clone(),
            x: self.xs,
            slice_defects: self.slice_defects.clone(),
        };
        write_sidecar(path, &meta)
    }

    pub fn read_csv(path: &Path) -> Result<Self, TomographyError> {
        let meta: SinogramMeta = read_sidecar(path)?;
        let rows = read_rows(path, 3)?;
        let n = meta.x.n;
        if rows.len() != meta.theta.len() * n {
            return Err(TomographyError::Parse {
                path: path.into(),
                message: format!("expected {} rows, found {}", meta.theta.len() * n, rows.len()),
            });
        }
        let values = rows.chunks(n).map(|c| c.iter().map(|r| r[2]).collect()).collect();
        Ok(Sinogram {
            thetas: meta.theta,
            xs: meta.x,
            values,
            slice_defects: meta.slice_defects,
        })
    }
}

/// Appends one CSV row in shortest round-trip form.
fn push_row(out: &mut String, row: [f64; 3]) {
    let mut buf = ryu::Buffer::new();
    for (k, v) in row.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(buf.format(*v));
    }
    out.push('\n');
}

fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn write_sidecar<T: Serialize>(path: &Path, meta: &T) -> Result<(), TomographyError> {
    let side = sidecar_path(path);
    let mut f = fs::File::create(&side).map_err(io_err(&side))?;
    let text = serde_json::to_string_pretty(meta).expect("metadata serializes");
    writeln!(f, "{text}").map_err(io_err(&side))
}

fn read_sidecar<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, TomographyError> {
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side).map_err(io_err(&side))?;
    serde_json::from_str(&text).map_err(|e| TomographyError::Parse {
        path: side,
        message: e.to_string(),
    })
}

fn read_rows(path: &Path, cols: usize) -> Result<Vec<Vec<f64>>, TomographyError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(k, line)| {
            let row: Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse()).collect();
            match row {
                Ok(r) if r.len() == cols => Ok(r),
                _ => Err(TomographyError::Parse {
                    path: path.into(),
                    message: format!("line {}: expected {cols} numbers", k + 2),
                }),
            }
        })
        .collect()
}

/// Closed-form sinogram of a single-mode Gaussian state.
pub fn sinogram_gaussian(
    state: &GaussianState,
    thetas: &[f64],
    xs: UniformGrid,
) -> Result<Sinogram, TomographyError> {
    let pts = xs.points();
    let values = thetas
        .iter()
        .map(|&th| {
            let m = forward_marginal_gaussian(state, th)?;
            Ok(pts.iter().map(|&x| m.density(x)).collect())
        })
        .collect::<Result<Vec<Vec<f64>>, TomographyError>>()?;
    Ok(Sinogram::from_slices(thetas.to_vec(), xs, values))
}

/// Sinogram of an arbitrary Wigner function by trapezoid line integrals
/// over `v ∈ [-v_half_width, v_half_width]` with `n_v` points.
pub fn sinogram_from_fn<F>(
    wigner: F,
    thetas: &[f64],
    xs: UniformGrid,
    v_half_width: f64,
    n_v: usize,
) -> Result<Sinogram, TomographyError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let vs = UniformGrid::symmetric(v_half_width, n_v)?;
    let values = thetas
        .par_iter()
        .map(|&th| line_integrals(&wigner, th, &xs, &vs))
        .collect();
    Ok(Sinogram::from_slices(thetas.to_vec(), xs, values))
}

fn line_integrals<F: Fn(f64, f64) -> f64>(
    wigner: &F,
    theta: f64,
    xs: &UniformGrid,
    vs: &UniformGrid,
) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    let vpts = vs.points();
    let mut buf = vec![0.0; vpts.len()];
    (0..xs.n)
        .map(|i| {
            let x = xs.at(i);
            for (b, &v) in buf.iter_mut().zip(&vpts) {
                *b = wigner(x * c + v * s, -x * s + v * c);
            }
            vs.trapezoid(&buf) / (2.0 * PI)
        })
        .collect()
}

/// Marginals of a gridded Wigner function (bicubic interpolation along
/// each line). The grid must cover the support.
pub fn forward_marginal_numeric(
    w: &WignerGrid,
    thetas: &[f64],
    xs: UniformGrid,
) -> Result<Sinogram, TomographyError> {
    let ratio = w.boundary_ratio();
    if ratio > SUPPORT_RATIO {
        return Err(TomographyError::InsufficientSupport { ratio });
    }
    let reach = w
        .qs
        .min
        .abs()
        .max(w.qs.max.abs())
        .hypot(w.ps.min.abs().max(w.ps.max.abs()));
    let h = 0.5 * w.qs.step().min(w.ps.step());
    let n_v = 2 * (reach / h).ceil() as usize + 1;
    sinogram_from_fn(|q, p| w.interpolate(q, p), thetas, xs, reach, n_v)
}

/// Distribution of `X = μq + νp + δ` on the grid `xs`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMarginal {
    pub mu: f64,
    pub nu: f64,
    pub delta: f64,
    pub xs: UniformGrid,
    pub values: Vec<f64>,
}

fn direction(mu: f64, nu: f64) -> Result<(f64, f64), TomographyError> {
    let k = mu.hypot(nu);
    if !(k > 0.0) {
        return Err(TomographyError::DegenerateDirection);
    }
    // (μ, ν) = k (cosΘ, -sinΘ)
    Ok((k, (-nu).atan2(mu)))
}

/// Line-integral marginal of `X = μq + νp + δ`:
/// `w(X) = w_Θ((X - δ)/k) / k` with `k = |(μ, ν)|`.
pub fn symplectic_marginal(
    w: &WignerGrid,
    mu: f64,
    nu: f64,
    delta: f64,
    xs: UniformGrid,
) -> Result<SymplecticMarginal, TomographyError> {
    let (k, theta) = direction(mu, nu)?;
    let ratio = w.boundary_ratio();
    if ratio > SUPPORT_RATIO {
        return Err(TomographyError::InsufficientSupport { ratio });
    }
    let reach = w
        .qs
        .min
        .abs()
        .max(w.qs.max.abs())
        .hypot(w.ps.min.abs().max(w.ps.max.abs()));
    let h = 0.5 * w.qs.step().min(w.ps.step());
    let vs = UniformGrid::symmetric(reach, 2 * (reach / h).ceil() as usize + 1)?;
    let (s, c) = theta.sin_cos();
    let vpts = vs.points();
    let values = xs
        .points()
        .par_iter()
        .map(|&x| {
            let xr = (x - delta) / k;
            let line: Vec<f64> = vpts
                .iter()
                .map(|&v| w.interpolate(xr * c + v * s, -xr * s + v * c))
                .collect();
            vs.trapezoid(&line) / (2.0 * PI * k)
        })
        .collect();
    Ok(SymplecticMarginal {
        mu,
        nu,
        delta,
        xs,
        values,
    })
}

fn check_angles(thetas: &[f64]) -> Result<f64, TomographyError> {
    if thetas.len() < MIN_ANGLES {
        return Err(TomographyError::TooFewAngles {
            found: thetas.len(),
            needed: MIN_ANGLES,
        });
    }
    let d = PI / thetas.len() as f64;
    let off = thetas[0];
    let uniform = thetas
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - off - k as f64 * d).abs() < 1e-9 && (0.0..PI).contains(&t));
    if !uniform {
        return Err(TomographyError::NonUniformAngles);
    }
    Ok(d)
}

/// Upsampling factor of the filtered projections before backprojection.
const UPSAMPLE: usize = 8;

/// Ramp-filtered projection sampled at spacing `dx / UPSAMPLE`.
fn filter_projection(
    slice: &[f64],
    dx: f64,
    reg_s: f64,
    planner: &mut FftPlanner<f64>,
) -> Vec<f64> {
    let n = slice.len();
    let len = (2 * n).next_power_of_two();
    // band-limited ramp kernel: h_0 = π²/dx², h_odd = -4/(k dx)², h_even = 0
    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    for (m, slot) in kernel.iter_mut().enumerate() {
        let k = if m <= len / 2 { m as i64 } else { m as i64 - len as i64 };
        let v = if k == 0 {
            PI * PI / (dx * dx)
        } else if k % 2 != 0 {
            -4.0 / ((k as f64) * dx).powi(2)
        } else {
            0.0
        };
        *slot = Complex64::new(v, 0.0);
    }
    let mut data: Vec<Complex64> = slice
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(len)
        .collect();
    let fwd = planner.plan_fft_forward(len);
    fwd.process(&mut kernel);
    fwd.process(&mut data);
    let big = len * UPSAMPLE;
    let mut spec = vec![Complex64::new(0.0, 0.0); big];
    for m in 0..len {
        let k = if m <= len / 2 { m as i64 } else { m as i64 - len as i64 };
        let y = 2.0 * PI * k as f64 / (len as f64 * dx);
        let v = data[m] * kernel[m] * (-reg_s * y * y / 8.0).exp();
        if m == len / 2 {
            spec[m] += v * 0.5;
            spec[big - len / 2] += v * 0.5;
        } else if m < len / 2 {
            spec[m] = v;
        } else {
            spec[big - (len - m)] = v;
        }
    }
    planner.plan_fft_inverse(big).process(&mut spec);
    // convolution carries dx, the inverse transform 1/len
    let scale = dx / len as f64;
    spec.iter()
        .take((n - 1) * UPSAMPLE + 1)
        .map(|v| v.re * scale)
        .collect()
}

/// Filtered backprojection onto the grid `qs × ps`.
pub fn inverse_radon(
    sino: &Sinogram,
    qs: UniformGrid,
    ps: UniformGrid,
    reg_s: f64,
) -> Result<WignerGrid, TomographyError> {
    if !(reg_s > 0.0) {
        return Err(TomographyError::BadRegularization(reg_s));
    }
    let d_theta = check_angles(&sino.thetas)?;
    if sino.values.len() != sino.thetas.len()
        || sino.values.iter().any(|s| s.len() != sino.xs.n)
    {
        return Err(TomographyError::Shape(
            "sinogram slices do not match the grids".into(),
        ));
    }
    let dx = sino.xs.step();
    let filtered: Vec<Vec<f64>> = sino
        .values
        .par_iter()
        .map_init(FftPlanner::new, |planner, slice| {
            filter_projection(slice, dx, reg_s, planner)
        })
        .collect();
    let trig: Vec<(f64, f64)> = sino.thetas.iter().map(|t| t.sin_cos()).collect();
    let fine = dx / UPSAMPLE as f64;
    let x0 = sino.xs.min;
    let weight = d_theta / (2.0 * PI);
    Ok(WignerGrid::from_fn(qs, ps, |q, p| {
        let mut acc = 0.0;
        for (g, &(s, c)) in filtered.iter().zip(&trig) {
            let u = (q * c - p * s - x0) / fine;
            if u < 0.0 || u > (g.len() - 1) as f64 {
                continue;
            }
            let i = (u.floor() as usize).min(g.len() - 2);
            let f = u - i as f64;
            acc += g[i] * (1.0 - f) + g[i + 1] * f;
        }
        acc * weight
    }))
}

/// Marginals `w(X, μ, ν)` (with `δ = 0`) for a set of directions.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalFamily {
    pub directions: Vec<(f64, f64)>,
    pub xs: UniformGrid,
    pub values: Vec<Vec<f64>>,
}

impl MarginalFamily {
    /// Unit directions `(cosΘ, -sinΘ)` read off a sinogram.
    pub fn from_sinogram(s: &Sinogram) -> Self {
        MarginalFamily {
            directions: s.thetas.iter().map(|t| (t.cos(), -t.sin())).collect(),
            xs: s.xs,
            values: s.values.clone(),
        }
    }
}

/// Characteristic-function inversion of a marginal family.
///
/// For each direction `k(cosΘ, -sinΘ)` the characteristic function
/// `χ_Θ(r) = ∫ w(X) e^{irX/k} dX` is tabulated on `r ∈ [-r_max, r_max]`;
/// then `W(q, p) = (1/2π) Σ_Θ ΔΘ Σ_r Δr |r| e^{-s r²/8} χ_Θ(r) e^{-ir(q cosΘ - p sinΘ)}`.
#[derive(Debug, Clone)]
pub struct SymplecticInverter {
    trig: Vec<(f64, f64)>,
    rs: Vec<f64>,
    /// `|r| Δr ΔΘ e^{-s r²/8} χ_Θ(r) / 2π`, one row per direction.
    weighted: Vec<Vec<Complex64>>,
}

impl SymplecticInverter {
    pub fn new(
        family: &MarginalFamily,
        r_max: f64,
        n_r: usize,
        reg_s: f64,
    ) -> Result<Self, TomographyError> {
        if !(reg_s > 0.0) {
            return Err(TomographyError::BadRegularization(reg_s));
        }
        let mut angles = Vec::with_capacity(family.directions.len());
        let mut scales = Vec::with_capacity(family.directions.len());
        for &(mu, nu) in &family.directions {
            let (k, theta) = direction(mu, nu)?;
            scales.push(k);
            angles.push(theta.rem_euclid(PI));
        }
        let mut distinct = angles.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        if distinct.len() < MIN_ANGLES {
            return Err(TomographyError::InsufficientCoverage {
                found: distinct.len(),
                needed: MIN_ANGLES,
            });
        }
        let d_theta = PI / distinct.len() as f64;
        let rgrid = UniformGrid::symmetric(r_max, n_r)?;
        let dr = rgrid.step();
        let rs = rgrid.points();
        let xs = family.xs.points();
        let weighted = family
            .directions
            .par_iter()
            .zip(&family.values)
            .zip(&scales)
            .map(|((&(mu, nu), slice), &k)| {
                // flip (μ, ν) → (-μ, -ν) onto Θ ∈ [0, π): χ(-r) = χ(r)*
                let (_, theta) = direction(mu, nu).expect("checked above");
                let flip = theta.rem_euclid(2.0 * PI) >= PI;
                rs.iter()
                    .map(|&r| {
                        let rr = if flip { -r } else { r };
                        let mut chi = Complex64::new(0.0, 0.0);
                        let mut edge = Complex64::new(0.0, 0.0);
                        for (i, (&x, &w)) in xs.iter().zip(slice).enumerate() {
                            let term = Complex64::from_polar(w, rr * x / k);
                            chi += term;
                            if i == 0 || i + 1 == xs.len() {
                                edge += term;
                            }
                        }
                        let chi = (chi - edge * 0.5) * family.xs.step();
                        chi * (r.abs() * dr * d_theta * (-reg_s * r * r / 8.0).exp() / (2.0 * PI))
                    })
                    .collect()
            })
            .collect();
        let trig = angles.iter().map(|t| t.sin_cos()).collect();
        Ok(SymplecticInverter { trig, rs, weighted })
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        let mut acc = 0.0;
        for (row, &(s, c)) in self.weighted.iter().zip(&self.trig) {
            let x = q * c - p * s;
            for (w, &r) in row.iter().zip(&self.rs) {
                acc += (w * Complex64::from_polar(1.0, -r * x)).re;
            }
        }
        acc
    }

    pub fn grid(&self, qs: UniformGrid, ps: UniformGrid) -> WignerGrid {
        WignerGrid::from_fn(qs, ps, |q, p| self.eval(q, p))
    }
}

/// Single-point evaluation of the symplectic inversion.
pub fn wigner_from_symplectic(
    family: &MarginalFamily,
    q: f64,
    p: f64,
    r_max: f64,
    n_r: usize,
    reg_s: f64,
) -> Result<f64, TomographyError> {
    Ok(SymplecticInverter::new(family, r_max, n_r, reg_s)?.eval(q, p))
}
