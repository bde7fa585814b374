//! Dispatch of a parsed job to the library modules.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cats::CatState;
use crate::dynamics::{evolve_gaussian, integrate_symplectic_flow};
use crate::gaussian::{GaussianState, PndTable};
use crate::grid::UniformGrid;
use crate::parametric::{solve_epsilon, FrequencyProfile};
use crate::tomography::{
    forward_marginal_numeric, inverse_radon, sinogram_from_fn, sinogram_gaussian, MarginalFamily,
    Sinogram, SymplecticInverter, WignerGrid,
};
use crate::verify::run_suite;

use super::config::{InversionMethod, JobConfig, StateSpec};
use super::output::{fmt_f64, meta_document, ArtifactSet, CsvTable, PlotKind, Writer};
use super::{CliError, Command};

/// Result of a job that ran to completion. `success` is false only for a
/// `verify` run with failing checks.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutcome {
    pub artifacts: ArtifactSet,
    pub summary: Value,
    pub success: bool,
}

enum Loaded {
    Gaussian(GaussianState),
    Cat(CatState),
}

fn err(module: &'static str, operation: &'static str) -> impl Fn(&dyn std::fmt::Display) -> CliError {
    move |e| CliError::new(module, operation, e)
}

fn load_state(spec: &StateSpec, tol: f64) -> Result<Loaded, CliError> {
    let g = |e: crate::gaussian::GaussianError| CliError::new("gaussian", "load_state", e);
    Ok(match spec {
        StateSpec::Vacuum { n_modes } => Loaded::Gaussian(GaussianState::vacuum(*n_modes)),
        StateSpec::Coherent { alpha } => {
            let a: Vec<Complex64> = alpha.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            Loaded::Gaussian(GaussianState::coherent(&a))
        }
        StateSpec::Squeezed { r } => Loaded::Gaussian(GaussianState::squeezed_vacuum(*r)),
        StateSpec::Thermal { temperature, omega } => {
            Loaded::Gaussian(GaussianState::thermal_oscillator(*temperature, *omega).map_err(g)?)
        }
        StateSpec::Gaussian(doc) => Loaded::Gaussian(GaussianState::from_doc(doc).map_err(g)?),
        StateSpec::Parametric { profile, t } => {
            let p = |e: crate::parametric::ParametricError| {
                CliError::new("parametric", "solve_epsilon", e)
            };
            let profile = FrequencyProfile::try_from(profile.clone()).map_err(p)?;
            let point = solve_epsilon(&profile, *t, tol).map_err(p)?.at(*t).map_err(p)?;
            Loaded::Gaussian(point.gaussian_state())
        }
        StateSpec::Cat(doc) => Loaded::Cat(
            CatState::from_doc(doc).map_err(|e| CliError::new("cats", "load_state", e))?,
        ),
    })
}

fn single_mode_gaussian(st: GaussianState, mode: usize, op: &str) -> Result<GaussianState, CliError> {
    if st.n_modes() == 1 && mode == 0 {
        return Ok(st);
    }
    st.reduced(mode).map_err(|e| CliError::new("gaussian", op, e))
}

fn single_mode_cat(cat: &CatState, op: &str) -> Result<(), CliError> {
    if cat.n_modes() != 1 {
        return Err(CliError::new(
            "cats",
            op,
            format!("phase-space grids need a single-mode cat, got {} modes", cat.n_modes()),
        ));
    }
    Ok(())
}

fn required<'a, T>(v: &'a Option<T>, field: &str) -> Result<&'a T, CliError> {
    v.as_ref()
        .ok_or_else(|| CliError::new("cli", "execute_job", format!("missing field `{field}`")))
}

fn grids(cfg: &JobConfig) -> Result<(UniformGrid, UniformGrid), CliError> {
    let g = required(&cfg.grid, "grid")?;
    Ok((g.q.resolve("grid.q")?, g.p.resolve("grid.p")?))
}

fn pnd_csv(table: &PndTable, n_modes: usize) -> CsvTable {
    let mut header: Vec<String> = (1..=n_modes).map(|i| format!("n_{i}")).collect();
    header.push("P".into());
    let mut csv = CsvTable::new(header);
    for (idx, p) in &table.entries {
        let mut row: Vec<String> = idx.entries().iter().map(u32::to_string).collect();
        row.push(fmt_f64(*p));
        csv.push_cells(row);
    }
    csv
}

fn pnd_summary(table: &PndTable) -> Value {
    json!({
        "mass": table.mass,
        "max_total": table.max_total,
        "truncation": table.truncation,
        "cap_hit": table.cap_hit(),
        "entries": table.entries.len(),
    })
}

fn wigner_grid_summary(w: &WignerGrid) -> Value {
    let min = w.values.iter().cloned().fold(f64::INFINITY, f64::min);
    json!({
        "peak_abs": w.peak(),
        "min": min,
        "normalization": w.normalization(),
        "boundary_ratio": w.boundary_ratio(),
    })
}

/// Runs one job and writes its artifacts into `out_dir`.
pub fn execute_job(cfg: &JobConfig, base_dir: &Path, out_dir: &Path) -> Result<JobOutcome, CliError> {
    let mut w = Writer::new(out_dir)?;
    let stem = cfg.stem();
    let csv_name = format!("{stem}.csv");
    let tol = cfg.tolerance;
    let mut success = true;
    let mut tolerances = json!({ "tolerance": tol });

    let summary = match cfg.command {
        Command::Pnd => {
            let state = load_state(required(&cfg.state, "state")?, tol)?;
            let (table, n) = match &state {
                Loaded::Gaussian(s) => (
                    s.photon_distribution(&cfg.pnd)
                        .map_err(|e| CliError::new("gaussian", "photon_pnd", e))?,
                    s.n_modes(),
                ),
                Loaded::Cat(c) => (c.pnd_table(&cfg.pnd), c.n_modes()),
            };
            tolerances["pnd"] = json!(cfg.pnd);
            let csv = pnd_csv(&table, n);
            w.table(&csv_name, &csv)?;
            if cfg.plot {
                w.plot(&csv_name, &csv.header, &PlotKind::Bars, "photon-number distribution")?;
            }
            pnd_summary(&table)
        }
        Command::Wigner => {
            let (qs, ps) = grids(cfg)?;
            let grid = match load_state(required(&cfg.state, "state")?, tol)? {
                Loaded::Gaussian(s) => {
                    let s = single_mode_gaussian(s, cfg.mode, "wigner")?;
                    WignerGrid::from_fn(qs, ps, |q, p| s.wigner_qp(q, p).unwrap_or(f64::NAN))
                }
                Loaded::Cat(c) => {
                    single_mode_cat(&c, "wigner")?;
                    WignerGrid::from_fn(qs, ps, |q, p| c.wigner(&[q], &[p]).unwrap_or(f64::NAN))
                }
            };
            write_wigner_grid(&mut w, &grid, &csv_name, cfg.plot, "Wigner function")?;
            wigner_grid_summary(&grid)
        }
        Command::Qfunc => {
            let (qs, ps) = grids(cfg)?;
            let beta = |q: f64, p: f64| Complex64::new(q, p) * FRAC_1_SQRT_2;
            let grid = match load_state(required(&cfg.state, "state")?, tol)? {
                Loaded::Gaussian(s) => {
                    let s = single_mode_gaussian(s, cfg.mode, "q_function")?;
                    let rep = s.to_qrep().map_err(|e| CliError::new("gaussian", "to_qrep", e))?;
                    WignerGrid::from_fn(qs, ps, |q, p| rep.eval(&[beta(q, p)]).unwrap_or(f64::NAN))
                }
                Loaded::Cat(c) => {
                    single_mode_cat(&c, "q_function")?;
                    WignerGrid::from_fn(qs, ps, |q, p| c.q_function(&[beta(q, p)]).unwrap_or(f64::NAN))
                }
            };
            let mut csv = CsvTable::new(["q", "p", "Q"]);
            for i in 0..qs.n {
                for j in 0..ps.n {
                    csv.push([qs.at(i), ps.at(j), grid.get(i, j)]);
                }
            }
            w.table(&csv_name, &csv)?;
            if cfg.plot {
                w.plot(&csv_name, &csv.header, &PlotKind::Surface, "Husimi Q function")?;
            }
            json!({
                "max": grid.peak(),
                "normalization": grid.normalization(),
                "beta": "(q + i p)/sqrt(2)",
            })
        }
        Command::Evolve => {
            let state = match load_state(required(&cfg.state, "state")?, tol)? {
                Loaded::Gaussian(s) => s,
                Loaded::Cat(_) => {
                    return Err(CliError::new("dynamics", "evolve", "evolve takes a Gaussian state"))
                }
            };
            let d = err("dynamics", "evolve");
            let h = required(&cfg.hamiltonian, "hamiltonian")?.build().map_err(|e| d(&e))?;
            if h.n_modes() != state.n_modes() {
                return Err(CliError::new(
                    "dynamics",
                    "evolve",
                    format!("hamiltonian has {} modes, state has {}", h.n_modes(), state.n_modes()),
                ));
            }
            let times = required(&cfg.times, "times")?.resolve("times")?;
            if times.min < 0.0 {
                return Err(CliError::new("dynamics", "evolve", "times must be nonnegative"));
            }
            let flow = integrate_symplectic_flow(&h, times.max, tol).map_err(|e| d(&e))?;
            let n = state.n_modes();
            let mut header = vec!["t".to_string()];
            header.extend((1..=n).map(|i| format!("p_{i}")));
            header.extend((1..=n).map(|i| format!("q_{i}")));
            let dim = 2 * n;
            for i in 0..dim {
                for j in i..dim {
                    header.push(format!("M_{}_{}", i + 1, j + 1));
                }
            }
            header.push("purity".into());
            header.push("symplectic_defect".into());
            let mut csv = CsvTable::new(header);
            let purity0 = state.purity();
            let mut drift = 0.0_f64;
            let mut last = state.clone();
            for t in times.points() {
                let sample = flow.at(t).map_err(|e| d(&e))?;
                let st = evolve_gaussian(&state, &flow, t).map_err(|e| d(&e))?;
                let mut row = vec![t];
                row.extend(st.mean().iter());
                let m = st.disp();
                for i in 0..dim {
                    for j in i..dim {
                        row.push(m[(i, j)]);
                    }
                }
                row.push(st.purity());
                row.push(sample.symplectic_defect());
                drift = drift.max((st.purity() - purity0).abs());
                csv.push(row);
                last = st;
            }
            w.table(&csv_name, &csv)?;
            if cfg.plot {
                let y_cols = (2..2 + dim).collect();
                w.plot(&csv_name, &csv.header, &PlotKind::Lines { x_col: 1, y_cols }, "quadrature means")?;
            }
            json!({
                "max_symplectic_defect": flow.max_symplectic_defect(),
                "purity_drift": drift,
                "final_state": last.to_doc(),
            })
        }
        Command::Epsilon => {
            let p = err("parametric", "solve_epsilon");
            let profile = FrequencyProfile::try_from(required(&cfg.profile, "profile")?.clone())
                .map_err(|e| p(&e))?;
            let times = required(&cfg.times, "times")?.resolve("times")?;
            if times.min < 0.0 {
                return Err(CliError::new("parametric", "solve_epsilon", "times must be nonnegative"));
            }
            let traj = solve_epsilon(&profile, times.max, tol).map_err(|e| p(&e))?;
            let mut csv = CsvTable::new([
                "t", "eps_re", "eps_im", "eps_dot_re", "eps_dot_im", "phase", "sigma_x", "sigma_p",
                "sigma_xp", "r", "P0", "wronskian_defect",
            ]);
            let mut worst = 0.0_f64;
            for t in times.points() {
                let pt = traj.at(t).map_err(|e| p(&e))?;
                let v = pt.variances();
                let wd = crate::parametric::wronskian_defect(pt.eps, pt.eps_dot);
                worst = worst.max(wd);
                csv.push([
                    t,
                    pt.eps.re,
                    pt.eps.im,
                    pt.eps_dot.re,
                    pt.eps_dot.im,
                    pt.phase,
                    v.sigma_x,
                    v.sigma_p,
                    v.sigma_xp,
                    v.r,
                    pt.vacuum_probability(),
                    wd,
                ]);
            }
            w.table(&csv_name, &csv)?;
            if cfg.plot {
                w.plot(
                    &csv_name,
                    &csv.header,
                    &PlotKind::Lines { x_col: 1, y_cols: vec![2, 3] },
                    "epsilon(t)",
                )?;
            }
            json!({
                "closed_form": traj.is_closed_form(),
                "max_wronskian_defect": worst,
            })
        }
        Command::Cat => {
            let cat = match load_state(required(&cfg.state, "state")?, tol)? {
                Loaded::Cat(c) => c,
                Loaded::Gaussian(_) => {
                    return Err(CliError::new("cats", "cat", "state must be of kind `cat`"))
                }
            };
            let table = cat.pnd_table(&cfg.pnd);
            tolerances["pnd"] = json!(cfg.pnd);
            let csv = pnd_csv(&table, cat.n_modes());
            w.table(&csv_name, &csv)?;
            if cfg.plot {
                w.plot(&csv_name, &csv.header, &PlotKind::Bars, "cat photon-number distribution")?;
            }
            let mom = cat.moments();
            let mut mcsv = CsvTable::new(["mode", "mean_n", "variance", "mandel_q"]);
            for i in 0..cat.n_modes() {
                mcsv.push_cells(vec![
                    (i + 1).to_string(),
                    fmt_f64(mom.mean_n[i]),
                    fmt_f64(mom.number_covariance[(i, i)]),
                    mom.mandel_q[i].map(fmt_f64).unwrap_or_default(),
                ]);
            }
            w.table(&format!("{stem}_moments.csv"), &mcsv)?;
            let mut summary = pnd_summary(&table);
            summary["mean_n"] = json!(mom.mean_n);
            summary["mandel_q"] = json!(mom.mandel_q);
            if cfg.grid.is_some() {
                single_mode_cat(&cat, "wigner")?;
                let (qs, ps) = grids(cfg)?;
                let grid = WignerGrid::from_fn(qs, ps, |q, p| cat.wigner(&[q], &[p]).unwrap_or(f64::NAN));
                write_wigner_grid(&mut w, &grid, &format!("{stem}_wigner.csv"), cfg.plot, "cat Wigner function")?;
                summary["wigner"] = wigner_grid_summary(&grid);
            }
            summary
        }
        Command::TomoForward => {
            let spec = cfg.tomography();
            let xs = required(&spec.x, "tomography.x")?.resolve("tomography.x")?;
            let thetas = Sinogram::uniform_angles(spec.angles);
            let t = err("tomography", "forward_marginal");
            let sino = match (&cfg.input, &cfg.state) {
                (Some(input), _) => {
                    let grid = WignerGrid::read_csv(&base_dir.join(input)).map_err(|e| t(&e))?;
                    forward_marginal_numeric(&grid, &thetas, xs).map_err(|e| t(&e))?
                }
                (None, Some(spec_state)) => match load_state(spec_state, tol)? {
                    Loaded::Gaussian(s) => {
                        let s = single_mode_gaussian(s, cfg.mode, "forward_marginal")?;
                        sinogram_gaussian(&s, &thetas, xs).map_err(|e| t(&e))?
                    }
                    Loaded::Cat(c) => {
                        single_mode_cat(&c, "forward_marginal")?;
                        sinogram_from_fn(
                            |q, p| c.wigner(&[q], &[p]).unwrap_or(f64::NAN),
                            &thetas,
                            xs,
                            spec.v_half_width,
                            spec.n_v,
                        )
                        .map_err(|e| t(&e))?
                    }
                },
                (None, None) => return Err(CliError::new("cli", "execute_job", "missing field `state`")),
            };
            sino.write_csv(&w.path(&csv_name)).map_err(|e| t(&e))?;
            w.record(&csv_name);
            w.record(&format!("{stem}.json"));
            if cfg.plot {
                let header = vec!["theta".to_string(), "X".to_string(), "w".to_string()];
                w.plot(&csv_name, &header, &PlotKind::Surface, "homodyne marginals")?;
            }
            json!({
                "angles": spec.angles,
                "max_slice_defect": sino.max_slice_defect(),
            })
        }
        Command::TomoInvert => {
            let spec = cfg.tomography();
            tolerances["reg_s"] = json!(spec.reg_s);
            let t = err("tomography", "inverse_radon");
            let input = required(&cfg.input, "input")?;
            let sino = Sinogram::read_csv(&base_dir.join(input)).map_err(|e| t(&e))?;
            let (qs, ps) = grids(cfg)?;
            let grid = match spec.method {
                InversionMethod::Fbp => inverse_radon(&sino, qs, ps, spec.reg_s).map_err(|e| t(&e))?,
                InversionMethod::Symplectic => {
                    let family = MarginalFamily::from_sinogram(&sino);
                    SymplecticInverter::new(&family, spec.r_max, spec.n_r, spec.reg_s)
                        .map_err(|e| CliError::new("tomography", "wigner_from_symplectic", e))?
                        .grid(qs, ps)
                }
            };
            write_wigner_grid(&mut w, &grid, &csv_name, cfg.plot, "reconstructed Wigner function")?;
            let mut summary = wigner_grid_summary(&grid);
            if let Some(state) = &cfg.state {
                let exact = match load_state(state, tol)? {
                    Loaded::Gaussian(s) => {
                        let s = single_mode_gaussian(s, cfg.mode, "inverse_radon")?;
                        WignerGrid::from_fn(qs, ps, |q, p| s.wigner_qp(q, p).unwrap_or(f64::NAN))
                    }
                    Loaded::Cat(c) => {
                        single_mode_cat(&c, "inverse_radon")?;
                        WignerGrid::from_fn(qs, ps, |q, p| c.wigner(&[q], &[p]).unwrap_or(f64::NAN))
                    }
                };
                let e = grid.max_abs_diff(&exact).map_err(|e| t(&e))?;
                summary["reference_linf_error"] = json!(e);
                summary["reference_relative_error"] = json!(e / exact.peak());
            }
            summary
        }
        Command::Verify => {
            let report = run_suite();
            success = report.pass;
            w.json(&format!("{stem}.json"), &serde_json::to_value(&report).expect("serializes"))?;
            json!({ "pass": report.pass, "checks": report.checks.len() })
        }
    };

    let config = serde_json::to_value(cfg).expect("config serializes");
    let meta_name = format!("{stem}.meta.json");
    let mut files = w.artifacts.files.clone();
    files.push(meta_name.clone().into());
    let meta = meta_document(&config, tolerances, summary.clone(), &files);
    w.json(&meta_name, &meta)?;
    Ok(JobOutcome {
        artifacts: w.artifacts,
        summary,
        success,
    })
}

fn write_wigner_grid(
    w: &mut Writer<'_>,
    grid: &WignerGrid,
    csv_name: &str,
    plot: bool,
    title: &str,
) -> Result<(), CliError> {
    grid.write_csv(&w.path(csv_name))
        .map_err(|e| CliError::new("tomography", "write_csv", e))?;
    w.record(csv_name);
    w.record(&format!("{}.json", csv_name.trim_end_matches(".csv")));
    if plot {
        let header = vec!["q".to_string(), "p".to_string(), "W".to_string()];
        w.plot(csv_name, &header, &PlotKind::Surface, title)?;
    }
    Ok(())
}
