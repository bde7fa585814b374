//! Adaptive Dormand–Prince 5(4) integrator for real first-order systems.
//!
//! Step acceptance uses error-per-unit-step control: the embedded error
//! estimate of every accepted step satisfies `|err_i| <= tol * h * (1 + |y_i|)`,
//! so the accumulated error grows at most like `tol` per unit of time.
//! Steps shorter than `1e-8` switch to error-per-step control, so a jump in
//! the right-hand side is crossed with one short step whose error is at most
//! the step length times the jump height.
//! Complex systems are integrated by interleaving real and imaginary parts.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("maximum number of steps ({0}) exceeded")]
    TooManySteps(usize),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub tol: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Dopri5 {
            tol,
            h_min: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

/// Accepted steps of one integration, including the initial point.
#[derive(Debug, Clone, Default)]
pub struct Solution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl Solution {
    pub fn last(&self) -> (f64, &[f64]) {
        (*self.t.last().unwrap(), self.y.last().unwrap())
    }
}

/// Steps below this size use error-per-step control.
const JUMP_STEP: f64 = 1e-8;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

impl Dopri5 {
    /// Integrates `y' = f(t, y)` from `t0` to `t_end`, landing exactly on
    /// every breakpoint strictly inside the interval.
    pub fn integrate<F>(
        &self,
        mut f: F,
        t0: f64,
        y0: &[f64],
        t_end: f64,
        breakpoints: &[f64],
    ) -> Result<Solution, OdeError>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        if !(self.tol > 0.0) {
            return Err(OdeError::BadTolerance(self.tol));
        }
        let mut sol = Solution {
            t: vec![t0],
            y: vec![y0.to_vec()],
        };
        if t_end == t0 {
            return Ok(sol);
        }
        let dir = (t_end - t0).signum();
        let mut stops: Vec<f64> = breakpoints
            .iter()
            .cloned()
            .filter(|&b| (b - t0) * dir > 0.0 && (t_end - b) * dir > 0.0)
            .collect();
        stops.sort_by(|a, b| (a * dir).total_cmp(&(b * dir)));
        stops.push(t_end);

        let n = y0.len();
        let mut y = y0.to_vec();
        let mut t = t0;
        let mut h = dir * (0.01_f64).min((t_end - t0).abs());
        let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
        let mut tmp = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        f(t, &y, &mut k[0]);
        let mut steps = 0usize;

        for &stop in &stops {
            while (stop - t) * dir > 0.0 {
                steps += 1;
                if steps > self.max_steps {
                    return Err(OdeError::TooManySteps(self.max_steps));
                }
                let mut last = false;
                if (t + h - stop) * dir >= 0.0 {
                    h = stop - t;
                    last = true;
                }

                for i in 0..n {
                    tmp[i] = y[i] + h * A21 * k[0][i];
                }
                f(t + C2 * h, &tmp, &mut k[1]);
                for i in 0..n {
                    tmp[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
                }
                f(t + C3 * h, &tmp, &mut k[2]);
                for i in 0..n {
                    tmp[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
                }
                f(t + C4 * h, &tmp, &mut k[3]);
                for i in 0..n {
                    tmp[i] = y[i]
                        + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
                }
                f(t + C5 * h, &tmp, &mut k[4]);
                for i in 0..n {
                    tmp[i] = y[i]
                        + h * (A61 * k[0][i]
                            + A62 * k[1][i]
                            + A63 * k[2][i]
                            + A64 * k[3][i]
                            + A65 * k[4][i]);
                }
                f(t + h, &tmp, &mut k[5]);
                for i in 0..n {
                    y_new[i] = y[i]
                        + h * (A71 * k[0][i]
                            + A73 * k[2][i]
                            + A74 * k[3][i]
                            + A75 * k[4][i]
                            + A76 * k[5][i]);
                }
                f(t + h, &y_new, &mut k[6]);

                // Error per unit step keeps the global error near `tol`. At a
                // jump of the right-hand side the local error is O(h) and that
                // criterion can never be met, so tiny steps fall back to error
                // per step and the jump is crossed with one short step.
                let unit = if h.abs() < JUMP_STEP { 1.0 } else { h.abs().min(1.0) };
                let mut err = 0.0_f64;
                for i in 0..n {
                    let e = h
                        * (E1 * k[0][i]
                            + E3 * k[2][i]
                            + E4 * k[3][i]
                            + E5 * k[4][i]
                            + E6 * k[5][i]
                            + E7 * k[6][i]);
                    let sc = self.tol * unit * (1.0 + y[i].abs().max(y_new[i].abs()));
                    err = err.max(e.abs() / sc);
                }
                if !err.is_finite() {
                    if y_new.iter().any(|v| !v.is_finite()) && h.abs() <= self.h_min {
                        return Err(OdeError::NonFinite(t));
                    }
                    err = 1e10;
                }

                if err <= 1.0 {
                    t = if last { stop } else { t + h };
                    std::mem::swap(&mut y, &mut y_new);
                    k.swap(0, 6);
                    sol.t.push(t);
                    sol.y.push(y.clone());
                    let fac = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    h *= fac;
                } else {
                    h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                    if h.abs() < self.h_min {
                        return Err(OdeError::StepSizeUnderflow { t, h });
                    }
                }
            }
        }
        Ok(sol)
    }
}
