//! Conversion between physical and dimensionless oscillator units.
//!
//! The library works with `ħ = m = ω = 1`. A physical position `x` maps to
//! `q = x / ℓ` with `ℓ = sqrt(ħ / mω)` and a momentum `P` to `p = P / (ħ/ℓ)`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorUnits {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl Default for OscillatorUnits {
    fn default() -> Self {
        OscillatorUnits {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        }
    }
}

impl OscillatorUnits {
    pub fn new(hbar: f64, mass: f64, omega: f64) -> Self {
        OscillatorUnits { hbar, mass, omega }
    }

    /// `ℓ = sqrt(ħ / mω)`.
    pub fn length(&self) -> f64 {
        (self.hbar / (self.mass * self.omega)).sqrt()
    }

    /// `ħ / ℓ = sqrt(ħ m ω)`.
    pub fn momentum(&self) -> f64 {
        (self.hbar * self.mass * self.omega).sqrt()
    }

    pub fn time(&self) -> f64 {
        1.0 / self.omega
    }

    pub fn energy(&self) -> f64 {
        self.hbar * self.omega
    }

    /// Physical `(x, P)` to dimensionless `(q, p)`.
    pub fn to_dimensionless(&self, x: f64, momentum: f64) -> (f64, f64) {
        (x / self.length(), momentum / self.momentum())
    }

    pub fn to_physical(&self, q: f64, p: f64) -> (f64, f64) {
        (q * self.length(), p * self.momentum())
    }

    /// Position variance of a dimensionless state in physical units.
    pub fn position_variance(&self, sigma_q: f64) -> f64 {
        sigma_q * self.length().powi(2)
    }

    pub fn momentum_variance(&self, sigma_p: f64) -> f64 {
        sigma_p * self.momentum().powi(2)
    }

    /// Dimensionless temperature `k_B T / ħω` given `k_B T` in energy units.
    pub fn reduced_temperature(&self, kt: f64) -> f64 {
        kt / self.energy()
    }
}
