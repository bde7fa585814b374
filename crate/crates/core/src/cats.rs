//! Multimode even and odd coherent states `|A±⟩ = N±(|A⟩ ± |-A⟩)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{PndOptions, PndTable, Truncation};
use crate::hermite::{ln_factorial, MultiIndex};
use crate::linalg::{CMat, RMat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatError {
    #[error("odd cat state requires |A|² > 0")]
    ZeroAmplitudeOdd,
    #[error("even cat with A = 0 has no odd partner")]
    ZeroAmplitudeLadder,
    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cat state needs at least one mode")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    fn matches(self, total: u32) -> bool {
        (total % 2 == 0) == (self == Parity::Even)
    }
}

/// `ln cosh x` without overflow.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `ln sinh x` for `x > 0` without overflow.
pub fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatState {
    alpha: Vec<Complex64>,
    parity: Parity,
}

/// JSON form `{ "A": [[re, im], ...], "parity": "even" | "odd" }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatStateDoc {
    #[serde(rename = "A")]
    pub amplitudes: Vec<[f64; 2]>,
    pub parity: Parity,
}

/// Moments of a cat state. Indices run over modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CatMoments {
    /// `⟨a_i a_k⟩ = α_i α_k`.
    pub aa: CMat,
    /// `⟨½(a_i†a_k + a_k a_i†)⟩`.
    pub sym_adag_a: CMat,
    pub mean_n: Vec<f64>,
    /// Raw `⟨n_i n_k⟩`.
    pub second_moments: RMat,
    /// `⟨n_i n_k⟩ - ⟨n_i⟩⟨n_k⟩`.
    pub number_covariance: RMat,
    /// `Var(n_i)/⟨n_i⟩ - 1`; `None` for an empty mode.
    pub mandel_q: Vec<Option<f64>>,
}

impl CatState {
    pub fn new(alpha: Vec<Complex64>, parity: Parity) -> Result<Self, CatError> {
        if alpha.is_empty() {
            return Err(CatError::Empty);
        }
        let s = CatState { alpha, parity };
        if parity == Parity::Odd && s.norm2() == 0.0 {
            return Err(CatError::ZeroAmplitudeOdd);
        }
        Ok(s)
    }

    pub fn even(alpha: Vec<Complex64>) -> Result<Self, CatError> {
        Self::new(alpha, Parity::Even)
    }

    pub fn odd(alpha: Vec<Complex64>) -> Result<Self, CatError> {
        Self::new(alpha, Parity::Odd)
    }

    pub fn from_doc(doc: &CatStateDoc) -> Result<Self, CatError> {
        Self::new(
            doc.amplitudes
                .iter()
                .map(|a| Complex64::new(a[0], a[1]))
                .collect(),
            doc.parity,
        )
    }

    pub fn to_doc(&self) -> CatStateDoc {
        CatStateDoc {
            amplitudes: self.alpha.iter().map(|a| [a.re, a.im]).collect(),
            parity: self.parity,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n_modes(&self) -> usize {
        self.alpha.len()
    }

    /// `|A|² = Σ |α_i|²`.
    pub fn norm2(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `ln cosh |A|²` or `ln sinh |A|²`.
    fn ln_partition(&self) -> f64 {
        match self.parity {
            Parity::Even => ln_cosh(self.norm2()),
            Parity::Odd => ln_sinh(self.norm2()),
        }
    }

    /// `tanh |A|²` (even) or `coth |A|²` (odd).
    fn occupation_factor(&self) -> f64 {
        let x = self.norm2();
        match self.parity {
            Parity::Even => x.tanh(),
            Parity::Odd => 1.0 / x.tanh(),
        }
    }

    /// `N± = e^{|A|²/2} / (2 sqrt(cosh |A|²))`, `sinh` for odd states.
    pub fn normalization(&self) -> f64 {
        (0.5 * self.norm2() - 0.5 * self.ln_partition()).exp() / 2.0
    }

    /// Probability of the photon numbers `n`.
    pub fn pnd(&self, n: &MultiIndex) -> Result<f64, CatError> {
        if n.len() != self.n_modes() {
            return Err(CatError::DimensionMismatch(format!(
                "index has length {}, state has {} modes",
                n.len(),
                self.n_modes()
            )));
        }
        if !self.parity.matches(n.total_degree()) {
            return Ok(0.0);
        }
        let mut ln_p = -self.ln_partition();
        for (a, &k) in self.alpha.iter().zip(n.entries()) {
            if k == 0 {
                continue;
            }
            let a2 = a.norm_sqr();
            if a2 == 0.0 {
                return Ok(0.0);
            }
            ln_p += k as f64 * a2.ln() - ln_factorial(k);
        }
        Ok(ln_p.exp())
    }

    /// Distribution enumerated by total photon number, skipping totals of
    /// the wrong parity, until the mass reaches `1 - mass_tol`.
    pub fn pnd_table(&self, opts: &PndOptions) -> PndTable {
        let mut entries = Vec::new();
        let mut mass = 0.0;
        let mut truncation = Truncation::DegreeCap;
        let mut reached = 0;
        for total in 0..=opts.max_total {
            reached = total;
            if !self.parity.matches(total) {
                continue;
            }
            for n in MultiIndex::of_total_degree(self.n_modes(), total) {
                let p = self.pnd(&n).expect("index length matches");
                mass += p;
                entries.push((n, p));
            }
            if mass >= 1.0 - opts.mass_tol {
                truncation = Truncation::MassReached;
                break;
            }
        }
        PndTable {
            entries,
            mass,
            max_total: reached,
            truncation,
        }
    }

    /// `a_i |A±⟩ = α_i sqrt(tanh |A|²) |A∓⟩` (`coth` for odd input).
    pub fn ladder_apply(&self, i: usize) -> Result<(Complex64, CatState), CatError> {
        if i >= self.n_modes() {
            return Err(CatError::ModeOutOfRange {
                index: i,
                n_modes: self.n_modes(),
            });
        }
        if self.norm2() == 0.0 {
            return Err(CatError::ZeroAmplitudeLadder);
        }
        let factor = self.alpha[i] * self.occupation_factor().sqrt();
        let flipped = CatState {
            alpha: self.alpha.clone(),
            parity: self.parity.flipped(),
        };
        Ok((factor, flipped))
    }

    pub fn moments(&self) -> CatMoments {
        let n = self.n_modes();
        let f = self.occupation_factor();
        let a2: Vec<f64> = self.alpha.iter().map(|a| a.norm_sqr()).collect();
        let mean_n: Vec<f64> = a2.iter().map(|x| x * f).collect();
        let aa = CMat::from_fn(n, n, |i, k| self.alpha[i] * self.alpha[k]);
        let sym_adag_a = CMat::from_fn(n, n, |i, k| {
            let d = if i == k { 0.5 } else { 0.0 };
            self.alpha[i].conj() * self.alpha[k] * f + d
        });
        let second_moments = RMat::from_fn(n, n, |i, k| {
            a2[i] * a2[k] + if i == k { mean_n[i] } else { 0.0 }
        });
        let number_covariance =
            RMat::from_fn(n, n, |i, k| second_moments[(i, k)] - mean_n[i] * mean_n[k]);
        let mandel_q = (0..n)
            .map(|i| {
                (mean_n[i] > 0.0).then(|| number_covariance[(i, i)] / mean_n[i] - 1.0)
            })
            .collect();
        CatMoments {
            aa,
            sym_adag_a,
            mean_n,
            second_moments,
            number_covariance,
            mandel_q,
        }
    }

    /// `Q(B) = 4N² e^{-(|A|² + |B|²)} |cosh(A·B*)|²` (`sinh` for odd).
    pub fn q_function(&self, beta: &[Complex64]) -> Result<f64, CatError> {
        self.check_len(beta.len())?;
        let z: Complex64 = self
            .alpha
            .iter()
            .zip(beta)
            .map(|(a, b)| a * b.conj())
            .sum();
        let b2: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
        // |cosh z|² = (cosh 2x + cos 2y)/2, |sinh z|² = (cosh 2x - cos 2y)/2
        let hyper = 0.5 * ((2.0 * z.re).cosh() + self.parity.sign() * (2.0 * z.im).cos());
        Ok((hyper.ln() - b2 - self.ln_partition()).exp())
    }

    /// Wigner function at `(q, p)`, normalized to `∫ W dΓ / (2π)^N = 1`.
    pub fn wigner(&self, q: &[f64], p: &[f64]) -> Result<f64, CatError> {
        self.check_len(q.len())?;
        self.check_len(p.len())?;
        let z: Vec<Complex64> = q
            .iter()
            .zip(p)
            .map(|(&q, &p)| Complex64::new(q, p) * std::f64::consts::FRAC_1_SQRT_2)
            .collect();
        let minus: Vec<Complex64> = self.alpha.iter().map(|a| -a).collect();
        let s = self.parity.sign();
        let total = kernel(&self.alpha, &self.alpha, &z)
            + kernel(&self.alpha, &minus, &z) * s
            + kernel(&minus, &self.alpha, &z) * s
            + kernel(&minus, &minus, &z);
        Ok(self.normalization().powi(2) * total.re)
    }

    fn check_len(&self, len: usize) -> Result<(), CatError> {
        if len != self.n_modes() {
            return Err(CatError::DimensionMismatch(format!(
                "argument has length {len}, state has {} modes",
                self.n_modes()
            )));
        }
        Ok(())
    }
}

/// Wigner function of `|A⟩⟨B|`:
/// `2^N exp(-2Z·Z* + 2A·Z* + 2B*·Z - A·B* - |A|²/2 - |B|²/2)`.
fn kernel(a: &[Complex64], b: &[Complex64], z: &[Complex64]) -> Complex64 {
    let mut e = Complex64::new(0.0, 0.0);
    for ((a, b), z) in a.iter().zip(b).zip(z) {
        e += -2.0 * z.norm_sqr() + 2.0 * a * z.conj() + 2.0 * b.conj() * z
            - a * b.conj()
            - 0.5 * a.norm_sqr()
            - 0.5 * b.norm_sqr();
    }
    e.exp() * 2f64.powi(a.len() as i32)
}

impl Serialize for CatState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CatState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = CatStateDoc::deserialize(d)?;
        CatState::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalization_examples() {
        assert!((CatState::even(vec![c(0.0, 0.0)]).unwrap().normalization() - 0.5).abs() < 1e-16);
        let s = CatState::even(vec![c(1.0, 0.0)]).unwrap();
        let expected = 0.5f64.exp() / (2.0 * 1f64.cosh().sqrt());
        assert!((s.normalization() - expected).abs() < 1e-15);
        assert!((s.normalization() - 0.6636).abs() < 1e-4);
        assert_eq!(CatState::odd(vec![c(0.0, 0.0)]), Err(CatError::ZeroAmplitudeOdd));
    }

    #[test]
    fn ln_hyperbolics_match_direct() {
        for x in [1e-3, 0.5, 3.0, 20.0] {
            assert!((ln_cosh(x) - x.cosh().ln()).abs() < 1e-14);
            assert!((ln_sinh(x) - x.sinh().ln()).abs() < 1e-13);
        }
        assert!(ln_cosh(1000.0).is_finite());
    }

    #[test]
    fn parity_selection_and_two_mode_vacuum_term() {
        let a = c(0.5f64.sqrt(), 0.0);
        let s = CatState::even(vec![a, a]).unwrap();
        assert_eq!(s.pnd(&MultiIndex::new(vec![1, 0])).unwrap(), 0.0);
        let p0 = s.pnd(&MultiIndex::zeros(2)).unwrap();
        assert!((p0 - 1.0 / 1f64.cosh()).abs() < 1e-15);
        assert!((p0 - 0.6481).abs() < 1e-4);
    }

    #[test]
    fn ladder_twice_gives_alpha_squared() {
        let s = CatState::even(vec![c(0.3, 0.4), c(-0.2, 0.1)]).unwrap();
        let (f1, odd) = s.ladder_apply(0).unwrap();
        let (f2, back) = odd.ladder_apply(0).unwrap();
        assert_eq!(back.parity(), Parity::Even);
        let a = s.amplitudes()[0];
        assert!((f1 * f2 - a * a).norm() < 1e-15);
        assert!(CatState::even(vec![c(0.0, 0.0)]).unwrap().ladder_apply(0).is_err());
        assert!(s.ladder_apply(2).is_err());
    }

    #[test]
    fn single_mode_means() {
        let e = CatState::even(vec![c(1.0, 0.0)]).unwrap().moments();
        assert!((e.mean_n[0] - 1f64.tanh()).abs() < 1e-15);
        let o = CatState::odd(vec![c(1e-4, 0.0)]).unwrap().moments();
        assert!((o.mean_n[0] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn q_function_values() {
        let o = CatState::odd(vec![c(0.7, 0.2)]).unwrap();
        assert_eq!(o.q_function(&[c(0.0, 0.0)]).unwrap(), 0.0);
        let e = CatState::even(vec![c(1.0, 0.0)]).unwrap();
        let v = e.q_function(&[c(0.0, 0.0)]).unwrap();
        assert!((v - 1.0 / 1f64.cosh()).abs() < 1e-15);
    }

    #[test]
    fn wigner_limits_and_sign() {
        let e = CatState::even(vec![c(0.0, 0.0)]).unwrap();
        let w = e.wigner(&[0.3], &[-0.4]).unwrap();
        assert!((w - 2.0 * (-(0.09f64 + 0.16)).exp()).abs() < 1e-14);
        let o = CatState::odd(vec![c(1.5, 0.0)]).unwrap();
        assert!(o.wigner(&[0.0], &[0.0]).unwrap() < 0.0);
        // odd cat at the origin is exactly -2 (one-photon-like interference)
        assert!((o.wigner(&[0.0], &[0.0]).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let s: CatState = serde_json::from_str(r#"{"A":[[1.0,0.5]],"parity":"odd"}"#).unwrap();
        assert_eq!(s.parity(), Parity::Odd);
        assert_eq!(s.amplitudes()[0], c(1.0, 0.5));
        assert!(serde_json::from_str::<CatState>(r#"{"A":[[0,0]],"parity":"odd"}"#).is_err());
    }
}
