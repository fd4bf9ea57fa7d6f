//! Phonon bath: one overdamped (Drude) mode plus underdamped Brownian modes.
//!
//! The correlation function
//!
//! ```text
//! C(τ) = (1/π) ∫₀^∞ dω J(ω) [coth(βω/2) cos ωτ − i sin ωτ]
//! ```
//!
//! is assembled as a finite exponential sum `Σ_k c_k exp(−φ_k τ)` by closing
//! the contour in the lower half-plane: one term for the Drude pole, two for
//! every Brownian mode (φ± = γ/2 ± iζ) and one per Matsubara frequency
//! ν_n = 2πn/β, with every mode's contribution at ν_n merged into that term.
//! Times inside the sum are in reciprocal wavenumbers, so `c_k` is in cm⁻²
//! and `φ_k` in cm⁻¹.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{beta_cm, fs_to_inverse_cm1};

pub const DEFAULT_TEMPERATURE_K: f64 = 300.0;
pub const DEFAULT_MATSUBARA: usize = 20;

/// One Brownian mode as it appears in the phonon file; exactly one of
/// `huang_rhys` and `lambda_cm1` must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeParams {
    pub upsilon_cm1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub huang_rhys: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_cm1: Option<f64>,
    pub gamma_cm1: f64,
}

/// Phonon parameter file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhononFile {
    pub lambda0: f64,
    pub gamma0: f64,
    #[serde(rename = "temperature_K", default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default = "default_matsubara")]
    pub n_matsubara: usize,
    pub modes: Vec<ModeParams>,
}

fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE_K
}

fn default_matsubara() -> usize {
    DEFAULT_MATSUBARA
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrownianMode {
    pub upsilon: f64,
    pub lambda: f64,
    pub gamma: f64,
}

impl BrownianMode {
    /// ζ = √(υ² − γ²/4).
    pub fn zeta(&self) -> f64 {
        (self.upsilon * self.upsilon - 0.25 * self.gamma * self.gamma).sqrt()
    }
}

/// Spectral density parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    pub lambda0: f64,
    pub gamma0: f64,
    pub modes: Vec<BrownianMode>,
    pub temperature_k: f64,
    pub n_matsubara: usize,
}

impl SpectralDensity {
    pub fn from_file(file: &PhononFile) -> Result<Self> {
        let mut modes = Vec::with_capacity(file.modes.len());
        for (j, m) in file.modes.iter().enumerate() {
            let lambda = match (m.huang_rhys, m.lambda_cm1) {
                (Some(s), None) => m.upsilon_cm1 * s,
                (None, Some(l)) => l,
                (Some(_), Some(_)) => {
                    return Err(Error::config(format!(
                        "modes[{j}]: give either huang_rhys or lambda_cm1, not both"
                    )))
                }
                (None, None) => {
                    return Err(Error::config(format!("modes[{j}]: missing huang_rhys or lambda_cm1")))
                }
            };
            modes.push(BrownianMode {
                upsilon: m.upsilon_cm1,
                lambda,
                gamma: m.gamma_cm1,
            });
        }
        let sd = SpectralDensity {
            lambda0: file.lambda0,
            gamma0: file.gamma0,
            modes,
            temperature_k: file.temperature_k,
            n_matsubara: file.n_matsubara,
        };
        sd.validate()?;
        Ok(sd)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PhononFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    /// Overdamped mode with λ₀ = 37, γ₀ = 30 cm⁻¹ plus a bundled 48-mode
    /// placeholder set (50–1600 cm⁻¹, γ_j = 30 cm⁻¹). The mode list is not a
    /// fitted parameter set.
    pub fn placeholder() -> Self {
        Self::from_json(include_str!("../data/phonon_placeholder.json"))
            .expect("bundled phonon parameters are valid")
    }

    /// Only the overdamped mode.
    pub fn overdamped(lambda0: f64, gamma0: f64, temperature_k: f64, n_matsubara: usize) -> Self {
        SpectralDensity {
            lambda0,
            gamma0,
            modes: vec![],
            temperature_k,
            n_matsubara,
        }
    }

    pub fn to_file(&self) -> PhononFile {
        PhononFile {
            lambda0: self.lambda0,
            gamma0: self.gamma0,
            temperature_k: self.temperature_k,
            n_matsubara: self.n_matsubara,
            modes: self
                .modes
                .iter()
                .map(|m| ModeParams {
                    upsilon_cm1: m.upsilon,
                    huang_rhys: None,
                    lambda_cm1: Some(m.lambda),
                    gamma_cm1: m.gamma,
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: String, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive, got {v}")))
            }
        };
        if !(self.lambda0 >= 0.0 && self.lambda0.is_finite()) {
            return Err(Error::config(format!("lambda0 must be non-negative, got {}", self.lambda0)));
        }
        pos("gamma0".into(), self.gamma0)?;
        pos("temperature_K".into(), self.temperature_k)?;
        for (j, m) in self.modes.iter().enumerate() {
            pos(format!("modes[{j}].upsilon_cm1"), m.upsilon)?;
            pos(format!("modes[{j}].gamma_cm1"), m.gamma)?;
            if !(m.lambda >= 0.0 && m.lambda.is_finite()) {
                return Err(Error::config(format!("modes[{j}]: reorganization energy must be non-negative")));
            }
            if m.upsilon <= 0.5 * m.gamma {
                return Err(Error::config(format!(
                    "modes[{j}]: underdamped condition violated (upsilon_cm1={} <= gamma_cm1/2={})",
                    m.upsilon,
                    0.5 * m.gamma
                )));
            }
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        beta_cm(self.temperature_k)
    }

    /// J(ω) in cm⁻¹; odd in ω.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        let mut j = 2.0 * self.lambda0 * self.gamma0 * omega / (omega * omega + self.gamma0 * self.gamma0);
        for m in &self.modes {
            let u2 = m.upsilon * m.upsilon;
            let d = (u2 - omega * omega).powi(2) + omega * omega * m.gamma * m.gamma;
            j += 2.0 * m.lambda * u2 * m.gamma * omega / d;
        }
        j
    }

    /// J continued to complex frequency.
    pub fn spectral_density_complex(&self, omega: Complex64) -> Complex64 {
        let mut j = 2.0 * self.lambda0 * self.gamma0 * omega / (omega * omega + self.gamma0 * self.gamma0);
        for m in &self.modes {
            let u2 = m.upsilon * m.upsilon;
            let d = (u2 - omega * omega).powi(2) + omega * omega * m.gamma * m.gamma;
            j += 2.0 * m.lambda * u2 * m.gamma * omega / d;
        }
        j
    }

    pub fn correlation(&self) -> ExponentialSumCorrelation {
        ExponentialSumCorrelation::assemble(self)
    }
}

fn coth(z: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) / z.tanh()
}

/// `C(τ) = Σ_k c_k exp(−φ_k τ)` for τ ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSumCorrelation {
    pub terms: Vec<(Complex64, Complex64)>,
}

impl ExponentialSumCorrelation {
    pub fn assemble(sd: &SpectralDensity) -> Self {
        let beta = sd.beta();
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        let mut terms = Vec::with_capacity(1 + 2 * sd.modes.len() + sd.n_matsubara);

        // Drude pole at ω = −iγ₀: λγ(cot(βγ/2) − i)
        let g0 = sd.gamma0;
        let c0 = sd.lambda0 * g0 * Complex64::new(1.0 / (0.5 * beta * g0).tan(), -1.0);
        terms.push((c0, Complex64::new(g0, 0.0)));

        // Brownian poles at ω = ±ζ − iγ/2; residue of J over D'(ω).
        for m in &sd.modes {
            let zeta = m.zeta();
            let u2 = m.upsilon * m.upsilon;
            for sign in [1.0, -1.0] {
                let w0 = Complex64::new(sign * zeta, -0.5 * m.gamma);
                let dprime = -4.0 * w0 * (u2 - w0 * w0) + 2.0 * m.gamma * m.gamma * w0;
                let residue = 2.0 * m.lambda * u2 * m.gamma * w0 / dprime;
                let c = -i * residue * (one + coth(0.5 * beta * w0));
                terms.push((c, i * w0));
            }
        }

        // Matsubara poles of coth at ω = −iν_n, residue 2/β.
        for n in 1..=sd.n_matsubara {
            let nu = 2.0 * std::f64::consts::PI * n as f64 / beta;
            let c = -i * (2.0 / beta) * sd.spectral_density_complex(Complex64::new(0.0, -nu));
            terms.push((c, Complex64::new(nu, 0.0)));
        }
        ExponentialSumCorrelation { terms }
    }

    /// C at a time in reciprocal wavenumbers.
    pub fn at_internal_time(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|&(c, phi)| c * (-phi * t).exp()).sum()
    }

    /// C(τ) for τ in fs. Negative times are rejected.
    pub fn correlation_time(&self, tau_fs: f64) -> Result<Complex64> {
        if tau_fs.is_nan() || tau_fs < 0.0 {
            return Err(Error::config(format!("correlation time must be >= 0 fs, got {tau_fs}")));
        }
        Ok(self.at_internal_time(fs_to_inverse_cm1(tau_fs)))
    }

    /// Half-sided transform `∫₀^∞ dt e^{iΩt} C(t) = Σ_k c_k / (φ_k − iΩ)` in cm⁻¹.
    pub fn correlation_freq(&self, omega: f64) -> Complex64 {
        let iw = Complex64::new(0.0, omega);
        self.terms.iter().map(|&(c, phi)| c / (phi - iw)).sum()
    }

    pub fn all_decays_stable(&self) -> bool {
        self.terms.iter().all(|(_, phi)| phi.re > 0.0)
    }
}

/// C(τ) for τ in fs.
pub fn correlation_time(tau_fs: f64, sd: &SpectralDensity) -> Result<Complex64> {
    sd.correlation().correlation_time(tau_fs)
}

/// Half-sided Fourier transform of C at Ω (cm⁻¹).
pub fn correlation_freq(omega: f64, sd: &SpectralDensity) -> Complex64 {
    sd.correlation().correlation_freq(omega)
}
