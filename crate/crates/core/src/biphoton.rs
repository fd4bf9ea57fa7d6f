//! Entangled photon pairs, classical pulse pairs and the Schmidt analysis of
//! their joint spectral amplitude.
//!
//! All frequencies are in cm⁻¹ and all times in fs; phases go through
//! [`RAD_PER_FS_PER_CM1`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::units::RAD_PER_FS_PER_CM1;

/// `sin x / x`, continuous through zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// SPDC photon pair from a Gaussian pump.
///
/// The phase-matching argument of the two arms is measured from
/// `center_a`/`center_b`, which are both `omega_p / 2` for a degenerate
/// source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiphotonSource {
    pub omega_p: f64,
    pub tau_p: f64,
    pub t1: f64,
    pub t2: f64,
    pub center_a: f64,
    pub center_b: f64,
    #[serde(default = "one")]
    pub amplitude_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl BiphotonSource {
    /// Degenerate source with `T1 = −T_ent/2`, `T2 = +T_ent/2`.
    pub fn new(omega_p: f64, tau_p: f64, t_ent: f64) -> Self {
        BiphotonSource {
            omega_p,
            tau_p,
            t1: -0.5 * t_ent,
            t2: 0.5 * t_ent,
            center_a: 0.5 * omega_p,
            center_b: 0.5 * omega_p,
            amplitude_scale: 1.0,
        }
    }

    /// Non-degenerate arms centered at `omega_a` and `omega_b`, pumped at
    /// their sum.
    pub fn with_arms(omega_a: f64, omega_b: f64, tau_p: f64, t_ent: f64) -> Self {
        BiphotonSource {
            center_a: omega_a,
            center_b: omega_b,
            ..BiphotonSource::new(omega_a + omega_b, tau_p, t_ent)
        }
    }

    pub fn t_ent(&self) -> f64 {
        self.t2 - self.t1
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.omega_p, self.tau_p, self.t1, self.t2, self.center_a, self.center_b, self.amplitude_scale];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("biphoton source: non-finite parameter"));
        }
        if self.tau_p <= 0.0 {
            return Err(Error::config(format!("biphoton source: tau_p must be positive, got {}", self.tau_p)));
        }
        Ok(())
    }

    /// Pump envelope `A0(ω_a, ω_b)`.
    pub fn envelope(&self, omega_a: f64, omega_b: f64) -> f64 {
        let x = (omega_a + omega_b - self.omega_p) * RAD_PER_FS_PER_CM1 * self.tau_p;
        self.amplitude_scale * (-0.5 * x * x).exp()
    }

    /// Phase-matching argument with arm `a` at `x` and arm `b` at `y`.
    pub fn phase_matching(&self, x: f64, y: f64) -> f64 {
        ((x - self.center_a) * self.t1 + (y - self.center_b) * self.t2) * RAD_PER_FS_PER_CM1
    }

    /// Standard deviations of the amplitude along the sum and difference
    /// directions.
    pub fn bandwidths(&self) -> (f64, f64) {
        let sum = 1.0 / (self.tau_p * RAD_PER_FS_PER_CM1);
        let t = self.t_ent().abs().max(self.t1.abs()).max(self.t2.abs());
        let diff = if t > 0.0 { std::f64::consts::PI / (t * RAD_PER_FS_PER_CM1) } else { sum };
        (sum, diff)
    }
}

/// Joint spectral amplitude `F1(ω_a, ω_b)`.
pub fn jsa(omega_a: f64, omega_b: f64, src: &BiphotonSource) -> Complex64 {
    let branch = |phi: f64| Complex64::from_polar(sinc(phi), phi);
    let ab = src.phase_matching(omega_a, omega_b);
    let ba = src.phase_matching(omega_b, omega_a);
    (branch(ab) + branch(ba)) * src.envelope(omega_a, omega_b)
}

/// Two transform-limited Gaussian pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalPulsePair {
    pub omega_1: f64,
    pub omega_2: f64,
    pub tau_g: f64,
}

impl ClassicalPulsePair {
    pub fn validate(&self) -> Result<()> {
        if ![self.omega_1, self.omega_2, self.tau_g].iter().all(|x| x.is_finite()) || self.tau_g <= 0.0 {
            return Err(Error::config(format!(
                "classical pulse pair: need finite centers and tau_g > 0, got tau_g = {}",
                self.tau_g
            )));
        }
        Ok(())
    }

    fn pulse(&self, omega: f64, center: f64) -> f64 {
        let x = (omega - center) * RAD_PER_FS_PER_CM1 * self.tau_g;
        (-0.5 * x * x).exp()
    }

    /// `A1(ω_first) A2(ω_second)`.
    pub fn amplitude(&self, first: f64, second: f64) -> f64 {
        self.pulse(first, self.omega_1) * self.pulse(second, self.omega_2)
    }

    pub fn bandwidth(&self) -> f64 {
        1.0 / (self.tau_g * RAD_PER_FS_PER_CM1)
    }
}

/// The light driving the four-point correlation `⟨E4† E3† E2 E1⟩`.
///
/// `excitation` supplies the first two interactions, `projection` the last
/// two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSource {
    Biphoton {
        excitation: BiphotonSource,
        projection: BiphotonSource,
    },
    Classical {
        excitation: ClassicalPulsePair,
        projection: ClassicalPulsePair,
    },
    /// Unit field at every frequency.
    Flat,
}

impl FieldSource {
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSource::Biphoton { excitation, projection } => {
                excitation.validate()?;
                projection.validate()
            }
            FieldSource::Classical { excitation, projection } => {
                excitation.validate()?;
                projection.validate()
            }
            FieldSource::Flat => Ok(()),
        }
    }

    /// Pair amplitude of the first two interactions, `E2(w2) E1(w1)`.
    pub fn excitation_factor(&self, w2: f64, w1: f64) -> Complex64 {
        match self {
            FieldSource::Biphoton { excitation, .. } => jsa(w2, w1, excitation),
            FieldSource::Classical { excitation, .. } => Complex64::new(excitation.amplitude(w1, w2), 0.0),
            FieldSource::Flat => Complex64::new(1.0, 0.0),
        }
    }

    /// Pair amplitude of the last two interactions before conjugation,
    /// so that the four-point value is `conj(projection) · excitation`.
    pub fn projection_factor(&self, w4: f64, w3: f64) -> Complex64 {
        match self {
            FieldSource::Biphoton { projection, .. } => jsa(w4, w3, projection),
            FieldSource::Classical { projection, .. } => Complex64::new(projection.amplitude(w3, w4), 0.0),
            FieldSource::Flat => Complex64::new(1.0, 0.0),
        }
    }
}

/// `⟨E4†(w4) E3†(w3) E2(w2) E1(w1)⟩`.
pub fn four_point_correlation(w4: f64, w3: f64, w2: f64, w1: f64, source: &FieldSource) -> Complex64 {
    source.projection_factor(w4, w3).conj() * source.excitation_factor(w2, w1)
}

/// Uniform grid of a joint spectral amplitude; rows index `ω_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralGrid {
    pub omega_a: Vec<f64>,
    pub omega_b: Vec<f64>,
    pub amplitude: CMatrix,
}

pub const DEFAULT_SVD_GRID: usize = 256;
pub const DEFAULT_SVD_TRUNCATION: usize = 50;

/// `n` points spread evenly over `center ± half_width`.
pub fn uniform_axis(center: f64, half_width: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![center];
    }
    let h = 2.0 * half_width / (n - 1) as f64;
    (0..n).map(|i| center - half_width + i as f64 * h).collect()
}

impl JointSpectralGrid {
    pub fn tabulate<F>(omega_a: Vec<f64>, omega_b: Vec<f64>, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let rows: Vec<Vec<Complex64>> = omega_a
            .par_iter()
            .map(|&x| omega_b.iter().map(|&y| f(x, y)).collect())
            .collect();
        let amplitude = CMatrix::from_fn(omega_a.len(), omega_b.len(), |i, j| rows[i][j]);
        JointSpectralGrid { omega_a, omega_b, amplitude }
    }

    /// `n × n` grid over three standard deviations of the wider of the sum
    /// and difference bandwidths around each arm center.
    pub fn biphoton(src: &BiphotonSource, n: usize) -> Self {
        let (s, d) = src.bandwidths();
        let half = 3.0 * s.max(d);
        let a = uniform_axis(src.center_a, half, n);
        let b = uniform_axis(src.center_b, half, n);
        Self::tabulate(a, b, |x, y| jsa(x, y, src))
    }

    pub fn classical(pair: &ClassicalPulsePair, n: usize) -> Self {
        let half = 3.0 * pair.bandwidth();
        let a = uniform_axis(pair.omega_1, half, n);
        let b = uniform_axis(pair.omega_2, half, n);
        Self::tabulate(a, b, |x, y| Complex64::new(pair.amplitude(x, y), 0.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    /// Normalized so that the squares of the untruncated sequence sum to 1.
    pub sigma: Vec<f64>,
    pub participation: f64,
}

/// Singular values of the amplitude matrix, normalized to `Σσ² = 1`,
/// truncated after `n_svd` values, with participation `K = 1/Σσ⁴` from the
/// full sequence.
pub fn schmidt_svd(grid: &JointSpectralGrid, n_svd: usize) -> Result<SchmidtSpectrum> {
    if grid.amplitude.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("joint spectral amplitude has non-finite entries".into()));
    }
    let sv = grid.amplitude.clone().singular_values();
    let norm2: f64 = sv.iter().map(|s| s * s).sum();
    if norm2 == 0.0 {
        return Err(Error::Numeric("joint spectral amplitude vanishes on the whole grid".into()));
    }
    let mut sigma: Vec<f64> = sv.iter().map(|s| s / norm2.sqrt()).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    let participation = 1.0 / sigma.iter().map(|s| s.powi(4)).sum::<f64>();
    sigma.truncate(n_svd);
    Ok(SchmidtSpectrum { sigma, participation })
}

/// Real-valued convenience view of `|F1|`.
pub fn magnitude(grid: &JointSpectralGrid) -> DMatrix<f64> {
    grid.amplitude.map(|z| z.norm())
}
