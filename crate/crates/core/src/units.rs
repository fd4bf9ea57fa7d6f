//! Unit conventions.
//!
//! Energies and frequencies are carried in wavenumbers (cm⁻¹) everywhere and
//! times in femtoseconds. Phases are formed as `ω[cm⁻¹] · t[fs] · RAD_PER_FS_PER_CM1`.

/// Speed of light in cm/fs.
pub const SPEED_OF_LIGHT_CM_PER_FS: f64 = 2.997_924_58e-5;

/// Angular frequency in rad/fs corresponding to 1 cm⁻¹ (2πc).
pub const RAD_PER_FS_PER_CM1: f64 = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT_CM_PER_FS;

/// Boltzmann constant in cm⁻¹/K.
pub const BOLTZMANN_CM1_PER_K: f64 = 0.695_034_800_4;

/// Dimensionless phase accumulated by a frequency over a time.
#[inline]
pub fn phase(omega_cm1: f64, t_fs: f64) -> f64 {
    omega_cm1 * t_fs * RAD_PER_FS_PER_CM1
}

/// Converts a time in fs into the reciprocal-wavenumber time unit used by the
/// bath exponential sums (so that `φ[cm⁻¹] · t` is dimensionless).
#[inline]
pub fn fs_to_inverse_cm1(t_fs: f64) -> f64 {
    t_fs * RAD_PER_FS_PER_CM1
}

/// Inverse temperature β = 1/(k_B T) in cm.
pub fn beta_cm(temperature_k: f64) -> f64 {
    1.0 / (BOLTZMANN_CM1_PER_K * temperature_k)
}
