//! Entangled-biphoton double-quantum-coherence spectroscopy of cavity polaritons.
//!
//! The pipeline runs bottom-up:
//!
//! 1. [`aggregate`]: site-basis exciton Hamiltonians, dipoles and phonon weights.
//! 2. [`polariton`]: cavity dressing and exact diagonalization per manifold.
//! 3. [`bath`]: spectral density and its exponential-sum correlation function.
//! 4. [`dephasing`]: state widths, pair dephasing and Green's functions.
//! 5. [`biphoton`]: joint spectral amplitudes and four-point field correlations.
//! 6. [`signal`]: pathway enumeration and the 2D frequency-domain signal.

pub mod aggregate;
pub mod bath;
pub mod biphoton;
pub mod dephasing;
pub mod linalg;
pub mod model;
pub mod polariton;
pub mod signal;
pub mod units;

mod error;

pub use error::{Error, Result};
