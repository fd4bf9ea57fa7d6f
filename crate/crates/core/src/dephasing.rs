//! Phonon-induced widths of polariton states and inter-manifold coherences.
//!
//! Every basis state `s` of a manifold carries its own bath with coupling
//! weight `w_s`. In the Markovian, secular limit the width of eigenstate `a`
//! is
//!
//! ```text
//! γ_a = Σ_b Re C(E_a − E_b) Σ_s w_s² |T_sa|² |T_sb|²
//! ```
//!
//! which includes the pure-dephasing term `b = a`. Coherences between two
//! states take the mean of the two state widths.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bath::ExponentialSumCorrelation;
use crate::error::{Error, Result};
use crate::polariton::{Manifold, PolaritonEigensystem, PolaritonOperators};

/// Where the phonon weights enter the four-fold overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CouplingWeighting {
    /// `Σ_s w_s² |T_sa|² |T_sb|²`.
    #[default]
    InsideOverlap,
    /// `(Σ_s w_s |T_sa|²)(Σ_s w_s |T_sb|²) Σ_s |T_sa|² |T_sb|²`.
    OutsideOverlap,
}

/// How a coherence width is formed from the two state widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRule {
    Mean,
    /// Same width for every coherence.
    Uniform(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateRef {
    pub manifold: usize,
    pub index: usize,
}

impl StateRef {
    pub fn new(manifold: usize, index: usize) -> Self {
        StateRef { manifold, index }
    }
}

/// Line-broadening rates of one manifold (cm⁻¹).
///
/// Negative totals (possible only through a truncated bath) are clamped to
/// zero with a warning.
pub fn line_broadening_rates(
    manifold: &Manifold,
    weights: &DVector<f64>,
    correlation: &ExponentialSumCorrelation,
    weighting: CouplingWeighting,
) -> Result<Vec<f64>> {
    let dim = manifold.dim();
    let t = &manifold.transform;
    if t.nrows() != weights.len() || t.ncols() != dim {
        return Err(Error::Dimension(format!(
            "manifold transform is {}x{} but there are {} weights and {dim} states",
            t.nrows(),
            t.ncols(),
            weights.len()
        )));
    }
    let nb = t.nrows();
    // populations |T_sa|²
    let pop: Vec<Vec<f64>> = (0..dim).map(|a| (0..nb).map(|s| t[(s, a)].norm_sqr()).collect()).collect();
    let state_weight: Vec<f64> = pop
        .iter()
        .map(|p| p.iter().zip(weights.iter()).map(|(x, w)| x * w).sum())
        .collect();

    let mut out = Vec::with_capacity(dim);
    for a in 0..dim {
        let mut gamma = 0.0;
        for b in 0..dim {
            let overlap = match weighting {
                CouplingWeighting::InsideOverlap => (0..nb).map(|s| weights[s] * weights[s] * pop[a][s] * pop[b][s]).sum::<f64>(),
                CouplingWeighting::OutsideOverlap => {
                    state_weight[a] * state_weight[b] * (0..nb).map(|s| pop[a][s] * pop[b][s]).sum::<f64>()
                }
            };
            if overlap != 0.0 {
                let omega = manifold.energies[a] - manifold.energies[b];
                gamma += correlation.correlation_freq(omega).re * overlap;
            }
        }
        if gamma < 0.0 {
            log::warn!("negative line-broadening rate {gamma:.3e} cm^-1 for state {a}; clamped to 0");
            gamma = 0.0;
        }
        out.push(gamma);
    }
    Ok(out)
}

/// Pair widths `γ_ab = (γ_a + γ_b)/2` and resonances `z_ab = ω_ab − iγ_ab`
/// for every (a, b) across two manifolds; rows index `a`.
pub fn pair_dephasing(
    energies_a: &[f64],
    gamma_a: &[f64],
    energies_b: &[f64],
    gamma_b: &[f64],
) -> (Vec<Vec<f64>>, Vec<Vec<Complex64>>) {
    let mut gp = Vec::with_capacity(gamma_a.len());
    let mut zp = Vec::with_capacity(gamma_a.len());
    for (ea, ga) in energies_a.iter().zip(gamma_a) {
        let row_g: Vec<f64> = gamma_b.iter().map(|gb| 0.5 * (ga + gb)).collect();
        let row_z = energies_b
            .iter()
            .zip(&row_g)
            .map(|(eb, g)| Complex64::new(ea - eb, -g))
            .collect();
        gp.push(row_g);
        zp.push(row_z);
    }
    (gp, zp)
}

/// State energies and widths of all three manifolds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DephasingTable {
    pub energies: [Vec<f64>; 3],
    pub gamma_state: [Vec<f64>; 3],
    pub rule: PairRule,
}

impl DephasingTable {
    /// Widths from the bath; the isolated ground state gets zero width.
    pub fn build(
        eig: &PolaritonEigensystem,
        ops: &PolaritonOperators,
        correlation: &ExponentialSumCorrelation,
        weighting: CouplingWeighting,
    ) -> Result<Self> {
        let g1 = line_broadening_rates(&eig.manifolds[1], &ops.coupling[1].weights, correlation, weighting)?;
        let g2 = line_broadening_rates(&eig.manifolds[2], &ops.coupling[2].weights, correlation, weighting)?;
        Ok(DephasingTable {
            energies: eig.manifolds.clone().map(|m| m.energies),
            gamma_state: [vec![0.0], g1, g2],
            rule: PairRule::Mean,
        })
    }

    /// Every coherence gets the same width `gamma`.
    pub fn uniform(eig: &PolaritonEigensystem, gamma: f64) -> Self {
        DephasingTable {
            energies: eig.manifolds.clone().map(|m| m.energies),
            gamma_state: eig.manifolds.clone().map(|m| vec![gamma; m.dim()]),
            rule: PairRule::Uniform(gamma),
        }
    }

    pub fn energy(&self, s: StateRef) -> f64 {
        self.energies[s.manifold][s.index]
    }

    pub fn gamma(&self, s: StateRef) -> f64 {
        self.gamma_state[s.manifold][s.index]
    }

    pub fn gamma_pair(&self, a: StateRef, b: StateRef) -> f64 {
        match self.rule {
            PairRule::Mean => 0.5 * (self.gamma(a) + self.gamma(b)),
            PairRule::Uniform(g) => g,
        }
    }

    pub fn omega(&self, a: StateRef, b: StateRef) -> f64 {
        self.energy(a) - self.energy(b)
    }

    /// `z_ab = ω_ab − iγ_ab`.
    pub fn z(&self, a: StateRef, b: StateRef) -> Complex64 {
        Complex64::new(self.omega(a, b), -self.gamma_pair(a, b))
    }

    pub fn min_width(&self) -> f64 {
        match self.rule {
            PairRule::Uniform(g) => g,
            PairRule::Mean => {
                let g0 = self.gamma_state[0].iter().copied().fold(f64::INFINITY, f64::min);
                let g1 = self.gamma_state[1].iter().copied().fold(f64::INFINITY, f64::min);
                let g2 = self.gamma_state[2].iter().copied().fold(f64::INFINITY, f64::min);
                0.5 * (g1 + g0).min(g2 + g1)
            }
        }
    }

    /// SHA-256 over the bit patterns of every stored number.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for (e, g) in self.energies.iter().zip(&self.gamma_state) {
            h.update((e.len() as u64).to_le_bytes());
            for x in e.iter().chain(g) {
                h.update(x.to_bits().to_le_bytes());
            }
        }
        match self.rule {
            PairRule::Mean => h.update([0u8]),
            PairRule::Uniform(g) => {
                h.update([1u8]);
                h.update(g.to_bits().to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Rows `(manifold, index, energy, gamma)` for the diagnostic dump.
    pub fn rows(&self) -> Vec<(usize, usize, f64, f64)> {
        let mut v = Vec::new();
        for n in 0..3 {
            for (i, (&e, &g)) in self.energies[n].iter().zip(&self.gamma_state[n]).enumerate() {
                v.push((n, i, e, g));
            }
        }
        v
    }
}

/// Retarded Green's function `G_ab(ω) = i / (ω − ω_ab + iγ_ab) = i / (ω − z_ab)`.
pub fn greens_function(omega: f64, a: StateRef, b: StateRef, table: &DephasingTable) -> Result<Complex64> {
    let z = table.z(a, b);
    let d = Complex64::new(omega, 0.0) - z;
    if d.re == 0.0 && d.im == 0.0 {
        return Err(Error::Pole(format!(
            "G between {a:?} and {b:?} evaluated on its undamped resonance {omega}"
        )));
    }
    Ok(Complex64::i() / d)
}
