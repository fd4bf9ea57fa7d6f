//! Single-mode cavity polaritons.
//!
//! The cavity mode is truncated at two photons and coupled to every site
//! with the same rotating-wave exchange strength. Each excitation-number
//! manifold is diagonalized exactly and the dipole and phonon-coupling
//! operators are carried into the eigenbasis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::aggregate::SiteOperatorSet;
use crate::error::{Error, Result};
use crate::linalg::{complexify, diagonalize, CMatrix};

pub const MAX_PHOTONS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySpec {
    pub omega_c: f64,
    pub g_c: f64,
    /// Let the exciton dipole act while a cavity photon is present
    /// (`|1ph⟩ → |m,1ph⟩`). The cavity photon itself is never driven.
    #[serde(default = "default_true")]
    pub spectator_photon_dipole: bool,
}

fn default_true() -> bool {
    true
}

impl Default for CavitySpec {
    fn default() -> Self {
        CavitySpec {
            omega_c: 15_400.0,
            g_c: 100.0,
            spectator_photon_dipole: true,
        }
    }
}

impl CavitySpec {
    pub fn new(omega_c: f64, g_c: f64) -> Self {
        CavitySpec {
            omega_c,
            g_c,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return Err(Error::config(format!("omega_c must be positive, got {}", self.omega_c)));
        }
        if !(self.g_c >= 0.0 && self.g_c.is_finite()) {
            return Err(Error::config(format!("g_c must be non-negative, got {}", self.g_c)));
        }
        Ok(())
    }
}

/// A composite exciton/photon basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisState {
    Ground,
    Exciton(usize),
    Photon,
    /// Two excitons on sites `(m, n)`, `m <= n`.
    ExcitonPair(usize, usize),
    ExcitonPhoton(usize),
    TwoPhotons,
}

/// Basis labels of manifold `n` in block order.
pub fn manifold_basis(n_sites: usize, n: usize) -> Vec<BasisState> {
    match n {
        0 => vec![BasisState::Ground],
        1 => (0..n_sites)
            .map(BasisState::Exciton)
            .chain(std::iter::once(BasisState::Photon))
            .collect(),
        2 => {
            let mut v = Vec::with_capacity(manifold_dim(n_sites, 2));
            for m in 0..n_sites {
                for k in m..n_sites {
                    v.push(BasisState::ExcitonPair(m, k));
                }
            }
            v.extend((0..n_sites).map(BasisState::ExcitonPhoton));
            v.push(BasisState::TwoPhotons);
            v
        }
        _ => vec![],
    }
}

/// Number of states in manifold `n` (1, N+1, N(N+1)/2 + N + 1).
pub fn manifold_dim(n_sites: usize, n: usize) -> usize {
    match n {
        0 => 1,
        1 => n_sites + 1,
        2 => n_sites * (n_sites + 1) / 2 + n_sites + 1,
        _ => 0,
    }
}

/// Number-conserving Hamiltonian block of manifold `n ∈ {1, 2}`.
pub fn build_polariton_hamiltonian(ops: &SiteOperatorSet, cavity: &CavitySpec, n: usize) -> Result<DMatrix<f64>> {
    cavity.validate()?;
    let ns = ops.n_sites();
    let g = cavity.g_c;
    let wc = cavity.omega_c;
    match n {
        1 => {
            let mut h = DMatrix::zeros(ns + 1, ns + 1);
            h.view_mut((0, 0), (ns, ns)).copy_from(&ops.h1);
            h[(ns, ns)] = wc;
            for m in 0..ns {
                h[(m, ns)] = g;
                h[(ns, m)] = g;
            }
            Ok(h)
        }
        2 => {
            let npair = ops.basis.two_excitation_labels.len();
            let dim = manifold_dim(ns, 2);
            let ladder = ops.ladder.factor();
            let two_photons = npair + ns;
            let mut h = DMatrix::zeros(dim, dim);
            h.view_mut((0, 0), (npair, npair)).copy_from(&ops.h2);
            // exciton + photon block: H1 shifted by ω_c
            for m in 0..ns {
                for k in 0..ns {
                    h[(npair + m, npair + k)] = ops.h1[(m, k)];
                }
                h[(npair + m, npair + m)] += wc;
            }
            h[(two_photons, two_photons)] = 2.0 * wc;
            let mut couple = |i: usize, j: usize, v: f64| {
                h[(i, j)] = v;
                h[(j, i)] = v;
            };
            // a B†_m : |k,1ph⟩ → |mk⟩ (ladder factor when m == k)
            for (a, &(m, k)) in ops.basis.two_excitation_labels.iter().enumerate() {
                if m == k {
                    couple(a, npair + m, ladder * g);
                } else {
                    couple(a, npair + m, g);
                    couple(a, npair + k, g);
                }
            }
            // a B†_m : |2ph⟩ → √2 |m,1ph⟩ (photon ladder)
            for m in 0..ns {
                couple(npair + m, two_photons, std::f64::consts::SQRT_2 * g);
            }
            Ok(h)
        }
        _ => Err(Error::config(format!("polariton manifold must be 1 or 2, got {n}"))),
    }
}

/// Eigen-data of one excitation manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifold {
    pub basis: Vec<BasisState>,
    pub energies: Vec<f64>,
    /// Columns are eigenvectors in the manifold basis.
    pub transform: CMatrix,
}

impl Manifold {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

/// Ground, one- and two-polariton manifolds.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonEigensystem {
    pub manifolds: [Manifold; 3],
}

impl PolaritonEigensystem {
    pub fn build(ops: &SiteOperatorSet, cavity: &CavitySpec) -> Result<Self> {
        let ns = ops.n_sites();
        let ground = Manifold {
            basis: manifold_basis(ns, 0),
            energies: vec![0.0],
            transform: CMatrix::identity(1, 1),
        };
        let h1 = complexify(&build_polariton_hamiltonian(ops, cavity, 1)?);
        let h2 = complexify(&build_polariton_hamiltonian(ops, cavity, 2)?);
        let (e1, e2) = rayon::join(|| diagonalize(&h1), || diagonalize(&h2));
        let (e1, e2) = (e1?, e2?);
        Ok(PolaritonEigensystem {
            manifolds: [
                ground,
                Manifold {
                    basis: manifold_basis(ns, 1),
                    energies: e1.energies,
                    transform: e1.vectors,
                },
                Manifold {
                    basis: manifold_basis(ns, 2),
                    energies: e2.energies,
                    transform: e2.vectors,
                },
            ],
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.manifolds[0].dim(), self.manifolds[1].dim(), self.manifolds[2].dim()]
    }
}

/// Phonon coupling of one manifold: the diagonal weight of every basis state
/// (each basis state carries its own uncorrelated bath) and the summed
/// operator `T† W T` in the eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldCoupling {
    pub weights: DVector<f64>,
    pub transformed: CMatrix,
}

/// Operators in the polariton eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonOperators {
    /// `⟨p⁽¹⁾|μ|0⟩`.
    pub mu_01: DVector<Complex64>,
    /// `⟨p⁽²⁾|μ|p⁽¹⁾⟩`, rows two-polariton, columns one-polariton.
    pub mu_12: CMatrix,
    pub coupling: [ManifoldCoupling; 3],
}

/// Ground→one dipoles in the manifold-1 basis (zero on the photon).
pub fn embed_d01(ops: &SiteOperatorSet) -> DVector<f64> {
    let ns = ops.n_sites();
    let mut d = DVector::zeros(ns + 1);
    d.rows_mut(0, ns).copy_from(&ops.d01);
    d
}

/// One→two dipoles in the manifold bases (rows manifold 2, columns manifold 1).
pub fn embed_d12(ops: &SiteOperatorSet, cavity: &CavitySpec) -> DMatrix<f64> {
    let ns = ops.n_sites();
    let npair = ops.basis.two_excitation_labels.len();
    let mut d = DMatrix::zeros(manifold_dim(ns, 2), ns + 1);
    d.view_mut((0, 0), (npair, ns)).copy_from(&ops.d12);
    if cavity.spectator_photon_dipole {
        for m in 0..ns {
            d[(npair + m, ns)] = ops.d01[m];
        }
    }
    d
}

/// Diagonal phonon weights per manifold basis state.
pub fn manifold_weights(ops: &SiteOperatorSet) -> [DVector<f64>; 3] {
    let ns = ops.n_sites();
    let npair = ops.basis.two_excitation_labels.len();
    let mut w1 = DVector::zeros(ns + 1);
    w1.rows_mut(0, ns).copy_from(&ops.phonon_proj_1);
    let mut w2 = DVector::zeros(manifold_dim(ns, 2));
    w2.rows_mut(0, npair).copy_from(&ops.phonon_proj_2);
    w2.rows_mut(npair, ns).copy_from(&ops.phonon_proj_1);
    [DVector::zeros(1), w1, w2]
}

pub fn transform_operators(
    ops: &SiteOperatorSet,
    cavity: &CavitySpec,
    eig: &PolaritonEigensystem,
) -> Result<PolaritonOperators> {
    let ns = ops.n_sites();
    let [_, m1, m2] = &eig.manifolds;
    if m1.dim() != ns + 1 || m2.dim() != manifold_dim(ns, 2) {
        return Err(Error::Dimension(format!(
            "eigensystem dims {:?} do not match a {ns}-site aggregate",
            eig.dims()
        )));
    }
    let d01 = complexify(&DMatrix::from_column_slice(ns + 1, 1, embed_d01(ops).as_slice()));
    let d12 = complexify(&embed_d12(ops, cavity));
    let mu_01 = (m1.transform.adjoint() * d01).column(0).into_owned();
    let mu_12 = m2.transform.adjoint() * d12 * &m1.transform;

    let weights = manifold_weights(ops);
    let coupling = [0, 1, 2].map(|n| {
        let t = &eig.manifolds[n].transform;
        let w = complexify(&DMatrix::from_diagonal(&weights[n]));
        ManifoldCoupling {
            weights: weights[n].clone(),
            transformed: t.adjoint() * w * t,
        }
    });
    Ok(PolaritonOperators { mu_01, mu_12, coupling })
}

/// Gaussian width parameters for the illustrative band plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemoWidths {
    pub mean_1: f64,
    pub sd_1: f64,
    pub mean_2: f64,
    /// No value is available for the two-polariton spread; reuses `sd_1`.
    pub sd_2: f64,
}

impl Default for DemoWidths {
    fn default() -> Self {
        DemoWidths {
            mean_1: 25.0,
            sd_1: 10.0,
            mean_2: 35.0,
            sd_2: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub omega_c: f64,
    pub manifold: usize,
    pub index: usize,
    pub energy: f64,
    pub width: f64,
}

/// Polariton energies across a sweep of cavity frequencies.
///
/// Widths are drawn per state from the demo Gaussians (clamped at zero) with
/// a ChaCha8 stream seeded by `seed`; the same seed gives the same widths.
pub fn scan_bands(
    ops: &SiteOperatorSet,
    g_c: f64,
    omega_cs: &[f64],
    widths: &DemoWidths,
    seed: u64,
) -> Result<Vec<BandPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ns = ops.n_sites();
    let normal = |mean: f64, sd: f64| {
        Normal::new(mean, sd).map_err(|e| Error::config(format!("demo width distribution: {e}")))
    };
    let d1 = normal(widths.mean_1, widths.sd_1)?;
    let d2 = normal(widths.mean_2, widths.sd_2)?;
    let w1: Vec<f64> = (0..manifold_dim(ns, 1)).map(|_| d1.sample(&mut rng).max(0.0)).collect();
    let w2: Vec<f64> = (0..manifold_dim(ns, 2)).map(|_| d2.sample(&mut rng).max(0.0)).collect();

    let mut out = Vec::new();
    for &wc in omega_cs {
        let eig = PolaritonEigensystem::build(ops, &CavitySpec::new(wc, g_c))?;
        for (n, widths) in [(1usize, &w1), (2, &w2)] {
            for (i, &e) in eig.manifolds[n].energies.iter().enumerate() {
                out.push(BandPoint {
                    omega_c: wc,
                    manifold: n,
                    index: i,
                    energy: e,
                    width: widths[i],
                });
            }
        }
    }
    Ok(out)
}
