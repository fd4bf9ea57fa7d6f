//! Frenkel-exciton aggregate in the site basis.
//!
//! Builds the one- and two-exciton Hamiltonian blocks, the ground→one and
//! one→two transition dipoles and the diagonal exciton-phonon coupling
//! weights of each manifold.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest tolerated `|J_mn - J_nm|` before the hopping matrix is rejected.
pub const HOPPING_SYMMETRY_TOL: f64 = 1e-9;

/// Pigment class, which sets the exciton-phonon coupling scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SiteClass {
    A,
    B,
}

impl SiteClass {
    /// Site coupling weight g: 1.0 for class A, 1.4 for class B.
    pub fn phonon_coupling(self) -> f64 {
        match self {
            SiteClass::A => 1.0,
            SiteClass::B => 1.4,
        }
    }
}

/// Scale applied to site couplings when forming two-exciton couplings.
pub const TWO_EXCITON_COUPLING_FACTOR: f64 = 0.6;

/// Matrix-element convention for transitions into a doubly occupied site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LadderConvention {
    /// Harmonic-ladder factor √2 on couplings and dipoles into local doubles.
    #[default]
    Bosonic,
    /// Unit factor (no √2).
    Unit,
}

impl LadderConvention {
    pub fn factor(self) -> f64 {
        match self {
            LadderConvention::Bosonic => std::f64::consts::SQRT_2,
            LadderConvention::Unit => 1.0,
        }
    }
}

/// One site as it appears in the parameter file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteParams {
    pub energy_cm1: f64,
    pub mu10: f64,
    pub kappa: f64,
    pub delta_cm1: f64,
    pub class: SiteClass,
}

/// Material parameters of the aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AggregateSpec {
    pub sites: Vec<SiteParams>,
    pub hopping: Vec<Vec<f64>>,
    #[serde(default)]
    pub ladder: LadderConvention,
}

impl AggregateSpec {
    /// Parses and validates a JSON parameter document.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: AggregateSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// The bundled 14-site placeholder set. Not a fitted parameter set.
    pub fn placeholder() -> Self {
        Self::from_json(include_str!("../data/aggregate_placeholder.json"))
            .expect("bundled aggregate parameters are valid")
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.sites.len();
        if n == 0 {
            return Err(Error::config("aggregate has no sites"));
        }
        for (m, s) in self.sites.iter().enumerate() {
            for (name, v) in [
                ("energy_cm1", s.energy_cm1),
                ("mu10", s.mu10),
                ("kappa", s.kappa),
                ("delta_cm1", s.delta_cm1),
            ] {
                if !v.is_finite() {
                    return Err(Error::config(format!("sites[{m}].{name} is not finite")));
                }
            }
            if s.kappa <= 0.0 {
                return Err(Error::config(format!(
                    "sites[{m}].kappa must be positive, got {}",
                    s.kappa
                )));
            }
        }
        if self.hopping.len() != n {
            return Err(Error::config(format!(
                "hopping has {} rows, expected {n}",
                self.hopping.len()
            )));
        }
        for (m, row) in self.hopping.iter().enumerate() {
            if row.len() != n {
                return Err(Error::config(format!(
                    "hopping[{m}] has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row[m] != 0.0 {
                return Err(Error::config(format!(
                    "hopping[{m}][{m}] must be zero, got {}",
                    row[m]
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::config(format!("hopping[{m}] has a non-finite entry")));
            }
        }
        for m in 0..n {
            for k in (m + 1)..n {
                let d = (self.hopping[m][k] - self.hopping[k][m]).abs();
                if d > HOPPING_SYMMETRY_TOL {
                    return Err(Error::config(format!(
                        "hopping is not symmetric: J[{m}][{k}]={} but J[{k}][{m}]={}",
                        self.hopping[m][k], self.hopping[k][m]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Local double-excitation energy 2E_m + Δ_m.
    pub fn double_energy(&self, m: usize) -> f64 {
        2.0 * self.sites[m].energy_cm1 + self.sites[m].delta_cm1
    }
}

/// Labels of the site-basis exciton states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcitonBasis {
    pub one_excitation_labels: Vec<usize>,
    /// Unordered pairs `(m, n)` with `m <= n`, lexicographically ordered.
    pub two_excitation_labels: Vec<(usize, usize)>,
}

impl ExcitonBasis {
    pub fn new(n_sites: usize) -> Self {
        let mut two = Vec::with_capacity(n_sites * (n_sites + 1) / 2);
        for m in 0..n_sites {
            for n in m..n_sites {
                two.push((m, n));
            }
        }
        ExcitonBasis {
            one_excitation_labels: (0..n_sites).collect(),
            two_excitation_labels: two,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.one_excitation_labels.len()
    }

    /// Position of the pair `(m, n)` in the two-exciton list (order-insensitive).
    pub fn pair_index(&self, m: usize, n: usize) -> usize {
        let (a, b) = if m <= n { (m, n) } else { (n, m) };
        let ns = self.n_sites();
        // rows 0..a contribute ns, ns-1, ..., ns-a+1 entries
        a * ns - a * a.saturating_sub(1) / 2 + (b - a)
    }
}

/// Site-basis operators of the bare aggregate.
#[derive(Debug, Clone)]
pub struct SiteOperatorSet {
    pub basis: ExcitonBasis,
    pub h1: DMatrix<f64>,
    pub h2: DMatrix<f64>,
    /// Ground→one dipoles, indexed by site.
    pub d01: DVector<f64>,
    /// One→two dipoles: rows are two-exciton states, columns sites.
    pub d12: DMatrix<f64>,
    pub phonon_proj_1: DVector<f64>,
    pub phonon_proj_2: DVector<f64>,
    pub ladder: LadderConvention,
}

impl SiteOperatorSet {
    pub fn build(spec: &AggregateSpec) -> Result<Self> {
        spec.validate()?;
        let (phonon_proj_1, phonon_proj_2) = build_phonon_couplings(spec);
        let (d01, d12) = build_dipole_operators(spec);
        Ok(SiteOperatorSet {
            basis: ExcitonBasis::new(spec.n_sites()),
            h1: build_one_exciton_hamiltonian(spec)?,
            h2: build_two_exciton_hamiltonian(spec)?,
            d01,
            d12,
            phonon_proj_1,
            phonon_proj_2,
            ladder: spec.ladder,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }
}

/// H1 with site energies on the diagonal and hoppings off it.
pub fn build_one_exciton_hamiltonian(spec: &AggregateSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = spec.n_sites();
    Ok(DMatrix::from_fn(n, n, |m, k| {
        if m == k {
            spec.sites[m].energy_cm1
        } else {
            spec.hopping[m][k]
        }
    }))
}

/// H2 over the symmetrized two-exciton basis.
///
/// Pair states `(m,n)`, `m≠n`, sit at `E_m + E_n`; local doubles at
/// `2E_m + Δ_m`. A hop `J_mk` moves one excitation; when it lands on an
/// already occupied site (or leaves one) the ladder factor applies.
pub fn build_two_exciton_hamiltonian(spec: &AggregateSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = spec.n_sites();
    let basis = ExcitonBasis::new(n);
    let dim = basis.two_excitation_labels.len();
    let ladder = spec.ladder.factor();
    let mut h = DMatrix::zeros(dim, dim);

    for (a, &(m, k)) in basis.two_excitation_labels.iter().enumerate() {
        h[(a, a)] = if m == k {
            spec.double_energy(m)
        } else {
            spec.sites[m].energy_cm1 + spec.sites[k].energy_cm1
        };
    }
    for (a, &(m, k)) in basis.two_excitation_labels.iter().enumerate() {
        for (b, &(p, q)) in basis.two_excitation_labels.iter().enumerate().skip(a + 1) {
            h[(a, b)] = two_exciton_coupling(spec, ladder, (m, k), (p, q));
            h[(b, a)] = h[(a, b)];
        }
    }
    Ok(h)
}

/// ⟨mk|H|pq⟩ for distinct pair states.
fn two_exciton_coupling(spec: &AggregateSpec, ladder: f64, x: (usize, usize), y: (usize, usize)) -> f64 {
    let j = |a: usize, b: usize| spec.hopping[a][b];
    let (m, k) = x;
    let (p, q) = y;
    match (m == k, p == q) {
        // two local doubles never connect through a single hop
        (true, true) => 0.0,
        (true, false) => {
            if p == m {
                ladder * j(m, q)
            } else if q == m {
                ladder * j(m, p)
            } else {
                0.0
            }
        }
        (false, true) => {
            if m == p {
                ladder * j(k, p)
            } else if k == p {
                ladder * j(m, p)
            } else {
                0.0
            }
        }
        (false, false) => {
            // share exactly one site; the other one hops
            if m == p {
                j(k, q)
            } else if m == q {
                j(k, p)
            } else if k == p {
                j(m, q)
            } else if k == q {
                j(m, p)
            } else {
                0.0
            }
        }
    }
}

/// Transition dipoles (D01, D12).
///
/// `D12[(m,n), k] = μ_m δ_nk + μ_n δ_mk` for `m≠n` and
/// `D12[(m,m), m] = ladder · κ_m · μ_m`.
pub fn build_dipole_operators(spec: &AggregateSpec) -> (DVector<f64>, DMatrix<f64>) {
    let n = spec.n_sites();
    let basis = ExcitonBasis::new(n);
    let ladder = spec.ladder.factor();
    let d01 = DVector::from_iterator(n, spec.sites.iter().map(|s| s.mu10));
    let mut d12 = DMatrix::zeros(basis.two_excitation_labels.len(), n);
    for (a, &(m, k)) in basis.two_excitation_labels.iter().enumerate() {
        if m == k {
            d12[(a, m)] = ladder * spec.sites[m].kappa * spec.sites[m].mu10;
        } else {
            d12[(a, k)] = spec.sites[m].mu10;
            d12[(a, m)] = spec.sites[k].mu10;
        }
    }
    (d01, d12)
}

/// Diagonal exciton-phonon coupling weights of the one- and two-exciton blocks.
pub fn build_phonon_couplings(spec: &AggregateSpec) -> (DVector<f64>, DVector<f64>) {
    let n = spec.n_sites();
    let basis = ExcitonBasis::new(n);
    let g: Vec<f64> = spec.sites.iter().map(|s| s.class.phonon_coupling()).collect();
    let one = DVector::from_vec(g.clone());
    let two = DVector::from_iterator(
        basis.two_excitation_labels.len(),
        basis
            .two_excitation_labels
            .iter()
            .map(|&(m, k)| TWO_EXCITON_COUPLING_FACTOR * (g[m] + g[k])),
    );
    (one, two)
}
