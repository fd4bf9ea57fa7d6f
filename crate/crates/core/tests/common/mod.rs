//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use quadrature::double_exponential;

use dqc_core::bath::SpectralDensity;

/// Tanh-sinh integral of a smooth function over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    double_exponential::integrate(f, a, b, 1e-12).integral
}

/// `∫ f` over `[a, b]` split into pieces no longer than `step`.
pub fn integrate_chunked(f: impl Fn(f64) -> f64, a: f64, b: f64, step: f64) -> f64 {
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    (0..n).map(|i| integrate(&f, a + i as f64 * h, a + (i + 1) as f64 * h)).sum()
}

/// Limit of a sequence of partial sums by Wynn's epsilon algorithm.
///
/// Every even column of the table yields an estimate; the one that moved
/// least from the previous even column is returned, and the table is cut off
/// once differences vanish to rounding.
pub fn wynn_epsilon(partial: &[f64]) -> f64 {
    let scale = partial.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut prev: Vec<f64> = vec![0.0; partial.len() + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut estimates = vec![*partial.last().unwrap()];
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.abs() <= 1e-15 * scale {
                break;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        if next.is_empty() {
            break;
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            let e = *cur.last().unwrap();
            if !e.is_finite() {
                break;
            }
            estimates.push(e);
        }
    }
    if estimates.len() == 1 {
        return estimates[0];
    }
    let mut best = estimates[1];
    let mut best_move = (estimates[1] - estimates[0]).abs();
    for w in estimates.windows(2).skip(1) {
        let moved = (w[1] - w[0]).abs();
        if moved < best_move {
            best_move = moved;
            best = w[1];
        }
    }
    best
}

/// `∫₀^∞ g(ω) trig(ωt) dω` for a slowly decaying `g`, with the oscillatory
/// tail summed between zeros of the trig factor and extrapolated.
fn oscillatory_integral(g: impl Fn(f64) -> f64, t: f64, cosine: bool, smooth_until: f64) -> f64 {
    let trig = |w: f64| if cosine { (w * t).cos() } else { (w * t).sin() };
    let f = |w: f64| g(w) * trig(w);
    let half = PI / t;
    let offset = if cosine { 0.5 } else { 0.0 };
    // first trig zero past the structured part of g
    let k0 = ((smooth_until / half) - offset).ceil().max(1.0);
    let w0 = (k0 + offset) * half;
    let head = integrate_chunked(f, 0.0, w0, (0.5 * half).min(25.0));
    let mut partial = Vec::new();
    let mut sum = head;
    let mut a = w0;
    for _ in 0..40 {
        let b = a + half;
        sum += integrate_chunked(f, a, b, 2.0e3_f64.max(half / 8.0).min(half));
        partial.push(sum);
        a = b;
    }
    wynn_epsilon(&partial)
}

/// `C(τ) = (1/π) ∫₀^∞ J(ω)[coth(βω/2) cos ωτ − i sin ωτ] dω` by quadrature.
pub fn bath_correlation_quadrature(sd: &SpectralDensity, tau_fs: f64) -> Complex64 {
    let t = dqc_core::units::fs_to_inverse_cm1(tau_fs);
    let beta = sd.beta();
    let thermal = |w: f64| {
        if w == 0.0 {
            0.0
        } else {
            sd.spectral_density(w) / (0.5 * beta * w).tanh()
        }
    };
    let structured = sd.modes.iter().map(|m| m.upsilon).fold(sd.gamma0, f64::max) * 3.0 + 2000.0;
    let re = oscillatory_integral(thermal, t, true, structured) / PI;
    let im = -oscillatory_integral(|w| sd.spectral_density(w), t, false, structured) / PI;
    Complex64::new(re, im)
}

use dqc_core::aggregate::{AggregateSpec, LadderConvention, SiteClass, SiteParams};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random aggregate with `n` sites drawn from a seeded stream.
pub fn random_aggregate(n: usize, seed: u64) -> AggregateSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = (0..n)
        .map(|m| SiteParams {
            energy_cm1: rng.random_range(14800.0..15800.0),
            mu10: rng.random_range(0.5..1.5),
            kappa: rng.random_range(0.8..1.4),
            delta_cm1: rng.random_range(-300.0..300.0),
            class: if m % 3 == 2 { SiteClass::B } else { SiteClass::A },
        })
        .collect();
    let mut hopping = vec![vec![0.0; n]; n];
    for m in 0..n {
        for k in (m + 1)..n {
            let j = rng.random_range(-150.0..150.0);
            hopping[m][k] = j;
            hopping[k][m] = j;
        }
    }
    AggregateSpec { sites, hopping, ladder: LadderConvention::Bosonic }
}

/// Identical harmonic sites: Δ = 0, κ = 1, bosonic ladder.
pub fn harmonic_aggregate(energies: &[f64], j: f64) -> AggregateSpec {
    let n = energies.len();
    AggregateSpec {
        sites: energies
            .iter()
            .map(|&e| SiteParams { energy_cm1: e, mu10: 1.0, kappa: 1.0, delta_cm1: 0.0, class: SiteClass::A })
            .collect(),
        hopping: (0..n).map(|m| (0..n).map(|k| if m == k { 0.0 } else { j }).collect()).collect(),
        ladder: LadderConvention::Bosonic,
    }
}

/// Three-level sites in the full `3^n` product space.
pub struct TensorAggregate {
    pub n: usize,
    pub h: DMatrix<f64>,
    /// Raising part of the total dipole operator.
    pub dipole_up: DMatrix<f64>,
}

fn digits(mut index: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for slot in d.iter_mut() {
        *slot = index % 3;
        index /= 3;
    }
    d
}

fn kron_site(n: usize, site: usize, op: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::from_element(1, 1, 1.0);
    for s in 0..n {
        let f = if s == site { op.clone() } else { DMatrix::identity(3, 3) };
        // site 0 is the fastest-varying digit
        out = f.kronecker(&out);
    }
    out
}

impl TensorAggregate {
    pub fn build(spec: &AggregateSpec) -> Self {
        let n = spec.n_sites();
        let l = match spec.ladder {
            LadderConvention::Bosonic => 2f64.sqrt(),
            LadderConvention::Unit => 1.0,
        };
        // b† on one site; hopping uses the bare ladder, the dipole adds κ.
        let up = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, l, 0.0]);
        let down = up.transpose();
        let dim = 3usize.pow(n as u32);
        let mut h = DMatrix::zeros(dim, dim);
        let mut dipole_up = DMatrix::zeros(dim, dim);
        for m in 0..n {
            let s = &spec.sites[m];
            let level = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                0.0,
                s.energy_cm1,
                2.0 * s.energy_cm1 + s.delta_cm1,
            ]));
            h += kron_site(n, m, &level);
            let mu = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, s.mu10, 0.0, 0.0, 0.0, l * s.kappa * s.mu10, 0.0]);
            dipole_up += kron_site(n, m, &mu);
            for k in 0..n {
                if k != m {
                    h += kron_site(n, m, &up) * kron_site(n, k, &down) * spec.hopping[m][k];
                }
            }
        }
        TensorAggregate { n, h, dipole_up }
    }

    /// Product-space index of the state with the given per-site occupations.
    pub fn index_of(&self, occ: &[usize]) -> usize {
        occ.iter().rev().fold(0, |acc, &d| acc * 3 + d)
    }

    pub fn one_exciton_states(&self) -> Vec<usize> {
        (0..self.n)
            .map(|m| {
                let mut occ = vec![0; self.n];
                occ[m] = 1;
                self.index_of(&occ)
            })
            .collect()
    }

    /// Two-excitation states in `(m, n)`, `m <= n`, lexicographic order.
    pub fn two_exciton_states(&self) -> Vec<usize> {
        let mut v = Vec::new();
        for m in 0..self.n {
            for k in m..self.n {
                let mut occ = vec![0; self.n];
                occ[m] += 1;
                occ[k] += 1;
                v.push(self.index_of(&occ));
            }
        }
        v
    }

    pub fn block(&self, op: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| op[(rows[i], cols[j])])
    }

    /// Excitation number is conserved by the Hamiltonian.
    pub fn number_leak(&self) -> f64 {
        let dim = self.h.nrows();
        let mut worst = 0.0_f64;
        for a in 0..dim {
            for b in 0..dim {
                let na: usize = digits(a, self.n).iter().sum();
                let nb: usize = digits(b, self.n).iter().sum();
                if na != nb {
                    worst = worst.max(self.h[(a, b)].abs());
                }
            }
        }
        worst
    }
}

use dqc_core::linalg::CMatrix;

/// Line widths from the full secular-Redfield tensor.
///
/// The manifold (energies `e`, eigenvectors as columns of `t`) is joined by an
/// uncoupled reference level `g` at zero energy. Basis state `s` couples to
/// its own bath through `X^s = w_s |s⟩⟨s|`, and the width of state `a` is the
/// decay rate `−Re R_{ag,ag}` of the `a`–`g` coherence.
pub fn redfield_widths(e: &[f64], t: &CMatrix, w: &[f64], c_half: impl Fn(f64) -> Complex64) -> Vec<f64> {
    let n = e.len();
    let d = n + 1;
    let energy = |a: usize| if a == 0 { 0.0 } else { e[a - 1] };
    // X^s in the eigenbasis of the enlarged system
    let xs: Vec<CMatrix> = (0..w.len())
        .map(|s| {
            CMatrix::from_fn(d, d, |a, b| {
                if a == 0 || b == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    t[(s, a - 1)].conj() * t[(s, b - 1)] * w[s]
                }
            })
        })
        .collect();
    let idx = |a: usize, b: usize, c: usize, dd: usize| ((a * d + b) * d + c) * d + dd;
    let mut gamma = vec![Complex64::new(0.0, 0.0); d * d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for dd in 0..d {
                    let cw = c_half(energy(dd) - energy(c));
                    let mut s = Complex64::new(0.0, 0.0);
                    for x in &xs {
                        s += x[(a, b)] * x[(c, dd)];
                    }
                    gamma[idx(a, b, c, dd)] = s * cw;
                }
            }
        }
    }
    let r = |a: usize, b: usize, c: usize, dd: usize| {
        let mut v = gamma[idx(dd, b, a, c)] + gamma[idx(c, a, b, dd)].conj();
        if b == dd {
            for k in 0..d {
                v -= gamma[idx(a, k, k, c)];
            }
        }
        if a == c {
            for k in 0..d {
                v -= gamma[idx(b, k, dd, k)].conj();
            }
        }
        v
    };
    (1..d).map(|a| -r(a, 0, a, 0).re).collect()
}

/// Random Hermitian matrix with entries of the given scale.
pub fn random_hermitian(n: usize, seed: u64, diag: f64, off: f64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = Complex64::new(rng.random_range(-diag..diag), 0.0);
        for i in (j + 1)..n {
            let z = Complex64::new(rng.random_range(-off..off), rng.random_range(-off..off));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

use dqc_core::biphoton::{four_point_correlation, FieldSource};
use dqc_core::dephasing::{DephasingTable, StateRef};
use dqc_core::polariton::PolaritonOperators;

/// `∫₀^∞ exp(i(Ω − z)t) dt` by quadrature, `t` in cm.
pub fn laplace_quadrature(omega: f64, z: Complex64) -> Complex64 {
    let gamma = -z.im;
    assert!(gamma > 0.0);
    let detune = omega - z.re;
    let end = 45.0 / gamma;
    let step = (0.5 * PI / detune.abs().max(1e-9)).min(0.25 / gamma);
    let f = |t: f64| Complex64::new(-gamma * t, detune * t).exp();
    Complex64::new(
        integrate_chunked(|t| f(t).re, 0.0, end, step),
        integrate_chunked(|t| f(t).im, 0.0, end, step),
    )
}

/// Third-order DQC signal from the time-domain response,
/// `S = (−i)³ ∫∫∫ dt₃ dt₂ dt₁ e^{i(Ω₃t₃ + Ω₂t₂ + Ω₁t₁)} R(t₃, t₂, t₁)`, where
/// `R` is the sum over states of products of retarded propagators
/// `exp(−i z t)`. Each term separates, so the triple integral is a product of
/// three one-dimensional quadratures.
pub fn time_domain_signal(
    ops: &PolaritonOperators,
    table: &DephasingTable,
    source: &FieldSource,
    omega: [f64; 3],
    relative_sign: f64,
) -> Complex64 {
    let [o1, o2, o3] = omega;
    let n1 = ops.mu_01.len();
    let n2 = ops.mu_12.nrows();
    let g = StateRef::new(0, 0);
    let z = |a: StateRef, b: StateRef| {
        let w = table.energies[a.manifold][a.index] - table.energies[b.manifold][b.index];
        let gam = 0.5 * (table.gamma_state[a.manifold][a.index] + table.gamma_state[b.manifold][b.index]);
        let gam = match table.rule {
            dqc_core::dephasing::PairRule::Mean => gam,
            dqc_core::dephasing::PairRule::Uniform(u) => u,
        };
        Complex64::new(w, -gam)
    };
    let mut cache = std::collections::HashMap::new();
    let mut lap = |w: f64, zz: Complex64| {
        *cache
            .entry((w.to_bits(), zz.re.to_bits(), zz.im.to_bits()))
            .or_insert_with(|| laplace_quadrature(w, zz))
    };
    let minus_i_cubed = Complex64::i();
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n1 {
        let sj = StateRef::new(1, j);
        for k in 0..n2 {
            let sk = StateRef::new(2, k);
            for jp in 0..n1 {
                let sjp = StateRef::new(1, jp);
                let w = ops.mu_01[j] * ops.mu_12[(k, j)] * ops.mu_12[(k, jp)].conj() * ops.mu_01[jp].conj();
                if w.norm() == 0.0 {
                    continue;
                }
                let field = four_point_correlation(z(sk, sjp).re, z(sjp, g).re, z(sk, sj).re, z(sj, g).re, source);
                let first_two = lap(o1, z(sj, g)) * lap(o2, z(sk, g));
                let last = lap(o3, z(sjp, g)) + lap(o3, z(sk, sjp)) * relative_sign;
                total += minus_i_cubed * w * field * first_two * last;
            }
        }
    }
    total
}

use dqc_core::model::{MatterModel, MatterParams};
use dqc_core::polariton::CavitySpec;

/// Two-site cavity toy with a weak bath, so that individual peaks resolve.
pub fn two_site_toy() -> MatterModel {
    let aggregate = AggregateSpec::from_json(
        r#"{"sites":[
            {"energy_cm1":15000,"mu10":1.0,"kappa":1.1,"delta_cm1":-250,"class":"A"},
            {"energy_cm1":15600,"mu10":0.8,"kappa":0.9,"delta_cm1":150,"class":"B"}],
          "hopping":[[0,80],[80,0]]}"#,
    )
    .unwrap();
    MatterModel::build(MatterParams {
        aggregate,
        cavity: CavitySpec::new(15300.0, 60.0),
        bath: SpectralDensity::overdamped(3.0, 30.0, 77.0, 200).to_file(),
        weighting: Default::default(),
    })
    .unwrap()
}
