//! Frequency-domain double-quantum-coherence signal.
//!
//! Every triple `(j, k, j′)` of one-, two- and one-polariton states
//! contributes two pathways that share the first two resonances and differ in
//! the coherence that oscillates during the last interval:
//!
//! ```text
//! a:  w / ((Ω3 − z_j′0)(Ω2 − z_k0)(Ω1 − z_j0))
//! b:  w / ((Ω3 − z_kj′)(Ω2 − z_k0)(Ω1 − z_j0))
//! ```
//!
//! with `w = μ_0j μ_jk μ_kj′ μ_j′0`, multiplied by the four-point field
//! correlation evaluated at the real parts of the resonances.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biphoton::{uniform_axis, BiphotonSource, FieldSource};
use crate::dephasing::{DephasingTable, StateRef};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::MatterModel;
use crate::polariton::PolaritonOperators;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pathway {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathwayTerm {
    pub j: usize,
    pub k: usize,
    pub jp: usize,
    pub pathway: Pathway,
    pub weight: Complex64,
    pub z_j0: Complex64,
    pub z_k0: Complex64,
    pub z_jp0: Complex64,
    pub z_kjp: Complex64,
}

impl PathwayTerm {
    /// Resonance carried by `Ω3`.
    pub fn z_final(&self, options: &SignalOptions) -> Complex64 {
        match (self.pathway, options.swap_final_resonances) {
            (Pathway::A, false) | (Pathway::B, true) => self.z_jp0,
            (Pathway::B, false) | (Pathway::A, true) => self.z_kjp,
        }
    }

    /// Four-point field correlation at the real parts of the resonances.
    pub fn field(&self, source: &FieldSource) -> Complex64 {
        let w1 = self.z_j0.re;
        let w2 = self.z_k0.re - self.z_j0.re;
        let w3 = self.z_jp0.re;
        let w4 = self.z_kjp.re;
        crate::biphoton::four_point_correlation(w4, w3, w2, w1, source)
    }
}

/// Dipole loop `μ_0j μ_jk μ_kj′ μ_j′0`.
pub fn loop_weight(ops: &PolaritonOperators, j: usize, k: usize, jp: usize) -> Complex64 {
    ops.mu_01[j] * ops.mu_12[(k, j)] * ops.mu_12[(k, jp)].conj() * ops.mu_01[jp].conj()
}

/// Both pathways of every triple whose `|w|` reaches `threshold · max|w|`,
/// ordered by `(j, k, j′)` and then pathway.
pub fn enumerate_pathways(ops: &PolaritonOperators, table: &DephasingTable, threshold: f64) -> Result<Vec<PathwayTerm>> {
    let n1 = ops.mu_01.len();
    let n2 = ops.mu_12.nrows();
    if n1 == 0 || n2 == 0 || ops.mu_12.ncols() != n1 {
        return Err(Error::Dimension(format!(
            "dipole operators are empty or inconsistent: mu_01 {n1}, mu_12 {}x{}",
            ops.mu_12.nrows(),
            ops.mu_12.ncols()
        )));
    }
    if table.energies[1].len() != n1 || table.energies[2].len() != n2 {
        return Err(Error::Dimension("dephasing table does not match the dipole operators".into()));
    }
    let mut weights = Vec::with_capacity(n1 * n1 * n2);
    let mut wmax = 0.0_f64;
    for j in 0..n1 {
        for k in 0..n2 {
            for jp in 0..n1 {
                let w = loop_weight(ops, j, k, jp);
                wmax = wmax.max(w.norm());
                weights.push((j, k, jp, w));
            }
        }
    }
    let cut = threshold * wmax;
    let g = StateRef::new(0, 0);
    let mut terms = Vec::new();
    for (j, k, jp, weight) in weights {
        if weight.norm() < cut {
            continue;
        }
        let (sj, sk, sjp) = (StateRef::new(1, j), StateRef::new(2, k), StateRef::new(1, jp));
        for pathway in [Pathway::A, Pathway::B] {
            terms.push(PathwayTerm {
                j,
                k,
                jp,
                pathway,
                weight,
                z_j0: table.z(sj, g),
                z_k0: table.z(sk, g),
                z_jp0: table.z(sjp, g),
                z_kjp: table.z(sk, sjp),
            });
        }
    }
    Ok(terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalOptions {
    /// Factor multiplying pathway b relative to pathway a.
    pub relative_sign: f64,
    /// Give pathway a the two-one resonance in `Ω3` and pathway b the
    /// one-ground resonance instead.
    #[serde(default)]
    pub swap_final_resonances: bool,
}

impl Default for SignalOptions {
    fn default() -> Self {
        SignalOptions {
            relative_sign: -1.0,
            swap_final_resonances: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, n: usize) -> Self {
        AxisSpec { min, max, n }
    }

    pub fn points(&self) -> Vec<f64> {
        uniform_axis(0.5 * (self.min + self.max), 0.5 * (self.max - self.min), self.n)
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.n == 0 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::config(format!("{name}: need finite min <= max and n > 0, got {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub omega2: AxisSpec,
    pub omega3: AxisSpec,
    /// Defaults to the brightest one-polariton resonance.
    #[serde(default)]
    pub omega1: Option<f64>,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.omega2.validate("omega2")?;
        self.omega3.validate("omega3")?;
        if let Some(w) = self.omega1 {
            if !w.is_finite() {
                return Err(Error::config("omega1 must be finite"));
            }
        }
        Ok(())
    }
}

/// Complex signal on an `Ω2 × Ω3` grid (rows `Ω2`), normalized to
/// `max |S| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub omega1: f64,
    pub omega2: Vec<f64>,
    pub omega3: Vec<f64>,
    pub values: CMatrix,
    /// The normalization `C_s` that was applied.
    pub scale: f64,
    pub n_terms: usize,
}

impl SpectrumGrid {
    pub fn re(&self) -> DMatrix<f64> {
        self.values.map(|z| z.re)
    }

    pub fn im(&self) -> DMatrix<f64> {
        self.values.map(|z| z.im)
    }

    pub fn abs(&self) -> DMatrix<f64> {
        self.values.map(|z| z.norm())
    }
}

/// Real part of `z_j0` for the one-polariton state with the largest `|μ_0j|`.
pub fn default_omega1(ops: &PolaritonOperators, table: &DephasingTable) -> f64 {
    let mut best = 0;
    for j in 1..ops.mu_01.len() {
        if ops.mu_01[j].norm_sqr() > ops.mu_01[best].norm_sqr() {
            best = j;
        }
    }
    table.energies[1][best]
}

/// Unnormalized signal at a single point, summing the terms one by one.
pub fn evaluate_point(
    terms: &[PathwayTerm],
    source: &FieldSource,
    omega: [f64; 3],
    options: &SignalOptions,
) -> Complex64 {
    let [o1, o2, o3] = omega.map(|w| Complex64::new(w, 0.0));
    let mut s = Complex64::new(0.0, 0.0);
    for t in terms {
        let sign = match t.pathway {
            Pathway::A => 1.0,
            Pathway::B => options.relative_sign,
        };
        let den = (o3 - t.z_final(options)) * (o2 - t.z_k0) * (o1 - t.z_j0);
        s += t.weight * t.field(source) * sign / den;
    }
    s
}

/// Unnormalized signal on the grid.
///
/// The sum is regrouped by two-polariton state: each `k` owns an `Ω3`
/// profile, and a grid row is the `Ω2`-weighted sum of the profiles taken in
/// index order. Rows are independent, so the result does not depend on how
/// they are distributed over threads.
pub fn evaluate_raw(
    terms: &[PathwayTerm],
    source: &FieldSource,
    grid: &GridSpec,
    omega1: f64,
    options: &SignalOptions,
) -> Result<CMatrix> {
    grid.validate()?;
    source.validate()?;
    let w2 = grid.omega2.points();
    let w3 = grid.omega3.points();
    let o1 = Complex64::new(omega1, 0.0);

    let n2 = terms.iter().map(|t| t.k + 1).max().unwrap_or(0);
    let mut z_k0 = vec![None; n2];
    let mut by_k: Vec<Vec<(Complex64, Complex64)>> = vec![Vec::new(); n2];
    for t in terms {
        let sign = match t.pathway {
            Pathway::A => 1.0,
            Pathway::B => options.relative_sign,
        };
        let coef = t.weight * t.field(source) * sign / (o1 - t.z_j0);
        by_k[t.k].push((coef, t.z_final(options)));
        z_k0[t.k] = Some(t.z_k0);
    }
    let active: Vec<(Complex64, &Vec<(Complex64, Complex64)>)> = z_k0
        .iter()
        .zip(&by_k)
        .filter_map(|(z, list)| z.map(|z| (z, list)))
        .collect();

    let profiles: Vec<Vec<Complex64>> = active
        .par_iter()
        .map(|(_, list)| {
            w3.iter()
                .map(|&x| {
                    let x = Complex64::new(x, 0.0);
                    list.iter().fold(Complex64::new(0.0, 0.0), |acc, (c, z)| acc + c / (x - z))
                })
                .collect()
        })
        .collect();

    let rows: Vec<Vec<Complex64>> = w2
        .par_iter()
        .map(|&x| {
            let x = Complex64::new(x, 0.0);
            let pole: Vec<Complex64> = active.iter().map(|(z, _)| (x - z).inv()).collect();
            (0..w3.len())
                .map(|i3| {
                    pole.iter()
                        .zip(&profiles)
                        .fold(Complex64::new(0.0, 0.0), |acc, (p, prof)| acc + p * prof[i3])
                })
                .collect()
        })
        .collect();

    let values = CMatrix::from_fn(w2.len(), w3.len(), |i, j| rows[i][j]);
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Pole(
            "signal is not finite on the grid; an undamped resonance lies on a grid point".into(),
        ));
    }
    Ok(values)
}

/// Normalized signal on the grid.
pub fn evaluate_spectrum(
    terms: &[PathwayTerm],
    source: &FieldSource,
    grid: &GridSpec,
    omega1: f64,
    options: &SignalOptions,
) -> Result<SpectrumGrid> {
    let mut values = evaluate_raw(terms, source, grid, omega1, options)?;
    let peak = values.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return Err(Error::Numeric("signal vanishes on the whole grid".into()));
    }
    let scale = 1.0 / peak;
    values.iter_mut().for_each(|z| *z *= scale);
    Ok(SpectrumGrid {
        omega1,
        omega2: grid.omega2.points(),
        omega3: grid.omega3.points(),
        values,
        scale,
        n_terms: terms.len(),
    })
}

/// Strict local maxima of a real map (8-neighbourhood, edges excluded) at or
/// above `floor · max`, largest first.
pub fn local_maxima(map: &DMatrix<f64>, floor: f64) -> Vec<(usize, usize, f64)> {
    let (nr, nc) = map.shape();
    let top = map.iter().fold(0.0_f64, |m, &x| m.max(x));
    let mut out = Vec::new();
    for i in 1..nr.saturating_sub(1) {
        for j in 1..nc.saturating_sub(1) {
            let v = map[(i, j)];
            if v < floor * top {
                continue;
            }
            let mut is_max = true;
            'n: for di in [-1isize, 0, 1] {
                for dj in [-1isize, 0, 1] {
                    if (di, dj) == (0, 0) {
                        continue;
                    }
                    let u = map[((i as isize + di) as usize, (j as isize + dj) as usize)];
                    if u >= v {
                        is_max = false;
                        break 'n;
                    }
                }
            }
            if is_max {
                out.push((i, j, v));
            }
        }
    }
    out.sort_by(|a, b| b.2.total_cmp(&a.2));
    out
}

/// Source and labels of one panel of the entanglement sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSpec {
    pub label: char,
    /// The entanglement time varied along the row this panel belongs to.
    pub t_ent: f64,
    pub sector: String,
    pub excitation: BiphotonSource,
    pub projection: BiphotonSource,
}

impl PanelSpec {
    pub fn source(&self) -> FieldSource {
        FieldSource::Biphoton {
            excitation: self.excitation,
            projection: self.projection,
        }
    }
}

/// Parameters of the six-panel entanglement sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Figure4Config {
    /// Two-polariton target; both pumps are centered here.
    pub target: f64,
    pub tau_p: f64,
    pub omega_a1: f64,
    pub omega_b1: f64,
    pub omega_b2: f64,
    /// Projection entanglement times of panels a, b, c.
    pub upper_t_ent: [f64; 3],
    /// Excitation entanglement time held fixed in panels a to c.
    pub upper_excitation_t_ent: f64,
    /// Excitation entanglement times of panels d, e.
    pub lower_t_ent: [f64; 2],
    /// Projection entanglement time held fixed in panels d to f.
    pub lower_projection_t_ent: f64,
    pub panel_f_omega_a1: f64,
    /// Defaults to `target − panel_f_omega_a1`.
    #[serde(default)]
    pub panel_f_omega_b1: Option<f64>,
    pub panel_f_t_ent: f64,
    pub grid: GridSpec,
    pub threshold: f64,
    #[serde(default)]
    pub options: SignalOptions,
}

impl Default for Figure4Config {
    fn default() -> Self {
        Figure4Config {
            target: 30550.0,
            tau_p: 20.0,
            omega_a1: 15500.0,
            omega_b1: 14500.0,
            omega_b2: 15800.0,
            upper_t_ent: [60.0, 50.0, 40.0],
            upper_excitation_t_ent: 40.0,
            lower_t_ent: [40.0, 10.0],
            lower_projection_t_ent: 40.0,
            panel_f_omega_a1: 15150.0,
            panel_f_omega_b1: None,
            panel_f_t_ent: 10.0,
            grid: GridSpec {
                omega2: AxisSpec::new(29050.0, 32050.0, 256),
                omega3: AxisSpec::new(13800.0, 16800.0, 256),
                omega1: None,
            },
            threshold: 0.0,
            options: SignalOptions::default(),
        }
    }
}

pub const PANEL_LABELS: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'f'];

impl Figure4Config {
    fn arms(&self, omega_a: f64, omega_b: f64, t_ent: f64) -> BiphotonSource {
        BiphotonSource {
            omega_p: self.target,
            ..BiphotonSource::with_arms(omega_a, omega_b, self.tau_p, t_ent)
        }
    }

    pub fn panels(&self) -> Vec<PanelSpec> {
        let projection = |t| self.arms(self.target - self.omega_b2, self.omega_b2, t);
        let mut v = Vec::new();
        for (label, &t) in ['a', 'b', 'c'].iter().zip(&self.upper_t_ent) {
            v.push(PanelSpec {
                label: *label,
                t_ent: t,
                sector: "middle".into(),
                excitation: self.arms(self.omega_a1, self.omega_b1, self.upper_excitation_t_ent),
                projection: projection(t),
            });
        }
        for (label, &t) in ['d', 'e'].iter().zip(&self.lower_t_ent) {
            v.push(PanelSpec {
                label: *label,
                t_ent: t,
                sector: "middle".into(),
                excitation: self.arms(self.omega_a1, self.omega_b1, t),
                projection: projection(self.lower_projection_t_ent),
            });
        }
        let b1 = self.panel_f_omega_b1.unwrap_or(self.target - self.panel_f_omega_a1);
        v.push(PanelSpec {
            label: 'f',
            t_ent: self.panel_f_t_ent,
            sector: "lower".into(),
            excitation: self.arms(self.panel_f_omega_a1, b1, self.panel_f_t_ent),
            projection: projection(self.lower_projection_t_ent),
        });
        v
    }

    pub fn panel(&self, label: char) -> Result<PanelSpec> {
        self.panels()
            .into_iter()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::config(format!("unknown panel '{label}', expected one of a..f")))
    }
}

#[derive(Debug, Clone)]
pub struct PanelResult {
    pub panel: PanelSpec,
    pub spectrum: SpectrumGrid,
    pub dephasing_fingerprint: String,
}

/// Computes the requested panels (all six when `labels` is empty) against
/// one matter model; the pathways are enumerated once and shared.
pub fn run_figure4_protocol(model: &MatterModel, config: &Figure4Config, labels: &[char]) -> Result<Vec<PanelResult>> {
    config.grid.validate()?;
    let panels: Vec<PanelSpec> = if labels.is_empty() {
        config.panels()
    } else {
        labels.iter().map(|&l| config.panel(l)).collect::<Result<_>>()?
    };
    let terms = enumerate_pathways(&model.operators, &model.dephasing, config.threshold)?;
    let omega1 = config
        .grid
        .omega1
        .unwrap_or_else(|| default_omega1(&model.operators, &model.dephasing));
    let fingerprint = model.dephasing.fingerprint();
    panels
        .into_iter()
        .map(|panel| {
            let spectrum = evaluate_spectrum(&terms, &panel.source(), &config.grid, omega1, &config.options)?;
            Ok(PanelResult {
                panel,
                spectrum,
                dephasing_fingerprint: fingerprint.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{AggregateSpec, SiteOperatorSet};
    use crate::dephasing::DephasingTable;
    use crate::polariton::{transform_operators, CavitySpec, PolaritonEigensystem};
    use approx::assert_relative_eq;

    fn one_site() -> (PolaritonOperators, DephasingTable) {
        let spec: AggregateSpec = serde_json::from_str(
            r#"{"sites":[{"energy_cm1":15500,"mu10":1.0,"kappa":1.2,"delta_cm1":-150,"class":"A"}],"hopping":[[0]]}"#,
        )
        .unwrap();
        let sites = SiteOperatorSet::build(&spec).unwrap();
        let cavity = CavitySpec::new(15400.0, 100.0);
        let eig = PolaritonEigensystem::build(&sites, &cavity).unwrap();
        let ops = transform_operators(&sites, &cavity, &eig).unwrap();
        (ops, DephasingTable::uniform(&eig, 30.0))
    }

    fn single(weight: f64, gamma_k0: f64) -> PathwayTerm {
        PathwayTerm {
            j: 0,
            k: 0,
            jp: 0,
            pathway: Pathway::A,
            weight: Complex64::new(weight, 0.0),
            z_j0: Complex64::new(15000.0, -20.0),
            z_k0: Complex64::new(30000.0, -gamma_k0),
            z_jp0: Complex64::new(15100.0, -25.0),
            z_kjp: Complex64::new(14900.0, -30.0),
        }
    }

    #[test]
    fn triple_count_and_pathway_pairs() {
        let (ops, table) = one_site();
        let terms = enumerate_pathways(&ops, &table, 0.0).unwrap();
        assert_eq!(terms.len(), 2 * 2 * 3 * 2);
        assert!(terms.chunks(2).all(|c| c[0].pathway == Pathway::A && c[1].pathway == Pathway::B));
    }

    #[test]
    fn unit_threshold_keeps_the_largest() {
        let (ops, table) = one_site();
        let terms = enumerate_pathways(&ops, &table, 1.0).unwrap();
        let all = enumerate_pathways(&ops, &table, 0.0).unwrap();
        let max = all.iter().map(|t| t.weight.norm()).fold(0.0, f64::max);
        assert!(!terms.is_empty());
        assert!(terms.iter().all(|t| t.weight.norm() == max));
    }

    #[test]
    fn lorentzian_along_omega2() {
        let t = single(1.0, 35.0);
        let opts = SignalOptions::default();
        let at = |w2: f64| evaluate_point(&[t], &FieldSource::Flat, [15000.0, w2, 15100.0], &opts).norm();
        let peak = at(30000.0);
        assert_relative_eq!(at(30035.0) / peak, 1.0 / 2f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(at(29965.0) / peak, 1.0 / 2f64.sqrt(), max_relative = 1e-12);
        assert!(at(30001.0) < peak);
    }

    #[test]
    fn grid_matches_direct_sum() {
        let (ops, table) = one_site();
        let terms = enumerate_pathways(&ops, &table, 0.0).unwrap();
        let s = BiphotonSource::new(30900.0, 20.0, 20.0);
        let source = FieldSource::Biphoton { excitation: s, projection: s };
        let grid = GridSpec {
            omega2: AxisSpec::new(30300.0, 31300.0, 13),
            omega3: AxisSpec::new(14800.0, 16000.0, 11),
            omega1: None,
        };
        let opts = SignalOptions::default();
        let w1 = default_omega1(&ops, &table);
        let raw = evaluate_raw(&terms, &source, &grid, w1, &opts).unwrap();
        for (i, &x2) in grid.omega2.points().iter().enumerate() {
            for (j, &x3) in grid.omega3.points().iter().enumerate() {
                let d = evaluate_point(&terms, &source, [w1, x2, x3], &opts);
                assert!((raw[(i, j)] - d).norm() <= 1e-12 * d.norm().max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn linear_in_weights_and_normalized() {
        let grid = GridSpec {
            omega2: AxisSpec::new(29800.0, 30200.0, 9),
            omega3: AxisSpec::new(14800.0, 15300.0, 9),
            omega1: Some(15000.0),
        };
        let opts = SignalOptions::default();
        let a = evaluate_raw(&[single(1.0, 35.0)], &FieldSource::Flat, &grid, 15000.0, &opts).unwrap();
        let b = evaluate_raw(&[single(3.0, 35.0)], &FieldSource::Flat, &grid, 15000.0, &opts).unwrap();
        assert!((b - a.clone() * Complex64::new(3.0, 0.0)).iter().all(|z| z.norm() < 1e-12 * a.iter().map(|z| z.norm()).fold(0.0, f64::max)));
        let s = evaluate_spectrum(&[single(1.0, 35.0)], &FieldSource::Flat, &grid, 15000.0, &opts).unwrap();
        let top = s.abs().iter().cloned().fold(0.0, f64::max);
        assert_relative_eq!(top, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn undamped_pole_on_grid_is_reported() {
        let mut t = single(1.0, 0.0);
        t.z_k0 = Complex64::new(30000.0, 0.0);
        let grid = GridSpec {
            omega2: AxisSpec::new(29900.0, 30100.0, 3),
            omega3: AxisSpec::new(15000.0, 15200.0, 3),
            omega1: None,
        };
        let r = evaluate_raw(&[t], &FieldSource::Flat, &grid, 15000.0, &SignalOptions::default());
        assert!(matches!(r, Err(Error::Pole(_))));
    }

    #[test]
    fn resolvent_is_minus_i_greens_function() {
        let (_, table) = one_site();
        let (a, g) = (StateRef::new(1, 1), StateRef::new(0, 0));
        for w in [14000.0, 15350.0, 15500.0, 17000.0] {
            let lhs = (Complex64::new(w, 0.0) - table.z(a, g)).inv();
            let rhs = -Complex64::i() * crate::dephasing::greens_function(w, a, g, &table).unwrap();
            assert!((lhs - rhs).norm() < 1e-15 * lhs.norm());
        }
    }

    #[test]
    fn panel_layout() {
        let cfg = Figure4Config::default();
        let p = cfg.panels();
        assert_eq!(p.iter().map(|p| p.label).collect::<String>(), "abcdef");
        assert_eq!(p[0].t_ent, 60.0);
        assert_eq!(p[0].projection.t_ent(), 60.0);
        assert_eq!(p[4].excitation.t_ent(), 10.0);
        assert_eq!(p[5].excitation.center_a, 15150.0);
        assert_eq!(p[5].excitation.center_b, 15400.0);
        assert_eq!(p[0].projection.center_a, 14750.0);
        assert!(cfg.panel('g').unwrap_err().is_config());
    }

    #[test]
    fn local_maxima_finds_isolated_peaks() {
        let mut m = DMatrix::zeros(7, 7);
        m[(2, 2)] = 1.0;
        m[(4, 5)] = 0.5;
        m[(5, 1)] = 0.01;
        let p = local_maxima(&m, 0.05);
        assert_eq!(p, vec![(2, 2, 1.0), (4, 5, 0.5)]);
    }
}
