//! Run configuration, execution and file output for `dqcsim`.
//!
//! Every run is first resolved into a [`RunConfig`] that holds every number
//! the computation reads. That config is written back into `manifest.json`,
//! so `dqcsim replay` can repeat a run from the manifest alone.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use dqc_core::aggregate::{AggregateSpec, SiteOperatorSet};
use dqc_core::bath::{PhononFile, SpectralDensity};
use dqc_core::biphoton::{schmidt_svd, BiphotonSource, ClassicalPulsePair, FieldSource, JointSpectralGrid};
use dqc_core::model::{MatterModel, MatterParams};
use dqc_core::polariton::{manifold_dim, scan_bands, DemoWidths};
use dqc_core::signal::{
    default_omega1, enumerate_pathways, evaluate_spectrum, local_maxima, AxisSpec, GridSpec, PanelSpec, SignalOptions,
    SpectrumGrid,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.json";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: serde_json::Error },

    #[error("{}: {source}", path.display())]
    Invalid { path: PathBuf, source: dqc_core::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] dqc_core::Error),
}

impl CliError {
    /// 2 for anything wrong with the inputs or the environment, 3 for
    /// failures of the numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_config() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })
}

pub fn load_aggregate(path: Option<&Path>) -> Result<AggregateSpec> {
    let Some(path) = path else {
        return Ok(AggregateSpec::placeholder());
    };
    let spec: AggregateSpec = read_json(path)?;
    spec.validate().map_err(|source| CliError::Invalid {
        path: path.into(),
        source,
    })?;
    Ok(spec)
}

pub fn load_phonons(path: Option<&Path>) -> Result<PhononFile> {
    let Some(path) = path else {
        return Ok(SpectralDensity::placeholder().to_file());
    };
    let file: PhononFile = read_json(path)?;
    SpectralDensity::from_file(&file).map_err(|source| CliError::Invalid {
        path: path.into(),
        source,
    })?;
    Ok(file)
}

pub fn load_manifest(path: &Path) -> Result<Manifest> {
    read_json(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandsConfig {
    pub aggregate: AggregateSpec,
    pub g_c: f64,
    pub omega_c: AxisSpec,
    pub widths: DemoWidths,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub bath: PhononFile,
    /// fs
    pub tau: AxisSpec,
    /// cm⁻¹
    pub omega: AxisSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSource {
    Biphoton(BiphotonSource),
    Classical(ClassicalPulsePair),
}

impl PairSource {
    fn validate(&self) -> dqc_core::Result<()> {
        match self {
            PairSource::Biphoton(s) => s.validate(),
            PairSource::Classical(p) => p.validate(),
        }
    }

    fn grid(&self, n: usize) -> JointSpectralGrid {
        match self {
            PairSource::Biphoton(s) => JointSpectralGrid::biphoton(s, n),
            PairSource::Classical(p) => JointSpectralGrid::classical(p, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsaConfig {
    pub source: PairSource,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SvdConfig {
    pub source: PairSource,
    pub n: usize,
    pub n_svd: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DqcConfig {
    pub matter: MatterParams,
    /// Set when the source came from one panel of the entanglement sweep.
    #[serde(default)]
    pub panel: Option<PanelSpec>,
    pub source: FieldSource,
    pub grid: GridSpec,
    pub threshold: f64,
    pub options: SignalOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunConfig {
    Bands(BandsConfig),
    Bath(BathConfig),
    Jsa(JsaConfig),
    Svd(SvdConfig),
    Dqc(Box<DqcConfig>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub program: String,
    pub version: String,
    /// Fully resolved; defaults are written out explicitly.
    pub config: RunConfig,
    /// Sizes of the 0-, 1- and 2-polariton manifolds.
    #[serde(default)]
    pub dims: Option<[usize; 3]>,
    pub outputs: Vec<OutputFile>,
    pub workers: usize,
    pub wall_time_s: f64,
}

/// One file to write: its name and contents.
struct Artifact {
    file: String,
    body: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv<I>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut s = String::new();
    s.push_str(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn run_bands(cfg: &BandsConfig) -> Result<(Vec<Artifact>, [usize; 3])> {
    let sites = SiteOperatorSet::build(&cfg.aggregate)?;
    let ns = sites.n_sites();
    let dims = [manifold_dim(ns, 0), manifold_dim(ns, 1), manifold_dim(ns, 2)];
    let points = scan_bands(&sites, cfg.g_c, &cfg.omega_c.points(), &cfg.widths, cfg.seed)?;
    let body = csv(
        "omega_c,manifold,index,energy,dephasing_width",
        points.iter().map(|p| {
            vec![
                num(p.omega_c),
                p.manifold.to_string(),
                p.index.to_string(),
                num(p.energy),
                num(p.width),
            ]
        }),
    );
    Ok((vec![Artifact { file: "bands.csv".into(), body }], dims))
}

fn run_bath(cfg: &BathConfig) -> Result<Vec<Artifact>> {
    let sd = SpectralDensity::from_file(&cfg.bath)?;
    let corr = sd.correlation();
    let mut rows = Vec::with_capacity(cfg.tau.n);
    for t in cfg.tau.points() {
        let c = corr.correlation_time(t)?;
        rows.push(vec![num(t), num(c.re), num(c.im)]);
    }
    let time = csv("tau_fs,re_c,im_c", rows);
    let freq = csv(
        "omega,j,re_c_half,im_c_half",
        cfg.omega.points().into_iter().map(|w| {
            let c = corr.correlation_freq(w);
            vec![num(w), num(sd.spectral_density(w)), num(c.re), num(c.im)]
        }),
    );
    Ok(vec![
        Artifact {
            file: "bath_correlation.csv".into(),
            body: time,
        },
        Artifact {
            file: "bath_spectral_density.csv".into(),
            body: freq,
        },
    ])
}

fn run_jsa(cfg: &JsaConfig) -> Result<Vec<Artifact>> {
    cfg.source.validate()?;
    let grid = cfg.source.grid(cfg.n);
    let mut rows = Vec::with_capacity(cfg.n * cfg.n);
    for (i, &a) in grid.omega_a.iter().enumerate() {
        for (j, &b) in grid.omega_b.iter().enumerate() {
            let z = grid.amplitude[(i, j)];
            rows.push(vec![num(a), num(b), num(z.re), num(z.im), num(z.norm())]);
        }
    }
    let body = csv("omega_a,omega_b,re,im,abs", rows);
    Ok(vec![Artifact { file: "jsa.csv".into(), body }])
}

fn run_svd(cfg: &SvdConfig) -> Result<Vec<Artifact>> {
    cfg.source.validate()?;
    let spectrum = schmidt_svd(&cfg.source.grid(cfg.n), cfg.n_svd)?;
    let body = csv(
        "index,sigma,sigma2",
        spectrum
            .sigma
            .iter()
            .enumerate()
            .map(|(i, s)| vec![i.to_string(), num(*s), num(s * s)]),
    );
    let meta = serde_json::to_string_pretty(&spectrum).map_err(dqc_core::Error::from)?;
    Ok(vec![
        Artifact { file: "svd.csv".into(), body },
        Artifact {
            file: "svd.json".into(),
            body: meta + "\n",
        },
    ])
}

#[derive(Serialize)]
struct DqcSidecar<'a> {
    panel: Option<char>,
    t_ent: Option<f64>,
    omega1: f64,
    /// Factor that brought the raw signal to `max |S| = 1`.
    scale: f64,
    n_terms: usize,
    n_omega2: usize,
    n_omega3: usize,
    dephasing_fingerprint: &'a str,
    /// Local maxima of |S| above 5 % of the peak: (Ω2, Ω3, |S|).
    maxima: Vec<[f64; 3]>,
}

fn dqc_grid_csv(s: &SpectrumGrid) -> String {
    let mut out = String::from("omega2,omega3,re_s,im_s,abs_s\n");
    for (i, &w2) in s.omega2.iter().enumerate() {
        for (j, &w3) in s.omega3.iter().enumerate() {
            let z = s.values[(i, j)];
            let _ = writeln!(out, "{},{},{},{},{}", num(w2), num(w3), num(z.re), num(z.im), num(z.norm()));
        }
    }
    out
}

/// Runs the signal calculation and pins `grid.omega1` in the returned config.
fn run_dqc(cfg: &DqcConfig) -> Result<(Vec<Artifact>, [usize; 3], DqcConfig)> {
    cfg.source.validate()?;
    cfg.grid.validate()?;
    let model = MatterModel::build(cfg.matter.clone())?;
    let dims = model.eigen.dims();
    let terms = enumerate_pathways(&model.operators, &model.dephasing, cfg.threshold)?;
    let omega1 = cfg
        .grid
        .omega1
        .unwrap_or_else(|| default_omega1(&model.operators, &model.dephasing));
    let spectrum = evaluate_spectrum(&terms, &cfg.source, &cfg.grid, omega1, &cfg.options)?;
    let fingerprint = model.dephasing.fingerprint();

    let maxima = local_maxima(&spectrum.abs(), 0.05)
        .into_iter()
        .map(|(i, j, v)| [spectrum.omega2[i], spectrum.omega3[j], v])
        .collect();
    let sidecar = DqcSidecar {
        panel: cfg.panel.as_ref().map(|p| p.label),
        t_ent: cfg.panel.as_ref().map(|p| p.t_ent),
        omega1,
        scale: spectrum.scale,
        n_terms: spectrum.n_terms,
        n_omega2: spectrum.omega2.len(),
        n_omega3: spectrum.omega3.len(),
        dephasing_fingerprint: &fingerprint,
        maxima,
    };
    let stem = match &cfg.panel {
        Some(p) => format!("dqc_{}", p.label),
        None => "dqc".to_string(),
    };
    let meta = serde_json::to_string_pretty(&sidecar).map_err(dqc_core::Error::from)?;
    let mut resolved = cfg.clone();
    resolved.grid.omega1 = Some(omega1);
    Ok((
        vec![
            Artifact {
                file: format!("{stem}.csv"),
                body: dqc_grid_csv(&spectrum),
            },
            Artifact {
                file: format!("{stem}.json"),
                body: meta + "\n",
            },
        ],
        dims,
        resolved,
    ))
}

fn write_file(path: &Path, body: &[u8]) -> Result<()> {
    fs::write(path, body).map_err(|source| CliError::Write {
        path: path.into(),
        source,
    })
}

/// Executes `config`, writes its artifacts and `manifest.json` into
/// `out_dir`, and returns the manifest.
pub fn run(config: RunConfig, out_dir: &Path) -> Result<Manifest> {
    let start = Instant::now();
    let (artifacts, dims, config) = match config {
        RunConfig::Bands(c) => {
            let (a, d) = run_bands(&c)?;
            (a, Some(d), RunConfig::Bands(c))
        }
        RunConfig::Bath(c) => (run_bath(&c)?, None, RunConfig::Bath(c)),
        RunConfig::Jsa(c) => (run_jsa(&c)?, None, RunConfig::Jsa(c)),
        RunConfig::Svd(c) => (run_svd(&c)?, None, RunConfig::Svd(c)),
        RunConfig::Dqc(c) => {
            let (a, d, resolved) = run_dqc(&c)?;
            (a, Some(d), RunConfig::Dqc(Box::new(resolved)))
        }
    };

    fs::create_dir_all(out_dir).map_err(|source| CliError::Write {
        path: out_dir.into(),
        source,
    })?;
    let mut outputs = Vec::with_capacity(artifacts.len());
    for a in &artifacts {
        write_file(&out_dir.join(&a.file), a.body.as_bytes())?;
        outputs.push(OutputFile {
            file: a.file.clone(),
            sha256: sha256_hex(a.body.as_bytes()),
        });
    }
    let manifest = Manifest {
        program: "dqcsim".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config,
        dims,
        outputs,
        workers: rayon::current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(dqc_core::Error::from)? + "\n";
    write_file(&out_dir.join(MANIFEST), text.as_bytes())?;
    for o in &manifest.outputs {
        log::info!("wrote {} ({})", out_dir.join(&o.file).display(), &o.sha256[..12]);
    }
    Ok(manifest)
}
