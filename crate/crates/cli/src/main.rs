//! `dqcsim`: entangled-biphoton DQC spectra of a cavity-coupled aggregate.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dqc_cli::{
    load_aggregate, load_manifest, load_phonons, run, BandsConfig, BathConfig, CliError, DqcConfig, JsaConfig,
    PairSource, Result, RunConfig, SvdConfig, DEFAULT_SEED,
};
use dqc_core::biphoton::{BiphotonSource, ClassicalPulsePair, FieldSource, DEFAULT_SVD_GRID, DEFAULT_SVD_TRUNCATION};
use dqc_core::dephasing::CouplingWeighting;
use dqc_core::model::MatterParams;
use dqc_core::polariton::{CavitySpec, DemoWidths};
use dqc_core::signal::{AxisSpec, Figure4Config, SignalOptions};

#[derive(Parser)]
#[command(name = "dqcsim", version, about, long_about = None)]
struct Cli {
    /// Output directory
    #[arg(long, global = true, env = "DQC_OUT_DIR", default_value = "dqc_out")]
    out: PathBuf,

    /// Threads for the parallel grid evaluation (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    mode: Mode,
}

#[derive(Args)]
struct Matter {
    /// Aggregate parameter JSON (default: bundled placeholder)
    #[arg(long)]
    aggregate: Option<PathBuf>,

    /// Phonon parameter JSON (default: bundled placeholder)
    #[arg(long)]
    phonons: Option<PathBuf>,

    /// Cavity frequency, cm⁻¹
    #[arg(long, default_value_t = 15400.0)]
    omega_c: f64,

    /// Exciton-cavity coupling, cm⁻¹
    #[arg(long, default_value_t = 100.0)]
    g_c: f64,

    #[arg(long, value_enum, default_value_t = Weighting::Inside)]
    weighting: Weighting,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weighting {
    Inside,
    Outside,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SourceKind {
    Biphoton,
    Classical,
}

#[derive(Args)]
struct Pair {
    #[arg(long, value_enum, default_value_t = SourceKind::Biphoton)]
    source: SourceKind,

    /// Pump (or summed pulse) frequency, cm⁻¹
    #[arg(long, default_value_t = 30550.0)]
    pump: f64,

    /// Pump duration (or classical pulse duration), fs
    #[arg(long, default_value_t = 20.0)]
    taup: f64,

    /// Entanglement time, fs
    #[arg(long, default_value_t = 40.0)]
    tent: f64,

    /// Signal-arm center, cm⁻¹ (default: half the pump)
    #[arg(long)]
    arm_a: Option<f64>,
}

impl Pair {
    fn resolve(&self) -> PairSource {
        let a = self.arm_a.unwrap_or(0.5 * self.pump);
        let b = self.pump - a;
        match self.source {
            SourceKind::Biphoton => PairSource::Biphoton(BiphotonSource::with_arms(a, b, self.taup, self.tent)),
            SourceKind::Classical => PairSource::Classical(ClassicalPulsePair {
                omega_1: a,
                omega_2: b,
                tau_g: self.taup,
            }),
        }
    }
}

#[derive(Subcommand)]
enum Mode {
    /// Polariton energies across a cavity-frequency scan
    Bands {
        #[command(flatten)]
        matter: Matter,
        #[arg(long, default_value_t = 14000.0)]
        omega_c_min: f64,
        #[arg(long, default_value_t = 17000.0)]
        omega_c_max: f64,
        #[arg(long, default_value_t = 61)]
        steps: usize,
        /// Seed of the demo width draw
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Spectral density J(ω) and correlation function C(τ)
    Bath {
        #[arg(long)]
        phonons: Option<PathBuf>,
        /// fs
        #[arg(long, default_value_t = 0.5)]
        tau_min: f64,
        #[arg(long, default_value_t = 500.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 1000)]
        tau_n: usize,
        /// cm⁻¹
        #[arg(long, default_value_t = 0.0)]
        omega_min: f64,
        #[arg(long, default_value_t = 2000.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 2001)]
        omega_n: usize,
    },
    /// Joint spectral amplitude on a grid
    Jsa {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 128)]
        grid: usize,
    },
    /// Schmidt (singular value) spectrum of the joint amplitude
    Svd {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = DEFAULT_SVD_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_SVD_TRUNCATION)]
        n_svd: usize,
    },
    /// Two-dimensional DQC spectrum
    Dqc(Box<DqcArgs>),
    /// Repeat a run from its manifest
    Replay { manifest: PathBuf },
}

#[derive(Args)]
struct DqcArgs {
    #[command(flatten)]
    matter: Matter,

    /// Fixed Ω1, cm⁻¹ (default: brightest one-polariton resonance)
    #[arg(long)]
    omega1: Option<f64>,

    /// Ω2 window MIN:MAX, cm⁻¹
    #[arg(long, value_parser = parse_range, default_value = "29050:32050")]
    omega2_range: (f64, f64),

    /// Ω3 window MIN:MAX, cm⁻¹
    #[arg(long, value_parser = parse_range, default_value = "13800:16800")]
    omega3_range: (f64, f64),

    /// Points per axis
    #[arg(long, default_value_t = 256)]
    grid: usize,

    #[arg(long, value_enum, default_value_t = SourceKind::Biphoton)]
    source: SourceKind,

    /// Entanglement time, fs
    #[arg(long, conflicts_with = "panel")]
    tent: Option<f64>,

    /// Pump duration, fs
    #[arg(long)]
    taup: Option<f64>,

    /// Pump frequency, cm⁻¹
    #[arg(long)]
    pump: Option<f64>,

    /// Drop pathways whose weight falls below this
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,

    /// One panel of the entanglement sweep (a..f)
    #[arg(long)]
    panel: Option<char>,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected MIN:MAX")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    Ok((a, b))
}

fn matter_params(m: &Matter) -> Result<MatterParams> {
    Ok(MatterParams {
        aggregate: load_aggregate(m.aggregate.as_deref())?,
        cavity: CavitySpec::new(m.omega_c, m.g_c),
        bath: load_phonons(m.phonons.as_deref())?,
        weighting: match m.weighting {
            Weighting::Inside => CouplingWeighting::InsideOverlap,
            Weighting::Outside => CouplingWeighting::OutsideOverlap,
        },
    })
}

fn dqc_config(a: &DqcArgs) -> Result<DqcConfig> {
    let mut sweep = Figure4Config::default();
    sweep.grid.omega2 = AxisSpec::new(a.omega2_range.0, a.omega2_range.1, a.grid);
    sweep.grid.omega3 = AxisSpec::new(a.omega3_range.0, a.omega3_range.1, a.grid);
    sweep.grid.omega1 = a.omega1;
    let (panel, source) = match a.panel {
        Some(label) => {
            if a.source != SourceKind::Biphoton {
                return Err(CliError::Usage("--panel requires --source biphoton".into()));
            }
            if let Some(p) = a.pump {
                sweep.target = p;
            }
            if let Some(t) = a.taup {
                sweep.tau_p = t;
            }
            let panel = sweep.panel(label)?;
            let source = panel.source();
            (Some(panel), source)
        }
        None => {
            let pump = a.pump.unwrap_or(sweep.target);
            let taup = a.taup.unwrap_or(sweep.tau_p);
            let tent = a.tent.unwrap_or(sweep.upper_excitation_t_ent);
            let source = match a.source {
                SourceKind::Biphoton => {
                    let s = BiphotonSource::new(pump, taup, tent);
                    FieldSource::Biphoton {
                        excitation: s,
                        projection: s,
                    }
                }
                SourceKind::Classical => {
                    let p = ClassicalPulsePair {
                        omega_1: 0.5 * pump,
                        omega_2: 0.5 * pump,
                        tau_g: taup,
                    };
                    FieldSource::Classical {
                        excitation: p,
                        projection: p,
                    }
                }
            };
            (None, source)
        }
    };
    Ok(DqcConfig {
        matter: matter_params(&a.matter)?,
        panel,
        source,
        grid: sweep.grid,
        threshold: a.threshold,
        options: SignalOptions::default(),
    })
}

fn resolve(mode: Mode) -> Result<RunConfig> {
    Ok(match mode {
        Mode::Bands {
            matter,
            omega_c_min,
            omega_c_max,
            steps,
            seed,
        } => RunConfig::Bands(BandsConfig {
            aggregate: load_aggregate(matter.aggregate.as_deref())?,
            g_c: matter.g_c,
            omega_c: AxisSpec::new(omega_c_min, omega_c_max, steps),
            widths: DemoWidths::default(),
            seed,
        }),
        Mode::Bath {
            phonons,
            tau_min,
            tau_max,
            tau_n,
            omega_min,
            omega_max,
            omega_n,
        } => RunConfig::Bath(BathConfig {
            bath: load_phonons(phonons.as_deref())?,
            tau: AxisSpec::new(tau_min, tau_max, tau_n),
            omega: AxisSpec::new(omega_min, omega_max, omega_n),
        }),
        Mode::Jsa { pair, grid } => RunConfig::Jsa(JsaConfig {
            source: pair.resolve(),
            n: grid,
        }),
        Mode::Svd { pair, grid, n_svd } => RunConfig::Svd(SvdConfig {
            source: pair.resolve(),
            n: grid,
            n_svd,
        }),
        Mode::Dqc(args) => RunConfig::Dqc(Box::new(dqc_config(&args)?)),
        Mode::Replay { manifest } => load_manifest(&manifest)?.config,
    })
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--workers {n}: {e}")))?;
    }
    let out: &Path = &cli.out;
    let manifest = run(resolve(cli.mode)?, out)?;
    println!("{}", out.join(dqc_cli::MANIFEST).display());
    log::debug!("finished in {:.3} s", manifest.wall_time_s);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dqcsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
