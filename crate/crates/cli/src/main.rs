//! `dmasim`: batch runner for the wideband DMA experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use dma_core::channel::effective_channel;
use dma_core::experiment::{self, ExperimentKind, ExperimentPlan, DEFAULT_TRIALS};
use dma_core::params::SimConfig;

#[derive(Parser)]
#[command(
    name = "dmasim",
    version,
    about = "Wideband DMA beamforming experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximation vs simulated center-frequency gain (tuning sweep, Λ sweep, per subcarrier).
    ValidateApprox(RunArgs),
    /// Spectral efficiency vs signal bandwidth (Hz).
    SweepBandwidth(RunArgs),
    /// Spectral efficiency vs tuning bandwidth (multiples of Γ).
    SweepTuning(RunArgs),
    /// Spectral efficiency vs radiated power fraction Λ.
    SweepLambda(RunArgs),
    /// Spectral efficiency vs steering angle (degrees).
    SweepAngle(RunArgs),
    /// Spectral efficiency vs element spacing (wavelengths) at fixed aperture length.
    SweepSpacing(RunArgs),
    /// Spectral efficiency vs quality factor Q (damping Γ = 2π f_t / Q).
    SweepDamping(RunArgs),
    /// Best data rate over the bandwidth sweep, per tuning bandwidth (multiples of Γ).
    MaxRate(RunArgs),
    /// Seeded multipath Monte-Carlo over the number of paths.
    MultipathMc(RunArgs),
    /// Print the effective configuration as TOML.
    ShowConfig(ConfigArgs),
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Comma-separated axis values, strictly increasing. Units follow the subcommand.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,

    /// Monte-Carlo trials per axis point.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,

    /// Pin the first multipath ray to the line-of-sight direction.
    #[arg(long)]
    pin_los: bool,

    /// Add a phased-array reference with this feed loss in dB.
    #[arg(long)]
    phased_array_loss: Option<f64>,

    /// Also write the line-of-sight channel of the base config to `channel.csv`.
    #[arg(long)]
    dump_channel: bool,
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Default)]
#[command(next_help_heading = "Config overrides")]
struct Overrides {
    #[arg(long)]
    carrier_frequency: Option<f64>,
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long)]
    subcarriers: Option<usize>,
    /// Steering angle in degrees.
    #[arg(long, allow_hyphen_values = true)]
    steering_angle_deg: Option<f64>,
    #[arg(long)]
    distance: Option<f64>,
    #[arg(long)]
    input_power: Option<f64>,
    #[arg(long)]
    noise_temperature: Option<f64>,
    #[arg(long)]
    dma_efficiency: Option<f64>,
    #[arg(long)]
    n_slot: Option<usize>,
    #[arg(long)]
    element_spacing: Option<f64>,
    #[arg(long)]
    quality_factor: Option<f64>,
    #[arg(long)]
    tuning_bandwidth: Option<f64>,
    #[arg(long)]
    radiated_fraction: Option<f64>,
    #[arg(long)]
    permittivity: Option<f64>,
    #[arg(long)]
    cutoff_frequency: Option<f64>,
    #[arg(long)]
    coupling_factor: Option<f64>,
    #[arg(long)]
    resolution: Option<usize>,
}

impl Overrides {
    fn apply(&self, sim: &mut SimConfig) {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { sim.$field = v; })*
            };
        }
        set!(
            carrier_frequency,
            bandwidth,
            subcarriers,
            distance,
            input_power,
            noise_temperature,
            dma_efficiency,
            n_slot,
            quality_factor,
            radiated_fraction,
            permittivity,
            cutoff_frequency,
            coupling_factor,
            resolution
        );
        if let Some(deg) = self.steering_angle_deg {
            sim.steering_angle = deg.to_radians();
        }
        if self.element_spacing.is_some() {
            sim.element_spacing = self.element_spacing;
        }
        if self.tuning_bandwidth.is_some() {
            sim.tuning_bandwidth = self.tuning_bandwidth;
        }
    }
}

impl ConfigArgs {
    fn load(&self) -> Result<SimConfig> {
        let mut sim = match &self.config {
            Some(path) => SimConfig::load(path)?,
            None => SimConfig::default(),
        };
        self.overrides.apply(&mut sim);
        sim.validate()?;
        Ok(sim)
    }
}

fn run_experiment(kind: ExperimentKind, args: &RunArgs) -> Result<()> {
    let sim = args.config.load()?;
    let plan = ExperimentPlan {
        kind,
        values: args.values.clone(),
        trials: args.trials,
        seed: args.seed,
        out: args.out.clone(),
        pin_los: args.pin_los,
        phased_array_loss_db: args.phased_array_loss,
    };
    let mut files = experiment::run(&plan, &sim)?;
    if args.dump_channel {
        let (cfg, design) = (sim.scenario(), sim.design());
        let channels = effective_channel(&cfg, &design, &cfg.subcarrier_grid()?)?;
        let path = args.out.join("channel.csv");
        channels.write_csv(&path, &format!("dmasim {kind} channel"))?;
        files.push(path);
    }
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let (kind, args) = match &cli.command {
        Command::ShowConfig(config) => {
            print!("{}", config.load()?.to_toml());
            return Ok(());
        }
        Command::ValidateApprox(a) => (ExperimentKind::ValidateApprox, a),
        Command::SweepBandwidth(a) => (ExperimentKind::SweepBandwidth, a),
        Command::SweepTuning(a) => (ExperimentKind::SweepTuning, a),
        Command::SweepLambda(a) => (ExperimentKind::SweepLambda, a),
        Command::SweepAngle(a) => (ExperimentKind::SweepAngle, a),
        Command::SweepSpacing(a) => (ExperimentKind::SweepSpacing, a),
        Command::SweepDamping(a) => (ExperimentKind::SweepDamping, a),
        Command::MaxRate(a) => (ExperimentKind::MaxRate, a),
        Command::MultipathMc(a) => (ExperimentKind::MultipathMc, a),
    };
    run_experiment(kind, args).with_context(|| format!("{kind} failed"))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmasim: {e:#}");
            ExitCode::FAILURE
        }
    }
}
