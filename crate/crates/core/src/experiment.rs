//! Batch experiments. Each plan validates its whole axis up front, evaluates
//! the sweep points on the rayon pool and writes CSV files in axis order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::approx_gain;
use crate::beamform::{phased_array_baseline, Algorithm, ResonanceGrid};
use crate::channel::{effective_channel, multipath_channel, ChannelSet, MultipathSpec};
use crate::metrics::{
    dma_spectrum, dma_weights, normalization, phased_array_spectrum, radiated_fraction,
    snr_profile, GainSpectrum,
};
use crate::params::SimConfig;
use crate::report::write_rows;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    ValidateApprox,
    SweepBandwidth,
    SweepTuning,
    SweepLambda,
    SweepAngle,
    SweepSpacing,
    SweepDamping,
    MaxRate,
    MultipathMc,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::ValidateApprox,
        ExperimentKind::SweepBandwidth,
        ExperimentKind::SweepTuning,
        ExperimentKind::SweepLambda,
        ExperimentKind::SweepAngle,
        ExperimentKind::SweepSpacing,
        ExperimentKind::SweepDamping,
        ExperimentKind::MaxRate,
        ExperimentKind::MultipathMc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ValidateApprox => "validate-approx",
            ExperimentKind::SweepBandwidth => "sweep-bandwidth",
            ExperimentKind::SweepTuning => "sweep-tuning",
            ExperimentKind::SweepLambda => "sweep-lambda",
            ExperimentKind::SweepAngle => "sweep-angle",
            ExperimentKind::SweepSpacing => "sweep-spacing",
            ExperimentKind::SweepDamping => "sweep-damping",
            ExperimentKind::MaxRate => "max-rate",
            ExperimentKind::MultipathMc => "multipath-mc",
        }
    }

    /// Name of the swept quantity and its unit in the output files.
    pub fn axis(self) -> &'static str {
        match self {
            ExperimentKind::SweepBandwidth => "bandwidth_hz",
            ExperimentKind::ValidateApprox
            | ExperimentKind::SweepTuning
            | ExperimentKind::MaxRate => "tuning_bandwidth_per_damping",
            ExperimentKind::SweepLambda => "radiated_fraction",
            ExperimentKind::SweepAngle => "steering_angle_deg",
            ExperimentKind::SweepSpacing => "spacing_wavelengths",
            ExperimentKind::SweepDamping => "quality_factor",
            ExperimentKind::MultipathMc => "paths",
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            ExperimentKind::SweepBandwidth => DEFAULT_BANDWIDTHS.to_vec(),
            ExperimentKind::ValidateApprox | ExperimentKind::SweepTuning => {
                vec![0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0]
            }
            ExperimentKind::MaxRate => vec![0.25, 0.5, 1.0, 2.0, 4.0],
            ExperimentKind::SweepLambda => DEFAULT_LAMBDAS.to_vec(),
            ExperimentKind::SweepAngle => (-6..=6).map(|i| 10.0 * i as f64).collect(),
            ExperimentKind::SweepSpacing => vec![0.25, 1.0 / 3.0, 0.5],
            ExperimentKind::SweepDamping => vec![25.0, 50.0, 100.0, 200.0, 400.0],
            ExperimentKind::MultipathMc => vec![1.0, 2.0, 4.0],
        }
    }

    fn check_value(self, v: f64) -> std::result::Result<(), String> {
        let ok = match self {
            ExperimentKind::SweepBandwidth
            | ExperimentKind::SweepSpacing
            | ExperimentKind::SweepDamping => v > 0.0,
            ExperimentKind::ValidateApprox
            | ExperimentKind::SweepTuning
            | ExperimentKind::MaxRate => v >= 0.0,
            ExperimentKind::SweepLambda => v > 0.0 && v < 1.0,
            ExperimentKind::SweepAngle => v.abs() < 90.0,
            ExperimentKind::MultipathMc => v >= 1.0 && v.fract() == 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(format!(
                "value {v} is outside the domain of {}",
                self.axis()
            ))
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("experiment", format!("unknown kind `{s}`")))
    }
}

/// Bandwidth sweep (Hz) used by `sweep-bandwidth` and `max-rate`.
pub const DEFAULT_BANDWIDTHS: [f64; 8] = [25e6, 50e6, 100e6, 200e6, 400e6, 800e6, 1.6e9, 3.2e9];
pub const DEFAULT_LAMBDAS: [f64; 6] = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99];
pub const DEFAULT_TRIALS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub kind: ExperimentKind,
    /// Axis values; `None` selects the kind's default axis.
    pub values: Option<Vec<f64>>,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Pin the first multipath ray to the line-of-sight direction.
    pub pin_los: bool,
    /// Adds a phased-array row with this feed loss (dB) where the kind supports it.
    pub phased_array_loss_db: Option<f64>,
}

impl ExperimentPlan {
    pub fn new(kind: ExperimentKind, out: impl Into<PathBuf>) -> Self {
        Self {
            kind,
            values: None,
            trials: DEFAULT_TRIALS,
            seed: 0,
            out: out.into(),
            pin_los: false,
            phased_array_loss_db: None,
        }
    }

    pub fn axis_values(&self) -> Vec<f64> {
        self.values
            .clone()
            .unwrap_or_else(|| self.kind.default_values())
    }

    /// Checks the axis and the trial count. Every sweep point's config is
    /// also validated here, before any computation starts.
    pub fn validate(&self, sim: &SimConfig) -> Result<()> {
        let values = self.axis_values();
        if values.is_empty() {
            return Err(Error::InvalidAxis("no axis values".into()));
        }
        for v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidAxis(format!("non-finite value {v}")));
            }
            self.kind.check_value(*v).map_err(Error::InvalidAxis)?;
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAxis(
                "values must be strictly increasing".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        if let Some(loss) = self.phased_array_loss_db {
            if !loss.is_finite() {
                return Err(Error::invalid("phased_array_loss_db", "must be finite"));
            }
        }
        sim.validate()?;
        match self.kind {
            ExperimentKind::ValidateApprox => {
                for v in &values {
                    sweep_point(ExperimentKind::SweepTuning, sim, *v).validate()?;
                }
                for v in DEFAULT_LAMBDAS {
                    sweep_point(ExperimentKind::SweepLambda, sim, v).validate()?;
                }
            }
            ExperimentKind::MaxRate => {
                for v in &values {
                    let point = sweep_point(ExperimentKind::SweepTuning, sim, *v);
                    for b in DEFAULT_BANDWIDTHS {
                        sweep_point(ExperimentKind::SweepBandwidth, &point, b).validate()?;
                    }
                }
            }
            ExperimentKind::MultipathMc => {}
            kind => {
                for v in &values {
                    sweep_point(kind, sim, *v).validate()?;
                }
            }
        }
        Ok(())
    }
}

/// Config for one point of a sweep axis.
pub fn sweep_point(kind: ExperimentKind, sim: &SimConfig, value: f64) -> SimConfig {
    let mut point = sim.clone();
    match kind {
        ExperimentKind::SweepBandwidth => point.bandwidth = value,
        ExperimentKind::ValidateApprox | ExperimentKind::SweepTuning | ExperimentKind::MaxRate => {
            point.tuning_bandwidth = Some(value * sim.design().damping());
        }
        ExperimentKind::SweepLambda => point.radiated_fraction = value,
        ExperimentKind::SweepAngle => point.steering_angle = value.to_radians(),
        ExperimentKind::SweepSpacing => {
            // Fixed aperture: N_slot·d_x of the base config.
            let base = sim.design();
            let aperture = base.n_slot as f64 * base.spacing;
            let spacing = value * sim.wavelength();
            point.element_spacing = Some(spacing);
            point.n_slot = ((aperture / spacing).round() as usize).max(1);
        }
        ExperimentKind::SweepDamping => {
            // Keep an explicit tuning bandwidth fixed; otherwise it follows Γ/4.
            point.quality_factor = value;
        }
        ExperimentKind::MultipathMc => {}
    }
    point
}

/// Line-of-sight channel and SNR profile for a config.
pub fn los_setup(sim: &SimConfig) -> Result<(ChannelSet, Vec<f64>)> {
    let (cfg, design) = (sim.scenario(), sim.design());
    let channels = effective_channel(&cfg, &design, &cfg.subcarrier_grid()?)?;
    let snr = snr_profile(&channels, &cfg, 1.0);
    Ok((channels, snr))
}

/// Runs one algorithm on a prepared channel.
pub fn evaluate(
    sim: &SimConfig,
    channels: &ChannelSet,
    snr: &[f64],
    algorithm: Algorithm,
) -> Result<GainSpectrum> {
    let (cfg, design) = (sim.scenario(), sim.design());
    let grid = ResonanceGrid::new(design.tuning_range(), sim.resolution)?;
    let config = algorithm.configure(channels, snr, &grid, &design)?;
    dma_spectrum(channels, &config, &cfg, &design)
}

/// Simulated center-frequency gain next to the closed-form approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxComparison {
    pub frequencies: Vec<f64>,
    pub simulated: Vec<f64>,
    pub f_freq: Vec<f64>,
    /// `F_freq·W_fill·A_leak`.
    pub approx: Vec<f64>,
    /// `approx · M_k·||h_att||²`, on the scale of the normalized simulated gain.
    pub approx_normalized: Vec<f64>,
    pub w_fill: f64,
    pub a_leak: f64,
}

impl ApproxComparison {
    pub fn simulated_sum(&self) -> f64 {
        self.simulated.iter().sum()
    }

    pub fn approx_sum(&self) -> f64 {
        self.approx_normalized.iter().sum()
    }
}

/// Runs the center-frequency beamformer and the approximation on the same scenario.
///
/// The approximation assumes unit-amplitude element contributions, so it is
/// rescaled by `M_k·||h_att||²` computed from the center-frequency weights.
pub fn compare_approximation(sim: &SimConfig) -> Result<ApproxComparison> {
    let (cfg, design) = (sim.scenario(), sim.design());
    let (channels, snr) = los_setup(sim)?;
    let grid = ResonanceGrid::new(design.tuning_range(), sim.resolution)?;
    let config = Algorithm::CenterFrequency.configure(&channels, &snr, &grid, &design)?;
    let simulated = dma_spectrum(&channels, &config, &cfg, &design)?.gain;
    let breakdown = approx_gain(&channels.grid, &cfg, &design)?;
    let weights = dma_weights(&channels, &config, &design)?;
    let fraction = radiated_fraction(&design)?;
    let approx_normalized = (0..channels.subcarriers())
        .map(|k| {
            let m = normalization(&weights[k], &channels.taper[k], fraction)?;
            Ok(breakdown.product[k] * m * channels.taper_energy(k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproxComparison {
        frequencies: breakdown.frequencies,
        simulated,
        f_freq: breakdown.f_freq,
        approx: breakdown.product,
        approx_normalized,
        w_fill: breakdown.w_fill,
        a_leak: breakdown.a_leak,
    })
}

/// One row of `per_subcarrier.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcarrierRow {
    pub scenario_id: usize,
    pub algorithm: String,
    pub k: usize,
    pub f_k: f64,
    pub gain: f64,
    pub rho: f64,
    pub se_k: f64,
}

/// One row of `summary.csv`. `std_error` is zero for deterministic runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario_id: usize,
    pub algorithm: String,
    pub axis: String,
    pub value: f64,
    pub g_sum: f64,
    pub spectral_efficiency: f64,
    pub data_rate: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// One row of the approximation validation sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub scenario_id: usize,
    pub axis: String,
    pub value: f64,
    pub g_sum_simulated: f64,
    pub g_sum_approx: f64,
    pub ratio: f64,
}

/// Per-subcarrier comparison of the simulated gain with the approximation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub k: usize,
    pub f_k: f64,
    pub simulated: f64,
    pub f_freq: f64,
    pub w_fill: f64,
    pub a_leak: f64,
    pub approx: f64,
    pub approx_normalized: f64,
}

/// Best data rate over the bandwidth sweep for one tuning bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxRateRow {
    pub scenario_id: usize,
    pub algorithm: String,
    pub tuning_bandwidth: f64,
    pub best_bandwidth: f64,
    pub max_data_rate: f64,
}

fn subcarrier_rows(scenario_id: usize, algorithm: &str, s: &GainSpectrum) -> Vec<SubcarrierRow> {
    (0..s.gain.len())
        .map(|k| SubcarrierRow {
            scenario_id,
            algorithm: algorithm.to_string(),
            k: k + 1,
            f_k: s.frequencies[k],
            gain: s.gain[k],
            rho: s.rho[k],
            se_k: s.se_k[k],
        })
        .collect()
}

fn summary_row(
    scenario_id: usize,
    algorithm: &str,
    axis: &str,
    value: f64,
    s: &GainSpectrum,
) -> SummaryRow {
    SummaryRow {
        scenario_id,
        algorithm: algorithm.to_string(),
        axis: axis.to_string(),
        value,
        g_sum: s.g_sum,
        spectral_efficiency: s.spectral_efficiency,
        data_rate: s.data_rate,
        std_error: 0.0,
        trials: 1,
    }
}

/// Runs a plan and returns the files written.
pub fn run(plan: &ExperimentPlan, sim: &SimConfig) -> Result<Vec<PathBuf>> {
    plan.validate(sim)?;
    std::fs::create_dir_all(&plan.out).map_err(|source| Error::Io {
        path: plan.out.clone(),
        source,
    })?;
    let title = format!("dmasim {} seed={}", plan.kind, plan.seed);
    match plan.kind {
        ExperimentKind::ValidateApprox => run_validation(plan, sim, &title),
        ExperimentKind::MaxRate => run_max_rate(plan, sim, &title),
        ExperimentKind::MultipathMc => run_multipath(plan, sim, &title),
        _ => run_sweep(plan, sim, &title),
    }
}

fn run_sweep(plan: &ExperimentPlan, sim: &SimConfig, title: &str) -> Result<Vec<PathBuf>> {
    let axis = plan.kind.axis();
    let results = plan
        .axis_values()
        .par_iter()
        .enumerate()
        .map(|(id, &value)| {
            let point = sweep_point(plan.kind, sim, value);
            let (channels, snr) = los_setup(&point)?;
            let mut per_k = Vec::new();
            let mut summary = Vec::new();
            for algorithm in Algorithm::ALL {
                let s = evaluate(&point, &channels, &snr, algorithm)?;
                per_k.extend(subcarrier_rows(id, algorithm.name(), &s));
                summary.push(summary_row(id, algorithm.name(), axis, value, &s));
            }
            if let Some(loss) = plan.phased_array_loss_db {
                let weights = phased_array_baseline(&channels, loss);
                let s = phased_array_spectrum(&channels, &weights, &point.scenario())?;
                per_k.extend(subcarrier_rows(id, "phased-array", &s));
                summary.push(summary_row(id, "phased-array", axis, value, &s));
            }
            Ok((per_k, summary))
        })
        .collect::<Result<Vec<_>>>()?;
    let (per_k, summary): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let per_k_path = plan.out.join("per_subcarrier.csv");
    let summary_path = plan.out.join("summary.csv");
    write_rows(&per_k_path, title, &per_k.concat())?;
    write_rows(&summary_path, title, &summary.concat())?;
    Ok(vec![per_k_path, summary_path])
}

fn validation_sweep(
    kind: ExperimentKind,
    sim: &SimConfig,
    values: &[f64],
) -> Result<Vec<ValidationRow>> {
    values
        .par_iter()
        .enumerate()
        .map(|(id, &value)| {
            let c = compare_approximation(&sweep_point(kind, sim, value))?;
            let (simulated, approx) = (c.simulated_sum(), c.approx_sum());
            Ok(ValidationRow {
                scenario_id: id,
                axis: kind.axis().to_string(),
                value,
                g_sum_simulated: simulated,
                g_sum_approx: approx,
                ratio: approx / simulated,
            })
        })
        .collect()
}

fn run_validation(plan: &ExperimentPlan, sim: &SimConfig, title: &str) -> Result<Vec<PathBuf>> {
    let tuning = validation_sweep(ExperimentKind::SweepTuning, sim, &plan.axis_values())?;
    let lambda = validation_sweep(ExperimentKind::SweepLambda, sim, &DEFAULT_LAMBDAS)?;
    let c = compare_approximation(sim)?;
    let per_k: Vec<ComparisonRow> = (0..c.frequencies.len())
        .map(|k| ComparisonRow {
            k: k + 1,
            f_k: c.frequencies[k],
            simulated: c.simulated[k],
            f_freq: c.f_freq[k],
            w_fill: c.w_fill,
            a_leak: c.a_leak,
            approx: c.approx[k],
            approx_normalized: c.approx_normalized[k],
        })
        .collect();
    let paths = [
        plan.out.join("tuning_sweep.csv"),
        plan.out.join("lambda_sweep.csv"),
        plan.out.join("per_subcarrier.csv"),
    ];
    write_rows(&paths[0], title, &tuning)?;
    write_rows(&paths[1], title, &lambda)?;
    write_rows(&paths[2], title, &per_k)?;
    Ok(paths.to_vec())
}

fn run_max_rate(plan: &ExperimentPlan, sim: &SimConfig, title: &str) -> Result<Vec<PathBuf>> {
    let tuning = plan.axis_values();
    let damping = sim.design().damping();
    // Every (tuning, bandwidth) pair is independent.
    let pairs: Vec<(usize, f64, f64)> = tuning
        .iter()
        .enumerate()
        .flat_map(|(id, &t)| DEFAULT_BANDWIDTHS.iter().map(move |&b| (id, t, b)))
        .collect();
    let points = pairs
        .par_iter()
        .map(|&(id, t, b)| {
            let point = sweep_point(
                ExperimentKind::SweepBandwidth,
                &sweep_point(ExperimentKind::MaxRate, sim, t),
                b,
            );
            let (channels, snr) = los_setup(&point)?;
            let mut rows = Vec::new();
            for algorithm in Algorithm::ALL {
                let s = evaluate(&point, &channels, &snr, algorithm)?;
                rows.push(summary_row(id, algorithm.name(), "bandwidth_hz", b, &s));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let mut best = Vec::new();
    for (id, &t) in tuning.iter().enumerate() {
        for algorithm in Algorithm::ALL {
            let top = points
                .iter()
                .filter(|r| r.scenario_id == id && r.algorithm == algorithm.name())
                .fold(None::<&SummaryRow>, |acc, r| match acc {
                    Some(a) if a.data_rate >= r.data_rate => Some(a),
                    _ => Some(r),
                })
                .expect("bandwidth sweep is not empty");
            best.push(MaxRateRow {
                scenario_id: id,
                algorithm: algorithm.name().to_string(),
                tuning_bandwidth: t * damping,
                best_bandwidth: top.value,
                max_data_rate: top.data_rate,
            });
        }
    }
    let summary_path = plan.out.join("summary.csv");
    let best_path = plan.out.join("max_rate.csv");
    write_rows(&summary_path, title, &points)?;
    write_rows(&best_path, title, &best)?;
    Ok(vec![summary_path, best_path])
}

/// Seed of one Monte-Carlo trial, distinct for every `(paths, trial)` pair.
pub fn trial_seed(seed: u64, paths: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((paths as u64) << 32)
        .wrapping_add(trial as u64)
}

/// Mean and standard error of the per-trial spectral efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub mean: f64,
    pub std_error: f64,
    pub samples: Vec<f64>,
}

impl TrialStats {
    pub fn new(samples: Vec<f64>) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / n).sqrt(),
            samples,
        }
    }
}

/// Spectral efficiency of both algorithms over seeded multipath trials.
/// Returns statistics in [`Algorithm::ALL`] order, plus the phased array if requested.
pub fn multipath_trials(
    sim: &SimConfig,
    paths: usize,
    trials: usize,
    seed: u64,
    pin_los: bool,
    phased_array_loss_db: Option<f64>,
) -> Result<Vec<(String, TrialStats, f64)>> {
    let (cfg, design) = (sim.scenario(), sim.design());
    let subcarriers = cfg.subcarrier_grid()?;
    let grid = ResonanceGrid::new(design.tuning_range(), sim.resolution)?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let spec = MultipathSpec {
                pin_first_to_los: pin_los,
                ..MultipathSpec::new(paths, trial_seed(seed, paths, t))
            };
            let channels = multipath_channel(&spec, &cfg, &design, &subcarriers)?;
            let snr = snr_profile(&channels, &cfg, 1.0);
            let mut out = Vec::new();
            for algorithm in Algorithm::ALL {
                let config = algorithm.configure(&channels, &snr, &grid, &design)?;
                let s = dma_spectrum(&channels, &config, &cfg, &design)?;
                out.push((s.spectral_efficiency, s.g_sum));
            }
            if let Some(loss) = phased_array_loss_db {
                let s = phased_array_spectrum(
                    &channels,
                    &phased_array_baseline(&channels, loss),
                    &cfg,
                )?;
                out.push((s.spectral_efficiency, s.g_sum));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<String> = Algorithm::ALL
        .iter()
        .map(|a| a.name().to_string())
        .collect();
    if phased_array_loss_db.is_some() {
        names.push("phased-array".to_string());
    }
    Ok(names
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            let se: Vec<f64> = per_trial.iter().map(|t| t[i].0).collect();
            let g_sum = per_trial.iter().map(|t| t[i].1).sum::<f64>() / trials as f64;
            (name, TrialStats::new(se), g_sum)
        })
        .collect())
}

fn run_multipath(plan: &ExperimentPlan, sim: &SimConfig, title: &str) -> Result<Vec<PathBuf>> {
    let mut rows = Vec::new();
    for (id, &l) in plan.axis_values().iter().enumerate() {
        let stats = multipath_trials(
            sim,
            l as usize,
            plan.trials,
            plan.seed,
            plan.pin_los,
            plan.phased_array_loss_db,
        )?;
        for (name, s, g_sum) in stats {
            rows.push(SummaryRow {
                scenario_id: id,
                algorithm: name,
                axis: plan.kind.axis().to_string(),
                value: l,
                g_sum,
                spectral_efficiency: s.mean,
                data_rate: sim.bandwidth * s.mean,
                std_error: s.std_error,
                trials: plan.trials,
            });
        }
    }
    let path = plan.out.join("summary.csv");
    write_rows(&path, title, &rows)?;
    Ok(vec![path])
}

/// Reads back a `summary.csv`.
pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    crate::report::read_rows(path)
}
