//! Link metrics: SNR, power normalization, gain, spectral efficiency, data rate.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::beamform::{Algorithm, PhasedArrayWeights, ResonanceGrid};
use crate::channel::{effective_channel, ChannelSet};
use crate::element::{dma_weight_vector, ResonanceConfiguration};
use crate::params::{noise_power, path_loss, DmaDesign, ScenarioConfig, SimConfig};
use crate::{Error, Result};

/// `ρ_k = G_P,k·G_dma·P_in/σ²` at subcarrier frequency `f_k`.
pub fn snr(f_k: f64, cfg: &ScenarioConfig) -> f64 {
    path_loss(f_k, cfg.distance) * cfg.efficiency * cfg.subcarrier_power() / noise_power(cfg)
}

/// `ρ_k` for every subcarrier, multiplied by `scale`.
pub fn snr_profile(channels: &ChannelSet, cfg: &ScenarioConfig, scale: f64) -> Vec<f64> {
    channels
        .grid
        .frequencies
        .iter()
        .map(|&f| scale * snr(f, cfg))
        .collect()
}

/// `1 − e^{−2ᾱ_g d_x (N_slot−1)}`; zero for a single slot.
pub fn radiated_fraction(design: &DmaDesign) -> Result<f64> {
    if design.n_slot == 1 {
        return Ok(0.0);
    }
    let length = design.spacing * (design.n_slot - 1) as f64;
    Ok(-(-2.0 * design.leakage_constant()? * length).exp_m1())
}

/// `P_rad = P_in·(1 − e^{−2ᾱ_g d_x (N_slot−1)})` (W).
pub fn radiated_power(cfg: &ScenarioConfig, design: &DmaDesign) -> Result<f64> {
    Ok(cfg.subcarrier_power() * radiated_fraction(design)?)
}

/// Power fraction enforced by the normalization: the radiated fraction, or
/// `Λ` itself for a single slot where the aperture length is zero.
fn target_fraction(design: &DmaDesign) -> Result<f64> {
    if design.n_slot == 1 {
        Ok(design.radiated_fraction)
    } else {
        radiated_fraction(design)
    }
}

/// `M_k = fraction / ||w ⊙ h_att||²`.
pub fn normalization(weights: &[Complex64], taper: &[f64], fraction: f64) -> Result<f64> {
    if weights.len() != taper.len() {
        return Err(Error::DimensionMismatch {
            expected: taper.len(),
            actual: weights.len(),
        });
    }
    let energy: f64 = weights
        .iter()
        .zip(taper)
        .map(|(w, a)| w.norm_sqr() * a * a)
        .sum();
    if energy == 0.0 {
        return Err(Error::ZeroNormWeights);
    }
    Ok(fraction / energy)
}

/// `|h^T (w ⊙ h_att)|²` without normalization.
pub fn array_gain(h: &[Complex64], weights: &[Complex64], taper: &[f64]) -> Result<f64> {
    if h.len() != weights.len() || h.len() != taper.len() {
        return Err(Error::DimensionMismatch {
            expected: h.len(),
            actual: weights.len().min(taper.len()),
        });
    }
    let sum: Complex64 = h
        .iter()
        .zip(weights)
        .zip(taper)
        .map(|((h, w), a)| h * w * a)
        .sum();
    Ok(sum.norm_sqr())
}

/// `M_k·|h^T (w ⊙ h_att)|²`.
pub fn beamforming_gain(
    h: &[Complex64],
    weights: &[Complex64],
    taper: &[f64],
    fraction: f64,
) -> Result<f64> {
    let raw = array_gain(h, weights, taper)?;
    Ok(normalization(weights, taper, fraction)? * raw)
}

/// Per-subcarrier results and their aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct GainSpectrum {
    pub frequencies: Vec<f64>,
    pub gain: Vec<f64>,
    pub rho: Vec<f64>,
    /// `log2(1 + ρ_k·gain_k)`.
    pub se_k: Vec<f64>,
    pub g_sum: f64,
    /// Mean of `se_k` (bits/s/Hz).
    pub spectral_efficiency: f64,
    /// `B·C` (bits/s).
    pub data_rate: f64,
}

impl GainSpectrum {
    pub fn from_gains(
        frequencies: Vec<f64>,
        gain: Vec<f64>,
        rho: Vec<f64>,
        bandwidth: f64,
    ) -> Self {
        let se_k: Vec<f64> = gain
            .iter()
            .zip(&rho)
            .map(|(g, r)| (r * g).ln_1p() / std::f64::consts::LN_2)
            .collect();
        let spectral_efficiency = se_k.iter().sum::<f64>() / se_k.len().max(1) as f64;
        Self {
            g_sum: gain.iter().sum(),
            data_rate: data_rate(bandwidth, spectral_efficiency),
            frequencies,
            gain,
            rho,
            se_k,
            spectral_efficiency,
        }
    }
}

/// DMA weights for a resonance configuration on every subcarrier.
pub fn dma_weights(
    channels: &ChannelSet,
    config: &ResonanceConfiguration,
    design: &DmaDesign,
) -> Result<Vec<Vec<Complex64>>> {
    if config.len() != channels.n_slot() {
        return Err(Error::DimensionMismatch {
            expected: channels.n_slot(),
            actual: config.len(),
        });
    }
    channels
        .grid
        .frequencies
        .iter()
        .map(|&f_k| dma_weight_vector(config, f_k, design))
        .collect()
}

/// Normalized DMA gain per subcarrier for explicit weights.
pub fn dma_gains(
    channels: &ChannelSet,
    weights: &[Vec<Complex64>],
    design: &DmaDesign,
) -> Result<Vec<f64>> {
    let fraction = target_fraction(design)?;
    (0..channels.subcarriers())
        .map(|k| beamforming_gain(&channels.h[k], &weights[k], &channels.taper[k], fraction))
        .collect()
}

pub fn dma_spectrum(
    channels: &ChannelSet,
    config: &ResonanceConfiguration,
    cfg: &ScenarioConfig,
    design: &DmaDesign,
) -> Result<GainSpectrum> {
    let weights = dma_weights(channels, config, design)?;
    let gain = dma_gains(channels, &weights, design)?;
    Ok(GainSpectrum::from_gains(
        channels.grid.frequencies.clone(),
        gain,
        snr_profile(channels, cfg, 1.0),
        cfg.bandwidth,
    ))
}

/// Phased array with unit total transmit power: `|h^T w|²/||w||²`, SNR scaled by the feed loss.
pub fn phased_array_spectrum(
    channels: &ChannelSet,
    weights: &PhasedArrayWeights,
    cfg: &ScenarioConfig,
) -> Result<GainSpectrum> {
    let gain = (0..channels.subcarriers())
        .map(|k| {
            let w = &weights.weights[k];
            let ones = vec![1.0; w.len()];
            let energy: f64 = w.iter().map(Complex64::norm_sqr).sum();
            if energy == 0.0 {
                return Err(Error::ZeroNormWeights);
            }
            Ok(array_gain(&channels.h[k], w, &ones)? / energy)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GainSpectrum::from_gains(
        channels.grid.frequencies.clone(),
        gain,
        snr_profile(channels, cfg, weights.snr_scale),
        cfg.bandwidth,
    ))
}

/// Spectrum for externally supplied per-subcarrier gains (e.g. the closed-form approximation).
pub fn approx_spectrum(channels: &ChannelSet, gains: &[f64], cfg: &ScenarioConfig) -> GainSpectrum {
    GainSpectrum::from_gains(
        channels.grid.frequencies.clone(),
        gains.to_vec(),
        snr_profile(channels, cfg, 1.0),
        cfg.bandwidth,
    )
}

/// `(1/K)·Σ_k log2(1 + ρ_k·gain_k)`.
pub fn spectral_efficiency(
    channels: &ChannelSet,
    config: &ResonanceConfiguration,
    cfg: &ScenarioConfig,
    design: &DmaDesign,
) -> Result<f64> {
    Ok(dma_spectrum(channels, config, cfg, design)?.spectral_efficiency)
}

/// `D = B·C`.
pub fn data_rate(bandwidth: f64, spectral_efficiency: f64) -> f64 {
    bandwidth * spectral_efficiency
}

/// Largest data rate over a bandwidth sweep, re-running the beamformer at
/// every bandwidth. Returns `(B, D)` at the maximum.
pub fn max_data_rate(
    sim: &SimConfig,
    bandwidths: &[f64],
    algorithm: Algorithm,
) -> Result<(f64, f64)> {
    if bandwidths.is_empty() {
        return Err(Error::invalid("bandwidths", "sweep must not be empty"));
    }
    let rates = bandwidths
        .par_iter()
        .map(|&b| {
            let point = SimConfig {
                bandwidth: b,
                ..sim.clone()
            };
            point.validate()?;
            let (cfg, design) = (point.scenario(), point.design());
            let channels = effective_channel(&cfg, &design, &cfg.subcarrier_grid()?)?;
            let grid = ResonanceGrid::new(design.tuning_range(), point.resolution)?;
            let snr = snr_profile(&channels, &cfg, 1.0);
            let config = algorithm.configure(&channels, &snr, &grid, &design)?;
            Ok((
                b,
                dma_spectrum(&channels, &config, &cfg, &design)?.data_rate,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rates
        .into_iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |best, r| {
            if r.1 > best.1 {
                r
            } else {
                best
            }
        }))
}
