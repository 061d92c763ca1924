//! Scenario and DMA design parameters, physical constants and derived
//! waveguide quantities.
//!
//! All quantities are SI: frequencies in Hz, lengths in m, angles in radians,
//! power in W, temperature in K. The damping factor `Γ = 2π·f_t/Q` is carried
//! in rad/s but is combined with Hz-valued frequencies exactly as the
//! polarizability model prescribes.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::element::TuningRange;
use crate::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Link-level description of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Carrier `f_t` (Hz).
    pub carrier: f64,
    /// Signal bandwidth `B` (Hz).
    pub bandwidth: f64,
    /// Subcarrier count `K`, even.
    pub subcarriers: usize,
    /// Steering angle `φ_t` from broadside (rad).
    pub steering_angle: f64,
    /// Link distance (m).
    pub distance: f64,
    /// Total input power over all subcarriers (W).
    pub input_power: f64,
    /// Noise temperature (K).
    pub temperature: f64,
    /// Linear DMA efficiency loss `G_dma` in (0, 1].
    pub efficiency: f64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        positive("carrier", self.carrier)?;
        positive("bandwidth", self.bandwidth)?;
        if self.subcarriers < 2 || !self.subcarriers.is_multiple_of(2) {
            return Err(Error::invalid(
                "subcarriers",
                format!("must be even and at least 2, got {}", self.subcarriers),
            ));
        }
        if !self.steering_angle.is_finite() || self.steering_angle.abs() >= PI / 2.0 {
            return Err(Error::invalid(
                "steering_angle",
                format!("must lie in (-pi/2, pi/2), got {}", self.steering_angle),
            ));
        }
        positive("distance", self.distance)?;
        positive("input_power", self.input_power)?;
        positive("temperature", self.temperature)?;
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::invalid(
                "efficiency",
                format!("must lie in (0, 1], got {}", self.efficiency),
            ));
        }
        Ok(())
    }

    /// Per-subcarrier input power `P_in = P_in,tot / K`.
    pub fn subcarrier_power(&self) -> f64 {
        self.input_power / self.subcarriers as f64
    }

    pub fn subcarrier_grid(&self) -> Result<SubcarrierGrid> {
        subcarrier_grid(self)
    }
}

/// Physical DMA parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DmaDesign {
    /// Operating frequency the design is centered on (Hz); equals the scenario carrier.
    pub carrier: f64,
    pub n_slot: usize,
    /// Element spacing `d_x` (m).
    pub spacing: f64,
    /// Quality factor at the carrier.
    pub quality_factor: f64,
    /// Width of the resonance tuning interval (Hz).
    pub tuning_bandwidth: f64,
    /// Fraction `Λ` of the input power radiated by the end of the aperture.
    pub radiated_fraction: f64,
    /// Substrate permittivity factor `ε_r`.
    pub permittivity: f64,
    /// TE10 cutoff frequency `f_c,10` (Hz).
    pub cutoff: f64,
    /// Coupling factor; cancels in every normalized quantity.
    pub coupling: f64,
}

impl DmaDesign {
    pub fn validate(&self) -> Result<()> {
        positive("carrier", self.carrier)?;
        if self.n_slot == 0 {
            return Err(Error::invalid("n_slot", "must be at least 1"));
        }
        positive("spacing", self.spacing)?;
        positive("quality_factor", self.quality_factor)?;
        if !(self.tuning_bandwidth >= 0.0 && self.tuning_bandwidth.is_finite()) {
            return Err(Error::invalid(
                "tuning_bandwidth",
                format!(
                    "must be finite and non-negative, got {}",
                    self.tuning_bandwidth
                ),
            ));
        }
        if !(self.radiated_fraction > 0.0 && self.radiated_fraction < 1.0) {
            return Err(Error::invalid(
                "radiated_fraction",
                format!("must lie in (0, 1), got {}", self.radiated_fraction),
            ));
        }
        positive("permittivity", self.permittivity)?;
        if !(self.cutoff >= 0.0 && self.cutoff < self.carrier) {
            return Err(Error::invalid(
                "cutoff",
                format!(
                    "must lie in [0, carrier), got {} with carrier {}",
                    self.cutoff, self.carrier
                ),
            ));
        }
        positive("coupling", self.coupling)?;
        Ok(())
    }

    /// Damping factor `Γ = 2π·f_t/Q` (rad/s).
    pub fn damping(&self) -> f64 {
        2.0 * PI * self.carrier / self.quality_factor
    }

    /// Tuning interval centered on the carrier.
    pub fn tuning_range(&self) -> TuningRange {
        TuningRange::centered(self.carrier, self.tuning_bandwidth)
    }

    /// Whether `β_g(f_t) > 2π·f_t/c`, the condition under which the
    /// propagation lobe of the `−j/2` weight component stays out of visible space.
    pub fn suppresses_propagation_lobe(&self) -> bool {
        match waveguide_beta(self.carrier, self) {
            Ok(beta) => beta > 2.0 * PI * self.carrier / SPEED_OF_LIGHT,
            Err(_) => false,
        }
    }

    pub fn leakage_constant(&self) -> Result<f64> {
        leakage_constant(self)
    }
}

/// Ordered OFDM passband frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SubcarrierGrid {
    pub frequencies: Vec<f64>,
    /// Zero-based position of the center subcarrier (the `K/2`-th, counting from one).
    pub center_index: usize,
}

impl SubcarrierGrid {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn center_frequency(&self) -> f64 {
        self.frequencies[self.center_index]
    }
}

/// `f_k = f_t + B·(k − K/2)/K` for `k = 1..K`, so the `K/2`-th subcarrier sits on `f_t`.
pub fn subcarrier_grid(cfg: &ScenarioConfig) -> Result<SubcarrierGrid> {
    let k_total = cfg.subcarriers;
    if k_total < 2 || !k_total.is_multiple_of(2) {
        return Err(Error::invalid(
            "subcarriers",
            format!("must be even and at least 2, got {k_total}"),
        ));
    }
    let half = (k_total / 2) as i64;
    let step = cfg.bandwidth / k_total as f64;
    let frequencies = (1..=k_total as i64)
        .map(|k| cfg.carrier + (k - half) as f64 * step)
        .collect();
    Ok(SubcarrierGrid {
        frequencies,
        center_index: k_total / 2 - 1,
    })
}

/// Waveguide phase constant `β_g(f) = (2π·ε_r/c)·sqrt(f² − f_c,10²)` (rad/m).
///
/// `ε_r` multiplies the square root rather than entering as `sqrt(ε_r)`; the
/// decomposition is kept as the model states it.
pub fn waveguide_beta(frequency: f64, design: &DmaDesign) -> Result<f64> {
    if frequency.partial_cmp(&design.cutoff) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::BelowCutoff {
            frequency,
            cutoff: design.cutoff,
        });
    }
    let radicand = (frequency - design.cutoff) * (frequency + design.cutoff);
    Ok(2.0 * PI * design.permittivity / SPEED_OF_LIGHT * radicand.sqrt())
}

/// Leakage constant `ᾱ_g = −ln(1 − Λ) / (2·d_x·(N_slot − 1))` (Np/m), chosen so
/// that a fraction `Λ` of the input power leaves the aperture.
pub fn leakage_constant(design: &DmaDesign) -> Result<f64> {
    if design.n_slot < 2 {
        return Err(Error::UndefinedLeakage);
    }
    let length = design.spacing * (design.n_slot - 1) as f64;
    Ok(-(-design.radiated_fraction).ln_1p() / (2.0 * length))
}

/// Free-space path gain `(c / (4π·r·f))²`.
pub fn path_loss(frequency: f64, distance: f64) -> f64 {
    let amplitude = SPEED_OF_LIGHT / (4.0 * PI * distance * frequency);
    amplitude * amplitude
}

/// Per-subcarrier thermal noise `k_B·T·B/K` (W).
pub fn noise_power(cfg: &ScenarioConfig) -> f64 {
    BOLTZMANN * cfg.temperature * cfg.bandwidth / cfg.subcarriers as f64
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and positive, got {value}"),
        ))
    }
}

/// Flat key-value experiment description, one key per scenario/design field.
///
/// Loaded from a TOML file of `key = value` lines. `element_spacing` defaults
/// to a quarter wavelength at the carrier and `tuning_bandwidth` to `Γ/4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub carrier_frequency: f64,
    pub bandwidth: f64,
    pub subcarriers: usize,
    pub steering_angle: f64,
    pub distance: f64,
    pub input_power: f64,
    pub noise_temperature: f64,
    pub dma_efficiency: f64,
    pub n_slot: usize,
    pub element_spacing: Option<f64>,
    pub quality_factor: f64,
    pub tuning_bandwidth: Option<f64>,
    pub radiated_fraction: f64,
    pub permittivity: f64,
    pub cutoff_frequency: f64,
    pub coupling_factor: f64,
    /// Resonance grid resolution `R_res`.
    pub resolution: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            carrier_frequency: 15e9,
            bandwidth: 200e6,
            subcarriers: 64,
            steering_angle: (-20.0f64).to_radians(),
            distance: 100.0,
            input_power: 1.0,
            noise_temperature: 290.0,
            dma_efficiency: 1.0,
            n_slot: 32,
            element_spacing: None,
            quality_factor: 100.0,
            tuning_bandwidth: None,
            radiated_fraction: 0.9,
            permittivity: 2.1,
            cutoff_frequency: 10e9,
            coupling_factor: 1.0,
            resolution: 1001,
        }
    }
}

impl SimConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|reason| Error::Config {
            path: path.to_path_buf(),
            reason,
        })
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    pub fn scenario(&self) -> ScenarioConfig {
        ScenarioConfig {
            carrier: self.carrier_frequency,
            bandwidth: self.bandwidth,
            subcarriers: self.subcarriers,
            steering_angle: self.steering_angle,
            distance: self.distance,
            input_power: self.input_power,
            temperature: self.noise_temperature,
            efficiency: self.dma_efficiency,
        }
    }

    pub fn design(&self) -> DmaDesign {
        let damping = 2.0 * PI * self.carrier_frequency / self.quality_factor;
        DmaDesign {
            carrier: self.carrier_frequency,
            n_slot: self.n_slot,
            spacing: self.element_spacing.unwrap_or(self.wavelength() / 4.0),
            quality_factor: self.quality_factor,
            tuning_bandwidth: self.tuning_bandwidth.unwrap_or(damping / 4.0),
            radiated_fraction: self.radiated_fraction,
            permittivity: self.permittivity,
            cutoff: self.cutoff_frequency,
            coupling: self.coupling_factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario().validate()?;
        self.design().validate()?;
        if self.resolution == 0 {
            return Err(Error::invalid("resolution", "must be at least 1"));
        }
        Ok(())
    }
}
