//! Wideband beamforming model for waveguide-fed dynamic metasurface antennas (DMAs).
//!
//! A DMA is a leaky-wave array whose slots are tuned by moving their Lorentzian
//! resonance. This crate models the whole chain for a single-user OFDM link:
//!
//! - [`params`]: scenario and design data, subcarrier grid, waveguide constants.
//! - [`channel`]: line-of-sight and multipath channel vectors plus the leakage taper.
//! - [`element`]: the tunable Lorentzian element and its phase approximations.
//! - [`beamform`]: center-frequency and successive resonance selection, and a
//!   phased-array comparison baseline.
//! - [`approx`]: the closed-form gain approximation `F_freq · W_fill · A_leak`
//!   and the Monte-Carlo / finite-sum oracles behind it.
//! - [`metrics`]: power normalization, SNR, gain, spectral efficiency, data rate.
//! - [`experiment`]: batch sweeps that write deterministic CSV files.
//!
//! ```
//! use dma_core::{beamform, channel, metrics, params::SimConfig};
//!
//! let sim = SimConfig::default();
//! let (cfg, design) = (sim.scenario(), sim.design());
//! let grid = cfg.subcarrier_grid().unwrap();
//! let channels = channel::effective_channel(&cfg, &design, &grid).unwrap();
//! let res_grid = beamform::ResonanceGrid::new(design.tuning_range(), 201).unwrap();
//! let config = beamform::center_frequency_beamformer(&channels, &res_grid, &design).unwrap();
//! let spectrum = metrics::dma_spectrum(&channels, &config, &cfg, &design).unwrap();
//! assert!(spectrum.spectral_efficiency > 0.0);
//! ```

pub mod approx;
pub mod beamform;
pub mod channel;
pub mod element;
mod error;
pub mod experiment;
pub mod metrics;
pub mod params;
pub mod report;

pub use error::{Error, Result};
pub use num_complex::Complex64;
