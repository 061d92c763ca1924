//! Per-subcarrier channel vectors seen by the DMA elements.
//!
//! The effective channel combines the over-the-air array response with the
//! phase advance of the feeding waveguide. The leakage taper is kept separate
//! because it multiplies the weights rather than the channel.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::params::{
    leakage_constant, waveguide_beta, DmaDesign, ScenarioConfig, SubcarrierGrid, SPEED_OF_LIGHT,
};
use crate::report::CsvSink;
use crate::{Error, Result};

/// Channel and leakage taper for every subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub grid: SubcarrierGrid,
    /// `h[k][n]`, effective channel of element `n` on subcarrier `k`.
    pub h: Vec<Vec<Complex64>>,
    /// `h_att[k][n]`, real leakage taper.
    pub taper: Vec<Vec<f64>>,
}

impl ChannelSet {
    /// Assembles a channel set after checking that every vector has `N_slot` entries.
    pub fn from_parts(
        grid: SubcarrierGrid,
        h: Vec<Vec<Complex64>>,
        taper: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let k_total = grid.len();
        for rows in [h.len(), taper.len()] {
            if rows != k_total {
                return Err(Error::DimensionMismatch {
                    expected: k_total,
                    actual: rows,
                });
            }
        }
        if grid.center_index >= k_total.max(1) {
            return Err(Error::invalid(
                "center_index",
                "outside the subcarrier grid",
            ));
        }
        let n_slot = h.first().map_or(0, Vec::len);
        for row in h.iter().map(Vec::len).chain(taper.iter().map(Vec::len)) {
            if row != n_slot {
                return Err(Error::DimensionMismatch {
                    expected: n_slot,
                    actual: row,
                });
            }
        }
        Ok(Self { grid, h, taper })
    }

    pub fn n_slot(&self) -> usize {
        self.h.first().map_or(0, Vec::len)
    }

    pub fn subcarriers(&self) -> usize {
        self.grid.len()
    }

    pub fn center_index(&self) -> usize {
        self.grid.center_index
    }

    pub fn frequency(&self, k: usize) -> f64 {
        self.grid.frequencies[k]
    }

    /// `||h_att[k]||²`.
    pub fn taper_energy(&self, k: usize) -> f64 {
        self.taper[k].iter().map(|a| a * a).sum()
    }

    /// Writes `(k, f_k, n, re_h, im_h, h_att)` rows, one per element and subcarrier.
    pub fn write_csv(&self, path: &Path, header: &str) -> Result<()> {
        let mut sink = CsvSink::create(path, header)?;
        for (k, (h_k, taper_k)) in self.h.iter().zip(&self.taper).enumerate() {
            for (n, (h, &att)) in h_k.iter().zip(taper_k).enumerate() {
                sink.write(&ChannelRow {
                    k: k + 1,
                    f_k: self.grid.frequencies[k],
                    n,
                    re_h: h.re,
                    im_h: h.im,
                    h_att: att,
                })?;
            }
        }
        sink.finish()
    }
}

/// One row of the channel dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRow {
    pub k: usize,
    pub f_k: f64,
    pub n: usize,
    pub re_h: f64,
    pub im_h: f64,
    pub h_att: f64,
}

/// `a[n] = exp(j·n·(2π f_k/c)·d_x·sin φ)`.
pub fn array_response(angle: f64, f_k: f64, design: &DmaDesign) -> Vec<Complex64> {
    let step = 2.0 * PI * f_k / SPEED_OF_LIGHT * design.spacing * angle.sin();
    (0..design.n_slot)
        .map(|n| Complex64::cis(n as f64 * step))
        .collect()
}

/// `h_dma[n] = exp(−j·n·d_x·β_g(f_k))`, zero phase at the feed-side element.
pub fn waveguide_phase_vector(f_k: f64, design: &DmaDesign) -> Result<Vec<Complex64>> {
    let step = design.spacing * waveguide_beta(f_k, design)?;
    Ok((0..design.n_slot)
        .map(|n| Complex64::cis(-(n as f64) * step))
        .collect())
}

/// `h_att[n] = exp(−n·d_x·ᾱ_g)`.
///
/// The leakage constant is held at its carrier design value on every
/// subcarrier, so `f_k` does not change the taper. A single element has no
/// taper to speak of and gets `[1]`.
pub fn leakage_vector(_f_k: f64, design: &DmaDesign) -> Result<Vec<f64>> {
    if design.n_slot == 1 {
        return Ok(vec![1.0]);
    }
    let step = design.spacing * leakage_constant(design)?;
    Ok((0..design.n_slot)
        .map(|n| (-(n as f64) * step).exp())
        .collect())
}

/// Closed-form phase of `h[k][n]`: `n·d_x·((2π f_k/c)·sin φ − β_g(f_k))`.
pub fn channel_phase(n: usize, f_k: f64, angle: f64, design: &DmaDesign) -> Result<f64> {
    let beta = waveguide_beta(f_k, design)?;
    Ok(n as f64 * design.spacing * (2.0 * PI * f_k / SPEED_OF_LIGHT * angle.sin() - beta))
}

fn check_carrier(cfg: &ScenarioConfig, design: &DmaDesign) -> Result<()> {
    if cfg.carrier != design.carrier {
        return Err(Error::CarrierMismatch {
            design: design.carrier,
            scenario: cfg.carrier,
        });
    }
    Ok(())
}

/// Line-of-sight channel `h[k] = a[φ_t, k] ⊙ h_dma[k]` with its leakage taper.
pub fn effective_channel(
    cfg: &ScenarioConfig,
    design: &DmaDesign,
    grid: &SubcarrierGrid,
) -> Result<ChannelSet> {
    check_carrier(cfg, design)?;
    let path = PathComponent {
        gain: Complex64::new(1.0, 0.0),
        angle: cfg.steering_angle,
        delay: 0.0,
    };
    channel_from_paths(&[path], design, grid)
}

/// One propagation path of the multipath model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathComponent {
    pub gain: Complex64,
    /// Departure angle from broadside (rad).
    pub angle: f64,
    /// Excess delay (s).
    pub delay: f64,
}

/// Parameters of the seeded ray-sum multipath model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipathSpec {
    pub paths: usize,
    /// Angles are uniform in `[−max_angle, max_angle]` (rad).
    pub max_angle: f64,
    /// Delays are uniform in `[0, max_delay]` (s).
    pub max_delay: f64,
    pub seed: u64,
    /// Replace the first path by a deterministic line-of-sight ray
    /// (steering angle, zero delay, real gain `sqrt(1/L)`).
    pub pin_first_to_los: bool,
}

impl MultipathSpec {
    pub fn new(paths: usize, seed: u64) -> Self {
        Self {
            paths,
            max_angle: 60f64.to_radians(),
            max_delay: 50e-9,
            seed,
            pin_first_to_los: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::invalid("paths", "at least one path is required"));
        }
        if !(self.max_angle >= 0.0 && self.max_angle < PI / 2.0) {
            return Err(Error::invalid("max_angle", "must lie in [0, pi/2)"));
        }
        if !(self.max_delay >= 0.0 && self.max_delay.is_finite()) {
            return Err(Error::invalid(
                "max_delay",
                "must be finite and non-negative",
            ));
        }
        Ok(())
    }

    /// Draws the path set. Gains are circularly-symmetric complex normal with variance `1/L`.
    pub fn draw(&self, steering_angle: f64) -> Result<Vec<PathComponent>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let scale = (0.5 / self.paths as f64).sqrt();
        let mut paths: Vec<PathComponent> = (0..self.paths)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let u_angle: f64 = rng.random();
                let u_delay: f64 = rng.random();
                PathComponent {
                    gain: Complex64::new(re * scale, im * scale),
                    angle: (2.0 * u_angle - 1.0) * self.max_angle,
                    delay: u_delay * self.max_delay,
                }
            })
            .collect();
        if self.pin_first_to_los {
            paths[0] = PathComponent {
                gain: Complex64::new((1.0 / self.paths as f64).sqrt(), 0.0),
                angle: steering_angle,
                delay: 0.0,
            };
        }
        Ok(paths)
    }
}

/// `h[k] = (Σ_l g_l·a(φ_l, k)·exp(−j2π f_k τ_l)) ⊙ h_dma[k]`, taper unchanged.
pub fn channel_from_paths(
    paths: &[PathComponent],
    design: &DmaDesign,
    grid: &SubcarrierGrid,
) -> Result<ChannelSet> {
    let mut h = Vec::with_capacity(grid.len());
    let mut taper = Vec::with_capacity(grid.len());
    for &f_k in &grid.frequencies {
        let guide = waveguide_phase_vector(f_k, design)?;
        let mut wireless = vec![Complex64::new(0.0, 0.0); design.n_slot];
        for path in paths {
            let coefficient = path.gain * Complex64::cis(-2.0 * PI * f_k * path.delay);
            for (acc, a) in wireless
                .iter_mut()
                .zip(array_response(path.angle, f_k, design))
            {
                *acc += coefficient * a;
            }
        }
        h.push(wireless.iter().zip(&guide).map(|(w, g)| w * g).collect());
        taper.push(leakage_vector(f_k, design)?);
    }
    ChannelSet::from_parts(grid.clone(), h, taper)
}

pub fn multipath_channel(
    spec: &MultipathSpec,
    cfg: &ScenarioConfig,
    design: &DmaDesign,
    grid: &SubcarrierGrid,
) -> Result<ChannelSet> {
    check_carrier(cfg, design)?;
    let paths = spec.draw(cfg.steering_angle)?;
    channel_from_paths(&paths, design, grid)
}
