//! Resonance selection for the DMA elements, plus a phased-array reference.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelSet;
use crate::element::{normalized_response, ResonanceConfiguration, TuningRange};
use crate::params::DmaDesign;
use crate::report::write_rows;
use crate::{Error, Result};

/// Equally spaced candidate resonances covering a tuning range.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceGrid {
    pub values: Vec<f64>,
}

impl ResonanceGrid {
    /// `resolution` points from `range.min` to `range.max` inclusive. A
    /// single point sits at the range center.
    pub fn new(range: TuningRange, resolution: usize) -> Result<Self> {
        let values = match resolution {
            0 => return Err(Error::EmptyGrid),
            1 => vec![range.center()],
            r => {
                let step = (range.max - range.min) / (r - 1) as f64;
                let mut v: Vec<f64> = (0..r).map(|i| range.min + i as f64 * step).collect();
                v[r - 1] = range.max;
                v
            }
        };
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Normalized weight of every grid point at frequency `f`.
    fn responses(&self, f: f64, damping: f64) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|&f_r| normalized_response(f, f_r, damping))
            .collect()
    }
}

fn check_grid(grid: &ResonanceGrid) -> Result<()> {
    if grid.is_empty() {
        Err(Error::EmptyGrid)
    } else {
        Ok(())
    }
}

/// Index of the smallest value; the first one wins on ties.
fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Per-element match to the Lorentzian point `−(j − e^{j∠h*})/2` at the center subcarrier.
///
/// Each element independently takes the grid resonance whose weight is
/// closest to that target. Ties go to the lower resonance.
pub fn center_frequency_beamformer(
    channels: &ChannelSet,
    grid: &ResonanceGrid,
    design: &DmaDesign,
) -> Result<ResonanceConfiguration> {
    check_grid(grid)?;
    let center = channels.center_index();
    let table = grid.responses(channels.frequency(center), design.damping());
    let resonances = channels.h[center]
        .iter()
        .map(|h| {
            let target = -(Complex64::i() - Complex64::cis(h.conj().arg())) / 2.0;
            grid.values[argmin(table.iter().map(|w| (target - w).norm_sqr()))]
        })
        .collect();
    Ok(ResonanceConfiguration::new(resonances))
}

/// `f_r[n] = f_c − (Γ/8π)·φ_{n,c}` with the center-subcarrier channel phase
/// wrapped to `(−π, π]`.
///
/// The result spans `f_c ± Γ/8` and is not clamped to the design's tuning range.
pub fn center_frequency_tuning_closed_form(
    channels: &ChannelSet,
    design: &DmaDesign,
) -> ResonanceConfiguration {
    let center = channels.center_index();
    let f_c = channels.frequency(center);
    let slope = design.damping() / (8.0 * PI);
    ResonanceConfiguration::new(
        channels.h[center]
            .iter()
            .map(|h| f_c - slope * h.arg())
            .collect(),
    )
}

/// Greedy feed-order selection maximizing the running spectral efficiency.
///
/// Element `n` takes the grid point maximizing
/// `(1/K)·Σ_k log2(1 + ρ_k·|acc_k + ᾱ(f_k, f_r)·h_att[k][n]·h[k][n]|²)`,
/// where `acc_k` holds the frozen contributions of elements `0..n`. The power
/// normalization is not part of the selection objective. Ties go to the
/// lower resonance.
pub fn successive_beamformer(
    channels: &ChannelSet,
    snr: &[f64],
    grid: &ResonanceGrid,
    design: &DmaDesign,
) -> Result<ResonanceConfiguration> {
    check_grid(grid)?;
    let k_total = channels.subcarriers();
    if snr.len() != k_total {
        return Err(Error::DimensionMismatch {
            expected: k_total,
            actual: snr.len(),
        });
    }
    let damping = design.damping();
    let table: Vec<Vec<Complex64>> = channels
        .grid
        .frequencies
        .iter()
        .map(|&f_k| grid.responses(f_k, damping))
        .collect();

    let mut acc = vec![Complex64::new(0.0, 0.0); k_total];
    let mut coupling = vec![Complex64::new(0.0, 0.0); k_total];
    let mut resonances = Vec::with_capacity(channels.n_slot());
    for n in 0..channels.n_slot() {
        for (k, c) in coupling.iter_mut().enumerate() {
            *c = channels.h[k][n] * channels.taper[k][n];
        }
        let mut best = (0, f64::NEG_INFINITY);
        for r in 0..grid.len() {
            let objective: f64 = table
                .iter()
                .zip(&acc)
                .zip(&coupling)
                .zip(snr)
                .map(|(((row, a), c), s)| (s * (a + row[r] * c).norm_sqr()).ln_1p())
                .sum();
            if objective > best.1 {
                best = (r, objective);
            }
        }
        for k in 0..k_total {
            acc[k] += table[k][best.0] * coupling[k];
        }
        resonances.push(grid.values[best.0]);
    }
    Ok(ResonanceConfiguration::new(resonances))
}

/// Value of the successive objective (bits/s/Hz) for the first `elements`
/// entries of a configuration, without power normalization.
pub fn successive_objective(
    channels: &ChannelSet,
    snr: &[f64],
    config: &ResonanceConfiguration,
    elements: usize,
    design: &DmaDesign,
) -> f64 {
    let damping = design.damping();
    let k_total = channels.subcarriers();
    let total: f64 = (0..k_total)
        .map(|k| {
            let f_k = channels.frequency(k);
            let sum: Complex64 = config.resonances[..elements]
                .iter()
                .enumerate()
                .map(|(n, &f_r)| {
                    normalized_response(f_k, f_r, damping) * channels.taper[k][n] * channels.h[k][n]
                })
                .sum();
            (snr[k] * sum.norm_sqr()).ln_1p()
        })
        .sum();
    total / (k_total as f64 * std::f64::consts::LN_2)
}

/// The two DMA resonance-selection strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    CenterFrequency,
    Successive,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::CenterFrequency, Algorithm::Successive];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::CenterFrequency => "center-frequency",
            Algorithm::Successive => "successive",
        }
    }

    pub fn configure(
        self,
        channels: &ChannelSet,
        snr: &[f64],
        grid: &ResonanceGrid,
        design: &DmaDesign,
    ) -> Result<ResonanceConfiguration> {
        match self {
            Algorithm::CenterFrequency => center_frequency_beamformer(channels, grid, design),
            Algorithm::Successive => successive_beamformer(channels, snr, grid, design),
        }
    }
}

/// Fully phase-controlled comparison array.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedArrayWeights {
    /// Unit-modulus weights per subcarrier; every row equals the center-subcarrier match.
    pub weights: Vec<Vec<Complex64>>,
    /// Linear SNR factor `10^(−loss_dB/10)` for the feed network.
    pub snr_scale: f64,
}

/// Conjugate phases of the center-subcarrier channel, applied on every subcarrier.
pub fn phased_array_baseline(channels: &ChannelSet, loss_db: f64) -> PhasedArrayWeights {
    let center = channels.center_index();
    let row: Vec<Complex64> = channels.h[center]
        .iter()
        .map(|h| Complex64::cis(-h.arg()))
        .collect();
    PhasedArrayWeights {
        weights: vec![row; channels.subcarriers()],
        snr_scale: 10f64.powf(-loss_db / 10.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRow {
    pub n: usize,
    pub f_r: f64,
}

/// Writes `(n, f_r)` rows.
pub fn write_configuration(
    config: &ResonanceConfiguration,
    path: &Path,
    title: &str,
) -> Result<()> {
    let rows: Vec<ResonanceRow> = config
        .resonances
        .iter()
        .enumerate()
        .map(|(n, &f_r)| ResonanceRow { n, f_r })
        .collect();
    write_rows(path, title, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::effective_channel;
    use crate::params::{SimConfig, SubcarrierGrid};

    fn default_setup(n_slot: usize, subcarriers: usize) -> (ChannelSet, DmaDesign, Vec<f64>) {
        let sim = SimConfig {
            n_slot,
            subcarriers,
            ..SimConfig::default()
        };
        let cfg = sim.scenario();
        let design = sim.design();
        let grid = cfg.subcarrier_grid().unwrap();
        let ch = effective_channel(&cfg, &design, &grid).unwrap();
        let snr = crate::metrics::snr_profile(&ch, &cfg, 1.0);
        (ch, design, snr)
    }

    fn single(h: Complex64, f: f64) -> ChannelSet {
        ChannelSet::from_parts(
            SubcarrierGrid {
                frequencies: vec![f],
                center_index: 0,
            },
            vec![vec![h]],
            vec![vec![1.0]],
        )
        .unwrap()
    }

    #[test]
    fn grid_shape() {
        let range = TuningRange::centered(15e9, 1e8);
        let g = ResonanceGrid::new(range, 101).unwrap();
        assert_eq!(g.values[0], range.min);
        assert_eq!(g.values[100], range.max);
        let step = 1e6;
        for w in g.values.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-4);
        }
        assert_eq!(ResonanceGrid::new(range, 1).unwrap().values, vec![15e9]);
        assert!(matches!(
            ResonanceGrid::new(range, 0),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn resonance_target_picks_carrier() {
        // ∠h* = 3π/2 means a target of −j, which only f_r = f gives exactly.
        let design = SimConfig::default().design();
        let design = DmaDesign {
            tuning_bandwidth: 1e10,
            ..design
        };
        let ch = single(Complex64::cis(PI / 2.0), 15e9);
        let grid = ResonanceGrid::new(design.tuning_range(), 1001).unwrap();
        let cfg = center_frequency_beamformer(&ch, &grid, &design).unwrap();
        assert!((cfg.resonances[0] - 15e9).abs() <= 1e7 / 2.0 + 1.0);
    }

    #[test]
    fn zero_tuning_bandwidth_pins_carrier() {
        let (ch, design, snr) = default_setup(8, 4);
        let design = DmaDesign {
            tuning_bandwidth: 0.0,
            ..design
        };
        let grid = ResonanceGrid::new(design.tuning_range(), 11).unwrap();
        for cfg in [
            center_frequency_beamformer(&ch, &grid, &design).unwrap(),
            successive_beamformer(&ch, &snr, &grid, &design).unwrap(),
        ] {
            assert!(cfg.resonances.iter().all(|&f| f == 15e9));
        }
    }

    #[test]
    fn center_frequency_matches_brute_force() {
        let (ch, design, _) = default_setup(2, 2);
        let grid = ResonanceGrid::new(design.tuning_range(), 101).unwrap();
        let got = center_frequency_beamformer(&ch, &grid, &design).unwrap();
        let c = ch.center_index();
        let f_c = ch.frequency(c);
        for n in 0..2 {
            let phase = ch.h[c][n].conj().arg();
            let target = Complex64::new(0.5 * phase.cos(), 0.5 * phase.sin() - 0.5);
            let mut best = (f64::INFINITY, 0.0);
            for &f_r in &grid.values {
                let w = crate::element::normalized_polarizability(f_c, f_r, &design);
                let dist = (target - w).norm();
                if dist < best.0 {
                    best = (dist, f_r);
                }
            }
            assert_eq!(got.resonances[n], best.1);
        }
    }

    #[test]
    fn closed_form_cases() {
        let design = SimConfig::default().design();
        let gamma = design.damping();
        let flat = single(Complex64::new(1.0, 0.0), 15e9);
        assert_eq!(
            center_frequency_tuning_closed_form(&flat, &design).resonances,
            vec![15e9]
        );
        let back = single(Complex64::new(-1.0, 0.0), 15e9);
        let f = center_frequency_tuning_closed_form(&back, &design).resonances[0];
        assert!((f - (15e9 - gamma / 8.0)).abs() < 1e-3);
        let (ch, design, _) = default_setup(32, 64);
        let cfg = center_frequency_tuning_closed_form(&ch, &design);
        let phase = crate::channel::channel_phase(1, 15e9, (-20f64).to_radians(), &design).unwrap();
        let wrapped = phase - 2.0 * PI * ((phase + PI) / (2.0 * PI)).floor();
        let expected = 15e9 - design.damping() / (8.0 * PI) * wrapped;
        assert!((cfg.resonances[1] - expected).abs() < 1.0);
        assert!(design.tuning_range().contains(cfg.resonances[1]));
    }

    #[test]
    fn successive_single_element_maximizes_amplitude() {
        let design = SimConfig::default().design();
        let grid = ResonanceGrid::new(design.tuning_range(), 51).unwrap();
        let ch = single(Complex64::cis(0.7), 15.01e9);
        let cfg = successive_beamformer(&ch, &[1.0], &grid, &design).unwrap();
        let best = grid
            .values
            .iter()
            .copied()
            .max_by(|a, b| {
                let wa = normalized_response(15.01e9, *a, design.damping()).norm();
                let wb = normalized_response(15.01e9, *b, design.damping()).norm();
                wa.partial_cmp(&wb).unwrap()
            })
            .unwrap();
        assert_eq!(cfg.resonances[0], best);
    }

    #[test]
    fn successive_matches_stagewise_oracle() {
        let (ch, design, snr) = default_setup(2, 2);
        let grid = ResonanceGrid::new(design.tuning_range(), 51).unwrap();
        let got = successive_beamformer(&ch, &snr, &grid, &design).unwrap();
        let mut chosen: Vec<f64> = Vec::new();
        for n in 0..2 {
            let mut best = (f64::NEG_INFINITY, 0.0);
            for &f_r in &grid.values {
                let mut trial = chosen.clone();
                trial.push(f_r);
                let v = successive_objective(
                    &ch,
                    &snr,
                    &ResonanceConfiguration::new(trial),
                    n + 1,
                    &design,
                );
                if v > best.0 {
                    best = (v, f_r);
                }
            }
            chosen.push(best.1);
            assert_eq!(got.resonances[n], best.1, "stage {n}");
        }
    }

    #[test]
    fn successive_objective_beats_worst_choice() {
        let (ch, design, snr) = default_setup(12, 8);
        let grid = ResonanceGrid::new(design.tuning_range(), 41).unwrap();
        let cfg = successive_beamformer(&ch, &snr, &grid, &design).unwrap();
        for n in 0..12 {
            let chosen = successive_objective(&ch, &snr, &cfg, n + 1, &design);
            for &alt in &grid.values {
                let mut trial = cfg.resonances.clone();
                trial[n] = alt;
                let v = successive_objective(
                    &ch,
                    &snr,
                    &ResonanceConfiguration::new(trial),
                    n + 1,
                    &design,
                );
                assert!(chosen >= v - 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_grid_still_runs() {
        let (ch, design, snr) = default_setup(4, 4);
        let grid = ResonanceGrid::new(design.tuning_range(), 1).unwrap();
        let cfg = successive_beamformer(&ch, &snr, &grid, &design).unwrap();
        assert_eq!(cfg.resonances, vec![15e9; 4]);
        assert!(successive_objective(&ch, &snr, &cfg, 4, &design) > 0.0);
    }

    #[test]
    fn outputs_stay_on_grid_and_are_deterministic() {
        let (ch, design, snr) = default_setup(16, 16);
        let grid = ResonanceGrid::new(design.tuning_range(), 101).unwrap();
        let a = successive_beamformer(&ch, &snr, &grid, &design).unwrap();
        let b = successive_beamformer(&ch, &snr, &grid, &design).unwrap();
        assert_eq!(a, b);
        let c = center_frequency_beamformer(&ch, &grid, &design).unwrap();
        for f in a.resonances.iter().chain(&c.resonances) {
            assert!(grid.values.contains(f));
        }
        assert!(a.validate(&design.tuning_range()).is_ok());
    }

    #[test]
    fn snr_length_checked() {
        let (ch, design, _) = default_setup(4, 4);
        let grid = ResonanceGrid::new(design.tuning_range(), 3).unwrap();
        assert!(successive_beamformer(&ch, &[1.0], &grid, &design).is_err());
        let empty = ResonanceGrid { values: vec![] };
        assert!(matches!(
            center_frequency_beamformer(&ch, &empty, &design),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn phased_array_weights() {
        let (ch, _, _) = default_setup(8, 4);
        let pa = phased_array_baseline(&ch, 8.8);
        assert!((pa.snr_scale - 0.131_825_7).abs() < 1e-7);
        let c = ch.center_index();
        for (w, h) in pa.weights[0].iter().zip(&ch.h[c]) {
            assert!((w.norm() - 1.0).abs() < 1e-12);
            assert!((w * h).arg().abs() < 1e-12);
        }
        assert_eq!(phased_array_baseline(&ch, 0.0).snr_scale, 1.0);
    }
}
