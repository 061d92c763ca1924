//! Closed-form beamforming-gain approximation `F_freq · W_fill · A_leak`.
//!
//! - `F_freq`: array factor of the residual beam-squint phase `χ_o[k]`.
//! - `W_fill`: loss from the limited arc of the Lorentzian circle reachable
//!   within the tuning bandwidth.
//! - `A_leak`: loss from the exponential taper of the leaky feed.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::polarizability_phase;
use crate::params::{waveguide_beta, DmaDesign, ScenarioConfig, SubcarrierGrid, SPEED_OF_LIGHT};
use crate::report::write_rows;
use crate::{Error, Result};

/// Residual phase progression `χ_o[k] = d_x·(Δk_0·sin φ_t − Δβ_g)` relative to
/// the center subcarrier, i.e. `φ_{1,k} − φ_{1,c}` of the effective channel.
pub fn chi_o(f_k: f64, f_center: f64, steering_angle: f64, design: &DmaDesign) -> Result<f64> {
    let free_space = 2.0 * PI * (f_k - f_center) / SPEED_OF_LIGHT * steering_angle.sin();
    let guided = waveguide_beta(f_k, design)? - waveguide_beta(f_center, design)?;
    Ok(design.spacing * (free_space - guided))
}

/// `|(1/(2√N))·sin(Nχ/2)/sin(χ/2)|²`, with the limit `N/4` where `sin(χ/2)` vanishes.
pub fn f_freq(chi: f64, n_slot: usize) -> f64 {
    let n = n_slot as f64;
    let denominator = (chi / 2.0).sin();
    if denominator.abs() < 1e-9 {
        return n / 4.0;
    }
    let ratio = (n * chi / 2.0).sin() / denominator;
    ratio * ratio / (4.0 * n)
}

/// `|(1/(2√N))·Σ_n e^{jnχ}|²` summed term by term.
pub fn f_freq_sum(chi: f64, n_slot: usize) -> f64 {
    let sum: Complex64 = (0..n_slot).map(|n| Complex64::cis(n as f64 * chi)).sum();
    sum.norm_sqr() / (4.0 * n_slot as f64)
}

/// Fraction of the circle's phase range reachable at `f_t`, returned with `ξ = π·W_ratio`.
pub fn weight_ratio(design: &DmaDesign) -> (f64, f64) {
    let range = design.tuning_range();
    let high = polarizability_phase(design.carrier, range.max, design);
    let low = polarizability_phase(design.carrier, range.min, design);
    let xi = (high - low).abs();
    (xi / PI, xi)
}

/// `|(2 sin ξ + 2ξ)/(2π)|²` for `ξ ∈ [0, π]`.
pub fn w_fill(xi: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&xi) {
        return Err(Error::invalid(
            "xi",
            format!("must lie in [0, pi], got {xi}"),
        ));
    }
    let amplitude = (2.0 * xi.sin() + 2.0 * xi) / (2.0 * PI);
    Ok(amplitude * amplitude)
}

/// `(4/ln(1−Λ))·tanh(ln(1−Λ)/4)` for `Λ ∈ (0, 1)`.
pub fn a_leak(radiated_fraction: f64) -> Result<f64> {
    if !(radiated_fraction > 0.0 && radiated_fraction < 1.0) {
        return Err(Error::invalid(
            "radiated_fraction",
            format!("must lie in (0, 1), got {radiated_fraction}"),
        ));
    }
    let l = (-radiated_fraction).ln_1p();
    if l == 0.0 {
        return Ok(1.0);
    }
    Ok(4.0 / l * (l / 4.0).tanh())
}

/// `|Σ q^n|² / (N·Σ q^{2n})` with `q = e^{−ᾱ_g d_x}`, summed over the actual slots.
pub fn a_leak_exact(design: &DmaDesign) -> Result<f64> {
    let step = design.spacing * design.leakage_constant()?;
    Ok(a_leak_finite((-step).exp(), design.n_slot))
}

/// Finite-sum leakage penalty for a taper ratio `q` over `n_slot` elements.
pub fn a_leak_finite(q: f64, n_slot: usize) -> f64 {
    let (mut linear, mut square, mut term) = (0.0, 0.0, 1.0);
    for _ in 0..n_slot {
        linear += term;
        square += term * term;
        term *= q;
    }
    linear * linear / (n_slot as f64 * square)
}

/// Normalized propagation lobe of the constant `−j/2` weight component:
/// `e^{j(N−1)φ_o/2}·sin(Nφ_o/2)/(N·sin(φ_o/2))`, magnitude at most 1.
pub fn propagation_lobe(steering_angle: f64, f: f64, design: &DmaDesign) -> Result<Complex64> {
    let phi = design.spacing
        * (2.0 * PI * f / SPEED_OF_LIGHT * steering_angle.sin() - waveguide_beta(f, design)?);
    let n = design.n_slot as f64;
    let denominator = (phi / 2.0).sin();
    let magnitude = if denominator.abs() < 1e-9 {
        // Limit at φ_o = 2πm carries the sign (−1)^{m(N−1)}.
        let m = (phi / (2.0 * PI)).round();
        if (m * (n - 1.0)).rem_euclid(2.0) == 0.0 {
            1.0
        } else {
            -1.0
        }
    } else {
        (n * phi / 2.0).sin() / (n * denominator)
    };
    Ok(Complex64::from_polar(magnitude, (n - 1.0) * phi / 2.0))
}

/// Per-subcarrier approximation and its factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxBreakdown {
    pub frequencies: Vec<f64>,
    pub chi: Vec<f64>,
    pub f_freq: Vec<f64>,
    pub xi: f64,
    pub w_fill: f64,
    pub a_leak: f64,
    pub product: Vec<f64>,
}

impl ApproxBreakdown {
    pub fn write_csv(&self, path: &Path, title: &str) -> Result<()> {
        let rows: Vec<ApproxRow> = (0..self.frequencies.len())
            .map(|k| ApproxRow {
                k: k + 1,
                f_k: self.frequencies[k],
                f_freq: self.f_freq[k],
                w_fill: self.w_fill,
                a_leak: self.a_leak,
                product: self.product[k],
            })
            .collect();
        write_rows(path, title, &rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxRow {
    pub k: usize,
    pub f_k: f64,
    pub f_freq: f64,
    pub w_fill: f64,
    pub a_leak: f64,
    pub product: f64,
}

/// Evaluates the approximation on every subcarrier of `grid`.
pub fn approx_gain(
    grid: &SubcarrierGrid,
    cfg: &ScenarioConfig,
    design: &DmaDesign,
) -> Result<ApproxBreakdown> {
    let (_, xi) = weight_ratio(design);
    let w = w_fill(xi)?;
    let a = a_leak(design.radiated_fraction)?;
    let f_center = grid.center_frequency();
    let chi = grid
        .frequencies
        .iter()
        .map(|&f_k| chi_o(f_k, f_center, cfg.steering_angle, design))
        .collect::<Result<Vec<_>>>()?;
    let f_freq: Vec<f64> = chi.iter().map(|&c| f_freq(c, design.n_slot)).collect();
    let product = f_freq.iter().map(|f| f * w * a).collect();
    Ok(ApproxBreakdown {
        frequencies: grid.frequencies.clone(),
        chi,
        f_freq,
        xi,
        w_fill: w,
        a_leak: a,
        product,
    })
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

const ORACLE_CHUNK: usize = 1 << 16;

#[derive(Default, Clone, Copy)]
struct Moments {
    n: f64,
    x: f64,
    y: f64,
    xx: f64,
    yy: f64,
    xy: f64,
}

impl Moments {
    fn add(mut self, z: Complex64) -> Self {
        self.n += 1.0;
        self.x += z.re;
        self.y += z.im;
        self.xx += z.re * z.re;
        self.yy += z.im * z.im;
        self.xy += z.re * z.im;
        self
    }

    fn merge(self, o: Self) -> Self {
        Self {
            n: self.n + o.n,
            x: self.x + o.x,
            y: self.y + o.y,
            xx: self.xx + o.xx,
            yy: self.yy + o.yy,
            xy: self.xy + o.xy,
        }
    }
}

/// Clipped-phase oracle for `W_fill`.
///
/// A channel phase `θ` is drawn uniformly on the unit circle and the ideal
/// weight phase `−θ` is clipped to the reachable arc `[−π/2 − ξ, −π/2 + ξ]`:
/// inside the arc the product is 1, otherwise the weight sits on the nearer
/// arc end. The estimate is `|mean(h·w)|²`, with a delta-method standard error.
///
/// Samples are split into fixed chunks, each on its own ChaCha stream, so the
/// result depends only on `(xi, samples, seed)`.
pub fn w_fill_oracle(xi: f64, samples: usize, seed: u64) -> Result<Estimate> {
    if !(0.0..=PI).contains(&xi) {
        return Err(Error::invalid(
            "xi",
            format!("must lie in [0, pi], got {xi}"),
        ));
    }
    if samples == 0 {
        return Err(Error::invalid("samples", "must be at least 1"));
    }
    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = ORACLE_CHUNK.min(samples - c * ORACLE_CHUNK);
            (0..count).fold(Moments::default(), |m, _| {
                let theta = rng.random_range(-PI..PI);
                let offset = wrap(-theta + PI / 2.0);
                let clipped = -PI / 2.0 + offset.clamp(-xi, xi);
                m.add(Complex64::cis(theta + clipped))
            })
        })
        .collect();
    let m = partial.into_iter().fold(Moments::default(), Moments::merge);
    let (mx, my) = (m.x / m.n, m.y / m.n);
    let vxx = m.xx / m.n - mx * mx;
    let vyy = m.yy / m.n - my * my;
    let vxy = m.xy / m.n - mx * my;
    let var = 4.0 * (mx * mx * vxx + my * my * vyy + 2.0 * mx * my * vxy) / m.n;
    Ok(Estimate {
        value: mx * mx + my * my,
        std_error: var.max(0.0).sqrt(),
    })
}

/// Wraps to `[−π, π)`.
fn wrap(phase: f64) -> f64 {
    (phase + PI).rem_euclid(2.0 * PI) - PI
}
