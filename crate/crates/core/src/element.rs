//! Tunable Lorentzian DMA element.
//!
//! The canonical weight is the normalized rational form `1/(x + j)` with
//! `x = 2π(f_r² − f²)/(Γ·f)`. Every value it produces lies on the Lorentzian
//! circle `|w + j/2| = 1/2`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::params::DmaDesign;
use crate::{Error, Result};

/// Interval of reachable resonant frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningRange {
    pub min: f64,
    pub max: f64,
}

impl TuningRange {
    pub fn centered(center: f64, bandwidth: f64) -> Self {
        Self {
            min: center - bandwidth / 2.0,
            max: center + bandwidth / 2.0,
        }
    }

    pub fn bandwidth(&self) -> f64 {
        self.max - self.min
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    pub fn contains(&self, f: f64) -> bool {
        f >= self.min && f <= self.max
    }
}

/// One resonant frequency per element, in feed order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceConfiguration {
    pub resonances: Vec<f64>,
}

impl ResonanceConfiguration {
    pub fn new(resonances: Vec<f64>) -> Self {
        Self { resonances }
    }

    pub fn uniform(value: f64, n_slot: usize) -> Self {
        Self::new(vec![value; n_slot])
    }

    pub fn len(&self) -> usize {
        self.resonances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resonances.is_empty()
    }

    pub fn validate(&self, range: &TuningRange) -> Result<()> {
        match self.resonances.iter().position(|&f| !range.contains(f)) {
            Some(index) => Err(Error::ResonanceOutOfRange {
                index,
                value: self.resonances[index],
                min: range.min,
                max: range.max,
            }),
            None => Ok(()),
        }
    }
}

/// Detuning `x = 2π(f_r² − f²)/(Γ·f)`.
fn detuning(f: f64, f_r: f64, damping: f64) -> f64 {
    2.0 * PI * (f_r - f) * (f_r + f) / (damping * f)
}

/// Magnetic polarizability `α_M = 2π f² F / (2π f_r² − 2π f² + jΓf)`.
pub fn polarizability(f: f64, f_r: f64, design: &DmaDesign) -> Complex64 {
    let numerator = 2.0 * PI * f * f * design.coupling;
    let denominator = Complex64::new(2.0 * PI * (f_r - f) * (f_r + f), design.damping() * f);
    numerator / denominator
}

/// `α_M / (Q_k·F)` with `Q_k = 2π f/Γ`, which reduces to `1/(x + j)`.
pub fn normalized_polarizability(f: f64, f_r: f64, design: &DmaDesign) -> Complex64 {
    normalized_response(f, f_r, design.damping())
}

pub(crate) fn normalized_response(f: f64, f_r: f64, damping: f64) -> Complex64 {
    let x = detuning(f, f_r, damping);
    // 1/(x + j) = (x − j)/(x² + 1)
    let d = x.mul_add(x, 1.0);
    Complex64::new(x / d, -1.0 / d)
}

/// `Ψ = arctan(2π(f_r² − f²)/(Γf))`. The argument of the normalized weight is `Ψ − π/2`.
pub fn polarizability_phase(f: f64, f_r: f64, design: &DmaDesign) -> f64 {
    detuning(f, f_r, design.damping()).atan()
}

/// First-order expansion of the weight argument around `f = f_r`:
/// `−π/2 − (4π/Γ)(f − f_r)`.
pub fn linear_phase_approx(f: f64, f_r: f64, design: &DmaDesign) -> f64 {
    -FRAC_PI_2 - 4.0 * PI / design.damping() * (f - f_r)
}

/// Point `−(j − e^{jζ})/2` of the Lorentzian circle.
pub fn lorentzian_weight(zeta: f64) -> Complex64 {
    -(Complex64::i() - Complex64::from_polar(1.0, zeta)) / 2.0
}

/// Per-element weights at subcarrier `f_k`. Rejects resonances outside the design's tuning range.
pub fn dma_weight_vector(
    config: &ResonanceConfiguration,
    f_k: f64,
    design: &DmaDesign,
) -> Result<Vec<Complex64>> {
    config.validate(&design.tuning_range())?;
    let damping = design.damping();
    Ok(config
        .resonances
        .iter()
        .map(|&f_r| normalized_response(f_k, f_r, damping))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SimConfig;

    fn design() -> DmaDesign {
        SimConfig::default().design()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn resonance_gives_minus_j_q_coupling() {
        let d = DmaDesign {
            coupling: 3.5,
            ..design()
        };
        let f = 15e9;
        let q_k = 2.0 * PI * f / d.damping();
        let alpha = polarizability(f, f, &d);
        let expected = Complex64::new(0.0, -q_k * d.coupling);
        assert!(close(alpha, expected, 1e-9 * expected.norm()));
        assert!(close(
            normalized_polarizability(f, f, &d),
            Complex64::new(0.0, -1.0),
            1e-15
        ));
    }

    #[test]
    fn far_detuning_vanishes() {
        let d = design();
        assert!(polarizability(15e9, 1e15, &d).norm() < 1e-6);
        assert!(normalized_polarizability(15e9, 1e13, &d).norm() < 1e-3);
    }

    #[test]
    fn off_resonance_value() {
        // Q = 100, f = 15 GHz, f_r = 15.1 GHz: x = 2π(15.1² − 15²)e18/(Γ·15e9)
        let d = design();
        let (f, f_r) = (15e9, 15.1e9);
        let x = 2.0 * PI * (f_r * f_r - f * f) / (d.damping() * f);
        assert!((x - 1.337_777_8).abs() < 1e-6, "{x}");
        let w = normalized_polarizability(f, f_r, &d);
        assert!(
            close(w, Complex64::new(0.479_550_5, -0.358_468_0), 1e-7),
            "{w}"
        );

        // Amplitude-phase route.
        let psi = polarizability_phase(f, f_r, &d);
        assert!((psi - 0.928_891_8).abs() < 1e-7, "{psi}");
        let polar = Complex64::from_polar(psi.cos(), psi - FRAC_PI_2);
        assert!(close(w, polar, 1e-14));

        // Unnormalized route.
        let q_k = 2.0 * PI * f / d.damping();
        let raw = polarizability(f, f_r, &d) / (q_k * d.coupling);
        assert!(close(w, raw, 1e-14));
    }

    #[test]
    fn phase_limits() {
        let d = design();
        assert_eq!(polarizability_phase(15e9, 15e9, &d), 0.0);
        let psi = polarizability_phase(15e9, 1e13, &d);
        assert!((psi - FRAC_PI_2).abs() < 1e-3);
    }

    #[test]
    fn linear_phase_at_resonance_and_slope() {
        let d = design();
        let f_r = 15e9;
        assert_eq!(linear_phase_approx(f_r, f_r, &d), -FRAC_PI_2);
        let delta = 1e6;
        let slope = (linear_phase_approx(f_r + delta, f_r, &d)
            - linear_phase_approx(f_r - delta, f_r, &d))
            / (2.0 * delta);
        let expected = -4.0 * PI / d.damping();
        assert!((slope - expected).abs() <= 1e-9 * expected.abs());
    }

    #[test]
    fn linear_phase_error_shrinks_superlinearly() {
        // Remainder of the first-order expansion, evaluated directly at two offsets.
        let d = design();
        let f_r = 15e9;
        let err = |delta: f64| {
            let f = f_r + delta;
            let exact = polarizability_phase(f, f_r, &d) - FRAC_PI_2;
            (exact - linear_phase_approx(f, f_r, &d)).abs()
        };
        let delta = d.damping() / (16.0 * PI);
        let ratio = err(delta) / err(delta / 2.0);
        // Remainder is at least second order in the offset.
        assert!(ratio > 4.0, "{ratio}");
    }

    #[test]
    fn lorentzian_points() {
        assert!(close(
            lorentzian_weight(FRAC_PI_2),
            Complex64::new(0.0, 0.0),
            1e-16
        ));
        assert!(close(
            lorentzian_weight(3.0 * FRAC_PI_2),
            Complex64::new(0.0, -1.0),
            1e-15
        ));
        let w = lorentzian_weight(0.0);
        assert!(close(w, Complex64::new(0.5, -0.5), 1e-16));
        assert!((w.norm() - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn weight_vector_cases() {
        let d = design();
        let f_k = d.carrier;
        let all_res = ResonanceConfiguration::uniform(f_k, 4);
        for w in dma_weight_vector(&all_res, f_k, &d).unwrap() {
            assert!(close(w, Complex64::new(0.0, -1.0), 1e-15));
        }

        let single = ResonanceConfiguration::new(vec![f_k + 10e6]);
        let v = dma_weight_vector(&single, f_k, &d).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0], normalized_polarizability(f_k, f_k + 10e6, &d));

        let mixed = ResonanceConfiguration::new(vec![f_k - 50e6, f_k, f_k + 80e6]);
        let v = dma_weight_vector(&mixed, f_k, &d).unwrap();
        for (w, &f_r) in v.iter().zip(&mixed.resonances) {
            assert_eq!(*w, normalized_polarizability(f_k, f_r, &d));
        }

        let outside = ResonanceConfiguration::new(vec![f_k, f_k + d.tuning_bandwidth]);
        assert!(matches!(
            dma_weight_vector(&outside, f_k, &d),
            Err(Error::ResonanceOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn tuning_range_is_centered() {
        let d = design();
        let r = d.tuning_range();
        assert!((r.bandwidth() - d.tuning_bandwidth).abs() < 1e-3);
        assert_eq!(r.center(), d.carrier);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sample() -> impl Strategy<Value = (f64, f64, f64)> {
            (1e9f64..60e9, -0.2f64..0.2, 5.0f64..2000.0)
                .prop_map(|(f, rel, q)| (f, f * (1.0 + rel), q))
        }

        proptest! {
            #[test]
            fn weights_lie_on_lorentzian_circle((f, f_r, q) in sample()) {
                let d = DmaDesign { carrier: f, quality_factor: q, ..design() };
                let w = normalized_polarizability(f, f_r, &d);
                prop_assert!(((w + Complex64::new(0.0, 0.5)).norm() - 0.5).abs() <= 1e-12);
            }

            #[test]
            fn amplitude_phase_form_agrees((f, f_r, q) in sample()) {
                let d = DmaDesign { carrier: f, quality_factor: q, ..design() };
                let w = normalized_polarizability(f, f_r, &d);
                let psi = polarizability_phase(f, f_r, &d);
                let polar = Complex64::from_polar(psi.cos(), psi - FRAC_PI_2);
                prop_assert!((w - polar).norm() <= 1e-12);
            }

            #[test]
            fn coupling_cancels((f, f_r, q) in sample(), coupling in 1e-6f64..1e6) {
                let a = DmaDesign { carrier: f, quality_factor: q, coupling: 1.0, ..design() };
                let b = DmaDesign { coupling, ..a };
                prop_assert_eq!(normalized_polarizability(f, f_r, &a), normalized_polarizability(f, f_r, &b));
            }

            #[test]
            fn amplitude_decreases_with_detuning(f in 1e9f64..60e9, a in 0.0f64..0.2, b in 0.0f64..0.2) {
                prop_assume!((a - b).abs() > 1e-9);
                let d = DmaDesign { carrier: f, ..design() };
                let (near, far) = if a < b { (a, b) } else { (b, a) };
                let w_near = normalized_polarizability(f, f * (1.0 + near), &d).norm();
                let w_far = normalized_polarizability(f, f * (1.0 + far), &d).norm();
                prop_assert!(w_near > w_far);
                prop_assert!(w_near <= 1.0 + 1e-15);
            }
        }
    }
}
