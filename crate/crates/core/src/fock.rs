//! Thermal photon statistics, truncation of the Fock ladder, and the phase
//! states whose uniform phase average reproduces a diagonal field mixture.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Extra Fock levels beyond the truncation that propagated states can reach:
/// a manifold seeded at `|e1 e2, N>` populates `|g1 g2, N + 2>`.
pub const PROPAGATION_HEADROOM: usize = 2;

/// Bose-Einstein photon-number distribution `nbar^n / (1 + nbar)^(n + 1)`.
///
/// Evaluated in log space so that large `n` underflows gracefully rather
/// than through an intermediate `(nbar / (1 + nbar))^n`.
pub fn photon_probability(n: usize, nbar: f64) -> f64 {
    if nbar == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let log_ratio = nbar.ln() - nbar.ln_1p();
    (n as f64 * log_ratio - nbar.ln_1p()).exp()
}

/// Mean thermal occupation `1 / (e^x - 1)` for `x = hbar*omega / (k_B T)`.
pub fn mean_photons_from_temperature(energy_ratio: f64) -> Result<f64> {
    if energy_ratio.is_nan() || energy_ratio <= 0.0 {
        return Err(Error::domain(
            "mean_photons_from_temperature",
            format!("energy ratio must be strictly positive, got {energy_ratio}"),
        ));
    }
    Ok(1.0 / energy_ratio.exp_m1())
}

/// Exact probability mass above Fock index `truncation`.
pub fn tail_mass(nbar: f64, truncation: usize) -> f64 {
    if nbar == 0.0 {
        return 0.0;
    }
    let log_ratio = nbar.ln() - nbar.ln_1p();
    ((truncation as f64 + 1.0) * log_ratio).exp()
}

/// Smallest `N` whose discarded tail `(nbar / (1 + nbar))^(N + 1)` is at most `eps`.
pub fn truncation_for_tolerance(nbar: f64, eps: f64) -> usize {
    if nbar == 0.0 || eps >= 1.0 {
        return 0;
    }
    let log_ratio = nbar.ln() - nbar.ln_1p();
    let guess = (eps.ln() / log_ratio).ceil() - 1.0;
    let mut n = if guess.is_finite() && guess > 0.0 {
        guess as usize
    } else {
        0
    };
    // The logarithmic estimate can be off by one after rounding.
    while n > 0 && tail_mass(nbar, n - 1) <= eps {
        n -= 1;
    }
    while tail_mass(nbar, n) > eps {
        n += 1;
    }
    n
}

/// A single-mode thermal field truncated so that the discarded tail stays
/// below `tail_tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalFieldSpec {
    mean_photons: f64,
    truncation: usize,
    tail_tolerance: f64,
    probabilities: Vec<f64>,
}

impl ThermalFieldSpec {
    pub fn new(mean_photons: f64, tail_tolerance: f64) -> Result<Self> {
        if !mean_photons.is_finite() || mean_photons < 0.0 {
            return Err(Error::domain(
                "ThermalFieldSpec",
                format!("mean photon number must be finite and >= 0, got {mean_photons}"),
            ));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance <= 1.0) {
            return Err(Error::domain(
                "ThermalFieldSpec",
                format!("tail tolerance must lie in (0, 1], got {tail_tolerance}"),
            ));
        }
        let truncation = truncation_for_tolerance(mean_photons, tail_tolerance);
        let probabilities = (0..=truncation)
            .map(|n| photon_probability(n, mean_photons))
            .collect();
        Ok(Self {
            mean_photons,
            truncation,
            tail_tolerance,
            probabilities,
        })
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    /// Highest retained Fock index `N`.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// `p(0), ..., p(N)`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Fock dimension needed to hold propagated states, `N + 3`.
    pub fn buffer_len(&self) -> usize {
        self.truncation + 1 + PROPAGATION_HEADROOM
    }

    /// `sum_{n <= N} p(n)`, evaluated as `1 - tail` so it carries no
    /// summation error.
    pub fn retained_mass(&self) -> f64 {
        1.0 - tail_mass(self.mean_photons, self.truncation)
    }
}

/// Pure field state `sum_n sqrt(p(n)) e^{i n phi} |n>` for one phase node.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    phi: f64,
    coefficients: Vec<Complex64>,
}

impl PhaseState {
    /// Builds the phase state of an arbitrary diagonal photon distribution.
    pub fn from_probabilities(probabilities: &[f64], phi: f64) -> Self {
        let phi = phi.rem_euclid(TAU);
        let coefficients = probabilities
            .iter()
            .enumerate()
            .map(|(n, &p)| Complex64::from_polar(p.sqrt(), n as f64 * phi))
            .collect();
        Self { phi, coefficients }
    }

    /// Phase angle reduced into `[0, 2 pi)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .collect::<CompensatedSum>()
            .value()
    }
}

pub fn make_phase_state(spec: &ThermalFieldSpec, phi: f64) -> PhaseState {
    PhaseState::from_probabilities(spec.probabilities(), phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_at_vacuum_for_unit_mean() {
        assert!((photon_probability(0, 1.0) - 0.5).abs() <= 1e-16);
    }

    #[test]
    fn vacuum_limit() {
        assert_eq!(photon_probability(0, 0.0), 1.0);
        for n in 1..50 {
            assert_eq!(photon_probability(n, 0.0), 0.0);
        }
    }

    #[test]
    fn distribution_sums_to_one() {
        // Geometric series: sum_{n<=200} p(n) = 1 - (1/2)^201 at nbar = 1.
        let total: CompensatedSum = (0..=200).map(|n| photon_probability(n, 1.0)).collect();
        let expected = 1.0 - 0.5f64.powi(201);
        assert!((total.value() - expected).abs() <= 1e-15);
        assert!((total.value() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn large_index_underflows_without_nan() {
        let p = photon_probability(100_000, 3.0);
        assert!(p >= 0.0 && p < 1e-300);
    }

    #[test]
    fn consecutive_ratio_is_constant() {
        for &nbar in &[0.1, 1.0, 5.0] {
            let r = nbar / (1.0 + nbar);
            for n in 0..200 {
                let (a, b) = (photon_probability(n, nbar), photon_probability(n + 1, nbar));
                assert!((b - r * a).abs() <= 1e-15, "nbar={nbar} n={n}");
                if a > 1e-250 {
                    assert!((b / a - r).abs() <= 1e-13 * r, "nbar={nbar} n={n}");
                }
            }
        }
    }

    #[test]
    fn occupation_from_temperature() {
        assert!((mean_photons_from_temperature(2f64.ln()).unwrap() - 1.0).abs() <= 1e-15);
        // 40-digit reference: 1/(exp(0.01) - 1) = 99.50083333194444567...
        let v = mean_photons_from_temperature(0.01).unwrap();
        assert!((v - 99.500_833_331_944_45).abs() <= 1e-12 * v);
        assert!(mean_photons_from_temperature(800.0).unwrap() == 0.0);
        let mut prev = f64::INFINITY;
        for k in 1..100 {
            let v = mean_photons_from_temperature(k as f64 * 0.1).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn nonpositive_energy_ratio_is_rejected() {
        for x in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                mean_photons_from_temperature(x),
                Err(Error::Domain { .. })
            ));
        }
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation_for_tolerance(1.0, 1e-6), 19);
        // Explicit tail summation confirms N = 19 is the smallest admissible index.
        let tail = |n: usize| -> f64 {
            (n + 1..2000)
                .map(|k| photon_probability(k, 1.0))
                .collect::<CompensatedSum>()
                .value()
        };
        assert!(tail(19) <= 1e-6);
        assert!(tail(18) > 1e-6);
        assert_eq!(truncation_for_tolerance(0.0, 1e-12), 0);
        assert_eq!(truncation_for_tolerance(0.0, 0.5), 0);
        for nbar in [0.1, 1.0, 7.0, 100.0] {
            assert_eq!(truncation_for_tolerance(nbar, 1.0), 0);
        }
    }

    #[test]
    fn truncation_is_minimal() {
        for nbar in [0.01, 0.3, 1.0, 2.5, 10.0, 40.0] {
            for eps in [0.5, 1e-3, 1e-8, 1e-12, 1e-15] {
                let n = truncation_for_tolerance(nbar, eps);
                assert!(tail_mass(nbar, n) <= eps);
                if n > 0 {
                    assert!(tail_mass(nbar, n - 1) > eps);
                }
            }
        }
    }

    #[test]
    fn retained_mass_meets_tolerance() {
        for nbar in [0.0, 0.1, 1.0, 5.0] {
            let spec = ThermalFieldSpec::new(nbar, 1e-12).unwrap();
            let total: CompensatedSum = spec.probabilities().iter().copied().collect();
            assert!((total.value() - 1.0).abs() <= 1e-12, "nbar={nbar}");
            assert!(spec.retained_mass() >= 1.0 - 1e-12);
            assert!((total.value() - spec.retained_mass()).abs() <= 1e-14);
        }
    }

    #[test]
    fn zero_mean_is_vacuum() {
        let spec = ThermalFieldSpec::new(0.0, 1e-10).unwrap();
        assert_eq!(spec.truncation(), 0);
        assert_eq!(spec.probabilities(), &[1.0]);
        assert_eq!(spec.buffer_len(), 3);
        let z = make_phase_state(&spec, 1.234);
        assert_eq!(z.coefficients()[0].norm(), 1.0);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(ThermalFieldSpec::new(-0.1, 1e-6).is_err());
        assert!(ThermalFieldSpec::new(f64::INFINITY, 1e-6).is_err());
        assert!(ThermalFieldSpec::new(1.0, 0.0).is_err());
        assert!(ThermalFieldSpec::new(1.0, 1.5).is_err());
    }

    #[test]
    fn zero_phase_is_real() {
        let spec = ThermalFieldSpec::new(1.0, 1e-6).unwrap();
        let z = make_phase_state(&spec, 0.0);
        for (n, c) in z.coefficients().iter().enumerate() {
            assert_eq!(c.im, 0.0);
            assert_eq!(c.re, photon_probability(n, 1.0).sqrt());
        }
    }

    #[test]
    fn phase_state_norm_is_retained_mass() {
        let spec = ThermalFieldSpec::new(1.0, 1e-6).unwrap();
        assert_eq!(spec.truncation(), 19);
        let z = make_phase_state(&spec, 2.2);
        assert!((z.norm_sqr() - (1.0 - 0.5f64.powi(20))).abs() <= 1e-15);
    }

    #[test]
    fn phase_is_reduced_into_period() {
        let spec = ThermalFieldSpec::new(0.5, 1e-8).unwrap();
        assert!((make_phase_state(&spec, -0.5).phi() - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(make_phase_state(&spec, TAU).phi(), 0.0);
    }
}
