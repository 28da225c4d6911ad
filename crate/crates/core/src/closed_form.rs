//! Exact amplitudes for two qubits resonantly coupled to one cavity mode
//! with unequal strengths, `H = sum_j lambda_j (a sigma_j^+ + a^dag sigma_j^-)`
//! in the interaction picture.
//!
//! The Hamiltonian conserves the total excitation number, so every initial
//! product state `|qubits, n>` stays inside a manifold of at most four kets
//! `{|e1 e2, m>, |e1 g2, m+1>, |g1 e2, m+1>, |g1 g2, m+2>}` labelled by `m`.
//! The manifold frequencies are `+-Omega^+_m` and `+-Omega^-_m`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::PureStatePropagator;
use crate::qubits::{AtomLabel, TwoQubitBasis};

/// Below this `|t Omega|` the `sin(t Omega) / Omega` factor is taken from its
/// Taylor series.
const SINC_SERIES_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPair {
    lambda1: f64,
    lambda2: f64,
}

impl CouplingPair {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(lambda1 > 0.0 && lambda1.is_finite()) {
            return Err(Error::domain(
                "CouplingPair",
                format!("lambda1 must be finite and > 0, got {lambda1}"),
            ));
        }
        if !(lambda2 >= 0.0 && lambda2.is_finite()) {
            return Err(Error::domain(
                "CouplingPair",
                format!("lambda2 must be finite and >= 0, got {lambda2}"),
            ));
        }
        Ok(Self { lambda1, lambda2 })
    }

    /// `lambda1 = 1 + gamma`, `lambda2 = 1 - gamma` with `0 <= gamma <= 1`.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain(
                "CouplingPair::from_gamma",
                format!("gamma must lie in [0, 1], got {gamma}"),
            ));
        }
        Self::new(1.0 + gamma, 1.0 - gamma)
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    /// Relative asymmetry `(lambda1 - lambda2) / (lambda1 + lambda2)`.
    /// Only meaningful as the gamma parameter when `lambda1 + lambda2 = 2`.
    pub fn asymmetry(&self) -> f64 {
        (self.lambda1 - self.lambda2) / (self.lambda1 + self.lambda2)
    }

    /// The gamma parameter, if the pair is on the `lambda1 + lambda2 = 2` line.
    pub fn gamma(&self) -> Option<f64> {
        ((self.lambda1 + self.lambda2 - 2.0).abs() <= 1e-14).then(|| self.asymmetry())
    }

    pub fn is_symmetric(&self) -> bool {
        self.lambda1 == self.lambda2
    }
}

/// Frequencies and mixing coefficients of excitation manifold `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldSpectrum {
    pub manifold_index: i64,
    pub lambda: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    /// Real for `m >= -1`; at `m = -2` the minus branch is imaginary.
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
}

fn sqrt_signed(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

pub fn manifold_spectrum(n: i64, couplings: &CouplingPair) -> Result<ManifoldSpectrum> {
    if n < -2 {
        return Err(Error::domain(
            "manifold_spectrum",
            format!("manifold index must be >= -2, got {n}"),
        ));
    }
    let a1 = couplings.lambda1 * couplings.lambda1;
    let a2 = couplings.lambda2 * couplings.lambda2;
    let s = a1 + a2;
    let d = a1 - a2;
    let nf = n as f64;
    let degree = 2.0 * nf + 3.0;
    let ladder = (nf + 2.0) * (nf + 1.0);

    // (a1 + a2)^2 (2n+3)^2 - 4 (a1 - a2)^2 (n+2)(n+1), regrouped so that no
    // large terms cancel.
    let lambda = if ladder == 0.0 {
        s
    } else {
        (4.0 * a1 * a2 * degree * degree + d * d).sqrt()
    };
    // mu^- = s - lambda = -16 (n+1)(n+2) a1 a2 / (s + lambda)
    let mu_minus = -16.0 * ladder * a1 * a2 / (s + lambda);
    let mu_plus = 2.0 * s - mu_minus;

    let omega_plus_sq = 0.5 * (s * degree + lambda);
    // Product of the squared frequencies is d^2 (n+2)(n+1).
    let omega_minus_sq = if omega_plus_sq > 0.0 {
        d * d * ladder / omega_plus_sq
    } else {
        0.5 * (s * degree - lambda)
    };

    Ok(ManifoldSpectrum {
        manifold_index: n,
        lambda,
        mu_plus,
        mu_minus,
        omega_plus: sqrt_signed(omega_plus_sq),
        omega_minus: sqrt_signed(omega_minus_sq),
    })
}

/// `sin(t Omega) / Omega`, regular at `Omega = 0`.
fn sin_over(t: f64, omega: Complex64) -> Complex64 {
    let x = omega * t;
    if x.norm() < SINC_SERIES_THRESHOLD {
        let x2 = x * x;
        t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        x.sin() / omega
    }
}

fn cos_of(t: f64, omega: Complex64) -> Complex64 {
    (omega * t).cos()
}

/// `coef * f()`, skipping the evaluation entirely when the coefficient
/// vanishes so that analytically continued (hyperbolic) branches at
/// out-of-range manifold indices never enter the result.
fn term(coef: f64, f: impl FnOnce() -> Complex64) -> Complex64 {
    if coef == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        coef * f()
    }
}

/// The four amplitudes reached from one initial product ket.
///
/// For `Ee` the initial ket is `|e1 e2, n>` and `x` holds the amplitudes on
/// `{|e1 e2, n>, |e1 g2, n+1>, |g1 e2, n+1>, |g1 g2, n+2>}`. For `Gg` it is
/// `|g1 g2, n>` (manifold `n - 2`) and for `Eg` it is `|e1 g2, n>` (manifold
/// `n - 1`); their targets are the same four qubit states with photon numbers
/// shifted down accordingly, see [`AmplitudeSet::target_photons`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub initial_label: AtomLabel,
    pub photons: usize,
    pub x: [Complex64; 4],
}

impl AmplitudeSet {
    /// Photon number attached to each of the four qubit targets, `None` where
    /// the ket does not exist (and the amplitude is identically zero).
    pub fn target_photons(label: AtomLabel, n: usize) -> [Option<usize>; 4] {
        let shift = |offset: i64| usize::try_from(n as i64 + offset).ok();
        match label {
            AtomLabel::Ee => [shift(0), shift(1), shift(1), shift(2)],
            AtomLabel::Gg => [shift(-2), shift(-1), shift(-1), shift(0)],
            AtomLabel::Eg => [shift(-1), shift(0), shift(0), shift(1)],
        }
    }

    /// Manifold index `m` that the initial ket `|label, n>` belongs to.
    pub fn manifold_of(label: AtomLabel, n: usize) -> i64 {
        let n = n as i64;
        match label {
            AtomLabel::Ee => n,
            AtomLabel::Gg => n - 2,
            AtomLabel::Eg => n - 1,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn amplitudes_with(
    label: AtomLabel,
    n: usize,
    t: f64,
    couplings: &CouplingPair,
    s: &ManifoldSpectrum,
) -> AmplitudeSet {
    let l1 = couplings.lambda1;
    let l2 = couplings.lambda2;
    let a1 = l1 * l1;
    let a2 = l2 * l2;
    let nf = n as f64;
    let big = s.lambda;
    let (mp, mm) = (s.mu_plus, s.mu_minus);
    let cos_p = || cos_of(t, s.omega_plus);
    let cos_m = || cos_of(t, s.omega_minus);
    let sin_p = || sin_over(t, s.omega_plus);
    let sin_m = || sin_over(t, s.omega_minus);
    let i = Complex64::i();
    let zero = Complex64::new(0.0, 0.0);

    let x = match label {
        AtomLabel::Ee => {
            let r = (nf + 1.0).sqrt();
            let x1 = (term(-mm, cos_p) + term(mp, cos_m)) / (2.0 * big);
            let x2 = -i
                * (l2 * r / (2.0 * big))
                * (term(4.0 * a1 * (nf + 2.0) - mm, sin_p)
                    - term(4.0 * a1 * (nf + 2.0) - mp, sin_m));
            let x3 = -i
                * (l1 * r / (2.0 * big))
                * (term(4.0 * a2 * (nf + 2.0) - mm, sin_p)
                    - term(4.0 * a2 * (nf + 2.0) - mp, sin_m));
            let x4 = 2.0 * l1 * l2 * ((nf + 2.0) * (nf + 1.0)).sqrt() / big * (cos_p() - cos_m());
            [x1, x2, x3, x4]
        }
        AtomLabel::Gg => {
            let r = nf.sqrt();
            let pair = (nf * (nf - 1.0)).sqrt();
            let x1 = if pair == 0.0 {
                zero
            } else {
                2.0 * l1 * l2 * pair / big * (cos_p() - cos_m())
            };
            let (x2, x3) = if r == 0.0 {
                (zero, zero)
            } else {
                let x2 = -i
                    * (l1 * r / (2.0 * big))
                    * (term(4.0 * a2 * (nf - 1.0) + mp, sin_p)
                        - term(4.0 * a2 * (nf - 1.0) + mm, sin_m));
                let x3 = -i
                    * (l2 * r / (2.0 * big))
                    * (term(4.0 * a1 * (nf - 1.0) + mp, sin_p)
                        - term(4.0 * a1 * (nf - 1.0) + mm, sin_m));
                (x2, x3)
            };
            let x4 = (term(mp, cos_p) - term(mm, cos_m)) / (2.0 * big);
            [x1, x2, x3, x4]
        }
        AtomLabel::Eg => {
            let r = nf.sqrt();
            let x1 = if r == 0.0 {
                zero
            } else {
                i * (l2 * r / (2.0 * big))
                    * (term(mm - 4.0 * a1 * (nf + 1.0), sin_p)
                        + term(4.0 * a1 * (nf + 1.0) - mp, sin_m))
            };
            let x2 = (term(a1 - a2 + big, cos_p) + term(a2 - a1 + big, cos_m)) / (2.0 * big);
            let x3 = l1 * l2 * (2.0 * nf + 1.0) / big * (cos_p() - cos_m());
            let x4 = i
                * (l1 * (nf + 1.0).sqrt() / (2.0 * big))
                * (term(mm + 4.0 * a2 * nf, sin_m) - term(mp + 4.0 * a2 * nf, sin_p));
            [x1, x2, x3, x4]
        }
    };
    AmplitudeSet {
        initial_label: label,
        photons: n,
        x,
    }
}

/// Amplitudes for the initial ket `|label, n>` after time `t`.
pub fn amplitudes(label: AtomLabel, n: usize, t: f64, couplings: &CouplingPair) -> AmplitudeSet {
    let spectrum = manifold_spectrum(AmplitudeSet::manifold_of(label, n), couplings)
        .expect("manifold index of a non-negative photon number is at least -2");
    amplitudes_with(label, n, t, couplings, &spectrum)
}

/// Closed-form propagator with manifold spectra precomputed for
/// `m = -2 ..= max_manifold`.
#[derive(Debug, Clone)]
pub struct ClosedFormModel {
    couplings: CouplingPair,
    spectra: Vec<ManifoldSpectrum>,
}

impl ClosedFormModel {
    pub fn new(couplings: CouplingPair, max_manifold: usize) -> Self {
        let spectra = (-2..=max_manifold as i64)
            .map(|m| manifold_spectrum(m, &couplings).expect("m >= -2"))
            .collect();
        Self { couplings, spectra }
    }

    pub fn couplings(&self) -> &CouplingPair {
        &self.couplings
    }

    pub fn spectrum(&self, m: i64) -> Result<ManifoldSpectrum> {
        match usize::try_from(m + 2)
            .ok()
            .and_then(|k| self.spectra.get(k))
        {
            Some(s) => Ok(*s),
            None => manifold_spectrum(m, &self.couplings),
        }
    }

    pub fn amplitudes(&self, label: AtomLabel, n: usize, t: f64) -> AmplitudeSet {
        let s = self
            .spectrum(AmplitudeSet::manifold_of(label, n))
            .expect("manifold index of a non-negative photon number is at least -2");
        amplitudes_with(label, n, t, &self.couplings, &s)
    }

    /// Joint state `U(t) |label> (x) |field>` in the partner-major product
    /// basis: index `qubits * (N + 3) + photons`.
    pub fn propagate_field(&self, field: &[Complex64], label: AtomLabel, t: f64) -> Vec<Complex64> {
        let fock_dim = field.len() + 2;
        let mut out = vec![Complex64::new(0.0, 0.0); 4 * fock_dim];
        for (n, &c) in field.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let amps = self.amplitudes(label, n, t);
            let targets = AmplitudeSet::target_photons(label, n);
            for (basis, (x, photons)) in TwoQubitBasis::ALL.iter().zip(amps.x.iter().zip(targets)) {
                if let Some(k) = photons {
                    out[basis.index() * fock_dim + k] += c * x;
                }
            }
        }
        out
    }
}

impl PureStatePropagator for ClosedFormModel {
    type Label = AtomLabel;

    fn partner_dim(&self) -> usize {
        4
    }

    fn partner_index(&self, label: AtomLabel) -> usize {
        label.basis().index()
    }

    fn propagate(&self, field: &[Complex64], label: AtomLabel, t: f64) -> Result<Vec<Complex64>> {
        if !t.is_finite() {
            return Err(Error::Propagator(format!("non-finite time {t}")));
        }
        Ok(self.propagate_field(field, label, t))
    }
}

/// Propagates `|label> (x) |z(phi)>`; see [`ClosedFormModel::propagate_field`].
pub fn propagate_phase_state(
    z: &crate::fock::PhaseState,
    label: AtomLabel,
    t: f64,
    couplings: &CouplingPair,
) -> Vec<Complex64> {
    let max_manifold = z.coefficients().len().saturating_sub(1);
    ClosedFormModel::new(*couplings, max_manifold).propagate_field(z.coefficients(), label, t)
}
