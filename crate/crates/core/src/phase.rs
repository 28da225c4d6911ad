//! Evolution of a diagonal field mixture through its phase-state
//! decomposition.
//!
//! A diagonal state `sum_n p(n) |n><n|` equals the phase average of the
//! projectors onto `|z(phi)> = sum_n sqrt(p(n)) e^{i n phi} |n>`. The average
//! over one full period is a trigonometric polynomial in `phi`, so the
//! equal-weight periodic trapezoid rule reproduces it exactly once the node
//! count exceeds the largest index difference. Each node is a pure state and
//! can be handed to any pure-state propagator; the weighted sum of the
//! propagated projectors is the evolved mixed state.

use std::f64::consts::{PI, TAU};

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{PhaseState, ThermalFieldSpec, PROPAGATION_HEADROOM};
use crate::reduction::TwoQubitDensity;

/// Tolerance on the sum of partner-mixture weights.
const WEIGHT_SUM_TOLERANCE: f64 = 1e-10;

/// Anything that can evolve `|partner label> (x) |field>` for a pure field.
///
/// The returned vector lives in the partner-major product basis with index
/// `partner * (field.len() + 2) + photons`. Implementations must be unitary
/// and reduce to the plain embedding at `t = 0`.
pub trait PureStatePropagator: Sync {
    type Label: Copy + Send + Sync;

    fn partner_dim(&self) -> usize;

    /// Basis index of a partner label (its position at `t = 0`).
    fn partner_index(&self, label: Self::Label) -> usize;

    fn propagate(&self, field: &[Complex64], label: Self::Label, t: f64) -> Result<Vec<Complex64>>;
}

/// `(phi, weight)` pairs of a quadrature rule over the phase.
pub type QuadratureRule = Vec<(f64, f64)>;

/// `m` equally spaced nodes `2 pi k / m` over the full period, weight `1/m`.
pub fn quadrature_nodes(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::domain("quadrature_nodes", "node count must be >= 1"));
    }
    let w = 1.0 / m as f64;
    Ok((0..m).map(|k| (TAU * k as f64 / m as f64, w)).collect())
}

/// Equal-weight nodes over `[0, pi)` only. The half-period average does not
/// cancel odd index differences; kept so that defect stays demonstrable.
pub fn half_period_nodes(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::domain(
            "half_period_nodes",
            "node count must be >= 1",
        ));
    }
    let w = 1.0 / m as f64;
    Ok((0..m).map(|k| (PI * k as f64 / m as f64, w)).collect())
}

/// Smallest node count for which every quantity built here is reproduced
/// exactly: `2N + 3` for truncation `N`.
pub fn exact_node_count(truncation: usize) -> usize {
    2 * truncation + 3
}

#[derive(Debug, Clone)]
pub struct FieldReconstruction {
    pub matrix: Array2<Complex64>,
    /// False when fewer than [`exact_node_count`] nodes were used.
    pub exact: bool,
}

/// `sum_k w_k |z(phi_k)><z(phi_k)|` for an arbitrary rule.
pub fn reconstruct_with_rule(probabilities: &[f64], rule: &[(f64, f64)]) -> Array2<Complex64> {
    let dim = probabilities.len();
    let mut rho = Array2::<Complex64>::zeros((dim, dim));
    for &(phi, w) in rule {
        let z = PhaseState::from_probabilities(probabilities, phi);
        let c = z.coefficients();
        for i in 0..dim {
            for j in 0..dim {
                rho[[i, j]] += w * c[i] * c[j].conj();
            }
        }
    }
    rho
}

pub fn reconstruct_field_density(spec: &ThermalFieldSpec, m: usize) -> Result<FieldReconstruction> {
    let rule = quadrature_nodes(m)?;
    Ok(FieldReconstruction {
        matrix: reconstruct_with_rule(spec.probabilities(), &rule),
        exact: m >= exact_node_count(spec.truncation()),
    })
}

/// Density matrix over `partner (x) Fock(0..N+2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDensity {
    matrix: Array2<Complex64>,
    partner_dim: usize,
    fock_dim: usize,
}

impl JointDensity {
    pub fn from_matrix(
        matrix: Array2<Complex64>,
        partner_dim: usize,
        fock_dim: usize,
    ) -> Result<Self> {
        let d = partner_dim * fock_dim;
        if matrix.dim() != (d, d) {
            return Err(Error::domain(
                "JointDensity",
                format!("expected {d}x{d} matrix, got {:?}", matrix.dim()),
            ));
        }
        Ok(Self {
            matrix,
            partner_dim,
            fock_dim,
        })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn partner_dim(&self) -> usize {
        self.partner_dim
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn dim(&self) -> usize {
        self.partner_dim * self.fock_dim
    }

    pub fn index(&self, partner: usize, photons: usize) -> usize {
        partner * self.fock_dim + photons
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diag().sum()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // For Hermitian rho, tr(rho^2) = sum |rho_ij|^2.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.t().mapv(|z| z.conj()))
    }
}

/// Maximum entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn check_mixture<L>(mixture: &[(f64, L)]) -> Result<()> {
    if mixture.is_empty() {
        return Err(Error::domain("evolve_mixed", "partner mixture is empty"));
    }
    if let Some((w, _)) = mixture.iter().find(|(w, _)| w.is_nan() || *w < 0.0) {
        return Err(Error::domain(
            "evolve_mixed",
            format!("mixture weight must be >= 0, got {w}"),
        ));
    }
    let total: f64 = mixture.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::domain(
            "evolve_mixed",
            format!("mixture weights sum to {total}, expected 1"),
        ));
    }
    Ok(())
}

/// Evolves `rho_field (x) sum_j w_j |label_j><label_j|` for a diagonal field
/// given by `probabilities`, using the supplied quadrature rule.
pub fn evolve_mixed_with_rule<P: PureStatePropagator>(
    solver: &P,
    probabilities: &[f64],
    partner_mixture: &[(f64, P::Label)],
    t: f64,
    rule: &[(f64, f64)],
) -> Result<JointDensity> {
    check_mixture(partner_mixture)?;
    if !t.is_finite() {
        return Err(Error::domain(
            "evolve_mixed",
            format!("time must be finite, got {t}"),
        ));
    }
    let fock_dim = probabilities.len() + PROPAGATION_HEADROOM;
    let d = solver.partner_dim() * fock_dim;

    let jobs: Vec<(f64, f64, P::Label)> = partner_mixture
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .flat_map(|&(w, label)| rule.iter().map(move |&(phi, wk)| (phi, w * wk, label)))
        .collect();

    // States are computed in parallel but accumulated in a fixed order so the
    // result does not depend on scheduling.
    let states: Vec<(f64, Vec<Complex64>)> = jobs
        .par_iter()
        .map(|&(phi, weight, label)| {
            let z = PhaseState::from_probabilities(probabilities, phi);
            let psi = solver.propagate(z.coefficients(), label, t)?;
            if psi.len() != d {
                return Err(Error::Propagator(format!(
                    "propagator returned {} components, expected {d}",
                    psi.len()
                )));
            }
            Ok((weight, psi))
        })
        .collect::<Result<_>>()?;

    let mut rho = Array2::<Complex64>::zeros((d, d));
    for (weight, psi) in &states {
        let support: Vec<usize> = (0..d)
            .filter(|&i| psi[i] != Complex64::new(0.0, 0.0))
            .collect();
        for &i in &support {
            let wi = *weight * psi[i];
            let mut row = rho.row_mut(i);
            for &j in &support {
                row[j] += wi * psi[j].conj();
            }
        }
    }
    JointDensity::from_matrix(rho, solver.partner_dim(), fock_dim)
}

/// [`evolve_mixed_with_rule`] over `m` full-period nodes for a thermal field.
pub fn evolve_mixed<P: PureStatePropagator>(
    solver: &P,
    spec: &ThermalFieldSpec,
    partner_mixture: &[(f64, P::Label)],
    t: f64,
    m: usize,
) -> Result<JointDensity> {
    let rule = quadrature_nodes(m)?;
    evolve_mixed_with_rule(solver, spec.probabilities(), partner_mixture, t, &rule)
}

/// Traces out the field, leaving the partner density matrix.
pub fn partial_trace_field_matrix(rho: &JointDensity) -> Array2<Complex64> {
    let (pd, fd) = (rho.partner_dim, rho.fock_dim);
    let mut out = Array2::<Complex64>::zeros((pd, pd));
    for a in 0..pd {
        for b in 0..pd {
            out[[a, b]] = (0..fd).map(|k| rho.matrix[[a * fd + k, b * fd + k]]).sum();
        }
    }
    out
}

/// Field marginal, the complement of [`partial_trace_field_matrix`].
pub fn partial_trace_partner(rho: &JointDensity) -> Array2<Complex64> {
    let (pd, fd) = (rho.partner_dim, rho.fock_dim);
    let mut out = Array2::<Complex64>::zeros((fd, fd));
    for a in 0..pd {
        let block = rho
            .matrix
            .slice(ndarray::s![a * fd..(a + 1) * fd, a * fd..(a + 1) * fd]);
        out += &block;
    }
    out
}

/// Field trace of a two-qubit joint density.
pub fn partial_trace_field(rho: &JointDensity) -> Result<TwoQubitDensity> {
    if rho.partner_dim != 4 {
        return Err(Error::domain(
            "partial_trace_field",
            format!(
                "two-qubit partner expected, got dimension {}",
                rho.partner_dim
            ),
        ));
    }
    let m = partial_trace_field_matrix(rho);
    let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in m.axis_iter(Axis(0)).enumerate() {
        for (j, z) in row.iter().enumerate() {
            entries[i][j] = *z;
        }
    }
    Ok(TwoQubitDensity::from_entries(entries))
}
