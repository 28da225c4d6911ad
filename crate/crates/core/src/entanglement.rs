//! Partial-transpose negativity of two-qubit states.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::reduction::TwoQubitDensity;

/// Inputs further than this from Hermitian are rejected.
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;

/// Partial-transpose eigenvalues above this (and below zero) count as zero.
pub const NEGATIVE_EIGENVALUE_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityResult {
    /// `-2 * sum` of the negative partial-transpose eigenvalues.
    pub xi: f64,
    pub negative_eigenvalues: Vec<f64>,
    /// `B_ee * B_gg - |B_coh|^2`.
    pub upsilon: f64,
}

fn check_hermitian(rho: &TwoQubitDensity) -> Result<()> {
    let deviation = rho.hermiticity_defect();
    if deviation > HERMITICITY_TOLERANCE {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: HERMITICITY_TOLERANCE,
        });
    }
    Ok(())
}

/// Eigenvalues of a 2x2 Hermitian block `[[a, b], [b*, d]]`, ascending.
fn hermitian_2x2_eigenvalues(a: f64, d: f64, b: Complex64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    [mean - radius, mean + radius]
}

/// Eigenvalues of the partial transpose (over atom 2) of a general two-qubit
/// density matrix, ascending.
pub fn partial_transpose_eigenvalues(rho: &TwoQubitDensity) -> Result<[f64; 4]> {
    check_hermitian(rho)?;
    let pt = rho.partial_transpose(1);
    let e = pt.entries();
    // Symmetrize so round-off in the input cannot leak into the solver.
    let m = Matrix4::from_fn(|i, j| 0.5 * (e[i][j] + e[j][i].conj()));
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok([vals[0], vals[1], vals[2], vals[3]])
}

/// Partial-transpose eigenvalues of an X-state from its two 2x2 blocks,
/// ascending. The input must have no support outside the X pattern.
pub fn x_state_partial_transpose_eigenvalues(rho: &TwoQubitDensity) -> [f64; 4] {
    let e = rho.entries();
    // After transposing atom 2 the (eg, ge) coherence moves to (ee, gg) and
    // the (ee, gg) coherence moves to (eg, ge).
    let outer = hermitian_2x2_eigenvalues(rho.b_ee(), rho.b_gg(), e[1][2]);
    let inner = hermitian_2x2_eigenvalues(rho.b_egeg(), rho.b_gege(), e[0][3]);
    let mut vals = [outer[0], outer[1], inner[0], inner[1]];
    vals.sort_by(f64::total_cmp);
    vals
}

/// The one partial-transpose eigenvalue of the excitation-conserving X-state
/// that can turn negative:
/// `(B_ee + B_gg - sqrt((B_ee - B_gg)^2 + 4 |B_coh|^2)) / 2`.
pub fn closed_form_gamma(b_ee: f64, b_gg: f64, b_coh: Complex64) -> f64 {
    hermitian_2x2_eigenvalues(b_ee, b_gg, b_coh)[0]
}

/// `B_ee * B_gg - |B_coh|^2`; negative exactly when [`closed_form_gamma`] is.
pub fn upsilon_witness(rho: &TwoQubitDensity) -> f64 {
    rho.b_ee() * rho.b_gg() - rho.b_coh().norm_sqr()
}

fn result_from_eigenvalues(vals: &[f64], rho: &TwoQubitDensity) -> NegativityResult {
    let negative_eigenvalues: Vec<f64> = vals
        .iter()
        .copied()
        .filter(|&v| v <= -NEGATIVE_EIGENVALUE_CUTOFF)
        .collect();
    let xi = -2.0 * negative_eigenvalues.iter().sum::<f64>();
    NegativityResult {
        xi,
        negative_eigenvalues,
        upsilon: upsilon_witness(rho),
    }
}

/// Negativity of an arbitrary two-qubit state. X-states go through the
/// block quadratics; anything else through the general Hermitian solver.
pub fn negativity(rho: &TwoQubitDensity) -> Result<NegativityResult> {
    check_hermitian(rho)?;
    if rho.is_exact_x_state() {
        let vals = x_state_partial_transpose_eigenvalues(rho);
        Ok(result_from_eigenvalues(&vals, rho))
    } else {
        negativity_general(rho)
    }
}

/// Negativity through the general 4x4 Hermitian eigensolver only.
pub fn negativity_general(rho: &TwoQubitDensity) -> Result<NegativityResult> {
    let vals = partial_transpose_eigenvalues(rho)?;
    Ok(result_from_eigenvalues(&vals, rho))
}

/// `max(0, -2 * gamma^-)` straight from the X-state entries.
pub fn closed_form_negativity(rho: &TwoQubitDensity) -> f64 {
    let g = closed_form_gamma(rho.b_ee(), rho.b_gg(), rho.b_coh());
    if g <= -NEGATIVE_EIGENVALUE_CUTOFF {
        -2.0 * g
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn product_state_is_separable() {
        let rho = TwoQubitDensity::from_diagonal([1.0, 0.0, 0.0, 0.0]);
        let r = negativity(&rho).unwrap();
        assert_eq!(r.xi, 0.0);
        assert!(r.negative_eigenvalues.is_empty());
    }

    #[test]
    fn bell_state_is_maximal() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let rho = TwoQubitDensity::from_pure([z, h, h, z]);
        let r = negativity(&rho).unwrap();
        assert!((r.xi - 1.0).abs() <= 1e-15);
        assert_eq!(r.negative_eigenvalues.len(), 1);
        assert!((r.negative_eigenvalues[0] + 0.5).abs() <= 1e-15);
        let g = negativity_general(&rho).unwrap();
        assert!((g.xi - 1.0).abs() <= 1e-14);
        assert!(r.upsilon < 0.0);
    }

    #[test]
    fn general_path_handles_non_x_states() {
        // |phi+> = (|ee> + |gg>)/sqrt 2 has coherence outside the X pattern
        // used by the dynamics; the general solver still finds xi = 1.
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let rho = TwoQubitDensity::from_pure([h, z, z, h]);
        let r = negativity(&rho).unwrap();
        assert!((r.xi - 1.0).abs() <= 1e-14);
        // |+>|+> is a product state with every entry 1/4.
        let q = Complex64::new(0.5, 0.0);
        let r = negativity(&TwoQubitDensity::from_pure([q, q, q, q])).unwrap();
        assert!(r.xi.abs() <= 1e-14);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(closed_form_gamma(0.3, 0.2, Complex64::new(0.0, 0.0)), 0.2);
        assert_eq!(closed_form_gamma(0.2, 0.3, Complex64::new(0.0, 0.0)), 0.2);
        assert!((closed_form_gamma(0.0, 0.0, Complex64::new(0.5, 0.0)) + 0.5).abs() <= 1e-16);
        let g = closed_form_gamma(0.1, 0.2, Complex64::new(0.0, 0.25));
        assert!((g - (0.3 - 0.26f64.sqrt()) / 2.0).abs() <= 1e-16);
        assert!((g + 0.104_950_975_679_639_2).abs() <= 1e-15);
        let rho = TwoQubitDensity::x_state(0.1, 0.35, 0.35, 0.2, Complex64::new(0.0, 0.25));
        let general = partial_transpose_eigenvalues(&rho).unwrap();
        assert!((general[0] - g).abs() <= 1e-15);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut e = *TwoQubitDensity::from_diagonal([0.25; 4]).entries();
        e[0][1] = Complex64::new(1e-6, 0.0);
        let rho = TwoQubitDensity::from_entries(e);
        assert!(matches!(negativity(&rho), Err(Error::NotHermitian { .. })));
        e[0][1] = Complex64::new(1e-10, 0.0);
        assert!(negativity(&TwoQubitDensity::from_entries(e)).is_ok());
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        // Separable boundary state with round-off sized coherence excess.
        let rho =
            TwoQubitDensity::x_state(0.25, 0.25, 0.25, 0.25, Complex64::new(0.25 + 1e-14, 0.0));
        let r = negativity(&rho).unwrap();
        assert_eq!(r.xi, 0.0);
    }

    #[test]
    fn either_atom_gives_same_spectrum() {
        let rho = TwoQubitDensity::x_state(0.05, 0.4, 0.45, 0.1, Complex64::new(0.2, -0.3));
        let by_two = partial_transpose_eigenvalues(&rho).unwrap();
        let pt1 = rho.partial_transpose(0);
        let m = Matrix4::from_fn(|i, j| pt1.entries()[i][j]);
        let mut by_one: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        by_one.sort_by(f64::total_cmp);
        for (a, b) in by_two.iter().zip(&by_one) {
            assert!((a - b).abs() <= 1e-14);
        }
    }
}
