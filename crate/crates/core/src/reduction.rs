//! Two-qubit reduced density matrix obtained by tracing the field out of the
//! evolved joint state.
//!
//! Every surviving product in the trace pairs kets of equal photon number
//! coming from the same initial Fock state, so the phase average collapses to
//! a plain `p(n)`-weighted sum over the closed-form amplitudes and no phase
//! quadrature is needed on this path.

use num_complex::Complex64;

use crate::closed_form::{ClosedFormModel, CouplingPair};
use crate::fock::ThermalFieldSpec;
use crate::numeric::{CompensatedComplexSum, CompensatedSum};
use crate::qubits::{AtomLabel, TwoQubitBasis};

/// Diagonal initial atomic state
/// `sin^2(theta) cos^2(vartheta) |ee><ee| + sin^2(theta) sin^2(vartheta) |gg><gg|
///  + cos^2(theta) |eg><eg|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicMixtureSpec {
    pub theta: f64,
    pub vartheta: f64,
}

impl AtomicMixtureSpec {
    pub fn new(theta: f64, vartheta: f64) -> Self {
        Self { theta, vartheta }
    }

    pub fn w_ee(&self) -> f64 {
        let (s, c) = (self.theta.sin(), self.vartheta.cos());
        s * s * c * c
    }

    pub fn w_gg(&self) -> f64 {
        let (s, v) = (self.theta.sin(), self.vartheta.sin());
        s * s * v * v
    }

    pub fn w_eg(&self) -> f64 {
        let c = self.theta.cos();
        c * c
    }

    /// `(weight, label)` pairs in the order `ee, gg, eg`.
    pub fn components(&self) -> [(f64, AtomLabel); 3] {
        [
            (self.w_ee(), AtomLabel::Ee),
            (self.w_gg(), AtomLabel::Gg),
            (self.w_eg(), AtomLabel::Eg),
        ]
    }
}

/// 4x4 density matrix in the basis `|e1 e2>, |e1 g2>, |g1 e2>, |g1 g2>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensity {
    entries: [[Complex64; 4]; 4],
}

impl TwoQubitDensity {
    pub fn from_entries(entries: [[Complex64; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self::from_entries([[Complex64::new(0.0, 0.0); 4]; 4])
    }

    /// `|psi><psi|` for a (not necessarily normalized) vector.
    pub fn from_pure(psi: [Complex64; 4]) -> Self {
        let mut e = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] = psi[i] * psi[j].conj();
            }
        }
        Self::from_entries(e)
    }

    pub fn from_diagonal(d: [f64; 4]) -> Self {
        let mut e = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            e[i][i] = Complex64::new(d[i], 0.0);
        }
        Self::from_entries(e)
    }

    /// X-state with the only coherence on the `(e1g2, g1e2)` pair.
    pub fn x_state(b_ee: f64, b_egeg: f64, b_gege: f64, b_gg: f64, b_coh: Complex64) -> Self {
        let mut rho = Self::from_diagonal([b_ee, b_egeg, b_gege, b_gg]);
        rho.entries[1][2] = b_coh;
        rho.entries[2][1] = b_coh.conj();
        rho
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, row: TwoQubitBasis, col: TwoQubitBasis) -> Complex64 {
        self.entries[row.index()][col.index()]
    }

    pub fn b_ee(&self) -> f64 {
        self.entries[0][0].re
    }

    pub fn b_egeg(&self) -> f64 {
        self.entries[1][1].re
    }

    pub fn b_gege(&self) -> f64 {
        self.entries[2][2].re
    }

    pub fn b_gg(&self) -> f64 {
        self.entries[3][3].re
    }

    /// `<e1 g2| rho |g1 e2>`.
    pub fn b_coh(&self) -> Complex64 {
        self.entries[1][2]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.entries[i][i].re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Largest modulus among the eight entries linking `{ee, gg}` to `{eg, ge}`
    /// plus the `ee`-`gg` coherence pair, i.e. everything outside the X pattern
    /// produced by excitation-conserving dynamics.
    pub fn off_x_magnitude(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let inside = i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
                if !inside {
                    worst = worst.max(self.entries[i][j].norm());
                }
            }
        }
        worst
    }

    /// Whether every entry outside the diagonal and the `(eg, ge)` pair is
    /// exactly zero.
    pub fn is_exact_x_state(&self) -> bool {
        self.off_x_magnitude() == 0.0
    }

    /// Exchanges the roles of the two qubits.
    pub fn swap_qubits(&self) -> Self {
        const PERM: [usize; 4] = [0, 2, 1, 3];
        let mut e = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                e[i][j] = self.entries[PERM[i]][PERM[j]];
            }
        }
        Self::from_entries(e)
    }

    /// Partial transpose over atom 2 (`atom == 1`) or atom 1 (`atom == 0`).
    pub fn partial_transpose(&self, atom: usize) -> Self {
        assert!(atom < 2, "atom index must be 0 or 1");
        let split = |k: usize| (k >> 1, k & 1);
        let join = |a: usize, b: usize| (a << 1) | b;
        let mut e = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let (i1, i2) = split(i);
                let (j1, j2) = split(j);
                let (r, c) = if atom == 1 {
                    (join(i1, j2), join(j1, i2))
                } else {
                    (join(j1, i2), join(i1, j2))
                };
                e[r][c] = self.entries[i][j];
            }
        }
        Self::from_entries(e)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut e = self.entries;
        e.iter_mut().flatten().for_each(|z| *z *= s);
        Self::from_entries(e)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.entries;
        for (row, other_row) in e.iter_mut().zip(&other.entries) {
            for (x, y) in row.iter_mut().zip(other_row) {
                *x += y;
            }
        }
        Self::from_entries(e)
    }
}

/// Closed-form reduced density on a precomputed model.
///
/// The model must cover manifolds up to the field truncation.
pub fn reduced_density_with(
    model: &ClosedFormModel,
    probabilities: &[f64],
    mixture: &AtomicMixtureSpec,
    t: f64,
) -> TwoQubitDensity {
    let mut b_ee = CompensatedSum::new();
    let mut b_egeg = CompensatedSum::new();
    let mut b_gege = CompensatedSum::new();
    let mut b_gg = CompensatedSum::new();
    let mut b_coh = CompensatedComplexSum::new();

    let components = mixture.components();
    for (n, &p) in probabilities.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for &(w, label) in &components {
            if w == 0.0 {
                continue;
            }
            let x = model.amplitudes(label, n, t).x;
            let pw = p * w;
            b_ee.add(pw * x[0].norm_sqr());
            b_egeg.add(pw * x[1].norm_sqr());
            b_gege.add(pw * x[2].norm_sqr());
            b_gg.add(pw * x[3].norm_sqr());
            b_coh.add(pw * x[1] * x[2].conj());
        }
    }
    TwoQubitDensity::x_state(
        b_ee.value(),
        b_egeg.value(),
        b_gege.value(),
        b_gg.value(),
        b_coh.value(),
    )
}

pub fn reduced_density(
    spec: &ThermalFieldSpec,
    mixture: &AtomicMixtureSpec,
    couplings: &CouplingPair,
    t: f64,
) -> TwoQubitDensity {
    let model = ClosedFormModel::new(*couplings, spec.truncation());
    reduced_density_with(&model, spec.probabilities(), mixture, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn mixture_weights_sum_to_one() {
        for k in 0..50 {
            let m = AtomicMixtureSpec::new(0.37 * k as f64, 1.13 * k as f64 - 3.0);
            let total = m.w_ee() + m.w_gg() + m.w_eg();
            assert!((total - 1.0).abs() <= 1e-15);
            for (w, _) in m.components() {
                assert!((0.0..=1.0).contains(&w));
            }
        }
    }

    #[test]
    fn initial_state_is_the_atomic_mixture() {
        let spec = ThermalFieldSpec::new(1.0, 1e-10).unwrap();
        let c = CouplingPair::from_gamma(0.5).unwrap();
        let rho = reduced_density(&spec, &AtomicMixtureSpec::new(FRAC_PI_2, 0.0), &c, 0.0);
        let mass = spec.retained_mass();
        assert!((rho.b_ee() - mass).abs() <= 1e-15);
        assert!(rho.b_egeg() + rho.b_gege() + rho.b_gg() <= 1e-30);

        let m = AtomicMixtureSpec::new(0.7, 1.1);
        let rho = reduced_density(&spec, &m, &c, 0.0);
        let expect =
            TwoQubitDensity::from_diagonal([m.w_ee(), m.w_eg(), 0.0, m.w_gg()]).scale(mass);
        assert!(rho.max_abs_diff(&expect) <= 1e-15);
    }

    #[test]
    fn exact_excited_projector_at_vacuum() {
        let spec = ThermalFieldSpec::new(0.0, 1e-10).unwrap();
        let c = CouplingPair::from_gamma(0.5).unwrap();
        let rho = reduced_density(&spec, &AtomicMixtureSpec::new(FRAC_PI_2, 0.0), &c, 0.0);
        assert!(rho.max_abs_diff(&TwoQubitDensity::from_diagonal([1.0, 0.0, 0.0, 0.0])) <= 1e-15);
    }

    #[test]
    fn x_structure_and_hermiticity_by_construction() {
        let spec = ThermalFieldSpec::new(0.5, 1e-10).unwrap();
        let c = CouplingPair::from_gamma(0.3).unwrap();
        for t in [0.4, 3.0, 17.0] {
            let rho = reduced_density(&spec, &AtomicMixtureSpec::new(0.4, 0.9), &c, t);
            assert!(rho.is_exact_x_state());
            assert_eq!(rho.entries()[1][2], rho.entries()[2][1].conj());
            assert!((rho.trace() - spec.retained_mass()).abs() <= 1e-10);
            assert!(rho.b_coh().norm_sqr() <= rho.b_egeg() * rho.b_gege() + 1e-10);
        }
    }

    #[test]
    fn symmetric_couplings_are_swap_invariant() {
        let spec = ThermalFieldSpec::new(1.0, 1e-10).unwrap();
        let c = CouplingPair::new(0.9, 0.9).unwrap();
        // Only the ee/gg components are swap-symmetric initial states.
        for t in [0.3, 2.2, 9.5] {
            let rho = reduced_density(&spec, &AtomicMixtureSpec::new(FRAC_PI_2, 0.8), &c, t);
            assert!(rho.swap_qubits().max_abs_diff(&rho) <= 1e-10);
            assert!((rho.b_egeg() - rho.b_gege()).abs() <= 1e-10);
            assert!(rho.b_coh().im.abs() <= 1e-10);
        }
    }

    #[test]
    fn partial_transpose_involution() {
        let rho = TwoQubitDensity::x_state(0.1, 0.3, 0.4, 0.2, Complex64::new(0.1, -0.2));
        for atom in 0..2 {
            assert_eq!(rho.partial_transpose(atom).partial_transpose(atom), rho);
        }
        let pt = rho.partial_transpose(1);
        assert_eq!(pt.get(TwoQubitBasis::EE, TwoQubitBasis::GG), rho.b_coh());
        assert_eq!(
            pt.get(TwoQubitBasis::EG, TwoQubitBasis::GE),
            Complex64::new(0.0, 0.0)
        );
        let swapped = rho.swap_qubits();
        assert_eq!(swapped.b_egeg(), rho.b_gege());
        assert_eq!(swapped.b_coh(), rho.b_coh().conj());
    }
}
