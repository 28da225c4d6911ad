//! Brute-force reference dynamics.
//!
//! Builds the excitation-manifold blocks of the rotating-wave Hamiltonian by
//! applying the ladder operators to each product ket, diagonalizes them with
//! a local cyclic Jacobi solver, and evolves the thermal field as the plain
//! Fock mixture `sum_n p(n) |n><n|`. Nothing here touches phase states or the
//! closed-form amplitudes.

use ndarray::Array2;
use num_complex::Complex64;

use crate::closed_form::CouplingPair;
use crate::fock::{ThermalFieldSpec, PROPAGATION_HEADROOM};
use crate::phase::JointDensity;
use crate::qubits::TwoQubitBasis;
use crate::reduction::{AtomicMixtureSpec, TwoQubitDensity};

const JACOBI_MAX_SWEEPS: usize = 64;

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] += v;
    }

    fn off_diagonal_norm_sqr(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s
    }
}

/// Eigenpairs from cyclic Jacobi rotations. Column `k` of `vectors` (stored
/// row-major, `vectors[i * dim + k]`) belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

pub fn jacobi_eigen(matrix: &SymmetricMatrix) -> Eigen {
    let n = matrix.dim;
    let mut a = matrix.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a
        .data
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm_sqr() <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a.get(p, p), a.get(q, q));
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a.get(k, p), a.get(k, q));
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let (apk, aqk) = (a.get(p, k), a.get(q, k));
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Eigen {
        values: (0..n).map(|i| a.get(i, i)).collect(),
        vectors: v,
    }
}

/// Product ket `|qubits, photons>`.
pub type ProductKet = (TwoQubitBasis, usize);

/// Hamiltonian restricted to the kets with total excitation `excitation`.
#[derive(Debug, Clone)]
pub struct ManifoldBlock {
    pub excitation: usize,
    pub basis: Vec<ProductKet>,
    pub hamiltonian: SymmetricMatrix,
}

impl ManifoldBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, ket: ProductKet) -> Option<usize> {
        self.basis.iter().position(|&k| k == ket)
    }
}

fn with_atom(q: TwoQubitBasis, atom: usize, excited: bool) -> TwoQubitBasis {
    let e1 = if atom == 0 { excited } else { q.is_excited(0) };
    let e2 = if atom == 1 { excited } else { q.is_excited(1) };
    match (e1, e2) {
        (true, true) => TwoQubitBasis::EE,
        (true, false) => TwoQubitBasis::EG,
        (false, true) => TwoQubitBasis::GE,
        (false, false) => TwoQubitBasis::GG,
    }
}

pub fn build_block(excitation: usize, couplings: &CouplingPair) -> ManifoldBlock {
    let basis: Vec<ProductKet> = TwoQubitBasis::ALL
        .iter()
        .filter(|q| q.excitations() <= excitation)
        .map(|&q| (q, excitation - q.excitations()))
        .collect();
    let lambdas = [couplings.lambda1(), couplings.lambda2()];
    let mut h = SymmetricMatrix::zeros(basis.len());

    // <target| lambda_j (a sigma_j^+ + a^dag sigma_j^-) |source>
    for (src, &(q, k)) in basis.iter().enumerate() {
        for (atom, &lambda) in lambdas.iter().enumerate() {
            let image = if q.is_excited(atom) {
                Some(((with_atom(q, atom, false), k + 1), ((k + 1) as f64).sqrt()))
            } else if k > 0 {
                Some(((with_atom(q, atom, true), k - 1), (k as f64).sqrt()))
            } else {
                None
            };
            if let Some((ket, factor)) = image {
                let dst = basis
                    .iter()
                    .position(|&b| b == ket)
                    .expect("interaction conserves excitation number");
                h.add(dst, src, lambda * factor);
            }
        }
    }
    ManifoldBlock {
        excitation,
        basis,
        hamiltonian: h,
    }
}

/// Full propagator `exp(-i H t)` of a block.
pub fn block_propagator(block: &ManifoldBlock, t: f64) -> Array2<Complex64> {
    let n = block.dim();
    let eig = jacobi_eigen(&block.hamiltonian);
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * t))
        .collect();
    Array2::from_shape_fn((n, n), |(i, j)| {
        (0..n)
            .map(|k| eig.vectors[i * n + k] * eig.vectors[j * n + k] * phases[k])
            .sum()
    })
}

/// Column `initial` of [`block_propagator`].
pub fn evolve_block(block: &ManifoldBlock, t: f64, initial: usize) -> Vec<Complex64> {
    let n = block.dim();
    let eig = jacobi_eigen(&block.hamiltonian);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    eig.vectors[i * n + k]
                        * eig.vectors[initial * n + k]
                        * Complex64::from_polar(1.0, -eig.values[k] * t)
                })
                .sum()
        })
        .collect()
}

/// Block eigenvalues, ascending.
pub fn block_eigenvalues(block: &ManifoldBlock) -> Vec<f64> {
    let mut v = jacobi_eigen(&block.hamiltonian).values;
    v.sort_by(f64::total_cmp);
    v
}

/// Evolves `|q, n>` and returns `(ket, amplitude)` pairs.
pub fn evolve_product_ket(
    q: TwoQubitBasis,
    n: usize,
    t: f64,
    couplings: &CouplingPair,
) -> Vec<(ProductKet, Complex64)> {
    let block = build_block(n + q.excitations(), couplings);
    let start = block
        .position((q, n))
        .expect("ket lies in its own manifold");
    let psi = evolve_block(&block, t, start);
    block.basis.iter().copied().zip(psi).collect()
}

fn diagonal_mixture_terms(
    probabilities: &[f64],
    mixture: &AtomicMixtureSpec,
) -> Vec<(f64, TwoQubitBasis, usize)> {
    let mut terms = Vec::new();
    for (n, &p) in probabilities.iter().enumerate() {
        for (w, label) in mixture.components() {
            if p > 0.0 && w > 0.0 {
                terms.push((p * w, label.basis(), n));
            }
        }
    }
    terms
}

/// Reduced two-qubit state from term-by-term evolution of the Fock mixture.
pub fn oracle_reduced_density(
    spec: &ThermalFieldSpec,
    mixture: &AtomicMixtureSpec,
    couplings: &CouplingPair,
    t: f64,
) -> TwoQubitDensity {
    let mut acc = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (weight, q, n) in diagonal_mixture_terms(spec.probabilities(), mixture) {
        let psi = evolve_product_ket(q, n, t, couplings);
        for &((qa, ka), za) in &psi {
            for &((qb, kb), zb) in &psi {
                if ka == kb {
                    acc[qa.index()][qb.index()] += weight * za * zb.conj();
                }
            }
        }
    }
    TwoQubitDensity::from_entries(acc)
}

/// Joint qubit-field state in the same layout as the phase engine produces.
pub fn oracle_joint_density(
    probabilities: &[f64],
    mixture: &AtomicMixtureSpec,
    couplings: &CouplingPair,
    t: f64,
) -> JointDensity {
    let fock_dim = probabilities.len() + PROPAGATION_HEADROOM;
    let d = 4 * fock_dim;
    let mut rho = Array2::<Complex64>::zeros((d, d));
    for (weight, q, n) in diagonal_mixture_terms(probabilities, mixture) {
        let psi = evolve_product_ket(q, n, t, couplings);
        for &((qa, ka), za) in &psi {
            for &((qb, kb), zb) in &psi {
                rho[[qa.index() * fock_dim + ka, qb.index() * fock_dim + kb]] +=
                    weight * za * zb.conj();
            }
        }
    }
    JointDensity::from_matrix(rho, 4, fock_dim).expect("dimensions agree by construction")
}
