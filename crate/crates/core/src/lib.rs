//! Unitary dynamics of two qubits coupled with unequal strengths to a single
//! cavity mode that starts in a thermal state.
//!
//! The thermal mixture is written as a uniform average over pure phase
//! states, each phase state is propagated exactly with the closed-form
//! excitation-manifold amplitudes, and the field is traced out to obtain the
//! two-qubit X-state whose partial-transpose negativity measures the
//! atom-atom entanglement. A brute-force manifold solver in [`oracle`]
//! checks every closed form independently.

pub mod closed_form;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod numeric;
pub mod oracle;
pub mod phase;
pub mod qubits;
pub mod reduction;

pub use closed_form::{AmplitudeSet, ClosedFormModel, CouplingPair, ManifoldSpectrum};
pub use entanglement::NegativityResult;
pub use error::{Error, Result};
pub use fock::{PhaseState, ThermalFieldSpec};
pub use phase::{JointDensity, PureStatePropagator};
pub use qubits::{AtomLabel, TwoQubitBasis};
pub use reduction::{AtomicMixtureSpec, TwoQubitDensity};
