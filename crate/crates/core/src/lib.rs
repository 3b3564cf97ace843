//! Open dynamics of two coupled resonant qubits, the second of which is
//! attached to a thermal bath.
//!
//! Two master equations are provided: a microscopic one written in the
//! dressed eigenbasis of the coupled Hamiltonian, and a phenomenological one
//! that damps qubit 2 with its bare lowering operator. Correlation measures
//! (concurrence, discord, linear entropy) are computed on their outputs.

// `!(x > 0.0)` is deliberate: NaN must fail the positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod generator;
pub mod integrate;
pub mod linalg;
pub mod metrics;
pub mod microscopic;
pub mod phenomenological;
pub mod state;
pub mod system;

pub use error::{Error, Result};
pub use integrate::{uniform_grid, Trajectory};
pub use linalg::{hermitian_eigs, HermitianEigen, Mat2, Mat4};
pub use metrics::{
    concurrence_general, concurrence_x, discord_approx_q2, discord_oracle_q2, linear_entropy_q1,
    linear_entropy_q1_x, von_neumann_entropy, x_elements_from_dressed, XStateElements,
};
pub use microscopic::{
    build_dissipator_oracle, propagate_analytic, propagate_numeric, steady_state_microscopic,
    DressedStateVector,
};
pub use phenomenological::{
    phenom_rhs, propagate_phenom, steady_state_phenom, steady_state_phenom_dressed, PhenomStateVector,
};
pub use state::{validate_density, Basis, DensityMatrix4, QubitState2, Tolerances};
pub use system::{
    boltzmann_factor, dressed_frame, fairness_check, hamiltonian, rate_set, spectral_density,
    thermal_occupancy, DressedFrame, FairnessReport, RateSet, SystemParams, KB_OVER_HBAR,
};
