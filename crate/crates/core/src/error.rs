use thiserror::Error;

use crate::state::Basis;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace differs from one by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("state is in the {found:?} basis, expected {expected:?}")]
    WrongBasis { expected: Basis, found: Basis },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("qubits are detuned (omega1 = {omega1}, omega2 = {omega2}); only the resonant case is modelled")]
    Detuned { omega1: f64, omega2: f64 },

    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("relaxation rates vanish in one channel while others are active")]
    DegenerateRates,

    #[error("integration step too large: trace drifted by {drift:.3e} at t = {time:.6e} s")]
    StepTooLarge { time: f64, drift: f64 },

    #[error("state invariant violated at t = {time:.6e} s: {reason}")]
    InvariantViolated { time: f64, reason: Box<Error> },

    #[error("dressed a-d coherence {magnitude:.3e} is not negligible; use the full basis change")]
    AssumptionViolated { magnitude: f64 },

    #[error("state has a negative eigenvalue {0:.3e}")]
    NegativeEigenvalue(f64),

    #[error("time grid must be non-empty, start at 0 and increase strictly")]
    BadTimeGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
