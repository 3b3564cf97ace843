//! Two-qubit density operators tagged with the basis they are written in.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs, Mat2, Mat4, ONE, ZERO};
use crate::system::DressedFrame;

/// Basis a [`DensityMatrix4`] is expressed in.
///
/// `Computational` orders the states `|0,0⟩, |0,1⟩, |1,0⟩, |1,1⟩` where the
/// first label is qubit 1. `Dressed` orders the Hamiltonian eigenstates
/// `|a⟩, |b⟩, |c⟩, |d⟩` by ascending energy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Computational,
    Dressed,
}

/// Acceptance thresholds for the density-operator invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// max entrywise `|M - M†|`
    pub hermitian: f64,
    /// `|Tr M - 1|`
    pub trace: f64,
    /// smallest eigenvalue must be `>= -psd`
    pub psd: f64,
}

impl Tolerances {
    /// For states built directly (initial conditions, closed forms).
    pub const STATE: Tolerances = Tolerances { hermitian: 1e-12, trace: 1e-10, psd: 1e-9 };
    /// For states produced by time evolution.
    pub const EVOLVED: Tolerances = Tolerances { hermitian: 1e-10, trace: 1e-8, psd: 1e-7 };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::STATE
    }
}

/// A validated two-qubit density operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix4 {
    basis: Basis,
    matrix: Mat4,
}

/// Check the density-operator invariants of `m`, in the order Hermiticity,
/// trace, positivity, and report the first one that fails.
pub fn validate_density(m: Mat4, basis: Basis, tol: &Tolerances) -> Result<DensityMatrix4> {
    check_density(&m, tol)?;
    Ok(DensityMatrix4 { basis, matrix: m })
}

fn check_density<const N: usize>(m: &crate::linalg::Matrix<N>, tol: &Tolerances) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let herm = m.hermiticity_error();
    if herm > tol.hermitian {
        return Err(Error::NotHermitian { deviation: herm });
    }
    let tr = m.trace();
    let dev = (tr - ONE).norm();
    if dev > tol.trace {
        return Err(Error::TraceNotOne { deviation: dev });
    }
    let eig = hermitian_eigs(m)?;
    if eig.values[0] < -tol.psd {
        return Err(Error::NotPsd { min_eigenvalue: eig.values[0] });
    }
    Ok(())
}

impl DensityMatrix4 {
    /// Wrap a matrix without checking. Callers guarantee the invariants, e.g.
    /// closed-form states or the output of a unitary conjugation.
    pub(crate) fn from_trusted(matrix: Mat4, basis: Basis) -> Self {
        DensityMatrix4 { basis, matrix }
    }

    pub fn pure(ket: [C64; 4], basis: Basis) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParams("zero or non-finite state vector".into()));
        }
        let mut k = ket;
        for z in k.iter_mut() {
            *z /= norm;
        }
        validate_density(Mat4::projector(&k), basis, &Tolerances::STATE)
    }

    /// `|q1, q2⟩⟨q1, q2|` in the computational basis.
    pub fn product(q1: u8, q2: u8) -> Self {
        let idx = 2 * (q1 as usize & 1) + (q2 as usize & 1);
        Self::from_trusted(Mat4::unit(idx, idx), Basis::Computational)
    }

    /// `(|0,0⟩ + |1,1⟩)/√2`
    pub fn bell_phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let k = [C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)];
        Self::from_trusted(Mat4::projector(&k), Basis::Computational)
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        Self::from_trusted(Mat4::identity().scale_re(0.25), basis)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.matrix.0[i][j]
    }

    pub fn populations(&self) -> [f64; 4] {
        self.matrix.diag_re()
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigs(&self.matrix)
            .map(|e| e.values)
            .expect("validated density matrix is Hermitian")
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        check_density(&self.matrix, tol)
    }

    /// Reduced state of qubit 1, tracing out qubit 2.
    pub fn partial_trace_q2(&self) -> Result<QubitState2> {
        self.require(Basis::Computational)?;
        let m = &self.matrix.0;
        let r = Mat2::from_fn(|i, j| m[2 * i][2 * j] + m[2 * i + 1][2 * j + 1]);
        Ok(QubitState2(r))
    }

    /// Reduced state of qubit 2, tracing out qubit 1.
    pub fn partial_trace_q1(&self) -> Result<QubitState2> {
        self.require(Basis::Computational)?;
        let m = &self.matrix.0;
        let r = Mat2::from_fn(|i, j| m[i][j] + m[2 + i][2 + j]);
        Ok(QubitState2(r))
    }

    /// Re-express the state in `target`, using the eigenvectors stored in
    /// `frame`. Unitary conjugation, so the spectrum is unchanged.
    pub fn change_basis(&self, frame: &DressedFrame, target: Basis) -> DensityMatrix4 {
        let u = frame.unitary();
        let matrix = match (self.basis, target) {
            (a, b) if a == b => self.matrix,
            (Basis::Dressed, Basis::Computational) => self.matrix.conjugate_by(u),
            (Basis::Computational, Basis::Dressed) => self.matrix.conjugate_by(&u.adjoint()),
            _ => unreachable!(),
        };
        DensityMatrix4 { basis: target, matrix }
    }

    /// Largest entrywise deviation from an X-shaped matrix, i.e. the biggest
    /// element outside the diagonal and the (1,4)/(2,3) corners.
    pub fn x_violation(&self) -> f64 {
        let m = &self.matrix.0;
        [(0, 1), (0, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(i, j)| m[i][j].norm())
            .fold(0.0, f64::max)
    }

    fn require(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(Error::WrongBasis { expected: basis, found: self.basis });
        }
        Ok(())
    }
}

/// Reduced density operator of one qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState2(pub(crate) Mat2);

impl QubitState2 {
    pub fn new(m: Mat2, tol: &Tolerances) -> Result<Self> {
        check_density(&m, tol)?;
        Ok(QubitState2(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        check_density(&self.0, tol)
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        let m = &self.0 .0;
        m[0][0].re.powi(2) + m[1][1].re.powi(2) + 2.0 * m[0][1].norm_sqr()
    }
}
