//! Fixed-size complex matrices for one and two qubits, plus a cyclic Jacobi
//! eigensolver for Hermitian matrices.
//!
//! Everything here is dimension 2 or 4. The matrices are stored inline as
//! `[[C64; N]; N]`, row-major, so they are `Copy` and cheap to pass around.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::Error;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Square complex matrix of fixed dimension `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Matrix<2>;
pub type Mat4 = Matrix<4>;

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Matrix<N> {
    pub const DIM: usize = N;

    pub fn zeros() -> Self {
        Matrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diag(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, &x) in d.iter().enumerate() {
            m.0[i][i] = C64::new(x, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[C64; N], v: &[C64; N]) -> Self {
        Self::from_fn(|i, j| u[i] * v[j].conj())
    }

    /// Projector `|u⟩⟨u|`.
    pub fn projector(u: &[C64; N]) -> Self {
        Self::outer(u, u)
    }

    /// Matrix unit `|i⟩⟨j|`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zeros();
        m.0[i][j] = ONE;
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn diag_re(&self) -> [f64; N] {
        let mut d = [0.0; N];
        for (i, x) in d.iter_mut().enumerate() {
            *x = self.0[i][i].re;
        }
        d
    }

    pub fn column(&self, j: usize) -> [C64; N] {
        let mut c = [ZERO; N];
        for (i, x) in c.iter_mut().enumerate() {
            *x = self.0[i][j];
        }
        c
    }

    /// `A B A†`
    pub fn conjugate_by(&self, a: &Self) -> Self {
        *a * *self * a.adjoint()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Largest entrywise deviation `|M - M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for i in 0..N {
            for j in i..N {
                err = err.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        err
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flat_map(|r| r.iter()).all(|z| z.is_finite())
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    /// `⟨u|M|v⟩`
    pub fn braket(&self, u: &[C64; N], v: &[C64; N]) -> C64 {
        let mv = self.apply(v);
        u.iter().zip(mv.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Mat2 {
    /// Tensor product `self ⊗ other`, with `self` acting on the first qubit.
    pub fn kron(&self, other: &Mat2) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[i / 2][j / 2] * other.0[i % 2][j % 2])
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> AddAssign for Matrix<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

pub mod pauli {
    use super::{Mat2, I, ONE, ZERO};

    pub const ID: Mat2 = super::Matrix([[ONE, ZERO], [ZERO, ONE]]);
    pub const X: Mat2 = super::Matrix([[ZERO, ONE], [ONE, ZERO]]);
    pub const Y: Mat2 = super::Matrix([[ZERO, num_complex::Complex64 { re: 0.0, im: -1.0 }], [I, ZERO]]);
    pub const Z: Mat2 = super::Matrix([[ONE, ZERO], [ZERO, num_complex::Complex64 { re: -1.0, im: 0.0 }]]);
    /// `σ₊ = |1⟩⟨0|`
    pub const RAISE: Mat2 = super::Matrix([[ZERO, ZERO], [ONE, ZERO]]);
    /// `σ₋ = |0⟩⟨1|`
    pub const LOWER: Mat2 = super::Matrix([[ZERO, ONE], [ZERO, ZERO]]);
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; column `k`
/// of `vectors` belongs to `values[k]`.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: Matrix<N>,
}

impl<const N: usize> HermitianEigen<N> {
    pub fn vector(&self, k: usize) -> [C64; N] {
        self.vectors.column(k)
    }

    /// `V Λ V†`
    pub fn reconstruct(&self) -> Matrix<N> {
        Matrix::from_real_diag(self.values).conjugate_by(&self.vectors)
    }

    /// `V f(Λ) V†`
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Matrix<N> {
        let mut d = self.values;
        for x in d.iter_mut() {
            *x = f(*x);
        }
        Matrix::from_real_diag(d).conjugate_by(&self.vectors)
    }
}

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 64;

/// Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Pivots are visited in the fixed order `(0,1), (0,2), .., (N-2,N-1)` each
/// sweep, so the result is deterministic. The Hermiticity check is relative
/// to the largest entry.
pub fn hermitian_eigs<const N: usize>(m: &Matrix<N>) -> Result<HermitianEigen<N>, Error> {
    let scale = m.max_abs().max(1.0);
    let herm = m.hermiticity_error();
    if herm > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation: herm });
    }

    // symmetrize so rounding noise on the input cannot leak into the result
    let mut a = Matrix::<N>::from_fn(|i, j| 0.5 * (m.0[i][j] + m.0[j][i].conj()));
    let mut v = Matrix::<N>::identity();
    let frob = a.0.iter().flat_map(|r| r.iter()).map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|p| ((p + 1)..N).map(move |q| (p, q)))
            .map(|(p, q)| a.0[p][q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * frob * 1e-2 || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));
    let mut values = [0.0; N];
    let mut vectors = Matrix::<N>::zeros();
    for (k, &src) in order.iter().enumerate() {
        values[k] = a.0[src][src].re;
        for i in 0..N {
            vectors.0[i][k] = v.0[i][src];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn rotate<const N: usize>(a: &mut Matrix<N>, v: &mut Matrix<N>, p: usize, q: usize) {
    let b = a.0[p][q];
    let abs_b = b.norm();
    if abs_b == 0.0 {
        return;
    }
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    // negligible next to both diagonal entries: zero it outright
    if abs_b < f64::EPSILON * 1e-3 * (app.abs().min(aqq.abs())) {
        a.0[p][q] = ZERO;
        a.0[q][p] = ZERO;
        return;
    }
    let phase = b / abs_b;
    let theta = (aqq - app) / (2.0 * abs_b);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    // A <- A G, V <- V G with G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q)
    for k in 0..N {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * c - akq * ph_conj * s;
        a.0[k][q] = akp * s + akq * ph_conj * c;
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * c - vkq * ph_conj * s;
        v.0[k][q] = vkp * s + vkq * ph_conj * c;
    }
    // A <- G† A
    for k in 0..N {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = apk * c - aqk * phase * s;
        a.0[q][k] = apk * s + aqk * phase * c;
    }
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
    a.0[p][p].im = 0.0;
    a.0[q][q].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_input_sorts_ascending() {
        let m = Mat4::from_real_diag([3.0, 1.0, 2.0, 0.0]);
        let e = hermitian_eigs(&m).unwrap();
        assert_eq!(e.values, [0.0, 1.0, 2.0, 3.0]);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn pauli_x_tensor_identity() {
        let m = pauli::X.kron(&pauli::ID);
        let e = hermitian_eigs(&m).unwrap();
        for (got, want) in e.values.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn complex_offdiagonal_2x2() {
        let m = Mat2::from_fn(|i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 0.0),
            (1, 1) => C64::new(-0.5, 0.0),
            (0, 1) => C64::new(0.3, -0.7),
            _ => C64::new(0.3, 0.7),
        });
        let e = hermitian_eigs(&m).unwrap();
        let tr: f64 = 0.5;
        let det = -0.5 - (0.09 + 0.49);
        let disc = (tr * tr - 4.0 * det).sqrt();
        assert_abs_diff_eq!(e.values[0], 0.5 * (tr - disc), epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 0.5 * (tr + disc), epsilon = 1e-14);
        let u = e.vectors;
        assert!((u.adjoint() * u).max_abs_diff(&Mat2::identity()) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Mat4::identity();
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(hermitian_eigs(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn kron_ordering_first_factor_is_qubit_one() {
        // σ₊ on qubit 1 maps |0,0⟩ (index 0) to |1,0⟩ (index 2)
        let op = pauli::RAISE.kron(&pauli::ID);
        assert_eq!(op[(2, 0)], ONE);
        assert_eq!(op[(3, 1)], ONE);
        assert_eq!(op.max_abs_diff(&(Mat4::unit(2, 0) + Mat4::unit(3, 1))), 0.0);
    }
}
