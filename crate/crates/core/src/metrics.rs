//! Correlation measures: concurrence, an approximate quantum discord with a
//! brute-force reference, and entropies.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs, pauli, Mat2, Mat4, Matrix};
use crate::microscopic::DressedStateVector;
use crate::state::{Basis, DensityMatrix4};
use crate::system::DressedFrame;

/// Largest |ρad| for which the dressed-to-X shortcut is accepted.
pub const AD_TOLERANCE: f64 = 1e-10;

/// The six entries of an X-shaped two-qubit state in the computational basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateElements {
    pub q11: f64,
    pub q22: f64,
    pub q33: f64,
    pub q44: f64,
    pub q14: C64,
    pub q23: C64,
}

impl XStateElements {
    /// Keep only the X entries of `m`; anything else is dropped.
    pub fn from_matrix(m: &Mat4) -> Self {
        let d = m.diag_re();
        XStateElements { q11: d[0], q22: d[1], q33: d[2], q44: d[3], q14: m.0[0][3], q23: m.0[1][2] }
    }

    pub fn from_density(rho: &DensityMatrix4) -> Result<Self> {
        if rho.basis() != Basis::Computational {
            return Err(Error::WrongBasis { expected: Basis::Computational, found: rho.basis() });
        }
        Ok(Self::from_matrix(rho.matrix()))
    }

    pub fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::from_real_diag([self.q11, self.q22, self.q33, self.q44]);
        m.0[0][3] = self.q14;
        m.0[3][0] = self.q14.conj();
        m.0[1][2] = self.q23;
        m.0[2][1] = self.q23.conj();
        m
    }

    pub fn trace(&self) -> f64 {
        self.q11 + self.q22 + self.q33 + self.q44
    }

    /// Unit trace and positivity of both 2×2 blocks.
    pub fn is_valid(&self) -> bool {
        (self.trace() - 1.0).abs() <= 1e-10
            && [self.q11, self.q22, self.q33, self.q44].iter().all(|&q| q >= -1e-9)
            && self.q14.norm_sqr() <= self.q11 * self.q44 + 1e-9
            && self.q23.norm_sqr() <= self.q22 * self.q33 + 1e-9
    }
}

/// Computational-basis X elements of a dressed state with no a–d coherence.
pub fn x_elements_from_dressed(s: &DressedStateVector, frame: &DressedFrame) -> Result<XStateElements> {
    let ad = s.coherences[2].norm();
    if ad > AD_TOLERANCE {
        return Err(Error::AssumptionViolated { magnitude: ad });
    }
    let [aa, bb, cc, dd] = s.populations;
    let bc = s.coherences[3];
    let (ap2, am2) = (frame.alpha_plus.powi(2), frame.alpha_minus.powi(2));
    let mid = 0.5 * (bb + cc);
    Ok(XStateElements {
        q11: ap2 * aa + am2 * dd,
        q22: mid - bc.re,
        q33: mid + bc.re,
        q44: am2 * aa + ap2 * dd,
        q14: C64::new(frame.alpha_plus * frame.alpha_minus * (dd - aa), 0.0),
        q23: C64::new(0.5 * (cc - bb), -bc.im),
    })
}

/// Concurrence of an X state.
pub fn concurrence_x(x: &XStateElements) -> f64 {
    let a = x.q14.norm() - (x.q22 * x.q33).max(0.0).sqrt();
    let b = x.q23.norm() - (x.q11 * x.q44).max(0.0).sqrt();
    (2.0 * a.max(b).max(0.0)).min(1.0)
}

/// Wootters concurrence of an arbitrary two-qubit state, from the spectrum of
/// `√ρ ρ̃ √ρ` with `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn concurrence_general(rho: &DensityMatrix4) -> Result<f64> {
    if rho.basis() != Basis::Computational {
        return Err(Error::WrongBasis { expected: Basis::Computational, found: rho.basis() });
    }
    let m = rho.matrix();
    let eig = hermitian_eigs(m)?;
    if eig.values[0] < -1e-9 {
        return Err(Error::NegativeEigenvalue(eig.values[0]));
    }
    let sqrt_rho = eig.map_values(|v| v.max(0.0).sqrt());
    let yy = pauli::Y.kron(&pauli::Y);
    let tilde = yy * m.conj() * yy;
    let r = sqrt_rho * tilde * sqrt_rho;
    // symmetrise away rounding before the Hermitian solver sees it
    let r = (r + r.adjoint()).scale_re(0.5);
    let xi = hermitian_eigs(&r)?.values;
    if xi[0] < -1e-9 {
        return Err(Error::NegativeEigenvalue(xi[0]));
    }
    let s = xi.map(|v| v.max(0.0).sqrt());
    Ok((s[3] - s[2] - s[1] - s[0]).clamp(0.0, 1.0))
}

// -p log2 p with 0 log 0 = 0
fn h(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.max(1e-300).log2()
    }
}

/// Shannon entropy in bits of a probability list.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| h(x)).sum()
}

/// Closed-form spectrum of an X state, in the order (Λ1, Λ2, Λ3, Λ4).
pub fn x_state_eigenvalues(x: &XStateElements) -> [f64; 4] {
    let s14 = ((x.q11 - x.q44).powi(2) + 4.0 * x.q14.norm_sqr()).sqrt();
    let s23 = ((x.q22 - x.q33).powi(2) + 4.0 * x.q23.norm_sqr()).sqrt();
    [
        0.5 * (x.q11 + x.q44 + s14),
        0.5 * (x.q11 + x.q44 - s14),
        0.5 * (x.q22 + x.q33 + s23),
        0.5 * (x.q22 + x.q33 - s23),
    ]
}

/// Individual terms of the approximate discord.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscordTerms {
    /// entropy of the reduced state of qubit 2
    pub s_q2: f64,
    /// entropy of the joint state
    pub s_joint: f64,
    pub n1: f64,
    pub n2: f64,
    /// `s_q2 - s_joint + min(n1, n2)` before clamping
    pub raw: f64,
}

impl DiscordTerms {
    pub fn value(&self) -> f64 {
        self.raw.max(0.0)
    }
}

pub fn discord_terms(x: &XStateElements) -> DiscordTerms {
    let s_q2 = h(x.q11 + x.q33) + h(x.q22 + x.q44);
    let s_joint = shannon_entropy(&x_state_eigenvalues(x));
    let diff = x.q11 - x.q44 + x.q22 - x.q33;
    let off = x.q14.norm() + x.q23.norm();
    let y = 0.5 * (1.0 + (diff * diff + 4.0 * off * off).sqrt());
    let n1 = h(y) + h(1.0 - y);
    let cond = |q: f64, partner: f64| if q <= 0.0 { 0.0 } else { -q * (q / (q + partner)).log2() };
    let n2 = cond(x.q11, x.q33) + cond(x.q22, x.q44) + cond(x.q33, x.q11) + cond(x.q44, x.q22);
    DiscordTerms { s_q2, s_joint, n1, n2, raw: s_q2 - s_joint + n1.min(n2) }
}

/// Approximate discord with measurement on qubit 2. Negative values of the
/// approximation are reported and clamped to zero.
pub fn discord_approx_q2(x: &XStateElements) -> f64 {
    let t = discord_terms(x);
    if t.raw < -1e-12 {
        log::warn!("approximate discord {:.3e} is negative; clamped to 0", t.raw);
    }
    t.value()
}

/// Von Neumann entropy in bits of a density matrix of any size.
pub fn von_neumann_entropy<const N: usize>(m: &Matrix<N>) -> Result<f64> {
    let values = hermitian_eigs(m)?.values;
    if values[0] < -1e-9 {
        return Err(Error::NotPsd { min_eigenvalue: values[0] });
    }
    Ok(shannon_entropy(&values.map(|v| v.clamp(0.0, 1.0))))
}

fn qubit_entropy(m: &Mat2) -> f64 {
    let (a, d) = (m.0[0][0].re, m.0[1][1].re);
    let r = ((a - d).powi(2) + 4.0 * m.0[0][1].norm_sqr()).sqrt();
    h(0.5 * (a + d + r)) + h(0.5 * (a + d - r))
}

/// Points spread almost evenly over the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = PI * (1.0 + 5f64.sqrt());
    (0..n)
        .map(|i| {
            let k = i as f64 + 0.5;
            let phi = (1.0 - 2.0 * k / n as f64).acos();
            let theta = golden * k;
            [phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()]
        })
        .collect()
}

/// Discord with measurement on qubit 2 by direct search over projective
/// measurements along `grid_n` Fibonacci directions plus the three axes.
/// Being a minimum over a finite set it bounds the exact value from above.
pub fn discord_oracle_q2(rho: &DensityMatrix4, grid_n: usize) -> Result<f64> {
    let s_q2 = von_neumann_entropy(rho.partial_trace_q1()?.matrix())?;
    let s_joint = von_neumann_entropy(rho.matrix())?;
    let m = rho.matrix();
    let mut dirs = fibonacci_sphere(grid_n);
    dirs.extend([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    let mut best = f64::INFINITY;
    for n in dirs {
        let ns = pauli::X.scale_re(n[0]) + pauli::Y.scale_re(n[1]) + pauli::Z.scale_re(n[2]);
        let mut cond = 0.0;
        for sign in [1.0, -1.0] {
            let proj = (Mat2::identity() + ns.scale_re(sign)).scale_re(0.5);
            let post = pauli::ID.kron(&proj) * *m;
            let red = Mat2::from_fn(|i, j| post.0[2 * i][2 * j] + post.0[2 * i + 1][2 * j + 1]);
            let p = red.trace().re;
            if p > 1e-15 {
                cond += p * qubit_entropy(&red.scale_re(1.0 / p));
            }
        }
        best = best.min(cond);
    }
    Ok(s_q2 - s_joint + best)
}

/// `1 - Tr ρ_q1²` from the reduced state of qubit 1.
pub fn linear_entropy_q1(rho: &DensityMatrix4) -> Result<f64> {
    Ok(1.0 - rho.partial_trace_q2()?.purity())
}

/// `2 P0 (1 - P0)` with `P0` the probability of qubit 1 in `|0⟩`. Equals
/// [`linear_entropy_q1`] when the reduced state of qubit 1 is diagonal, which
/// holds for every X state.
pub fn linear_entropy_q1_x(x: &XStateElements) -> f64 {
    let p0 = x.q11 + x.q22;
    2.0 * p0 * (1.0 - p0)
}
