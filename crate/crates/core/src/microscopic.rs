//! Master equation derived in the dressed eigenbasis: closed-form
//! propagation, its thermal steady state, and an independently assembled
//! Lindblad generator used to cross-check both.
//!
//! The bath couples through `σx` of qubit 2. In the dressed basis that
//! operator splits into two jump operators, one per Bohr frequency:
//! `A_I` (a↔b, c↔d, at ω_I) and `A_II` (a↔c, b↔d, at ω_II). The population
//! dynamics is therefore that of two independent two-level "bits", one per
//! channel, which is how the closed form below is organised.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::generator::{Channel, Generator};
use crate::integrate::{check_evolved, check_grid, integrate, step_bound, Trajectory};
use crate::linalg::{pauli, Mat4, ZERO};
use crate::state::{Basis, DensityMatrix4, Tolerances};
use crate::system::{DressedFrame, RateSet, SystemParams, KB_OVER_HBAR};

/// Index pairs of the stored coherences: ab, ac, ad, bc, bd, cd.
pub const COHERENCE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Upper triangle of a density matrix in the dressed basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedStateVector {
    /// ρaa, ρbb, ρcc, ρdd
    pub populations: [f64; 4],
    /// ρab, ρac, ρad, ρbc, ρbd, ρcd
    pub coherences: [C64; 6],
}

impl DressedStateVector {
    pub fn diagonal(populations: [f64; 4]) -> Self {
        DressedStateVector { populations, coherences: [ZERO; 6] }
    }

    /// Read the upper triangle of `m`; the lower triangle is ignored.
    pub fn from_matrix(m: &Mat4) -> Self {
        let populations = m.diag_re();
        let coherences = COHERENCE_PAIRS.map(|(i, j)| m.0[i][j]);
        DressedStateVector { populations, coherences }
    }

    pub fn from_density(rho: &DensityMatrix4) -> Result<Self> {
        if rho.basis() != Basis::Dressed {
            return Err(Error::WrongBasis { expected: Basis::Dressed, found: rho.basis() });
        }
        Ok(Self::from_matrix(rho.matrix()))
    }

    /// `|1,0⟩⟨1,0|` written in the dressed basis.
    pub fn initial_ket10(frame: &DressedFrame) -> Self {
        let rho = DensityMatrix4::product(1, 0).change_basis(frame, Basis::Dressed);
        Self::from_matrix(rho.matrix())
    }

    pub fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::from_real_diag(self.populations);
        for (&(i, j), &z) in COHERENCE_PAIRS.iter().zip(&self.coherences) {
            m.0[i][j] = z;
            m.0[j][i] = z.conj();
        }
        m
    }

    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix4> {
        crate::state::validate_density(self.to_matrix(), Basis::Dressed, tol)
    }

    /// `ρ_ij` for any `i, j`.
    pub fn element(&self, i: usize, j: usize) -> C64 {
        if i == j {
            return C64::new(self.populations[i], 0.0);
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let k = COHERENCE_PAIRS.iter().position(|&p| p == (lo, hi)).unwrap();
        if i < j {
            self.coherences[k]
        } else {
            self.coherences[k].conj()
        }
    }

    pub fn trace(&self) -> f64 {
        self.populations.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_matrix().max_abs_diff(&other.to_matrix())
    }
}

// Two-level relaxation u' = -b u + a v, v' = b u - a v after a time with
// decay factor e = exp(-(a + b) t). With a = b = 0 nothing moves.
fn relax<T>(u: T, v: T, a: f64, b: f64, e: f64) -> (T, T)
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let r = a + b;
    if r == 0.0 {
        return (u, v);
    }
    (
        u * ((a + b * e) / r) + v * (a * (1.0 - e) / r),
        u * (b * (1.0 - e) / r) + v * ((b + a * e) / r),
    )
}

// Transition matrix of one channel bit (0 = lower, 1 = upper).
fn bit_propagator(down: f64, up: f64, t: f64) -> [[f64; 2]; 2] {
    let e = (-(down + up) * t).exp();
    let (p00, p10) = relax(1.0, 0.0, down, up, e);
    let (p01, p11) = relax(0.0, 1.0, down, up, e);
    [[p00, p01], [p10, p11]]
}

/// Exact state at time `t` of the dressed-basis master equation.
pub fn propagate_analytic(
    rho0: &DressedStateVector,
    rates: &RateSet,
    frame: &DressedFrame,
    t: f64,
) -> Result<DressedStateVector> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!("time must be >= 0, got {t}")));
    }
    if !rates.is_zero() && rates.k() == 0.0 {
        return Err(Error::DegenerateRates);
    }
    let r1 = rates.relax_i();
    let r2 = rates.relax_ii();

    // dressed index = bit_I + 2 bit_II: a = 00, b = 10, c = 01, d = 11
    let p1 = bit_propagator(rates.c_i, rates.c_bar_i, t);
    let p2 = bit_propagator(rates.c_ii, rates.c_bar_ii, t);
    let mut populations = [0.0; 4];
    for (x, out) in populations.iter_mut().enumerate() {
        *out = (0..4)
            .map(|y| p1[x & 1][y & 1] * p2[x >> 1][y >> 1] * rho0.populations[y])
            .sum();
    }

    let e1 = (-r1 * t).exp();
    let e2 = (-r2 * t).exp();
    let phase = |w: f64, decay: f64| C64::new(-decay * t, w * t).exp();
    let [ab, ac, ad, bc, bd, cd] = rho0.coherences;

    let f1 = phase(frame.bohr_i, 0.5 * r1);
    let (ab_t, cd_t) = relax(ab, cd, rates.c_ii, rates.c_bar_ii, e2);
    let f2 = phase(frame.bohr_ii, 0.5 * r2);
    let (ac_t, mbd_t) = relax(ac, -bd, rates.c_i, rates.c_bar_i, e1);
    let half = 0.5 * (r1 + r2);
    let e = &frame.energies;
    let coherences = [
        ab_t * f1,
        ac_t * f2,
        ad * phase(e[3] - e[0], half),
        bc * phase(e[2] - e[1], half),
        -mbd_t * f2,
        cd_t * f1,
    ];
    Ok(DressedStateVector { populations, coherences })
}

/// Closed-form trajectory on `times`, each sample checked against the
/// density-operator invariants.
pub fn analytic_trajectory(
    rho0: &DressedStateVector,
    rates: &RateSet,
    frame: &DressedFrame,
    times: &[f64],
) -> Result<Trajectory> {
    check_grid(times)?;
    let states = times
        .iter()
        .map(|&t| {
            let s = propagate_analytic(rho0, rates, frame, t)?;
            check_evolved(s.to_matrix(), Basis::Dressed, t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times: times.to_vec(), states })
}

/// Boltzmann weights over `E_a..E_d`; the ground state at `T = 0`.
pub fn gibbs_populations(frame: &DressedFrame, temperature: f64) -> [f64; 4] {
    if temperature == 0.0 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let kt = KB_OVER_HBAR * temperature;
    let e = &frame.energies;
    let w = e.map(|x| (-(x - e[0]) / kt).exp());
    let z: f64 = w.iter().sum();
    w.map(|x| x / z)
}

/// Stationary populations written through the decay coefficients.
pub fn rate_steady_populations(rates: &RateSet) -> Result<[f64; 4]> {
    let k = rates.k();
    if k == 0.0 {
        return Err(Error::DegenerateRates);
    }
    Ok([
        rates.c_i * rates.c_ii / k,
        rates.c_bar_i * rates.c_ii / k,
        rates.c_i * rates.c_bar_ii / k,
        rates.c_bar_i * rates.c_bar_ii / k,
    ])
}

/// The thermal state `exp(-βH)/Z`, diagonal in the dressed basis. When the
/// rates are usable the rate-ratio route is cross-checked against it.
pub fn steady_state_microscopic(rates: &RateSet, frame: &DressedFrame, temperature: f64) -> DressedStateVector {
    let gibbs = gibbs_populations(frame, temperature);
    if let Ok(p) = rate_steady_populations(rates) {
        let dev = p.iter().zip(&gibbs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if dev > 1e-12 {
            log::warn!("rate-ratio and Gibbs stationary populations differ by {dev:.3e}");
        }
    }
    DressedStateVector::diagonal(gibbs)
}

/// Jump operators `(A_I, A_II)` in the dressed basis, with amplitudes taken
/// from the eigenvectors rather than from the closed-form α and η.
pub fn jump_operators(frame: &DressedFrame) -> (Mat4, Mat4) {
    let u = frame.unitary();
    let sx = pauli::ID.kron(&pauli::X).conjugate_by(&u.adjoint());
    let pick = |pairs: [(usize, usize); 2]| {
        let mut a = Mat4::zeros();
        for (i, j) in pairs {
            a.0[i][j] = sx.0[i][j];
        }
        a
    };
    (pick([(0, 1), (2, 3)]), pick([(0, 2), (1, 3)]))
}

/// Full dressed-basis generator assembled from the Lindblad form, with the
/// KMS-weighted reverse processes as separate channels.
pub fn build_dissipator_oracle(p: &SystemParams, rates: &RateSet, frame: &DressedFrame) -> Generator {
    let h = p.hamiltonian().conjugate_by(&frame.unitary().adjoint());
    let (a1, a2) = jump_operators(frame);
    let channels = [
        Channel { rate: rates.gamma_i, jump: a1 },
        Channel { rate: rates.gamma_bar_i, jump: a1.adjoint() },
        Channel { rate: rates.gamma_ii, jump: a2 },
        Channel { rate: rates.gamma_bar_ii, jump: a2.adjoint() },
    ];
    Generator::lindblad(&h, &channels)
}

/// RK4 integration of `gen` from `rho0`, sampled on `times`.
pub fn propagate_numeric(rho0: &DensityMatrix4, gen: &Generator, times: &[f64]) -> Result<Trajectory> {
    let h = step_bound(gen.max_rate(), gen.max_frequency());
    integrate(*rho0.matrix(), |m| gen.apply(m), times, h, rho0.basis())
}
