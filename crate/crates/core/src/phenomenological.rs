//! The ad hoc model: coupled unitary dynamics plus a local thermal
//! dissipator on qubit 2, with both bath rates evaluated at the bare qubit
//! frequency Ω. Everything here lives in the computational basis.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::generator::{Channel, Generator};
use crate::integrate::{integrate, step_bound, OdeState, Trajectory};
use crate::linalg::{pauli, Mat4, ZERO};
use crate::microscopic::COHERENCE_PAIRS;
use crate::state::{Basis, DensityMatrix4, Tolerances};
use crate::system::{DressedFrame, RateSet, SystemParams};

/// Upper triangle of a density matrix in the computational basis, indices
/// 1..4 standing for `|0,0⟩, |0,1⟩, |1,0⟩, |1,1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhenomStateVector {
    /// ρ11, ρ22, ρ33, ρ44
    pub populations: [f64; 4],
    /// ρ12, ρ13, ρ14, ρ23, ρ24, ρ34
    pub coherences: [C64; 6],
}

impl PhenomStateVector {
    pub fn from_matrix(m: &Mat4) -> Self {
        PhenomStateVector {
            populations: m.diag_re(),
            coherences: COHERENCE_PAIRS.map(|(i, j)| m.0[i][j]),
        }
    }

    pub fn from_density(rho: &DensityMatrix4) -> Result<Self> {
        if rho.basis() != Basis::Computational {
            return Err(Error::WrongBasis { expected: Basis::Computational, found: rho.basis() });
        }
        Ok(Self::from_matrix(rho.matrix()))
    }

    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix4> {
        crate::state::validate_density(OdeState::to_matrix(self), Basis::Computational, tol)
    }

    pub fn trace(&self) -> f64 {
        self.populations.iter().sum()
    }
}

impl OdeState for PhenomStateVector {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        let mut out = *self;
        for (a, b) in out.populations.iter_mut().zip(&k.populations) {
            *a += h * b;
        }
        for (a, b) in out.coherences.iter_mut().zip(&k.coherences) {
            *a += b * h;
        }
        out
    }

    fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::from_real_diag(self.populations);
        for (&(i, j), &z) in COHERENCE_PAIRS.iter().zip(&self.coherences) {
            m.0[i][j] = z;
            m.0[j][i] = z.conj();
        }
        m
    }
}

/// Time derivative of the phenomenological master equation, written out
/// element by element for the upper triangle.
pub fn phenom_rhs(s: &PhenomStateVector, p: &SystemParams, rates: &RateSet) -> PhenomStateVector {
    let g = rates.gamma_phen;
    let gb = rates.gamma_bar_phen;
    let half = 0.5 * (g + gb);
    let il = C64::new(0.0, 0.5 * p.lambda);
    let iw = C64::new(0.0, p.omega);
    let [r11, r22, r33, r44] = s.populations;
    let [c12, c13, c14, c23, c24, c34] = s.coherences;
    let re = |x: f64| C64::new(x, 0.0);

    // il * (z - z*) = -λ Im z
    let d11 = -gb * r11 + g * r22 + (il * (c14 - c14.conj())).re;
    let d22 = gb * r11 - g * r22 + (il * (c23 - c23.conj())).re;
    let d33 = -gb * r33 + g * r44 - (il * (c23 - c23.conj())).re;
    let d44 = gb * r33 - g * r44 - (il * (c14 - c14.conj())).re;

    let d12 = (iw - half) * c12 + il * c13 - il * c24.conj();
    let d13 = il * c12 + (iw - gb) * c13 + c24 * g - il * c34.conj();
    let d14 = (iw * 2.0 - half) * c14 + il * re(r11 - r44);
    let d23 = il * re(r22 - r33) - c23 * half;
    let d24 = -il * c34 + (iw - g) * c24 + c13 * gb + il * c12.conj();
    let d34 = (iw - half) * c34 - il * c24 + il * c13.conj();

    PhenomStateVector {
        populations: [d11, d22, d33, d44],
        coherences: [d12, d13, d14, d23, d24, d34],
    }
}

/// The same model as a generic Lindblad generator on the computational basis.
pub fn phenomenological_generator(p: &SystemParams, rates: &RateSet) -> Generator {
    let lower = pauli::ID.kron(&pauli::LOWER);
    let raise = pauli::ID.kron(&pauli::RAISE);
    Generator::lindblad(
        &p.hamiltonian(),
        &[
            Channel { rate: rates.gamma_phen, jump: lower },
            Channel { rate: rates.gamma_bar_phen, jump: raise },
        ],
    )
}

/// RK4 integration from `rho0` (computational basis), sampled on `times`.
pub fn propagate_phenom(
    rho0: &DensityMatrix4,
    p: &SystemParams,
    rates: &RateSet,
    times: &[f64],
) -> Result<Trajectory> {
    let y0 = PhenomStateVector::from_density(rho0)?;
    let h = step_bound(rates.phen_total(), p.rabi());
    integrate(y0, |s| phenom_rhs(s, p, rates), times, h, Basis::Computational)
}

/// Closed-form stationary state. Only the populations, ρ14 and ρ23 are
/// nonzero.
pub fn steady_state_phenom(p: &SystemParams, rates: &RateSet) -> Result<PhenomStateVector> {
    let g = rates.gamma_phen;
    let gb = rates.gamma_bar_phen;
    let s = g + gb;
    if !(s > 0.0) {
        return Err(Error::DegenerateRates);
    }
    let l2 = p.lambda * p.lambda;
    let w2 = p.omega * p.omega;
    let dd = s * s + 2.0 * l2 + 8.0 * w2;
    let den = 2.0 * s * s * dd;
    let (g2, g3, g4) = (g * g, g * g * g, g * g * g * g);
    let (b2, b3) = (gb * gb, gb * gb * gb);

    let r11 = (3.0 * g3 * gb + g2 * (3.0 * b2 + l2 + 16.0 * w2) + g * (2.0 * l2 * gb + b3) + l2 * b2 + g4) / den;
    let r22 = (g3 * gb + g2 * (3.0 * b2 + l2) + g * gb * (3.0 * b2 + 2.0 * (l2 + 8.0 * w2)) + b2 * (b2 + l2)) / den;
    let r33 = (3.0 * g3 * gb + g2 * (3.0 * b2 + l2) + g * gb * (b2 + 2.0 * (l2 + 8.0 * w2)) + l2 * b2 + g4) / den;
    let r44 = (g3 * gb + g2 * (3.0 * b2 + l2) + b2 * (b2 + l2 + 16.0 * w2) + g * (2.0 * l2 * gb + 3.0 * b3)) / den;

    let r23 = C64::new(0.0, p.lambda * (gb - g) / (2.0 * dd));
    let r14 = C64::new(
        -2.0 * p.lambda * p.omega * (g - gb) / (s * dd),
        p.lambda * (g - gb) / (2.0 * dd),
    );
    Ok(PhenomStateVector {
        populations: [r11, r22, r33, r44],
        coherences: [ZERO, ZERO, r14, r23, ZERO, ZERO],
    })
}

/// The stationary state re-expressed on `|a⟩..|d⟩` by substituting the
/// computational kets in terms of the dressed ones.
pub fn steady_state_phenom_dressed(
    p: &SystemParams,
    rates: &RateSet,
    frame: &DressedFrame,
) -> Result<DensityMatrix4> {
    let s = steady_state_phenom(p, rates)?;
    let [r11, r22, r33, r44] = s.populations;
    let r14 = s.coherences[2];
    let r23 = s.coherences[3];
    let (ap, am) = (frame.alpha_plus, frame.alpha_minus);
    let (ap2, am2, apm) = (ap * ap, am * am, ap * am);

    let aa = am2 * r44 + ap2 * r11 - 2.0 * apm * r14.re;
    let bb = 0.5 * (r22 + r33) - r23.re;
    let cc = 0.5 * (r22 + r33) + r23.re;
    let dd = am2 * r11 + ap2 * r44 + 2.0 * apm * r14.re;
    let ad = C64::new(apm * (r11 - r44), 0.0) + r14 * ap2 - r14.conj() * am2;
    let bc = C64::new(0.5 * (r33 - r22), -r23.im);

    let mut m = Mat4::from_real_diag([aa, bb, cc, dd]);
    m.0[0][3] = ad;
    m.0[3][0] = ad.conj();
    m.0[1][2] = bc;
    m.0[2][1] = bc.conj();
    crate::state::validate_density(m, Basis::Dressed, &Tolerances::STATE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::uniform_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig2() -> SystemParams {
        SystemParams::new(4e9, 4e9, 5e7, 5e10, 8e9, 5e-4).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng) -> PhenomStateVector {
        let mut m = Mat4::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        m = m * m.adjoint();
        let tr = m.trace().re;
        PhenomStateVector::from_matrix(&m.scale_re(1.0 / tr))
    }

    #[test]
    fn rhs_matches_lindblad_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &temp in &[0.0, 5e-4, 1.5e-2, 0.3] {
            let p = SystemParams { temperature: temp, ..fig2() };
            let r = p.rate_set();
            let gen = phenomenological_generator(&p, &r);
            for _ in 0..20 {
                let s = random_state(&mut rng);
                let want = gen.apply(&OdeState::to_matrix(&s));
                let got = OdeState::to_matrix(&phenom_rhs(&s, &p, &r));
                assert!(got.max_abs_diff(&want) < 1e-12 * p.omega);
            }
        }
    }

    #[test]
    fn rhs_examples() {
        let p = SystemParams { gamma0: 0.0, ..fig2() };
        let r = p.rate_set();
        let diag = PhenomStateVector::from_matrix(&Mat4::from_real_diag([0.1, 0.2, 0.3, 0.4]));
        let d = phenom_rhs(&diag, &p, &r);
        assert!(d.populations.iter().all(|&x| x == 0.0));

        let p = fig2();
        let r = p.rate_set();
        let s = PhenomStateVector::from_matrix(&Mat4::unit(1, 1));
        let d = phenom_rhs(&s, &p, &r);
        assert_eq!(d.populations[0], r.gamma_phen);
        assert_eq!(d.populations[1], -r.gamma_phen);
        assert_eq!(d.coherences[3], C64::new(0.0, p.lambda / 2.0));
        assert_eq!(d.populations.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn rhs_is_traceless() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = SystemParams { temperature: 1.5e-2, ..fig2() };
        let r = p.rate_set();
        for _ in 0..50 {
            let d = phenom_rhs(&random_state(&mut rng), &p, &r);
            assert!(d.populations.iter().sum::<f64>().abs() < 1e-6);
        }
    }

    #[test]
    fn steady_state_is_stationary() {
        for &temp in &[0.0, 5e-4, 1.5e-2, 0.15] {
            for &lambda in &[0.0, 4e8, 4e9, 4e10] {
                let p = SystemParams { temperature: temp, lambda, ..fig2() };
                let r = p.rate_set();
                let s = steady_state_phenom(&p, &r).unwrap();
                let d = phenom_rhs(&s, &p, &r);
                assert!(OdeState::to_matrix(&d).max_abs() <= 1e-12 * r.phen_total(), "T={temp} λ={lambda}");
                s.to_density(&Tolerances::STATE).unwrap();
            }
        }
    }

    #[test]
    fn zero_temperature_state_is_not_ground_state() {
        let p = SystemParams { temperature: 0.0, ..fig2() };
        let r = p.rate_set();
        let s = steady_state_phenom(&p, &r).unwrap();
        let g = r.gamma_phen;
        let want = -p.lambda * g / (2.0 * (g * g + 2.0 * p.lambda.powi(2) + 8.0 * p.omega.powi(2)));
        assert!((s.coherences[3].im - want).abs() < 1e-15);
        assert!(s.coherences[3].norm() > 0.0);
    }

    #[test]
    fn populations_sum_to_one_over_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = SystemParams::new(
                10f64.powf(rng.gen_range(6.0..10.0)),
                10f64.powf(rng.gen_range(4.0..10.5)),
                10f64.powf(rng.gen_range(2.0..8.0)),
                10f64.powf(rng.gen_range(5.0..11.0)),
                10f64.powf(rng.gen_range(6.0..10.0)),
                rng.gen_range(0.0..0.2),
            )
            .unwrap();
            let s = steady_state_phenom(&p, &p.rate_set()).unwrap();
            assert!((s.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_rates_kill_real_coherences() {
        let p = fig2();
        let mut r = p.rate_set();
        r.gamma_bar_phen = r.gamma_phen;
        let s = steady_state_phenom(&p, &r).unwrap();
        assert_eq!(s.coherences[3].re, 0.0);
        assert_eq!(s.coherences[2], ZERO);
    }

    #[test]
    fn dressed_rewrite_matches_basis_change() {
        for &temp in &[0.0, 5e-4, 1.5e-2] {
            for &lambda in &[4e8, 4e9, 4e10] {
                let p = SystemParams { temperature: temp, lambda, ..fig2() };
                let r = p.rate_set();
                let f = p.dressed_frame();
                let s = steady_state_phenom(&p, &r).unwrap().to_density(&Tolerances::STATE).unwrap();
                let direct = s.change_basis(&f, Basis::Dressed);
                let rewrite = steady_state_phenom_dressed(&p, &r, &f).unwrap();
                assert!(direct.matrix().max_abs_diff(rewrite.matrix()) < 1e-12);
                let bc = rewrite.element(1, 2);
                let pops = s.populations();
                let r23 = s.element(1, 2);
                assert!((bc - C64::new(0.5 * (pops[2] - pops[1]), -r23.im)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn single_qubit_decay() {
        let p = SystemParams { temperature: 0.0, lambda: 0.0, ..fig2() };
        let r = p.rate_set();
        let times = uniform_grid(5.0 / r.gamma_phen, 21).unwrap();
        let traj = propagate_phenom(&DensityMatrix4::product(0, 1), &p, &r, &times).unwrap();
        for (t, s) in traj.iter() {
            assert!((s.populations()[1] - (-r.gamma_phen * t).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn x_structure_is_preserved() {
        let p = SystemParams { temperature: 1.5e-2, ..fig2() };
        let r = p.rate_set();
        let times = uniform_grid(2e-7, 41).unwrap();
        let traj = propagate_phenom(&DensityMatrix4::product(1, 0), &p, &r, &times).unwrap();
        assert_eq!(traj.states[0], DensityMatrix4::product(1, 0));
        assert!(traj.states.iter().all(|s| s.x_violation() <= 1e-10));
    }
}
