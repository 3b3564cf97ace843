//! Physical parameters, the coupled two-qubit Hamiltonian, its dressed
//! eigenbasis, and the bath quantities (Lorentzian spectral density, thermal
//! occupancy and the KMS-paired decay rates).
//!
//! Frequencies and rates are angular, in s⁻¹. Temperatures are in kelvin and
//! enter only through [`KB_OVER_HBAR`].

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{pauli, Mat4, ZERO};

/// `k_B / ħ` in s⁻¹ K⁻¹.
pub const KB_OVER_HBAR: f64 = 1.309193e11;

/// Default relative-deviation threshold above which the two models are not
/// considered to see the same bath.
pub const DEFAULT_FAIRNESS_THRESHOLD: f64 = 0.15;

/// Floor for the occupancy denominator in the fairness check.
pub const OCCUPANCY_FLOOR: f64 = 1e-6;

/// Parameters of two resonant qubits, qubit 2 coupled to a Lorentzian bath.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    /// qubit frequency Ω
    pub omega: f64,
    /// qubit-qubit coupling λ (the Hamiltonian carries λ/2)
    pub lambda: f64,
    /// single-qubit decay rate γ₀ (Lorentzian peak height)
    pub gamma0: f64,
    /// Lorentzian half-width Γ
    pub gamma_width: f64,
    /// Lorentzian centre Ω₀
    pub omega0: f64,
    /// bath temperature T in K
    pub temperature: f64,
}

impl SystemParams {
    pub fn new(
        omega: f64,
        lambda: f64,
        gamma0: f64,
        gamma_width: f64,
        omega0: f64,
        temperature: f64,
    ) -> Result<Self> {
        let p = SystemParams { omega, lambda, gamma0, gamma_width, omega0, temperature };
        p.validate()?;
        Ok(p)
    }

    /// As [`SystemParams::new`] but with separate qubit frequencies, which
    /// must coincide.
    pub fn with_qubit_frequencies(
        omega1: f64,
        omega2: f64,
        lambda: f64,
        gamma0: f64,
        gamma_width: f64,
        omega0: f64,
        temperature: f64,
    ) -> Result<Self> {
        if omega1 != omega2 {
            return Err(Error::Detuned { omega1, omega2 });
        }
        Self::new(omega1, lambda, gamma0, gamma_width, omega0, temperature)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega", self.omega),
            ("lambda", self.lambda),
            ("gamma0", self.gamma0),
            ("gamma_width", self.gamma_width),
            ("omega0", self.omega0),
            ("temperature", self.temperature),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} must be finite")));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParams("omega must be > 0".into()));
        }
        if self.gamma_width <= 0.0 {
            return Err(Error::InvalidParams("gamma_width must be > 0".into()));
        }
        if self.gamma0 < 0.0 {
            return Err(Error::InvalidParams("gamma0 must be >= 0".into()));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParams("lambda must be >= 0".into()));
        }
        if self.temperature < 0.0 {
            return Err(Error::InvalidParams("temperature must be >= 0".into()));
        }
        Ok(())
    }

    /// `√(λ² + 4Ω²)`, the splitting between `|a⟩` and `|d⟩`.
    pub fn rabi(&self) -> f64 {
        self.lambda.hypot(2.0 * self.omega)
    }

    pub fn hamiltonian(&self) -> Mat4 {
        hamiltonian(self)
    }

    pub fn dressed_frame(&self) -> DressedFrame {
        dressed_frame(self)
    }

    pub fn rate_set(&self) -> RateSet {
        rate_set(self, &self.dressed_frame())
    }

    pub fn spectral_density(&self, w: f64) -> f64 {
        spectral_density(self, w)
    }
}

/// Coupled-qubit Hamiltonian in the computational basis, counter-rotating
/// terms included.
pub fn hamiltonian(p: &SystemParams) -> Mat4 {
    let n = pauli::RAISE * pauli::LOWER;
    let id = pauli::ID;
    let (up, dn) = (pauli::RAISE, pauli::LOWER);
    let free = (n.kron(&id) + id.kron(&n)).scale_re(p.omega);
    let coupling = up.kron(&dn) + dn.kron(&up) + up.kron(&up) + dn.kron(&dn);
    free + coupling.scale_re(0.5 * p.lambda)
}

/// Eigenbasis of the resonant Hamiltonian and the amplitudes derived from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedFrame {
    /// `(E_a, E_b, E_c, E_d)`, ascending
    pub energies: [f64; 4],
    /// weight of `|0,0⟩` in `|a⟩` (and of `|1,1⟩` in `|d⟩`)
    pub alpha_plus: f64,
    /// weight of `|1,1⟩` in `|a⟩` (and of `|0,0⟩` in `|d⟩`)
    pub alpha_minus: f64,
    /// transition amplitude of the ω_I channel, negative
    pub alpha: f64,
    /// transition amplitude of the ω_II channel
    pub eta: f64,
    /// ω_I = E_b - E_a = E_d - E_c
    pub bohr_i: f64,
    /// ω_II = E_c - E_a = E_d - E_b
    pub bohr_ii: f64,
    unitary: Mat4,
}

impl DressedFrame {
    /// Columns are `|a⟩, |b⟩, |c⟩, |d⟩` in the computational basis.
    pub fn unitary(&self) -> &Mat4 {
        &self.unitary
    }

    pub fn ket(&self, k: usize) -> [C64; 4] {
        self.unitary.column(k)
    }
}

pub fn dressed_frame(p: &SystemParams) -> DressedFrame {
    let s = p.rabi();
    let x = 2.0 * p.omega / s;
    let alpha_plus = (0.5 + p.omega / s).sqrt();
    let alpha_minus = (0.5 - p.omega / s).max(0.0).sqrt();
    let up = (1.0 + x).sqrt();
    let um = (1.0 - x).max(0.0).sqrt();
    let alpha = -0.5 * (up + um);
    let eta = 0.5 * (up - um);

    let energies = [
        p.omega - 0.5 * s,
        p.omega - 0.5 * p.lambda,
        p.omega + 0.5 * p.lambda,
        p.omega + 0.5 * s,
    ];
    // (s - λ)/2 written without the cancellation
    let bohr_i = 2.0 * p.omega * p.omega / (s + p.lambda);
    let bohr_ii = bohr_i + p.lambda;

    let r = |x: f64| C64::new(x, 0.0);
    let h = FRAC_1_SQRT_2;
    let cols = [
        [r(alpha_plus), ZERO, ZERO, r(-alpha_minus)],
        [ZERO, r(-h), r(h), ZERO],
        [ZERO, r(h), r(h), ZERO],
        [r(alpha_minus), ZERO, ZERO, r(alpha_plus)],
    ];
    let unitary = Mat4::from_fn(|i, j| cols[j][i]);

    DressedFrame { energies, alpha_plus, alpha_minus, alpha, eta, bohr_i, bohr_ii, unitary }
}

/// Lorentzian `J(ω) = γ₀Γ² / ((ω - Ω₀)² + Γ²)`.
pub fn spectral_density(p: &SystemParams, w: f64) -> f64 {
    let d = w - p.omega0;
    p.gamma0 * p.gamma_width * p.gamma_width / (d * d + p.gamma_width * p.gamma_width)
}

/// Bose occupancy of a bath mode at angular frequency `w`.
pub fn thermal_occupancy(w: f64, temperature: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::NonPositiveFrequency(w));
    }
    Ok(occupancy(w, temperature))
}

fn occupancy(w: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / (w / (KB_OVER_HBAR * temperature)).exp_m1()
}

/// `exp(-ω / (k_B T / ħ))`, exactly zero at `T = 0`.
pub fn boltzmann_factor(w: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    (-w / (KB_OVER_HBAR * temperature)).exp()
}

/// Emission/absorption rates for both Bohr channels, the microscopic
/// coefficients, and the pair evaluated at Ω used by the phenomenological
/// model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateSet {
    pub gamma_i: f64,
    pub gamma_ii: f64,
    pub gamma_bar_i: f64,
    pub gamma_bar_ii: f64,
    pub c_i: f64,
    pub c_ii: f64,
    pub c_bar_i: f64,
    pub c_bar_ii: f64,
    pub gamma_phen: f64,
    pub gamma_bar_phen: f64,
}

impl RateSet {
    /// Population relaxation rate of the ω_I channel.
    pub fn relax_i(&self) -> f64 {
        self.c_i + self.c_bar_i
    }

    pub fn relax_ii(&self) -> f64 {
        self.c_ii + self.c_bar_ii
    }

    /// The normalisation `(c_I + c̄_I)(c_II + c̄_II)`.
    pub fn k(&self) -> f64 {
        self.relax_i() * self.relax_ii()
    }

    pub fn micro_total(&self) -> f64 {
        self.relax_i() + self.relax_ii()
    }

    pub fn phen_total(&self) -> f64 {
        self.gamma_phen + self.gamma_bar_phen
    }

    pub fn is_zero(&self) -> bool {
        self.micro_total() == 0.0 && self.phen_total() == 0.0
    }
}

fn emission_pair(p: &SystemParams, w: f64) -> (f64, f64) {
    let gamma = spectral_density(p, w) * (1.0 + occupancy(w, p.temperature));
    (gamma, gamma * boltzmann_factor(w, p.temperature))
}

pub fn rate_set(p: &SystemParams, frame: &DressedFrame) -> RateSet {
    let (gamma_i, gamma_bar_i) = emission_pair(p, frame.bohr_i);
    let (gamma_ii, gamma_bar_ii) = emission_pair(p, frame.bohr_ii);
    let (gamma_phen, gamma_bar_phen) = emission_pair(p, p.omega);
    let a2 = frame.alpha * frame.alpha;
    let e2 = frame.eta * frame.eta;
    RateSet {
        gamma_i,
        gamma_ii,
        gamma_bar_i,
        gamma_bar_ii,
        c_i: a2 * gamma_i,
        c_ii: e2 * gamma_ii,
        c_bar_i: a2 * gamma_bar_i,
        c_bar_ii: e2 * gamma_bar_ii,
        gamma_phen,
        gamma_bar_phen,
    }
}

/// How far the bath seen at the Bohr frequencies is from the bath seen at Ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FairnessReport {
    pub j_dev_i: f64,
    pub j_dev_ii: f64,
    pub n_dev_i: f64,
    pub n_dev_ii: f64,
    pub threshold: f64,
    pub unfair: bool,
    /// γ₀ exceeds a tenth of the smallest Bohr frequency
    pub strong_damping: bool,
}

impl FairnessReport {
    pub fn max_deviation(&self) -> f64 {
        [self.j_dev_i, self.j_dev_ii, self.n_dev_i, self.n_dev_ii]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "fairness: |dJ_I|/J={:.4e} |dJ_II|/J={:.4e} |dn_I|/n={:.4e} |dn_II|/n={:.4e} threshold={} verdict={}",
            self.j_dev_i,
            self.j_dev_ii,
            self.n_dev_i,
            self.n_dev_ii,
            self.threshold,
            if self.unfair { "unfair comparison" } else { "fair" }
        )];
        if self.strong_damping {
            out.push("warning: gamma0 > 0.1*min(omega_I, omega_II); Born-Markov assumptions are stretched".into());
        }
        out
    }
}

pub fn fairness_check(p: &SystemParams, threshold: f64) -> FairnessReport {
    let frame = dressed_frame(p);
    let j0 = spectral_density(p, p.omega);
    let n0 = occupancy(p.omega, p.temperature);
    let j_rel = |w: f64| {
        if j0 == 0.0 {
            0.0
        } else {
            (spectral_density(p, w) - j0).abs() / j0
        }
    };
    let n_rel = |w: f64| (occupancy(w, p.temperature) - n0).abs() / n0.max(OCCUPANCY_FLOOR);
    let j_dev_i = j_rel(frame.bohr_i);
    let j_dev_ii = j_rel(frame.bohr_ii);
    let n_dev_i = n_rel(frame.bohr_i);
    let n_dev_ii = n_rel(frame.bohr_ii);
    let unfair = [j_dev_i, j_dev_ii, n_dev_i, n_dev_ii].iter().any(|&d| d > threshold);
    FairnessReport {
        j_dev_i,
        j_dev_ii,
        n_dev_i,
        n_dev_ii,
        threshold,
        unfair,
        strong_damping: p.gamma0 > 0.1 * frame.bohr_i.min(frame.bohr_ii),
    }
}
