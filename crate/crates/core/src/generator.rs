//! Lindblad generators as explicit 16×16 superoperators acting on the
//! row-major vectorisation of a 4×4 density matrix.

use num_complex::Complex64 as C64;

use crate::linalg::{hermitian_eigs, Mat4, I, ZERO};

/// A dissipative channel `rate · (L ρ L† - ½{L†L, ρ})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    pub rate: f64,
    pub jump: Mat4,
}

/// `L(ρ) = -i[H, ρ] + Σ_k rate_k D[L_k](ρ)`, stored densely and as a list of
/// its nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    dense: Box<[[C64; 16]; 16]>,
    sparse: Vec<(usize, usize, C64)>,
    max_rate: f64,
    max_frequency: f64,
}

impl Generator {
    pub fn lindblad(h: &Mat4, channels: &[Channel]) -> Self {
        let mut g = Box::new([[ZERO; 16]; 16]);
        let id = Mat4::identity();
        // -iHρ + iρH
        add_sandwich(&mut g, &h.scale(-I), &id);
        add_sandwich(&mut g, &id, &h.scale(I));
        for ch in channels.iter().filter(|c| c.rate != 0.0) {
            let l = ch.jump;
            let ld = l.adjoint();
            let ldl = ld * l;
            add_sandwich(&mut g, &l.scale_re(ch.rate), &ld);
            add_sandwich(&mut g, &ldl.scale_re(-0.5 * ch.rate), &id);
            add_sandwich(&mut g, &id, &ldl.scale_re(-0.5 * ch.rate));
        }
        let sparse = (0..16)
            .flat_map(|r| (0..16).map(move |c| (r, c)))
            .filter(|&(r, c)| g[r][c] != ZERO)
            .map(|(r, c)| (r, c, g[r][c]))
            .collect();

        // crude bound when H is not Hermitian
        let max_frequency = hermitian_eigs(h)
            .map(|e| e.values[3] - e.values[0])
            .unwrap_or(8.0 * h.max_abs());
        let max_rate = channels.iter().map(|c| c.rate.abs() * c.jump.max_abs().powi(2)).sum();
        Generator { dense: g, sparse, max_rate, max_frequency }
    }

    /// Matrix element acting from `ρ_kl` onto `ρ_ij`.
    pub fn entry(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> C64 {
        self.dense[4 * i + j][4 * k + l]
    }

    pub fn apply(&self, rho: &Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for &(r, c, v) in &self.sparse {
            out.0[r / 4][r % 4] += v * rho.0[c / 4][c % 4];
        }
        out
    }

    /// Sum of jump rates, weighted by the squared size of their operators.
    pub fn max_rate(&self) -> f64 {
        self.max_rate
    }

    /// Spread of the Hamiltonian spectrum, the fastest coherent frequency.
    pub fn max_frequency(&self) -> f64 {
        self.max_frequency
    }

    pub fn nonzero_count(&self) -> usize {
        self.sparse.len()
    }

    /// `Tr L(ρ)` summed over a basis; zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..16 {
            let s: C64 = (0..4).map(|i| self.dense[5 * i][c]).sum();
            worst = worst.max(s.norm());
        }
        worst
    }
}

// coefficient of ρ_kl in (A ρ B)_ij is A_ik B_lj
fn add_sandwich(g: &mut [[C64; 16]; 16], a: &Mat4, b: &Mat4) {
    for i in 0..4 {
        for k in 0..4 {
            let aik = a.0[i][k];
            if aik == ZERO {
                continue;
            }
            for l in 0..4 {
                for j in 0..4 {
                    let blj = b.0[l][j];
                    if blj != ZERO {
                        g[4 * i + j][4 * k + l] += aik * blj;
                    }
                }
            }
        }
    }
}
