//! Closed-form microscopic propagation checked against RK4 integration of
//! the independently assembled Lindblad generator.

use std::time::{Duration, Instant};

use twoqubit::microscopic::analytic_trajectory;
use twoqubit::{build_dissipator_oracle, propagate_numeric, uniform_grid, DressedStateVector, Tolerances};

use crate::config::auto_t_max;
use crate::error::CliError;
use crate::presets::figure_preset;

/// Largest entrywise deviation accepted between the two routes.
pub const ORACLE_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct OracleCheck {
    pub figure: usize,
    pub n_points: usize,
    pub max_deviation: f64,
    pub elapsed: Duration,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation <= ORACLE_TOLERANCE
    }
}

/// Compare both microscopic routes from `|1,0⟩` over the automatic window
/// of figure `n`'s parameters.
pub fn oracle_check(figure: usize, n_points: usize) -> Result<OracleCheck, CliError> {
    let cfg = figure_preset(figure)?.remove(0);
    let p = &cfg.params;
    let start = Instant::now();
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    let rho0 = DressedStateVector::initial_ket10(&frame);
    let times = uniform_grid(auto_t_max(p), n_points)?;
    let analytic = analytic_trajectory(&rho0, &rates, &frame, &times)?;
    let gen = build_dissipator_oracle(p, &rates, &frame);
    let numeric = propagate_numeric(&rho0.to_density(&Tolerances::STATE)?, &gen, &times)?;
    let max_deviation = analytic
        .states
        .iter()
        .zip(&numeric.states)
        .map(|(a, b)| a.matrix().max_abs_diff(b.matrix()))
        .fold(0.0, f64::max);
    Ok(OracleCheck { figure, n_points, max_deviation, elapsed: start.elapsed() })
}

/// Oracle checks for the figures that use the strong and intermediate
/// coupling parameters.
pub fn selftest(n_points: usize) -> Result<Vec<OracleCheck>, CliError> {
    (1..=7).map(|n| oracle_check(n, n_points)).collect()
}
