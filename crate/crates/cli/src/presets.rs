//! Parameter sets of the ten reference figures.

use twoqubit::SystemParams;

use crate::config::{auto_t_max, Metric, ScenarioConfig, TMax};
use crate::error::CliError;

pub const FIGURE_COUNT: usize = 10;

// strong coupling, λ = 10Ω, zero temperature
const FIG1: [f64; 6] = [4e8, 4e9, 0.01 * 5e10, 5e10, 8e8, 0.0];
// λ = Ω at a cold and a warm bath
const FIGS_2_7: [f64; 5] = [4e9, 4e9, 0.001 * 5e10, 5e10, 8e9];
const COLD: f64 = 5e-4;
const WARM: f64 = 1.5e-2;
// weak coupling, λ ≪ Ω
const WEAK: [f64; 5] = [5e6, 4e4, 0.001 * 5e5, 5e5, 1e7];
const WEAK_ENTROPY_GAMMA0: f64 = 0.01 * 5e5;
pub const WEAK_TEMPERATURES: [f64; 3] = [0.005, 0.05, 0.15];

fn params(v: [f64; 5], temperature: f64) -> SystemParams {
    SystemParams::new(v[0], v[1], v[2], v[3], v[4], temperature).expect("preset parameters are valid")
}

fn single(n: usize, p: SystemParams, metric: Metric) -> Vec<ScenarioConfig> {
    let mut cfg = ScenarioConfig::new(format!("fig{n}"), p);
    cfg.metrics = vec![metric, Metric::Populations];
    vec![cfg]
}

/// Configurations reproducing figure `n`. Figures 8 to 10 compare three bath
/// temperatures and return one configuration per temperature, all sharing
/// the time window of the coldest (slowest) member.
pub fn figure_preset(n: usize) -> Result<Vec<ScenarioConfig>, CliError> {
    let [w, l, g, gw, w0, t] = FIG1;
    Ok(match n {
        1 => single(1, SystemParams::new(w, l, g, gw, w0, t).expect("preset parameters are valid"), Metric::Concurrence),
        2 => single(2, params(FIGS_2_7, COLD), Metric::Concurrence),
        3 => single(3, params(FIGS_2_7, WARM), Metric::Concurrence),
        4 => single(4, params(FIGS_2_7, COLD), Metric::Discord),
        5 => single(5, params(FIGS_2_7, WARM), Metric::Discord),
        6 => single(6, params(FIGS_2_7, COLD), Metric::LinearEntropy),
        7 => single(7, params(FIGS_2_7, WARM), Metric::LinearEntropy),
        8..=10 => {
            let mut base = WEAK;
            let metrics = match n {
                8 => vec![Metric::Concurrence],
                9 => vec![Metric::Discord],
                _ => {
                    base[2] = WEAK_ENTROPY_GAMMA0;
                    vec![Metric::LinearEntropy]
                }
            };
            let configs: Vec<ScenarioConfig> = WEAK_TEMPERATURES
                .iter()
                .map(|&temp| {
                    let mut cfg = ScenarioConfig::new(format!("fig{n}_T{temp}"), params(base, temp));
                    cfg.metrics = metrics.iter().copied().chain([Metric::Populations]).collect();
                    cfg
                })
                .collect();
            let t_max = configs.iter().map(|c| auto_t_max(&c.params)).fold(0.0, f64::max);
            configs
                .into_iter()
                .map(|mut c| {
                    c.t_max = TMax::Seconds(t_max);
                    c
                })
                .collect()
        }
        _ => return Err(CliError::OutOfRange(n)),
    })
}
