//! Side-by-side comparison of the two models and parameter sweeps over it.

use std::fmt::Write as _;

use rayon::prelude::*;
use twoqubit::microscopic::{gibbs_populations, rate_steady_populations};
use twoqubit::{steady_state_microscopic, steady_state_phenom, steady_state_phenom_dressed, SystemParams, Tolerances};

use crate::config::{Metric, Model, ScenarioConfig};
use crate::error::CliError;
use crate::scenario::{run_scenario, MetricView, ScenarioRun};

/// Concurrence at or below this is treated as exactly zero.
pub const ZERO_CONCURRENCE: f64 = 1e-12;
/// Consecutive zero samples needed to call it sudden death.
pub const SUDDEN_DEATH_RUN: usize = 5;
/// Fraction of the grid averaged for stationary values.
pub const TAIL_FRACTION: f64 = 0.05;
/// Dressed coherence above which a stationary state is not thermal.
pub const THERMAL_COHERENCE: f64 = 1e-10;

const COMPARED: [Metric; 3] = [Metric::Concurrence, Metric::Discord, Metric::LinearEntropy];

/// Mean over the final [`TAIL_FRACTION`] of a series (at least one sample).
pub fn tail_mean(series: &[f64]) -> f64 {
    let k = ((series.len() as f64 * TAIL_FRACTION).ceil() as usize).clamp(1, series.len().max(1));
    series[series.len() - k..].iter().sum::<f64>() / k as f64
}

/// First time from which the series stays at or below `zero` for at least
/// `run` consecutive samples.
pub fn first_sustained_zero(times: &[f64], series: &[f64], zero: f64, run: usize) -> Option<f64> {
    let mut start = None;
    let mut len = 0;
    for (i, &x) in series.iter().enumerate() {
        if x <= zero {
            start.get_or_insert(i);
            len += 1;
            if len >= run {
                return start.map(|s| times[s]);
            }
        } else {
            start = None;
            len = 0;
        }
    }
    None
}

/// `(phenom - micro) / micro`; zero when both vanish, NaN when only the
/// reference does.
pub fn relative_difference(micro: f64, phenom: f64) -> f64 {
    if micro.abs() > ZERO_CONCURRENCE {
        (phenom - micro) / micro
    } else if phenom.abs() > ZERO_CONCURRENCE {
        f64::NAN
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricComparison {
    pub metric: Metric,
    pub micro_stationary: f64,
    pub phenom_stationary: f64,
    pub relative_difference: f64,
    /// the metric on the closed-form stationary states
    pub micro_closed_form: f64,
    pub phenom_closed_form: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub name: String,
    pub params: SystemParams,
    pub t_max: f64,
    pub metrics: Vec<MetricComparison>,
    /// rate-balance populations agree with Boltzmann weights
    pub micro_thermal: Option<bool>,
    /// largest `|ρbc|`, `|ρad|` of the phenomenological stationary state
    pub phenom_dressed_coherence: Option<f64>,
    pub phenom_thermal: Option<bool>,
    pub sudden_death_micro: Option<f64>,
    pub sudden_death_phenom: Option<f64>,
    /// bath seen at the Bohr frequencies stays within the fairness threshold
    pub fair: bool,
    pub fairness_lines: Vec<String>,
    pub warnings: Vec<String>,
}

impl CompareReport {
    pub fn metric(&self, m: Metric) -> Option<&MetricComparison> {
        self.metrics.iter().find(|c| c.metric == m)
    }

    pub fn text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(out, "scenario {}", self.name);
        let _ = writeln!(
            out,
            "  omega={:e} lambda={:e} gamma0={:e} gamma_width={:e} omega0={:e} T={:e} t_max={:.6e}",
            p.omega, p.lambda, p.gamma0, p.gamma_width, p.omega0, p.temperature, self.t_max
        );
        for line in self.fairness_lines.iter().chain(&self.warnings) {
            let _ = writeln!(out, "  {line}");
        }
        let _ = writeln!(
            out,
            "  {:<15} {:>12} {:>12} {:>9} {:>12} {:>12}",
            "metric", "micro", "phenom", "rel.diff", "micro(ss)", "phenom(ss)"
        );
        for c in &self.metrics {
            let _ = writeln!(
                out,
                "  {:<15} {:>12.6} {:>12.6} {:>8.1}% {:>12.6} {:>12}",
                c.metric.name(),
                c.micro_stationary,
                c.phenom_stationary,
                100.0 * c.relative_difference,
                c.micro_closed_form,
                c.phenom_closed_form.map_or("n/a".to_string(), |v| format!("{v:.6}"))
            );
        }
        let verdict = |v: Option<bool>| match v {
            Some(true) => "thermal",
            Some(false) => "not thermal",
            None => "undetermined",
        };
        let _ = writeln!(out, "  microscopic stationary state: {}", verdict(self.micro_thermal));
        let _ = writeln!(
            out,
            "  phenomenological stationary state: {} (max dressed coherence {})",
            verdict(self.phenom_thermal),
            self.phenom_dressed_coherence.map_or("n/a".to_string(), |v| format!("{v:.3e}"))
        );
        let death = |t: Option<f64>| t.map_or("none".to_string(), |t| format!("t = {t:.6e} s"));
        let _ = writeln!(out, "  concurrence sudden death: micro {}, phenom {}", death(self.sudden_death_micro), death(self.sudden_death_phenom));
        out
    }

    pub fn csv_header() -> String {
        let mut cols = vec!["scenario".to_string(), "temperature".into(), "lambda".into(), "gamma0".into(), "t_max".into()];
        for m in COMPARED {
            for suffix in ["micro", "phenom", "rel_diff", "micro_ss", "phenom_ss"] {
                cols.push(format!("{}_{suffix}", m.name()));
            }
        }
        cols.extend(
            ["micro_thermal", "phenom_thermal", "phenom_dressed_coherence", "sudden_death_micro", "sudden_death_phenom", "fair"]
                .map(String::from),
        );
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let num = |x: f64| format!("{x:.16e}");
        let opt = |x: Option<f64>| x.map_or(String::new(), num);
        let flag = |x: Option<bool>| x.map_or(String::new(), |b| b.to_string());
        let p = &self.params;
        let mut cols = vec![self.name.clone(), num(p.temperature), num(p.lambda), num(p.gamma0), num(self.t_max)];
        for m in COMPARED {
            match self.metric(m) {
                Some(c) => cols.extend([
                    num(c.micro_stationary),
                    num(c.phenom_stationary),
                    num(c.relative_difference),
                    num(c.micro_closed_form),
                    opt(c.phenom_closed_form),
                ]),
                None => cols.extend(std::iter::repeat_n(String::new(), 5)),
            }
        }
        cols.extend([
            flag(self.micro_thermal),
            flag(self.phenom_thermal),
            opt(self.phenom_dressed_coherence),
            opt(self.sudden_death_micro),
            opt(self.sudden_death_phenom),
            self.fair.to_string(),
        ]);
        cols.join(",")
    }

    pub fn csv(&self) -> String {
        format!("{}\n{}\n", Self::csv_header(), self.csv_row())
    }
}

fn closed_form_metric(view: &MetricView, m: Metric) -> Result<f64, twoqubit::Error> {
    match m {
        Metric::Concurrence => view.concurrence(),
        Metric::Discord => view.discord(),
        Metric::LinearEntropy => view.linear_entropy(),
        Metric::Populations => unreachable!("populations are not compared"),
    }
}

/// Run both models on `cfg` and compare their stationary correlations, the
/// nature of their stationary states and the onset of entanglement death.
pub fn compare_report(cfg: &ScenarioConfig) -> Result<CompareReport, CliError> {
    let mut cfg = cfg.clone();
    cfg.models = vec![Model::Microscopic, Model::Phenomenological];
    cfg.metrics = COMPARED.to_vec();
    let run = run_scenario(&cfg)?;
    report_from_run(&run)
}

pub fn report_from_run(run: &ScenarioRun) -> Result<CompareReport, CliError> {
    let cfg = &run.config;
    let p = &cfg.params;
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    let micro = run.model(Model::Microscopic).ok_or_else(|| CliError::Usage("comparison needs the microscopic model".into()))?;
    let phenom = run
        .model(Model::Phenomenological)
        .ok_or_else(|| CliError::Usage("comparison needs the phenomenological model".into()))?;

    let micro_ss = steady_state_microscopic(&rates, &frame, p.temperature).to_density(&Tolerances::STATE)?;
    let micro_view = MetricView::from_dressed(&micro_ss, &frame)?;
    let phenom_view = match steady_state_phenom(p, &rates) {
        Ok(s) => Some(MetricView::from_computational(&s.to_density(&Tolerances::STATE)?)?),
        Err(twoqubit::Error::DegenerateRates) => None,
        Err(e) => return Err(e.into()),
    };

    let mut metrics = Vec::new();
    for m in &cfg.metrics {
        let (Some(ms), Some(ps)) = (micro.series(*m), phenom.series(*m)) else { continue };
        let (a, b) = (tail_mean(ms), tail_mean(ps));
        metrics.push(MetricComparison {
            metric: *m,
            micro_stationary: a,
            phenom_stationary: b,
            relative_difference: relative_difference(a, b),
            micro_closed_form: closed_form_metric(&micro_view, *m)?,
            phenom_closed_form: phenom_view.as_ref().map(|v| closed_form_metric(v, *m)).transpose()?,
        });
    }

    let micro_thermal = rate_steady_populations(&rates).ok().map(|r| {
        let g = gibbs_populations(&frame, p.temperature);
        r.iter().zip(&g).all(|(a, b)| (a - b).abs() <= 1e-10)
    });
    let phenom_dressed_coherence = match steady_state_phenom_dressed(p, &rates, &frame) {
        Ok(d) => Some(d.element(1, 2).norm().max(d.element(0, 3).norm())),
        Err(twoqubit::Error::DegenerateRates) => None,
        Err(e) => return Err(e.into()),
    };
    let phenom_thermal = phenom_dressed_coherence.map(|c| c <= THERMAL_COHERENCE);

    let death = |s: &crate::scenario::ModelSeries| {
        s.series(Metric::Concurrence)
            .and_then(|c| first_sustained_zero(&s.trajectory.times, c, ZERO_CONCURRENCE, SUDDEN_DEATH_RUN))
    };

    Ok(CompareReport {
        name: cfg.name.clone(),
        params: *p,
        t_max: run.t_max,
        metrics,
        micro_thermal,
        phenom_dressed_coherence,
        phenom_thermal,
        sudden_death_micro: death(micro),
        sudden_death_phenom: death(phenom),
        fair: !run.fairness.unfair,
        fairness_lines: run.fairness.summary_lines().into_iter().take(1).collect(),
        warnings: run.warnings.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Temperature,
    Lambda,
    Gamma0,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "temperature" | "T" => Some(SweepAxis::Temperature),
            "lambda" => Some(SweepAxis::Lambda),
            "gamma0" => Some(SweepAxis::Gamma0),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Temperature => "temperature",
            SweepAxis::Lambda => "lambda",
            SweepAxis::Gamma0 => "gamma0",
        }
    }

    fn apply(&self, cfg: &ScenarioConfig, value: f64) -> Result<ScenarioConfig, CliError> {
        let mut out = cfg.clone();
        let p = &mut out.params;
        match self {
            SweepAxis::Temperature => p.temperature = value,
            SweepAxis::Lambda => p.lambda = value,
            SweepAxis::Gamma0 => p.gamma0 = value,
        }
        p.validate()?;
        out.name = format!("{}_{}{}", cfg.name, self.name(), value);
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub reports: Vec<CompareReport>,
}

impl SweepResult {
    pub fn csv(&self) -> String {
        let mut out = format!("# twoqubit {} sweep over {}\n", env!("CARGO_PKG_VERSION"), self.axis.name());
        let _ = writeln!(out, "{},{}", self.axis.name(), CompareReport::csv_header());
        for (v, r) in self.values.iter().zip(&self.reports) {
            let _ = writeln!(out, "{v:.16e},{}", r.csv_row());
        }
        out
    }
}

/// One comparison per value of `axis`, evaluated in parallel and returned in
/// input order.
pub fn sweep(cfg: &ScenarioConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepResult, CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let configs = values.iter().map(|&v| axis.apply(cfg, v)).collect::<Result<Vec<_>, _>>()?;
    let reports = configs.par_iter().map(compare_report).collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult { axis, values: values.to_vec(), reports })
}
