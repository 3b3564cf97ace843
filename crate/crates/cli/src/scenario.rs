//! Running a configured scenario and writing its CSV files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use twoqubit::metrics::{discord_approx_q2, AD_TOLERANCE};
use twoqubit::microscopic::analytic_trajectory;
use twoqubit::{
    concurrence_general, concurrence_x, discord_oracle_q2, fairness_check, linear_entropy_q1,
    linear_entropy_q1_x, propagate_phenom, uniform_grid, x_elements_from_dressed, Basis,
    DensityMatrix4, DressedFrame, DressedStateVector, FairnessReport, Trajectory, XStateElements,
};

use crate::config::{Metric, Model, ScenarioConfig};
use crate::error::CliError;

/// Direction count of the discord search used for states that are not X-shaped.
pub const GENERAL_DISCORD_GRID: usize = 1024;

/// Largest off-X entry treated as zero.
const X_TOLERANCE: f64 = 1e-14;

/// A state reduced to what the metrics need: its X entries when it is an X
/// state, the full computational-basis matrix otherwise.
#[derive(Clone, Debug)]
pub enum MetricView {
    X(XStateElements),
    General(DensityMatrix4),
}

impl MetricView {
    /// View of a dressed-basis state. The X entries follow directly from the
    /// dressed elements when only `ρbc` and the populations are nonzero.
    pub fn from_dressed(rho: &DensityMatrix4, frame: &DressedFrame) -> Result<Self, twoqubit::Error> {
        let s = DressedStateVector::from_density(rho)?;
        let [ab, ac, _, _, bd, cd] = s.coherences;
        let stray = [ab, ac, bd, cd].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if stray <= AD_TOLERANCE {
            match x_elements_from_dressed(&s, frame) {
                Ok(x) => return Ok(MetricView::X(x)),
                Err(twoqubit::Error::AssumptionViolated { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(MetricView::General(rho.change_basis(frame, Basis::Computational)))
    }

    pub fn from_computational(rho: &DensityMatrix4) -> Result<Self, twoqubit::Error> {
        if rho.basis() != Basis::Computational {
            return Err(twoqubit::Error::WrongBasis { expected: Basis::Computational, found: rho.basis() });
        }
        if rho.x_violation() <= X_TOLERANCE {
            Ok(MetricView::X(XStateElements::from_density(rho)?))
        } else {
            Ok(MetricView::General(*rho))
        }
    }

    pub fn is_x(&self) -> bool {
        matches!(self, MetricView::X(_))
    }

    pub fn concurrence(&self) -> Result<f64, twoqubit::Error> {
        match self {
            MetricView::X(x) => Ok(concurrence_x(x)),
            MetricView::General(rho) => concurrence_general(rho),
        }
    }

    pub fn discord(&self) -> Result<f64, twoqubit::Error> {
        match self {
            MetricView::X(x) => Ok(discord_approx_q2(x)),
            MetricView::General(rho) => discord_oracle_q2(rho, GENERAL_DISCORD_GRID),
        }
    }

    pub fn linear_entropy(&self) -> Result<f64, twoqubit::Error> {
        match self {
            MetricView::X(x) => Ok(linear_entropy_q1_x(x)),
            MetricView::General(rho) => linear_entropy_q1(rho),
        }
    }

    /// Computational-basis populations `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn populations(&self) -> [f64; 4] {
        match self {
            MetricView::X(x) => [x.q11, x.q22, x.q33, x.q44],
            MetricView::General(rho) => rho.populations(),
        }
    }
}

/// Metric time series of one model. Series of metrics that were not
/// requested are empty.
#[derive(Clone, Debug)]
pub struct ModelSeries {
    pub model: Model,
    /// snapshots in the model's native basis (dressed for the microscopic one)
    pub trajectory: Trajectory,
    pub concurrence: Vec<f64>,
    pub discord: Vec<f64>,
    pub linear_entropy: Vec<f64>,
    pub populations: Vec<[f64; 4]>,
    /// number of snapshots that had to go through the full-matrix route
    pub non_x_samples: usize,
}

impl ModelSeries {
    pub fn series(&self, metric: Metric) -> Option<&[f64]> {
        let s = match metric {
            Metric::Concurrence => &self.concurrence,
            Metric::Discord => &self.discord,
            Metric::LinearEntropy => &self.linear_entropy,
            Metric::Populations => return None,
        };
        (!s.is_empty()).then_some(s.as_slice())
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub t_max: f64,
    pub fairness: FairnessReport,
    pub warnings: Vec<String>,
    /// in the order of `config.models`
    pub series: Vec<ModelSeries>,
}

impl ScenarioRun {
    pub fn model(&self, model: Model) -> Option<&ModelSeries> {
        self.series.iter().find(|s| s.model == model)
    }
}

fn evaluate(model: Model, trajectory: Trajectory, metrics: &[Metric], frame: &DressedFrame) -> Result<ModelSeries, CliError> {
    let n = trajectory.len();
    let mut out = ModelSeries {
        model,
        concurrence: Vec::new(),
        discord: Vec::new(),
        linear_entropy: Vec::new(),
        populations: Vec::new(),
        non_x_samples: 0,
        trajectory: Trajectory { times: Vec::new(), states: Vec::new() },
    };
    for m in metrics {
        match m {
            Metric::Concurrence => out.concurrence.reserve(n),
            Metric::Discord => out.discord.reserve(n),
            Metric::LinearEntropy => out.linear_entropy.reserve(n),
            Metric::Populations => out.populations.reserve(n),
        }
    }
    for rho in &trajectory.states {
        let view = match model {
            Model::Microscopic => MetricView::from_dressed(rho, frame)?,
            Model::Phenomenological => MetricView::from_computational(rho)?,
        };
        if !view.is_x() {
            out.non_x_samples += 1;
        }
        for m in metrics {
            match m {
                Metric::Concurrence => out.concurrence.push(view.concurrence()?),
                Metric::Discord => out.discord.push(view.discord()?),
                Metric::LinearEntropy => out.linear_entropy.push(view.linear_entropy()?),
                Metric::Populations => out.populations.push(view.populations()),
            }
        }
    }
    out.trajectory = trajectory;
    Ok(out)
}

fn run_model(cfg: &ScenarioConfig, model: Model, times: &[f64]) -> Result<ModelSeries, CliError> {
    let p = &cfg.params;
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    let rho0 = cfg.initial_state.density(p)?;
    let trajectory = match model {
        Model::Microscopic => {
            let dressed = rho0.change_basis(&frame, Basis::Dressed);
            let s0 = DressedStateVector::from_density(&dressed)?;
            analytic_trajectory(&s0, &rates, &frame, times)?
        }
        Model::Phenomenological => propagate_phenom(&rho0, p, &rates, times)?,
    };
    evaluate(model, trajectory, &cfg.metrics, &frame)
}

/// Evolve every requested model from the initial state over `[0, t_max]`
/// and evaluate the requested metrics at each grid point.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioRun, CliError> {
    cfg.validate()?;
    let t_max = cfg.resolved_t_max();
    let times = uniform_grid(t_max, cfg.n_points)?;
    let fairness = fairness_check(&cfg.params, cfg.fairness_threshold);
    let mut warnings: Vec<String> = fairness.summary_lines().into_iter().skip(1).collect();
    for w in &warnings {
        log::warn!("{}: {w}", cfg.name);
    }
    let series = cfg
        .models
        .par_iter()
        .map(|&m| run_model(cfg, m, &times))
        .collect::<Result<Vec<_>, _>>()?;
    for s in &series {
        if s.non_x_samples > 0 {
            let w = format!(
                "{} model: {} snapshots are not X states; metrics use the full matrix",
                s.model.name(),
                s.non_x_samples
            );
            log::warn!("{}: {w}", cfg.name);
            warnings.push(w);
        }
    }
    Ok(ScenarioRun { config: cfg.clone(), t_max, fairness, warnings, series })
}

/// CSV of one model: `#` metadata, a header row, then one row per time.
pub fn render_csv(run: &ScenarioRun, series: &ModelSeries) -> String {
    let cfg = &run.config;
    let p = &cfg.params;
    let mut out = String::new();
    let _ = writeln!(out, "# twoqubit {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# scenario = {}", cfg.name);
    let _ = writeln!(out, "# model = {}", series.model.name());
    let _ = writeln!(
        out,
        "# omega = {:e}, lambda = {:e}, gamma0 = {:e}, gamma_width = {:e}, omega0 = {:e}, temperature = {:e}",
        p.omega, p.lambda, p.gamma0, p.gamma_width, p.omega0, p.temperature
    );
    let _ = writeln!(out, "# t_max = {:e}, n_points = {}", run.t_max, cfg.n_points);
    for line in run.fairness.summary_lines().iter().take(1).chain(&run.warnings) {
        let _ = writeln!(out, "# {line}");
    }

    let mut header = vec!["t"];
    for m in &cfg.metrics {
        match m {
            Metric::Populations => header.extend(["p00", "p01", "p10", "p11"]),
            other => header.push(other.name()),
        }
    }
    let _ = writeln!(out, "{}", header.join(","));

    for (i, t) in series.trajectory.times.iter().enumerate() {
        let _ = write!(out, "{t:.16e}");
        for m in &cfg.metrics {
            match m {
                Metric::Populations => {
                    for x in series.populations[i] {
                        let _ = write!(out, ",{x:.16e}");
                    }
                }
                other => {
                    let x = series.series(*other).expect("requested metric is evaluated")[i];
                    let _ = write!(out, ",{x:.16e}");
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })
}

/// Write `{name}_micro.csv` and/or `{name}_phenom.csv` into `dir`.
pub fn write_outputs(run: &ScenarioRun, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(dir)?;
    let mut paths = Vec::new();
    for s in &run.series {
        let path = dir.join(format!("{}_{}.csv", run.config.name, s.model.short()));
        write_file(&path, &render_csv(run, s))?;
        paths.push(path);
    }
    Ok(paths)
}
