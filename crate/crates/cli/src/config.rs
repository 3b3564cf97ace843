//! Scenario description and its flat `key = value` file format.
//!
//! ```text
//! # Ω = λ = 4e9, warm bath
//! omega = 4e9
//! lambda = 4e9
//! gamma0 = 5e7
//! gamma_width = 5e10
//! omega0 = 8e9
//! temperature = 1.5e-2
//! t_max = auto
//! n_points = 2000
//! metrics = concurrence, discord
//! models = microscopic, phenomenological
//! ```

use std::fmt;
use std::path::Path;

use num_complex::Complex64 as C64;
use thiserror::Error;
use twoqubit::{SystemParams, DensityMatrix4, Basis, Mat4, Tolerances};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn at(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Line { line, message: message.into() }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    /// `|1,0⟩`, qubit 1 excited
    Ket10,
    Ket01,
    /// the dressed ground state `|a⟩`
    DressedA,
    /// row-major computational-basis density matrix
    Custom(Box<[C64; 16]>),
}

impl InitialState {
    pub fn density(&self, p: &SystemParams) -> Result<DensityMatrix4, twoqubit::Error> {
        match self {
            InitialState::Ket10 => Ok(DensityMatrix4::product(1, 0)),
            InitialState::Ket01 => Ok(DensityMatrix4::product(0, 1)),
            InitialState::DressedA => {
                let frame = p.dressed_frame();
                DensityMatrix4::pure(frame.ket(0), Basis::Computational)
            }
            InitialState::Custom(v) => {
                let m = Mat4::from_fn(|i, j| v[4 * i + j]);
                twoqubit::validate_density(m, Basis::Computational, &Tolerances::STATE)
            }
        }
    }

    fn name(&self) -> &'static str {
        match self {
            InitialState::Ket10 => "ket10",
            InitialState::Ket01 => "ket01",
            InitialState::DressedA => "dressed_a",
            InitialState::Custom(_) => "custom",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TMax {
    /// ten times the slowest microscopic relaxation time
    Auto,
    Seconds(f64),
}

impl TMax {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(TMax::Auto);
        }
        let v: f64 = s.parse().map_err(|_| format!("t_max: expected seconds or 'auto', got '{s}'"))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(format!("t_max must be > 0, got {v}"));
        }
        Ok(TMax::Seconds(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Concurrence,
    Discord,
    LinearEntropy,
    Populations,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Concurrence, Metric::Discord, Metric::LinearEntropy, Metric::Populations];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "concurrence" => Some(Metric::Concurrence),
            "discord" => Some(Metric::Discord),
            "linear_entropy" => Some(Metric::LinearEntropy),
            "populations" => Some(Metric::Populations),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Concurrence => "concurrence",
            Metric::Discord => "discord",
            Metric::LinearEntropy => "linear_entropy",
            Metric::Populations => "populations",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Microscopic,
    Phenomenological,
}

impl Model {
    pub fn parse(s: &str) -> Option<Vec<Self>> {
        match s {
            "micro" | "microscopic" => Some(vec![Model::Microscopic]),
            "phenom" | "phenomenological" => Some(vec![Model::Phenomenological]),
            "both" => Some(vec![Model::Microscopic, Model::Phenomenological]),
            _ => None,
        }
    }

    pub fn short(&self) -> &'static str {
        match self {
            Model::Microscopic => "micro",
            Model::Phenomenological => "phenom",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Microscopic => "microscopic",
            Model::Phenomenological => "phenomenological",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    /// used for output file names
    pub name: String,
    pub params: SystemParams,
    pub initial_state: InitialState,
    pub t_max: TMax,
    pub n_points: usize,
    pub metrics: Vec<Metric>,
    pub models: Vec<Model>,
    pub fairness_threshold: f64,
}

impl ScenarioConfig {
    pub fn new(name: impl Into<String>, params: SystemParams) -> Self {
        ScenarioConfig {
            name: name.into(),
            params,
            initial_state: InitialState::Ket10,
            t_max: TMax::Auto,
            n_points: 2000,
            metrics: Metric::ALL.to_vec(),
            models: vec![Model::Microscopic, Model::Phenomenological],
            fairness_threshold: twoqubit::system::DEFAULT_FAIRNESS_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.n_points < 2 {
            return Err(ConfigError::Invalid(format!("n_points must be >= 2, got {}", self.n_points)));
        }
        if self.models.is_empty() {
            return Err(ConfigError::Invalid("models: at least one model is required".into()));
        }
        if self.metrics.is_empty() {
            return Err(ConfigError::Invalid("metrics: at least one metric is required".into()));
        }
        if let TMax::Seconds(t) = self.t_max {
            if !(t > 0.0) {
                return Err(ConfigError::Invalid(format!("t_max must be > 0, got {t}")));
            }
        }
        Ok(())
    }

    /// Length of the time window: explicit, or ten times the slowest of the
    /// two microscopic population relaxation times.
    pub fn resolved_t_max(&self) -> f64 {
        match self.t_max {
            TMax::Seconds(t) => t,
            TMax::Auto => auto_t_max(&self.params),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        parse_config(&text)
    }
}

pub fn auto_t_max(p: &SystemParams) -> f64 {
    let r = p.rate_set();
    let slowest = r.relax_i().min(r.relax_ii());
    if slowest > 0.0 {
        10.0 / slowest
    } else {
        // no dissipation: a few hundred periods of the slowest Bohr frequency
        let f = p.dressed_frame();
        200.0 * std::f64::consts::TAU / f.bohr_i
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.parse().map_err(|_| at(line, format!("{key}: expected a number, got '{v}'")))?;
    if !x.is_finite() {
        return Err(at(line, format!("{key}: value must be finite")));
    }
    Ok(x)
}

fn parse_custom(line: usize, v: &str) -> Result<Box<[C64; 16]>, ConfigError> {
    let nums = v
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(line, "custom_state", s))
        .collect::<Result<Vec<_>, _>>()?;
    if nums.len() != 32 {
        return Err(at(line, format!("custom_state: expected 32 numbers (16 re,im pairs), got {}", nums.len())));
    }
    let mut out = Box::new([C64::new(0.0, 0.0); 16]);
    for (k, z) in out.iter_mut().enumerate() {
        *z = C64::new(nums[2 * k], nums[2 * k + 1]);
    }
    Ok(out)
}

/// Parse a configuration file. Keys not given keep the defaults of
/// [`ScenarioConfig::new`]; the six physical parameters are required.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut name = "scenario".to_string();
    let mut phys: [Option<f64>; 6] = [None; 6];
    const PHYS: [&str; 6] = ["omega", "lambda", "gamma0", "gamma_width", "omega0", "temperature"];
    let mut omega_pair: [Option<(usize, f64)>; 2] = [None, None];
    let mut initial = None;
    let mut initial_line = 0;
    let mut custom = None;
    let mut t_max = TMax::Auto;
    let mut n_points = 2000;
    let mut metrics = Metric::ALL.to_vec();
    let mut models = vec![Model::Microscopic, Model::Phenomenological];
    let mut threshold = twoqubit::system::DEFAULT_FAIRNESS_THRESHOLD;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| at(line, format!("expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(k) = PHYS.iter().position(|&p| p == key) {
            phys[k] = Some(parse_f64(line, key, value)?);
            continue;
        }
        match key {
            "name" => name = value.to_string(),
            "omega1" => omega_pair[0] = Some((line, parse_f64(line, key, value)?)),
            "omega2" => omega_pair[1] = Some((line, parse_f64(line, key, value)?)),
            "initial_state" => {
                initial_line = line;
                initial = Some(match value {
                    "ket10" => InitialState::Ket10,
                    "ket01" => InitialState::Ket01,
                    "dressed_a" => InitialState::DressedA,
                    "custom" => InitialState::Custom(Box::new([C64::new(0.0, 0.0); 16])),
                    _ => return Err(at(line, format!("initial_state: unknown state '{value}'"))),
                });
            }
            "custom_state" => custom = Some(parse_custom(line, value)?),
            "t_max" => t_max = TMax::parse(value).map_err(|m| at(line, m))?,
            "n_points" => {
                n_points = value
                    .parse()
                    .map_err(|_| at(line, format!("n_points: expected an integer, got '{value}'")))?;
                if n_points < 2 {
                    return Err(at(line, "n_points must be >= 2"));
                }
            }
            "metrics" => {
                metrics = list(value)
                    .map(|m| Metric::parse(m).ok_or_else(|| at(line, format!("metrics: unknown metric '{m}'"))))
                    .collect::<Result<_, _>>()?;
                metrics.sort();
                metrics.dedup();
            }
            "models" => {
                let mut out = Vec::new();
                for m in list(value) {
                    out.extend(Model::parse(m).ok_or_else(|| at(line, format!("models: unknown model '{m}'")))?);
                }
                out.sort();
                out.dedup();
                models = out;
            }
            "fairness_threshold" => threshold = parse_f64(line, key, value)?,
            _ => return Err(at(line, format!("unknown key '{key}'"))),
        }
    }

    if let [Some((line, w1)), Some((_, w2))] = omega_pair {
        if w1 != w2 {
            return Err(at(line, twoqubit::Error::Detuned { omega1: w1, omega2: w2 }.to_string()));
        }
        phys[0] = phys[0].or(Some(w1));
    } else if let Some((line, _)) = omega_pair.iter().flatten().next() {
        return Err(at(*line, "omega1 and omega2 must be given together"));
    }

    let missing: Vec<&str> = PHYS.iter().zip(&phys).filter(|(_, v)| v.is_none()).map(|(k, _)| *k).collect();
    if !missing.is_empty() {
        return Err(ConfigError::Invalid(format!("missing required keys: {}", missing.join(", "))));
    }
    let [omega, lambda, gamma0, gamma_width, omega0, temperature] = phys.map(|v| v.unwrap());
    let params = SystemParams::new(omega, lambda, gamma0, gamma_width, omega0, temperature)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;

    let initial_state = match (initial, custom) {
        (Some(InitialState::Custom(_)), Some(v)) => InitialState::Custom(v),
        (Some(InitialState::Custom(_)), None) => {
            return Err(at(initial_line, "initial_state = custom needs a custom_state line"))
        }
        (Some(s), _) => s,
        (None, _) => InitialState::Ket10,
    };

    let cfg = ScenarioConfig {
        name,
        params,
        initial_state,
        t_max,
        n_points,
        metrics,
        models,
        fairness_threshold: threshold,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl fmt::Display for ScenarioConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "name = {}", self.name)?;
        writeln!(f, "omega = {:e}", p.omega)?;
        writeln!(f, "lambda = {:e}", p.lambda)?;
        writeln!(f, "gamma0 = {:e}", p.gamma0)?;
        writeln!(f, "gamma_width = {:e}", p.gamma_width)?;
        writeln!(f, "omega0 = {:e}", p.omega0)?;
        writeln!(f, "temperature = {:e}", p.temperature)?;
        writeln!(f, "initial_state = {}", self.initial_state.name())?;
        if let InitialState::Custom(v) = &self.initial_state {
            let nums: Vec<String> = v.iter().flat_map(|z| [format!("{:e}", z.re), format!("{:e}", z.im)]).collect();
            writeln!(f, "custom_state = {}", nums.join(", "))?;
        }
        match self.t_max {
            TMax::Auto => writeln!(f, "t_max = auto")?,
            TMax::Seconds(t) => writeln!(f, "t_max = {t:e}")?,
        }
        writeln!(f, "n_points = {}", self.n_points)?;
        let metrics: Vec<&str> = self.metrics.iter().map(Metric::name).collect();
        writeln!(f, "metrics = {}", metrics.join(", "))?;
        let models: Vec<&str> = self.models.iter().map(Model::name).collect();
        writeln!(f, "models = {}", models.join(", "))?;
        write!(f, "fairness_threshold = {}", self.fairness_threshold)
    }
}
