//! Fixed-step classical Runge-Kutta shared by both solvers, plus time grids
//! and the trajectory container.

use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::state::{validate_density, Basis, DensityMatrix4, Tolerances};

/// A point in the state space of a linear ODE.
pub trait OdeState: Copy {
    /// `self + h * k`
    fn add_scaled(&self, k: &Self, h: f64) -> Self;

    /// The density matrix the state represents.
    fn to_matrix(&self) -> Mat4;
}

impl OdeState for Mat4 {
    fn add_scaled(&self, k: &Self, h: f64) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += k.0[i][j] * h;
            }
        }
        out
    }

    fn to_matrix(&self) -> Mat4 {
        *self
    }
}

/// Largest step allowed for a generator whose fastest dissipative rate is
/// `max_rate` and whose largest Bohr frequency is `max_frequency`.
pub fn step_bound(max_rate: f64, max_frequency: f64) -> f64 {
    let mut h = f64::INFINITY;
    if max_rate > 0.0 {
        h = h.min(1e-2 / max_rate);
    }
    if max_frequency > 0.0 {
        h = h.min(1e-2 / max_frequency);
    }
    h
}

pub fn rk4_step<S: OdeState>(y: &S, h: f64, rhs: &impl Fn(&S) -> S) -> S {
    let k1 = rhs(y);
    let k2 = rhs(&y.add_scaled(&k1, 0.5 * h));
    let k3 = rhs(&y.add_scaled(&k2, 0.5 * h));
    let k4 = rhs(&y.add_scaled(&k3, h));
    y.add_scaled(&k1, h / 6.0)
        .add_scaled(&k2, h / 3.0)
        .add_scaled(&k3, h / 3.0)
        .add_scaled(&k4, h / 6.0)
}

/// `n` equally spaced points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::BadTimeGrid);
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| t_max * i as f64 / last).collect())
}

/// `0` followed by `n - 1` logarithmically spaced points on `[t_min, t_max]`.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 3 || !(t_min > 0.0) || !(t_max > t_min) || !t_max.is_finite() {
        return Err(Error::BadTimeGrid);
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let last = (n - 2) as f64;
    let mut out = vec![0.0];
    out.extend((0..n - 1).map(|i| (a + (b - a) * i as f64 / last).exp()));
    Ok(out)
}

pub fn check_grid(times: &[f64]) -> Result<()> {
    if times.first() != Some(&0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::BadTimeGrid);
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::BadTimeGrid);
    }
    Ok(())
}

/// States sampled on a time grid, all in one basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix4>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&DensityMatrix4> {
        self.states.last()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix4)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// Validate an evolved state, turning failures into time-stamped errors.
pub fn check_evolved(m: Mat4, basis: Basis, time: f64) -> Result<DensityMatrix4> {
    let tol = Tolerances::EVOLVED;
    validate_density(m, basis, &tol).map_err(|e| match e {
        Error::TraceNotOne { deviation } => Error::StepTooLarge { time, drift: deviation },
        other => Error::InvariantViolated { time, reason: Box::new(other) },
    })
}

/// Integrate `y' = rhs(y)` from `y0` at `t = 0`, reporting the state at each
/// grid time. Every output interval is split into the fewest equal substeps
/// no longer than `h_max`.
pub fn integrate<S: OdeState>(
    y0: S,
    rhs: impl Fn(&S) -> S,
    times: &[f64],
    h_max: f64,
    basis: Basis,
) -> Result<Trajectory> {
    check_grid(times)?;
    if !(h_max > 0.0) {
        return Err(Error::InvalidParams("step bound must be positive".into()));
    }
    let mut states = Vec::with_capacity(times.len());
    states.push(check_evolved(y0.to_matrix(), basis, 0.0)?);
    let mut y = y0;
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        let n = if h_max.is_finite() { (dt / h_max).ceil().max(1.0) as usize } else { 1 };
        let h = dt / n as f64;
        for _ in 0..n {
            y = rk4_step(&y, h, &rhs);
        }
        states.push(check_evolved(y.to_matrix(), basis, w[1])?);
    }
    Ok(Trajectory { times: times.to_vec(), states })
}
