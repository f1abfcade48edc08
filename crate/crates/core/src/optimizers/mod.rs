//! Optimizers for the VQE outer loop and the driver that runs them under a
//! fixed iteration budget while logging one [`ConvergenceRecord`] per iteration.
//!
//! Every method sees the objective through [`CostFunction`], so each
//! recorded `cumulative_evals` is read straight from the cost's ledger.

mod heavy_ball;
mod lbfgs;
mod nelder_mead;
mod verlet;

use std::fmt;
use std::time::Instant;

pub use heavy_ball::{heavy_ball_step, HeavyBall, HeavyBallParams};
pub use lbfgs::{lbfgs_minimize, Lbfgs, LbfgsParams};
pub use nelder_mead::{nelder_mead_minimize, NelderMead, NelderMeadParams};
pub use verlet::{leapfrog_step, verlet_step, Integrator, VerletParams, VerletState};

use crate::error::{Error, Result};
use crate::objective::{CostFunction, EvalCounter};

/// Runs abort once `|E|` exceeds this many Hartree.
pub const DIVERGENCE_ENERGY: f64 = 1e3;

/// One row of a convergence log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub iteration: usize,
    pub energy: f64,
    pub abs_error: f64,
    pub cumulative_evals: u64,
    pub elapsed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ZeroGradient,
    LineSearchFailed,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::ZeroGradient => f.write_str("zero gradient"),
            StopReason::LineSearchFailed => f.write_str("line search failed"),
        }
    }
}

/// What one optimizer iteration did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    /// Moved to a new iterate with this (counted) energy.
    Moved { energy: f64 },
    /// Did not move and will not continue; `energy` is the current iterate's.
    Stopped { energy: f64, reason: StopReason },
}

/// A stateful optimizer advanced one outer iteration at a time.
pub trait Optimizer {
    /// Current iterate (the best vertex for simplex methods).
    fn params(&self) -> &[f64];
    fn step(&mut self, cost: &mut dyn CostFunction) -> Result<Step>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Verlet(VerletParams),
    Leapfrog(VerletParams),
    HeavyBall(HeavyBallParams),
    Lbfgs(LbfgsParams),
    NelderMead(NelderMeadParams),
}

impl Method {
    pub const NAMES: [&'static str; 5] = ["verlet", "leapfrog", "heavy_ball", "lbfgs", "nelder_mead"];

    /// The method with its default hyperparameters.
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "verlet" => Method::Verlet(VerletParams::default()),
            "leapfrog" => Method::Leapfrog(VerletParams::default()),
            "heavy_ball" => Method::HeavyBall(HeavyBallParams::default()),
            "lbfgs" => Method::Lbfgs(LbfgsParams::default()),
            "nelder_mead" => Method::NelderMead(NelderMeadParams::default()),
            other => {
                return Err(Error::Config(format!(
                    "unknown optimizer {other:?} (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Verlet(_) => "verlet",
            Method::Leapfrog(_) => "leapfrog",
            Method::HeavyBall(_) => "heavy_ball",
            Method::Lbfgs(_) => "lbfgs",
            Method::NelderMead(_) => "nelder_mead",
        }
    }

    /// Sets one hyperparameter by its CLI key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let float = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: {value:?} is not a number")))
        };
        let integer = || {
            value
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("{key}: {value:?} is not an integer")))
        };
        let name = self.name();
        match (self, key) {
            (Method::Verlet(p) | Method::Leapfrog(p), "dt") => p.dt = float()?,
            (Method::Verlet(p) | Method::Leapfrog(p), "mass" | "m") => p.mass = float()?,
            (Method::Verlet(p) | Method::Leapfrog(p), "damping" | "gamma") => p.damping = float()?,
            (Method::Verlet(p), "reuse_force" | "reuse-force") => {
                p.reuse_force = value
                    .parse()
                    .map_err(|_| Error::Config(format!("{key}: {value:?} is not a boolean")))?
            }
            (Method::HeavyBall(p), "lr") => p.lr = float()?,
            (Method::HeavyBall(p), "momentum") => p.momentum = float()?,
            (Method::Lbfgs(p), "memory") => p.memory = integer()?,
            (Method::Lbfgs(p), "c1") => p.c1 = float()?,
            (Method::Lbfgs(p), "max_trials") => p.max_trials = integer()?,
            (Method::NelderMead(p), "reflection") => p.reflection = float()?,
            (Method::NelderMead(p), "expansion") => p.expansion = float()?,
            (Method::NelderMead(p), "contraction") => p.contraction = float()?,
            (Method::NelderMead(p), "shrink") => p.shrink = float()?,
            (Method::NelderMead(p), "initial_step") => p.initial_step = float()?,
            _ => {
                return Err(Error::Config(format!(
                    "optimizer {name} has no hyperparameter {key:?}"
                )))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Method::Verlet(p) | Method::Leapfrog(p) => p.validate(),
            Method::HeavyBall(p) => p.validate(),
            Method::Lbfgs(p) => p.validate(),
            Method::NelderMead(p) => p.validate(),
        }
    }

    /// Gradient evaluations per iteration for the step-based methods.
    pub fn forces_per_iter(&self) -> Option<usize> {
        match self {
            Method::Verlet(p) if p.reuse_force => Some(1),
            Method::Verlet(_) => Some(2),
            Method::Leapfrog(_) | Method::HeavyBall(_) => Some(1),
            Method::Lbfgs(_) | Method::NelderMead(_) => None,
        }
    }

    /// Starts the method at `theta0`, whose energy `energy0` was already paid for.
    pub fn start(&self, theta0: Vec<f64>, energy0: f64) -> Result<Box<dyn Optimizer + Send>> {
        self.validate()?;
        Ok(match self {
            Method::Verlet(p) => Box::new(VerletState::new(theta0, *p, Integrator::VelocityVerlet)),
            Method::Leapfrog(p) => Box::new(VerletState::new(theta0, *p, Integrator::Leapfrog)),
            Method::HeavyBall(p) => Box::new(HeavyBall::new(theta0, *p)),
            Method::Lbfgs(p) => Box::new(Lbfgs::new(theta0, energy0, *p)),
            Method::NelderMead(p) => Box::new(NelderMead::new(theta0, energy0, *p)),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_iters: usize,
}

impl OptimizerConfig {
    pub fn new(method: Method, max_iters: usize) -> Self {
        Self { method, max_iters }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        self.method.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    /// The full iteration budget was spent.
    Completed,
    /// The method stopped itself early.
    Stopped(StopReason),
    /// The divergence guard fired.
    Diverged(String),
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Completed => f.write_str("completed"),
            RunStatus::Stopped(reason) => write!(f, "stopped: {reason}"),
            RunStatus::Diverged(detail) => write!(f, "diverged: {detail}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<ConvergenceRecord>,
    pub status: RunStatus,
    pub final_params: Vec<f64>,
    pub counter: EvalCounter,
}

/// Stamps log rows with the error against a reference and the elapsed time.
#[derive(Debug, Clone)]
pub struct Recorder {
    reference: f64,
    start: Option<Instant>,
    records: Vec<ConvergenceRecord>,
}

impl Recorder {
    /// With `timing` off every `elapsed` is written as zero, which makes logs
    /// bitwise reproducible.
    pub fn new(reference: f64, timing: bool) -> Self {
        Self {
            reference,
            start: timing.then(Instant::now),
            records: Vec::new(),
        }
    }

    pub fn record(&mut self, iteration: usize, energy: f64, counter: EvalCounter) {
        self.records.push(ConvergenceRecord {
            iteration,
            energy,
            abs_error: (energy - self.reference).abs(),
            cumulative_evals: counter.energy_evals,
            elapsed: self.start.map_or(0.0, |t| t.elapsed().as_secs_f64()),
        });
    }

    pub fn records(&self) -> &[ConvergenceRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<ConvergenceRecord> {
        self.records
    }
}

fn divergence(energy: f64, params: &[f64]) -> Option<String> {
    if !energy.is_finite() {
        return Some(format!("energy is {energy}"));
    }
    if energy.abs() > DIVERGENCE_ENERGY {
        return Some(format!("|energy| = {:e} Ha exceeds {DIVERGENCE_ENERGY:e}", energy.abs()));
    }
    params
        .iter()
        .position(|p| !p.is_finite())
        .map(|i| format!("parameter {i} is {}", params[i]))
}

/// Evaluates the start point (iteration 0, one evaluation), then runs up to
/// `config.max_iters` iterations.
pub fn optimize(
    cost: &mut dyn CostFunction,
    theta0: &[f64],
    config: &OptimizerConfig,
    recorder: &mut Recorder,
) -> Result<RunOutcome> {
    config.validate()?;
    if theta0.len() != cost.n_params() {
        return Err(Error::ParamLength {
            expected: cost.n_params(),
            got: theta0.len(),
        });
    }
    let energy0 = cost.energy(theta0)?;
    recorder.record(0, energy0, cost.counter());
    let mut optimizer = config.method.start(theta0.to_vec(), energy0)?;
    let mut status = RunStatus::Completed;
    if let Some(detail) = divergence(energy0, theta0) {
        status = RunStatus::Diverged(detail);
    } else {
        for iteration in 1..=config.max_iters {
            let step = optimizer.step(cost)?;
            let energy = match step {
                Step::Moved { energy } | Step::Stopped { energy, .. } => energy,
            };
            if energy.is_finite() {
                recorder.record(iteration, energy, cost.counter());
            }
            if let Some(detail) = divergence(energy, optimizer.params()) {
                status = RunStatus::Diverged(format!("iteration {iteration}: {detail}"));
                break;
            }
            if let Step::Stopped { reason, .. } = step {
                status = RunStatus::Stopped(reason);
                break;
            }
        }
    }
    Ok(RunOutcome {
        records: recorder.records().to_vec(),
        status,
        final_params: optimizer.params().to_vec(),
        counter: cost.counter(),
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
