//! Limited-memory BFGS with an Armijo backtracking line search.
//!
//! One outer iteration spends one gradient at the current iterate and one
//! energy evaluation per line-search trial. The accepted trial's energy is
//! the logged energy, so no extra evaluation is needed for the record.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::objective::CostFunction;

use super::{dot, ConvergenceRecord, Method, Optimizer, OptimizerConfig, Recorder, StopReason, Step};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsParams {
    /// Stored curvature pairs.
    pub memory: usize,
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Step halvings tried before giving up.
    pub max_trials: usize,
}

impl Default for LbfgsParams {
    fn default() -> Self {
        Self {
            memory: 10,
            c1: 1e-4,
            max_trials: 20,
        }
    }
}

impl LbfgsParams {
    pub fn validate(&self) -> Result<()> {
        if self.memory == 0 || self.max_trials == 0 {
            return Err(Error::Config("memory and max_trials must be at least 1".into()));
        }
        if !(self.c1 > 0.0 && self.c1 < 1.0) {
            return Err(Error::Config(format!("c1 must lie in (0, 1), got {}", self.c1)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct CurvaturePair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

#[derive(Debug, Clone)]
pub struct Lbfgs {
    theta: Vec<f64>,
    energy: f64,
    params: LbfgsParams,
    history: VecDeque<CurvaturePair>,
    /// Step and gradient from the previous iteration, awaiting the new gradient.
    pending: Option<(Vec<f64>, Vec<f64>)>,
}

impl Lbfgs {
    pub fn new(theta: Vec<f64>, energy: f64, params: LbfgsParams) -> Self {
        Self {
            theta,
            energy,
            params,
            history: VecDeque::with_capacity(params.memory),
            pending: None,
        }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    fn absorb(&mut self, grad: &[f64]) {
        if let Some((s, prev_grad)) = self.pending.take() {
            let y: Vec<f64> = grad.iter().zip(&prev_grad).map(|(g, p)| g - p).collect();
            let sy = dot(&s, &y);
            // Skip pairs that would break positive definiteness.
            if sy > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() && sy > 0.0 {
                if self.history.len() == self.params.memory {
                    self.history.pop_front();
                }
                self.history.push_back(CurvaturePair { s, y, rho: 1.0 / sy });
            }
        }
    }

    /// Two-loop recursion: returns `−H g` for the implicit inverse Hessian `H`.
    fn direction(&self, grad: &[f64]) -> Vec<f64> {
        let mut q = grad.to_vec();
        let mut alphas = Vec::with_capacity(self.history.len());
        for pair in self.history.iter().rev() {
            let alpha = pair.rho * dot(&pair.s, &q);
            q.iter_mut().zip(&pair.y).for_each(|(qi, yi)| *qi -= alpha * yi);
            alphas.push(alpha);
        }
        let scale = self
            .history
            .back()
            .map_or(1.0, |p| dot(&p.s, &p.y) / dot(&p.y, &p.y));
        q.iter_mut().for_each(|qi| *qi *= scale);
        for (pair, alpha) in self.history.iter().zip(alphas.iter().rev()) {
            let beta = pair.rho * dot(&pair.y, &q);
            q.iter_mut().zip(&pair.s).for_each(|(qi, si)| *qi += (alpha - beta) * si);
        }
        q.iter_mut().for_each(|qi| *qi = -*qi);
        q
    }
}

impl Optimizer for Lbfgs {
    fn params(&self) -> &[f64] {
        &self.theta
    }

    fn step(&mut self, cost: &mut dyn CostFunction) -> Result<Step> {
        let grad = cost.gradient(&self.theta)?;
        self.absorb(&grad);
        if grad.iter().all(|&g| g == 0.0) {
            return Ok(Step::Stopped {
                energy: self.energy,
                reason: StopReason::ZeroGradient,
            });
        }
        let mut direction = self.direction(&grad);
        let mut slope = dot(&grad, &direction);
        if slope.is_nan() || slope >= 0.0 {
            self.history.clear();
            direction = grad.iter().map(|g| -g).collect();
            slope = dot(&grad, &direction);
        }
        let mut step = 1.0;
        for _ in 0..self.params.max_trials {
            let trial: Vec<f64> = self
                .theta
                .iter()
                .zip(&direction)
                .map(|(x, d)| x + step * d)
                .collect();
            let energy = cost.energy(&trial)?;
            if energy <= self.energy + self.params.c1 * step * slope {
                let s = trial.iter().zip(&self.theta).map(|(a, b)| a - b).collect();
                self.pending = Some((s, grad));
                self.theta = trial;
                self.energy = energy;
                return Ok(Step::Moved { energy });
            }
            step *= 0.5;
        }
        Ok(Step::Stopped {
            energy: self.energy,
            reason: StopReason::LineSearchFailed,
        })
    }
}

/// Runs L-BFGS from `theta0` for at most `max_iters` outer iterations.
pub fn lbfgs_minimize(
    cost: &mut dyn CostFunction,
    theta0: &[f64],
    max_iters: usize,
    reference: f64,
) -> Result<Vec<ConvergenceRecord>> {
    let config = OptimizerConfig::new(Method::Lbfgs(LbfgsParams::default()), max_iters);
    let mut recorder = Recorder::new(reference, false);
    Ok(super::optimize(cost, theta0, &config, &mut recorder)?.records)
}
