use crate::error::{Error, Result};
use crate::objective::CostFunction;

use super::{Optimizer, Step};

/// Polyak momentum: `v' = β v − η ∇E(θ)`, `θ' = θ + v'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeavyBallParams {
    pub lr: f64,
    pub momentum: f64,
}

impl Default for HeavyBallParams {
    fn default() -> Self {
        Self {
            lr: 0.1,
            momentum: 0.9,
        }
    }
}

impl HeavyBallParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::Config(format!("lr must be positive, got {}", self.lr)));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!(
                "momentum must lie in [0, 1), got {}",
                self.momentum
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HeavyBall {
    theta: Vec<f64>,
    velocity: Vec<f64>,
    params: HeavyBallParams,
}

impl HeavyBall {
    pub fn new(theta: Vec<f64>, params: HeavyBallParams) -> Self {
        let velocity = vec![0.0; theta.len()];
        Self {
            theta,
            velocity,
            params,
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }
}

/// Applies one momentum update in place, given the gradient at `theta`.
pub fn heavy_ball_step(theta: &mut [f64], velocity: &mut [f64], grad: &[f64], lr: f64, momentum: f64) {
    for ((x, v), g) in theta.iter_mut().zip(velocity.iter_mut()).zip(grad) {
        *v = momentum * *v - lr * g;
        *x += *v;
    }
}

impl Optimizer for HeavyBall {
    fn params(&self) -> &[f64] {
        &self.theta
    }

    fn step(&mut self, cost: &mut dyn CostFunction) -> Result<Step> {
        let grad = cost.gradient(&self.theta)?;
        heavy_ball_step(
            &mut self.theta,
            &mut self.velocity,
            &grad,
            self.params.lr,
            self.params.momentum,
        );
        let energy = cost.energy(&self.theta)?;
        Ok(Step::Moved { energy })
    }
}
