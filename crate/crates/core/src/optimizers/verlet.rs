//! Damped velocity-Verlet and its single-force leapfrog variant.
//!
//! The parameter vector is a position, `F(θ) = −∇E(θ)` the force, and the
//! velocity is damped by `γ` once per step, after the full velocity update.

use crate::error::{Error, Result};
use crate::objective::CostFunction;

use super::{Optimizer, Step};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerletParams {
    pub dt: f64,
    pub mass: f64,
    /// Velocity retained per step. `1.0` turns damping off.
    pub damping: f64,
    /// Reuse the end-of-step force as the next step's starting force.
    pub reuse_force: bool,
}

impl Default for VerletParams {
    fn default() -> Self {
        Self {
            dt: 0.01,
            mass: 0.8,
            damping: 0.68,
            reuse_force: false,
        }
    }
}

impl VerletParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Config(format!("mass must be positive, got {}", self.mass)));
        }
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(Error::Config(format!(
                "damping must lie in [0, 1], got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Two half kicks around a drift; two forces per step unless reusing.
    VelocityVerlet,
    /// Kick then drift with a single force per step.
    Leapfrog,
}

#[derive(Debug, Clone)]
pub struct VerletState {
    theta: Vec<f64>,
    velocity: Vec<f64>,
    params: VerletParams,
    integrator: Integrator,
    force_cache: Option<Vec<f64>>,
    kinetic_before_damping: f64,
}

impl VerletState {
    /// Starts at rest.
    pub fn new(theta: Vec<f64>, params: VerletParams, integrator: Integrator) -> Self {
        let velocity = vec![0.0; theta.len()];
        Self {
            theta,
            velocity,
            params,
            integrator,
            force_cache: None,
            kinetic_before_damping: 0.0,
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn set_velocity(&mut self, velocity: Vec<f64>) {
        assert_eq!(velocity.len(), self.theta.len());
        self.velocity = velocity;
    }

    pub fn params(&self) -> VerletParams {
        self.params
    }

    /// `½ m |v|²`.
    pub fn kinetic_energy(&self) -> f64 {
        kinetic(self.params.mass, &self.velocity)
    }

    /// Kinetic energy of the last step's velocity just before damping was applied.
    pub fn kinetic_before_damping(&self) -> f64 {
        self.kinetic_before_damping
    }

    fn force(cost: &mut dyn CostFunction, theta: &[f64]) -> Result<Vec<f64>> {
        Ok(cost.gradient(theta)?.into_iter().map(|g| -g).collect())
    }

    fn damp(&mut self) {
        self.kinetic_before_damping = self.kinetic_energy();
        let gamma = self.params.damping;
        self.velocity.iter_mut().for_each(|v| *v *= gamma);
    }

    /// One damped velocity-Verlet step; returns the (counted) energy at the new position.
    pub fn verlet_step(&mut self, cost: &mut dyn CostFunction) -> Result<f64> {
        let VerletParams { dt, mass, .. } = self.params;
        let f0 = match self.force_cache.take() {
            Some(f) if self.params.reuse_force => f,
            _ => Self::force(cost, &self.theta)?,
        };
        for ((x, v), f) in self.theta.iter_mut().zip(&mut self.velocity).zip(&f0) {
            *v += dt * f / (2.0 * mass);
            *x += dt * *v;
        }
        let f1 = Self::force(cost, &self.theta)?;
        for (v, f) in self.velocity.iter_mut().zip(&f1) {
            *v += dt * f / (2.0 * mass);
        }
        self.damp();
        self.force_cache = Some(f1);
        cost.energy(&self.theta)
    }

    /// One damped leapfrog (kick, drift) step.
    pub fn leapfrog_step(&mut self, cost: &mut dyn CostFunction) -> Result<f64> {
        let VerletParams { dt, mass, .. } = self.params;
        let f = Self::force(cost, &self.theta)?;
        for (v, f) in self.velocity.iter_mut().zip(&f) {
            *v += dt * f / mass;
        }
        self.damp();
        for (x, v) in self.theta.iter_mut().zip(&self.velocity) {
            *x += dt * v;
        }
        cost.energy(&self.theta)
    }
}

fn kinetic(mass: f64, velocity: &[f64]) -> f64 {
    0.5 * mass * velocity.iter().map(|v| v * v).sum::<f64>()
}

impl Optimizer for VerletState {
    fn params(&self) -> &[f64] {
        &self.theta
    }

    fn step(&mut self, cost: &mut dyn CostFunction) -> Result<Step> {
        let energy = match self.integrator {
            Integrator::VelocityVerlet => self.verlet_step(cost)?,
            Integrator::Leapfrog => self.leapfrog_step(cost)?,
        };
        Ok(Step::Moved { energy })
    }
}

pub fn verlet_step(state: &mut VerletState, cost: &mut dyn CostFunction) -> Result<f64> {
    state.verlet_step(cost)
}

pub fn leapfrog_step(state: &mut VerletState, cost: &mut dyn CostFunction) -> Result<f64> {
    state.leapfrog_step(cost)
}
