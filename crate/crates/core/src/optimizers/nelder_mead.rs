//! Nelder–Mead downhill simplex. Gradient-free: only energy evaluations
//! reach the ledger.

use crate::error::{Error, Result};
use crate::objective::CostFunction;

use super::{ConvergenceRecord, Method, Optimizer, OptimizerConfig, Recorder, Step};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadParams {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Per-coordinate offset of the initial simplex vertices.
    pub initial_step: f64,
}

impl Default for NelderMeadParams {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            initial_step: 0.05,
        }
    }
}

impl NelderMeadParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.reflection > 0.0
            && self.expansion > 1.0
            && self.expansion > self.reflection
            && self.contraction > 0.0
            && self.contraction < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.initial_step != 0.0
            && self.initial_step.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid simplex coefficients {self:?}")))
        }
    }
}

#[derive(Debug, Clone)]
struct Vertex {
    x: Vec<f64>,
    f: f64,
}

#[derive(Debug, Clone)]
pub struct NelderMead {
    params: NelderMeadParams,
    /// Sorted best first once initialized; holds only the start point before.
    simplex: Vec<Vertex>,
    initialized: bool,
}

impl NelderMead {
    pub fn new(theta0: Vec<f64>, energy0: f64, params: NelderMeadParams) -> Self {
        Self {
            params,
            simplex: vec![Vertex { x: theta0, f: energy0 }],
            initialized: false,
        }
    }

    pub fn best_energy(&self) -> f64 {
        self.simplex[0].f
    }

    fn initialize(&mut self, cost: &mut dyn CostFunction) -> Result<()> {
        let base = self.simplex[0].x.clone();
        for i in 0..base.len() {
            let mut x = base.clone();
            x[i] += self.params.initial_step;
            let f = cost.energy(&x)?;
            self.simplex.push(Vertex { x, f });
        }
        self.sort();
        self.initialized = true;
        Ok(())
    }

    fn sort(&mut self) {
        self.simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
    }

    /// `c + t (x − c)`.
    fn along(centroid: &[f64], x: &[f64], t: f64) -> Vec<f64> {
        centroid.iter().zip(x).map(|(c, xi)| c + t * (xi - c)).collect()
    }

    fn iterate(&mut self, cost: &mut dyn CostFunction) -> Result<()> {
        let n = self.simplex.len() - 1;
        if n == 0 {
            return Ok(());
        }
        let NelderMeadParams {
            reflection,
            expansion,
            contraction,
            shrink,
            ..
        } = self.params;
        let dim = self.simplex[0].x.len();
        let mut centroid = vec![0.0; dim];
        for v in &self.simplex[..n] {
            centroid.iter_mut().zip(&v.x).for_each(|(c, x)| *c += x);
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        let best = self.simplex[0].f;
        let second_worst = self.simplex[n - 1].f;
        let worst = self.simplex[n].clone();

        let xr = Self::along(&centroid, &worst.x, -reflection);
        let fr = cost.energy(&xr)?;
        let replacement = if fr < best {
            let xe = Self::along(&centroid, &worst.x, -expansion);
            let fe = cost.energy(&xe)?;
            Some(if fe < fr { Vertex { x: xe, f: fe } } else { Vertex { x: xr, f: fr } })
        } else if fr < second_worst {
            Some(Vertex { x: xr, f: fr })
        } else if fr < worst.f {
            let xc = Self::along(&centroid, &xr, contraction);
            let fc = cost.energy(&xc)?;
            (fc <= fr).then_some(Vertex { x: xc, f: fc })
        } else {
            let xc = Self::along(&centroid, &worst.x, contraction);
            let fc = cost.energy(&xc)?;
            (fc < worst.f).then_some(Vertex { x: xc, f: fc })
        };

        match replacement {
            Some(v) => self.simplex[n] = v,
            None => {
                let anchor = self.simplex[0].x.clone();
                for v in &mut self.simplex[1..] {
                    v.x = Self::along(&anchor, &v.x, shrink);
                    v.f = cost.energy(&v.x)?;
                }
            }
        }
        self.sort();
        Ok(())
    }
}

impl Optimizer for NelderMead {
    fn params(&self) -> &[f64] {
        &self.simplex[0].x
    }

    /// The first call also builds the initial simplex.
    fn step(&mut self, cost: &mut dyn CostFunction) -> Result<Step> {
        if !self.initialized {
            self.initialize(cost)?;
        }
        self.iterate(cost)?;
        Ok(Step::Moved {
            energy: self.best_energy(),
        })
    }
}

/// Runs Nelder–Mead from `theta0` for `max_iters` simplex iterations.
pub fn nelder_mead_minimize(
    cost: &mut dyn CostFunction,
    theta0: &[f64],
    max_iters: usize,
    reference: f64,
) -> Result<Vec<ConvergenceRecord>> {
    let config = OptimizerConfig::new(Method::NelderMead(NelderMeadParams::default()), max_iters);
    let mut recorder = Recorder::new(reference, false);
    Ok(super::optimize(cost, theta0, &config, &mut recorder)?.records)
}
