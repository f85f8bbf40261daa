use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Sup-norm of the discrete residual at which Newton stops.
    pub tolerance: f64,
    pub max_halvings: usize,
    /// Only second-order differences are implemented.
    pub fd_order: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iterations: 50, tolerance: 1e-10, max_halvings: 20, fd_order: 2 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidInput(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be at least 1".into()));
        }
        if self.fd_order != 2 {
            return Err(Error::InvalidInput(format!("finite-difference order {} not supported", self.fd_order)));
        }
        Ok(())
    }
}

pub(crate) fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub(crate) struct NewtonOutcome {
    pub iterations: usize,
    pub history: Vec<f64>,
}

/// Damped Newton iteration on `x` (unknowns only). `residual` evaluates the
/// discrete equations and `newton_step(x, r)` solves `J(x) d = -r`. A step is
/// accepted once the sup-norm of the residual does not increase, halving the
/// step length at most `max_halvings` times.
pub(crate) fn damped_newton<R, S>(
    x: &mut [f64],
    residual: R,
    newton_step: S,
    config: &SolverConfig,
) -> Result<NewtonOutcome>
where
    R: Fn(&[f64]) -> Vec<f64>,
    S: Fn(&[f64], &[f64], usize) -> Result<Vec<f64>>,
{
    config.validate()?;
    let mut r = residual(x);
    let mut norm = sup_norm(&r);
    let mut history = vec![norm];
    let not_converged = |iterations: usize, history: &[f64]| Error::NotConverged {
        iterations,
        last_residual: *history.last().unwrap(),
        history: history.to_vec(),
    };
    for iteration in 1..=config.max_iterations {
        if norm < config.tolerance {
            return Ok(NewtonOutcome { iterations: iteration - 1, history });
        }
        if !norm.is_finite() {
            return Err(not_converged(iteration - 1, &history));
        }
        let d = newton_step(x, &r, iteration)?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + lambda * b).collect();
            let r_trial = residual(&trial);
            let n_trial = sup_norm(&r_trial);
            if n_trial.is_finite() && n_trial <= norm {
                accepted = Some((trial, r_trial, n_trial));
                break;
            }
            lambda *= 0.5;
        }
        let Some((trial, r_trial, n_trial)) = accepted else {
            return Err(not_converged(iteration, &history));
        };
        x.copy_from_slice(&trial);
        r = r_trial;
        norm = n_trial;
        history.push(norm);
    }
    if norm < config.tolerance {
        return Ok(NewtonOutcome { iterations: config.max_iterations, history });
    }
    Err(not_converged(config.max_iterations, &history))
}
