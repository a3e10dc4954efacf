use serde::{Deserialize, Serialize};

use super::{KrylovError, Result};

/// Stopping rule and bookkeeping options shared by the Krylov solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative residual target `||b - A x|| / ||b||`.
    pub tol: f64,
    /// Iteration cap.
    pub maxit: usize,
    /// GMRES restart length; ignored by BiCG.
    pub restart: usize,
    pub record_history: bool,
    /// Seed for random shadow residuals used when BiCG restarts after a breakdown.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-7, maxit: 1000, restart: 50, record_history: false, seed: 0 }
    }
}

impl SolverConfig {
    pub fn new(tol: f64, maxit: usize) -> Self {
        Self { tol, maxit, ..Self::default() }
    }

    pub fn with_restart(mut self, restart: usize) -> Self {
        self.restart = restart;
        self
    }

    pub fn with_history(mut self) -> Self {
        self.record_history = true;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(KrylovError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.maxit == 0 {
            return Err(KrylovError::InvalidConfig("maxit must be at least 1".into()));
        }
        if self.restart == 0 {
            return Err(KrylovError::InvalidConfig("restart must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one iterative solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Relative residual of the returned iterate, recomputed from scratch.
    pub final_relres: f64,
    pub converged: bool,
    /// Operator applications, adjoint applications included.
    pub matvecs: usize,
    #[serde(rename = "wall_time_s")]
    pub wall_time: f64,
    /// `||r_j|| / ||r_0||` per iteration, starting with 1.0.
    #[serde(rename = "history", default, skip_serializing_if = "Option::is_none")]
    pub residual_history: Option<Vec<f64>>,
    /// Relative residual against the original, undeflated system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_error: Option<f64>,
    /// BiCG breakdowns encountered (rho or p^H A p vanished).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub breakdowns: usize,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

impl SolveReport {
    pub(crate) fn empty() -> Self {
        Self {
            iterations: 0,
            final_relres: 0.0,
            converged: true,
            matvecs: 0,
            wall_time: 0.0,
            residual_history: None,
            true_error: None,
            breakdowns: 0,
        }
    }

    /// JSON object without the timing field, for determinism comparisons.
    pub fn to_json_without_timing(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_time_s");
        }
        v
    }
}
