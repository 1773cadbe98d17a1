use serde::{Deserialize, Serialize};

/// Knobs shared by the attainment search, the decision procedures and the
/// norm-minimization oracle.
///
/// `tol_decision` and `tol_attain` are relative: the absolute tolerance for
/// hull tests is `tol_decision` times a norm lower bound of the perturbing
/// map, and oracle comparisons use `tol_decision * |T|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol_decision: f64,
    pub tol_attain: f64,
    /// Relative gap under which two singular values count as tied.
    pub tol_gap: f64,
    pub seed: u64,
    /// Coarse bracketing grid per axis for the oracle's golden-section search.
    pub oracle_grid: usize,
    pub angle_count: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iter: 500,
            tol_decision: 1e-6,
            tol_attain: 1e-6,
            tol_gap: 1e-8,
            seed: 0,
            oracle_grid: 16,
            angle_count: 720,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        let positive = [self.tol_decision, self.tol_attain, self.tol_gap];
        if positive.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(crate::Error::Precondition("tolerances must be positive".into()));
        }
        if self.restarts == 0 || self.max_iter == 0 || self.angle_count < 8 || self.oracle_grid < 3 {
            return Err(crate::Error::Precondition(
                "restarts, max_iter must be positive; angle_count >= 8; oracle_grid >= 3".into(),
            ));
        }
        Ok(())
    }
}
