//! Accuracy targets for series evaluation in the special-function kernel.

use serde::{Deserialize, Serialize};

use crate::error::{JrcError, Result};

/// Precision targets for truncated series (generalized incomplete gamma and
/// the Rician product series).
///
/// A series term whose magnitude falls below `abs_tol` stops the summation;
/// if `max_terms` terms are consumed first, the evaluation reports
/// non-convergence instead of returning a silently truncated value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracySpec {
    /// Relative tolerance the final value is expected to meet.
    pub rel_tol: f64,
    /// Absolute magnitude below which a series term is considered spent.
    pub abs_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
}

impl AccuracySpec {
    /// Validates the invariants `rel_tol > 0`, `abs_tol > 0`, `max_terms >= 1`.
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(JrcError::InvalidConfig(format!(
                "AccuracySpec.rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0) {
            return Err(JrcError::InvalidConfig(format!(
                "AccuracySpec.abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(JrcError::InvalidConfig(
                "AccuracySpec.max_terms must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

impl Default for AccuracySpec {
    /// Defaults target a relative precision of 1e-6 with series terms
    /// truncated below 1e-25 absolute or at 200 terms.
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-25,
            max_terms: 200,
        }
    }
}
