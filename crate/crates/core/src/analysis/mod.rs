//! Analyses built on the pointwise invariants: the Ejiri basis, the
//! Tchebychev test, the identities forced by `∇̂K = μS`, and classification
//! of points and samples.

mod classify;
mod ejiri;
mod identities;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use classify::{
    aggregate, classify_point, classify_surface, PointClassification, Predicates, SkippedPoint,
    SurfaceClassification, Verdict,
};
pub use ejiri::{ejiri_basis, EjiriBasis};
pub use identities::{
    isotropy_deviation, mu_gradient, proof_identity_check, tchebychev_check, IdentityResiduals, IdentityStatus,
    TchebychevCheck, MU_STEP,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("cubic form maximization did not converge from any start at {point:?}")]
    OptimizerFailed { point: Vec<f64> },
    #[error("no point of the sample could be evaluated ({skipped} skipped)")]
    EmptySample { skipped: usize },
}

/// Thresholds, each relative to `1 + magnitude` where the predicate says so.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Vanishing of `K`, `K̃`, `∇̂K`.
    pub zero: f64,
    /// Inequality slack counted as equality.
    pub equality: f64,
    /// `∇̂T = λ·id`.
    pub tchebychev: f64,
    /// `∇̂K = μS` before the identities are claimed.
    pub isotropy: f64,
    /// Gauss, Codazzi and symmetry residuals.
    pub structure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { zero: 1e-7, equality: 1e-8, tchebychev: 1e-7, isotropy: 1e-7, structure: 1e-8 }
    }
}

impl Tolerances {
    pub fn scaled(&self, factor: f64) -> Tolerances {
        Tolerances {
            zero: self.zero * factor,
            equality: self.equality * factor,
            tchebychev: self.tchebychev * factor,
            isotropy: self.isotropy * factor,
            structure: self.structure * factor,
        }
    }
}
