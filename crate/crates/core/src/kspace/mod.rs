//! Wave-vector representation of Abelian automata: `A_k`, the unitarity and
//! isotropy constraints on the transition matrices, dispersion relations,
//! interpolating Hamiltonians, group velocities and translation covariance.

mod bz;
mod checks;
mod rule;
mod spectrum;

pub use bz::{BrillouinZone, KPoint};
pub use checks::{
    flatten_coords, isotropy_check, unflatten_index, translation_covariance_check, unitarity_report, DifferenceResidual,
    IsotropyElement, IsotropyGroup, IsotropyReport, SitePatch, TorusOperator, UnitarityReport,
};
pub use rule::{build_ak, reciprocal_vector, Lattice, LatticeKind, RuleGenerator, TransitionRule};
pub use spectrum::{
    dispersion, generic_multiplicity, group_velocity, interpolating_hamiltonian,
    linear_fit, small_k_residual_fit, FitResult, VelocityOptions,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KspaceError {
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("A_k is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },
    #[error("eigenphase {phase} touches the branch cut at ±π")]
    BranchCut { phase: f64 },
    #[error("branch {branch} is degenerate at k (multiplicity {found}, generic {generic})")]
    DegenerateBranch {
        branch: usize,
        found: usize,
        generic: usize,
    },
    #[error("branch index {branch} out of range for s = {s}")]
    BranchOutOfRange { branch: usize, s: usize },
    #[error("degenerate fit: all residuals below {floor:.1e} (max {max_residual:.3e})")]
    DegenerateFit { floor: f64, max_residual: f64 },
    #[error("fit needs magnitudes spanning a decade, got [{min:.3e}, {max:.3e}]")]
    NarrowFitRange { min: f64, max: f64 },
    #[error("generator {0} not mapped by the isotropy permutation")]
    UnmappedGenerator(String),
    #[error("neighbourhood wraps around the torus: {0}")]
    WrapAround(String),
}

/// Tolerance defaults: algebraic identities and spectral identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub algebraic: f64,
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-12,
            spectral: 1e-10,
        }
    }
}
