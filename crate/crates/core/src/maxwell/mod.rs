//! The bilinear photon: the composite field `G = φᵀσψ`, its evolution as a
//! spin-1 rotation, the emergent Maxwell equations in wave-vector space, and
//! exact Fock-space checks of the approximate bosonic statistics of the
//! polarization operators.

mod fock;
mod rotation;

pub use fock::{
    adjoint, anticommutator, boson_commutator_deviation, build_fock, check_frame, commutator,
    deviation_csv, deviation_scan, excitation_family, frame_for, polarization_ops, sparse_norm,
    vacuum_norm, DeviationRow, FockAlgebra, ModeLabel, SmearingProfile, SparseOp, Species,
    DEFAULT_MODE_CAP,
};
pub use rotation::{
    conjugation_rotation_check, eb_fields, fields_from_pair, maxwell_residual, reconstruct_g,
    rotation, rotation_generator, rotation_sweep, transverse_project, GField, MaxwellReport,
    MaxwellSample, RotationReport, RotationSweep,
};

use thiserror::Error;

use crate::models::ModelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxwellError {
    #[error("rotation axis n vanishes; the transverse projection is undefined")]
    ZeroAxis,
    #[error("{modes} fermionic modes exceed the cap of {cap}")]
    CapExceeded { modes: usize, cap: usize },
    #[error("Fock space needs at least one mode per species")]
    EmptyFock,
    #[error("smearing profile is empty")]
    EmptyProfile,
    #[error("smearing profile needs {needed} modes per species, Fock space has {available}")]
    MissingModes { needed: usize, available: usize },
    #[error("smearing profile with {0} modes: an even count is required")]
    OddProfile(usize),
    #[error("polarization frame: {0}")]
    BadFrame(String),
    #[error("{m} excitations do not fit in {n_k} modes")]
    TooManyExcitations { m: usize, n_k: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}
