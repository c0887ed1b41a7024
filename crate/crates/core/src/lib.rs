//! Quantum cellular automata on Cayley graphs of `Zᵈ`.
//!
//! The crate builds the Weyl and Dirac automata, checks the unitarity and
//! isotropy constraints on their transition matrices, computes dispersion
//! relations and continuum limits, evolves wave packets on periodic lattices,
//! and verifies the bilinear Maxwell construction including the approximate
//! bosonic statistics of the polarization operators.

pub mod cayley;
pub mod kspace;
pub mod linalg;
pub mod models;
pub mod export;
pub mod lattice;
pub mod maxwell;
