//! One-particle evolution on periodic lattices: wave packets, direct and
//! spectral stepping, centroid transport and the discrimination comparison
//! against a continuum Hamiltonian.

mod fft;
mod io;
mod packet;
mod step;
mod transport;

pub use io::{read_snapshot, trajectory_csv, write_snapshot};
pub use packet::{make_packet, packet_modes, PacketMode, PacketSpec, SpinorChoice};
pub(crate) use step::matrix_power;
pub use step::{evolve_spectral, step_direct, step_spectral, SpectralPropagator};
pub use transport::{
    centroid_velocity, discrimination_error, evolve_packet, helstrom_error, CentroidFit,
    Target, Trajectory, TrajectoryRow,
};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::kspace::KspaceError;
use crate::linalg::C64;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("field shape {field:?} (s = {field_s}) does not match rule (d = {dim}, s = {rule_s})")]
    ShapeMismatch {
        field: Vec<usize>,
        field_s: usize,
        dim: usize,
        rule_s: usize,
    },
    #[error("central wave-vector {0:?} lies outside the Brillouin zone")]
    OutsideZone(Vec<f64>),
    #[error("packet width must be positive and finite, got {0}")]
    InvalidWidth(f64),
    #[error("packet width {width} needs extent {needed:.1} along axis {axis}, lattice offers {available:.1}")]
    WidthTooLarge {
        width: f64,
        axis: usize,
        needed: f64,
        available: f64,
    },
    #[error("spinor has length {got}, expected {expected}, or zero norm")]
    InvalidSpinor { got: usize, expected: usize },
    #[error("packet wraps around the torus at step {step}")]
    WrapAround { step: usize },
    #[error("malformed snapshot: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Kspace(#[from] KspaceError),
}

/// Complex amplitudes `ψ(x, c)` on a periodic lattice `Z_L₁ × … × Z_L_d`
/// with `s` components per site. Sites are flattened row-major (last axis
/// fastest) and components are interleaved: `data[site * s + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub shape: Vec<usize>,
    pub s: usize,
    pub data: Vec<C64>,
}

impl SpinorField {
    pub fn zeros(shape: &[usize], s: usize) -> Self {
        let sites: usize = shape.iter().product();
        Self {
            shape: shape.to_vec(),
            s,
            data: vec![C64::new(0.0, 0.0); sites * s],
        }
    }

    /// Normalized field with independent Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(shape: &[usize], s: usize, rng: &mut R) -> Self {
        let mut f = Self::zeros(shape, s);
        for z in &mut f.data {
            *z = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
        }
        f.normalize();
        f
    }

    pub fn sites(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.data {
                *z /= n;
            }
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SpinorField) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn distance(&self, other: &SpinorField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn site_index(&self, coords: &[i64]) -> usize {
        crate::kspace::flatten_coords(coords, &self.shape)
    }

    pub fn set(&mut self, coords: &[i64], spinor: &[C64]) {
        let i = self.site_index(coords) * self.s;
        self.data[i..i + self.s].copy_from_slice(spinor);
    }

    pub fn get(&self, coords: &[i64]) -> &[C64] {
        let i = self.site_index(coords) * self.s;
        &self.data[i..i + self.s]
    }

    /// Probability per site.
    pub fn density(&self) -> Vec<f64> {
        self.data
            .chunks(self.s)
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }
}

pub(crate) fn check_shape(
    rule: &crate::kspace::TransitionRule,
    field: &SpinorField,
) -> Result<(), LatticeError> {
    if field.shape.len() != rule.dim() || field.s != rule.internal_dim {
        return Err(LatticeError::ShapeMismatch {
            field: field.shape.clone(),
            field_s: field.s,
            dim: rule.dim(),
            rule_s: rule.internal_dim,
        });
    }
    rule.check_torus(&field.shape)?;
    Ok(())
}
