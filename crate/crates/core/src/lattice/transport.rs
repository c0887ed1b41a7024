use rayon::prelude::*;
use serde::Serialize;

use crate::kspace::{build_ak, flatten_coords, unflatten_index, KPoint, TransitionRule};
use crate::linalg::{exp_minus_i, Mat, C64};

use super::fft::fft_nd;
use super::packet::{packet_modes, PacketMode, PacketSpec};
use super::step::matrix_power;
use super::{LatticeError, SpinorField};

pub type Target<'a> = &'a (dyn Fn(&KPoint) -> Mat + Sync);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: usize,
    /// Position expectation in embedding coordinates.
    pub centroid: Vec<f64>,
    pub norm: f64,
    /// `|⟨ψ_A(t)|ψ_H(t)⟩|` when a continuum target is given.
    pub overlap: Option<f64>,
    pub p_error: Option<f64>,
    pub wrapped: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    /// First step at which the packet reached around the torus.
    pub wrapped_at: Option<usize>,
}

fn mat_vec(m: &Mat, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Minimum error probability for discriminating two unit vectors,
/// `(1 − √(1 − |⟨a|b⟩|²)) / 2`, with `1 − |⟨a|b⟩|²` evaluated as
/// `‖b − ⟨a|b⟩ a‖²` to keep precision near coincidence.
pub fn helstrom_error(a: &[C64], b: &[C64]) -> f64 {
    let ov = cdot(a, b);
    let perp: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (y - x * ov).norm_sqr())
        .sum();
    (1.0 - perp.clamp(0.0, 1.0).sqrt()) / 2.0
}

struct Centroid {
    integer: Vec<f64>,
    spread: Vec<f64>,
}

/// Mean position of `density` measured by increments around `prev`, so that
/// crossing the periodic boundary does not cause jumps.
fn centroid(density: &[f64], shape: &[usize], prev: &[f64]) -> Centroid {
    let d = shape.len();
    let (mut sum, mut moment) = (0.0, vec![0.0; d]);
    let mut second = vec![0.0; d];
    for (site, &p) in density.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let x = unflatten_index(site, shape);
        sum += p;
        for j in 0..d {
            let l = shape[j] as f64;
            let delta = (x[j] as f64 - prev[j] + l / 2.0).rem_euclid(l) - l / 2.0;
            moment[j] += p * delta;
            second[j] += p * delta * delta;
        }
    }
    let mean: Vec<f64> = moment.iter().map(|m| m / sum).collect();
    Centroid {
        integer: prev.iter().zip(&mean).map(|(a, b)| a + b).collect(),
        spread: second
            .iter()
            .zip(&mean)
            .map(|(s2, m)| (s2 / sum - m * m).max(0.0).sqrt())
            .collect(),
    }
}

fn evolve_modes(rule: &TransitionRule, modes: &[PacketMode], steps: u32) -> Vec<Vec<C64>> {
    modes
        .par_iter()
        .map(|m| mat_vec(&matrix_power(&build_ak(rule, &m.k), steps), &m.amplitude))
        .collect()
}

fn evolve_target(target: Target<'_>, modes: &[PacketMode], time: f64) -> Vec<Vec<C64>> {
    modes
        .par_iter()
        .map(|m| mat_vec(&exp_minus_i(&(target(&m.k) * C64::from(time))), &m.amplitude))
        .collect()
}

/// Evolves a packet for `steps` steps, recording its centroid, norm and, if
/// a target Hamiltonian is given, the overlap with the continuum evolution
/// `exp(−iH(k)t)` and the corresponding error probability.
///
/// A row is flagged as wrapped once, along some axis, the packet overlaps
/// its own periodic image (six spreads exceed the torus) or its leading tail
/// reaches the tail of the initial packet after travelling around.
pub fn evolve_packet(
    rule: &TransitionRule,
    shape: &[usize],
    spec: &PacketSpec,
    steps: usize,
    target: Option<Target<'_>>,
) -> Result<Trajectory, LatticeError> {
    rule.check_torus(shape)?;
    let modes = packet_modes(rule, shape, spec)?;
    let s = rule.internal_dim;
    let sites: usize = shape.iter().product();
    let scale = (sites as f64).sqrt();
    let step_ops: Vec<Mat> = modes.par_iter().map(|m| build_ak(rule, &m.k)).collect();
    let target_ops: Option<Vec<Mat>> = target.map(|h| {
        modes
            .par_iter()
            .map(|m| exp_minus_i(&h(&m.k)))
            .collect()
    });
    let mut auto: Vec<Vec<C64>> = modes.iter().map(|m| m.amplitude.clone()).collect();
    let mut cont = auto.clone();

    let mut rows = Vec::with_capacity(steps + 1);
    let mut prev = vec![0.0; shape.len()];
    let mut start: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut wrapped_at = None;
    for t in 0..=steps {
        if t > 0 {
            auto.par_iter_mut()
                .zip(&step_ops)
                .for_each(|(v, a)| *v = mat_vec(a, v));
            if let Some(ops) = &target_ops {
                cont.par_iter_mut()
                    .zip(ops)
                    .for_each(|(v, u)| *v = mat_vec(u, v));
            }
        }
        let mut field = SpinorField::zeros(shape, s);
        for (m, a) in modes.iter().zip(&auto) {
            let i = flatten_coords(&m.index, shape) * s;
            for (c, z) in a.iter().enumerate() {
                field.data[i + c] += z * scale;
            }
        }
        fft_nd(&mut field.data, shape, s, true);
        let c = centroid(&field.density(), shape, &prev);
        let (origin, spread0) = start
            .get_or_insert_with(|| (c.integer.clone(), c.spread.clone()))
            .clone();
        let wrapped = (0..shape.len()).any(|j| {
            let l = shape[j] as f64;
            let travelled = (c.integer[j] - origin[j]).abs();
            6.0 * c.spread[j] > l || travelled + 3.0 * (c.spread[j] + spread0[j]) > l
        });
        if wrapped && wrapped_at.is_none() {
            wrapped_at = Some(t);
        }
        prev = c.integer.clone();
        let (overlap, p_error) = if target_ops.is_some() {
            let a: Vec<C64> = auto.concat();
            let b: Vec<C64> = cont.concat();
            (Some(cdot(&a, &b).norm()), Some(helstrom_error(&a, &b)))
        } else {
            (None, None)
        };
        rows.push(TrajectoryRow {
            t,
            centroid: embed_real(rule, &c.integer),
            norm: field.norm(),
            overlap,
            p_error,
            wrapped,
        });
    }
    Ok(Trajectory { rows, wrapped_at })
}

fn embed_real(rule: &TransitionRule, x: &[f64]) -> Vec<f64> {
    let v = nalgebra::DVector::from_column_slice(x);
    (&rule.lattice.basis * v).iter().copied().collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CentroidFit {
    /// Least-squares slope of the centroid, embedding units per step.
    pub velocity: Vec<f64>,
    pub trajectory: Trajectory,
}

/// Centroid velocity of a packet over `steps` steps.
pub fn centroid_velocity(
    rule: &TransitionRule,
    shape: &[usize],
    spec: &PacketSpec,
    steps: usize,
) -> Result<CentroidFit, LatticeError> {
    let trajectory = evolve_packet(rule, shape, spec, steps, None)?;
    if let Some(step) = trajectory.wrapped_at {
        return Err(LatticeError::WrapAround { step });
    }
    let ts: Vec<f64> = trajectory.rows.iter().map(|r| r.t as f64).collect();
    let velocity = (0..rule.dim())
        .map(|j| {
            let xs: Vec<f64> = trajectory.rows.iter().map(|r| r.centroid[j]).collect();
            crate::kspace::linear_fit(&ts, &xs).0
        })
        .collect();
    Ok(CentroidFit {
        velocity,
        trajectory,
    })
}

/// Error probability for telling apart `A^T ψ` and `exp(−iHT) ψ` for the
/// packet `ψ`. Works on the occupied modes only, so `shape` may be a torus
/// much larger than memory permits.
pub fn discrimination_error(
    rule: &TransitionRule,
    target: Target<'_>,
    shape: &[usize],
    spec: &PacketSpec,
    steps: u32,
) -> Result<f64, LatticeError> {
    let modes = packet_modes(rule, shape, spec)?;
    let a: Vec<C64> = evolve_modes(rule, &modes, steps).concat();
    let b: Vec<C64> = evolve_target(target, &modes, steps as f64).concat();
    Ok(helstrom_error(&a, &b))
}
