use std::f64::consts::PI;

use rayon::prelude::*;

use crate::kspace::{build_ak, flatten_coords, unflatten_index, KPoint, TransitionRule};
use crate::linalg::{Mat, C64};

use super::fft::fft_nd;
use super::{check_shape, LatticeError, SpinorField};

/// One step in position space: `ψ'(x) = A_e ψ(x) + Σ_h A_h ψ(x − h)`.
pub fn step_direct(rule: &TransitionRule, field: &SpinorField) -> Result<SpinorField, LatticeError> {
    check_shape(rule, field)?;
    let s = field.s;
    let shape = &field.shape;
    let mut terms: Vec<(Vec<i64>, Vec<C64>)> = rule
        .generators
        .iter()
        .zip(&rule.matrices)
        .map(|(g, m)| (g.coords.clone(), row_major(m)))
        .collect();
    if let Some(e) = &rule.identity {
        terms.push((vec![0; rule.dim()], row_major(e)));
    }
    let mut out = SpinorField::zeros(shape, s);
    out.data
        .par_chunks_mut(s)
        .enumerate()
        .for_each(|(site, dst)| {
            let x = unflatten_index(site, shape);
            for (h, a) in &terms {
                let src: Vec<i64> = x.iter().zip(h).map(|(p, q)| p - q).collect();
                let j = flatten_coords(&src, shape) * s;
                apply_flat(a, &field.data[j..j + s], dst);
            }
        });
    Ok(out)
}

fn row_major(m: &Mat) -> Vec<C64> {
    let s = m.nrows();
    (0..s * s).map(|i| m[(i / s, i % s)]).collect()
}

/// `dst += A v` for a row-major `s×s` matrix.
fn apply_flat(a: &[C64], v: &[C64], dst: &mut [C64]) {
    let s = v.len();
    for (i, d) in dst.iter_mut().enumerate() {
        let row = &a[i * s..(i + 1) * s];
        *d += row.iter().zip(v).map(|(x, y)| x * y).sum::<C64>();
    }
}

/// Per-mode multipliers `A_k^T` on the discrete wave-vector grid of a torus.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    pub shape: Vec<usize>,
    pub s: usize,
    pub steps: u32,
    blocks: Vec<C64>,
}

impl SpectralPropagator {
    pub fn new(rule: &TransitionRule, shape: &[usize], steps: u32) -> Result<Self, LatticeError> {
        rule.check_torus(shape)?;
        let s = rule.internal_dim;
        let modes: usize = shape.iter().product();
        let mut blocks = vec![C64::new(0.0, 0.0); modes * s * s];
        blocks
            .par_chunks_mut(s * s)
            .enumerate()
            .for_each(|(mode, dst)| {
                let k = mode_wavevector(rule, shape, mode);
                let p = matrix_power(&build_ak(rule, &k), steps);
                dst.copy_from_slice(&row_major(&p));
            });
        Ok(Self {
            shape: shape.to_vec(),
            s,
            steps,
            blocks,
        })
    }

    /// Multiplies k-space amplitudes in place.
    pub fn apply_kspace(&self, data: &mut [C64]) {
        let s = self.s;
        data.par_chunks_mut(s)
            .zip(self.blocks.par_chunks(s * s))
            .for_each(|(v, a)| {
                let src: Vec<C64> = v.to_vec();
                v.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                apply_flat(a, &src, v);
            });
    }

    pub fn apply(&self, field: &SpinorField) -> SpinorField {
        let mut out = field.clone();
        fft_nd(&mut out.data, &out.shape, out.s, false);
        self.apply_kspace(&mut out.data);
        fft_nd(&mut out.data, &out.shape, out.s, true);
        out
    }
}

/// Wave-vector of grid mode `mode`: dual coordinates `κⱼ = 2π mⱼ / Lⱼ`.
pub(crate) fn mode_wavevector(rule: &TransitionRule, shape: &[usize], mode: usize) -> KPoint {
    let m = unflatten_index(mode, shape);
    let kappa: Vec<f64> = m
        .iter()
        .zip(shape)
        .map(|(&mj, &l)| 2.0 * PI * mj as f64 / l as f64)
        .collect();
    rule.lattice.from_dual(&kappa)
}

pub(crate) fn matrix_power(m: &Mat, mut e: u32) -> Mat {
    let n = m.nrows();
    let mut result = Mat::identity(n, n);
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    result
}

/// One step in wave-vector space: transform, apply `A_k` per mode, transform
/// back.
pub fn step_spectral(rule: &TransitionRule, field: &SpinorField) -> Result<SpinorField, LatticeError> {
    evolve_spectral(rule, field, 1)
}

/// `steps` steps at once by applying `A_k^steps` per mode.
pub fn evolve_spectral(
    rule: &TransitionRule,
    field: &SpinorField,
    steps: u32,
) -> Result<SpinorField, LatticeError> {
    check_shape(rule, field)?;
    Ok(SpectralPropagator::new(rule, &field.shape, steps)?.apply(field))
}
