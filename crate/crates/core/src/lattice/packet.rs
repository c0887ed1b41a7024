use std::collections::BTreeSet;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::kspace::{build_ak, flatten_coords, KPoint, TransitionRule};
use crate::linalg::{fold_phase, UnitaryEigen, C64};

use super::fft::fft_nd;
use super::{LatticeError, SpinorField};

/// Internal state of a packet: the eigenvector of a sorted branch index
/// (continued mode by mode by projection), or a fixed spinor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SpinorChoice {
    Branch(usize),
    Custom(Vec<C64>),
}

/// Gaussian packet `ψ(k) ∝ exp(−|k − k₀|² / 4σ²)` truncated at `|k − k₀| ≤ 5σ`,
/// so that `σ` is the standard deviation of `|ψ(k)|²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacketSpec {
    pub k0: KPoint,
    pub width: f64,
    pub spinor: SpinorChoice,
}

impl PacketSpec {
    pub fn branch(k0: KPoint, width: f64, branch: usize) -> Self {
        Self {
            k0,
            width,
            spinor: SpinorChoice::Branch(branch),
        }
    }

    /// Position-space standard deviation of the untruncated packet.
    pub fn position_width(&self) -> f64 {
        1.0 / (2.0 * self.width)
    }
}

/// One occupied grid mode of a packet.
#[derive(Debug, Clone)]
pub struct PacketMode {
    /// Grid index `mⱼ ∈ 0..Lⱼ`.
    pub index: Vec<i64>,
    /// The image of the mode wave-vector nearest to `k₀`.
    pub k: KPoint,
    /// Unit-normalized over all modes: `Σ |amplitude|² = 1`.
    pub amplitude: Vec<C64>,
}

const TRUNCATION: f64 = 5.0;

/// The occupied modes of a packet on the wave-vector grid of `shape`. Only
/// modes inside the truncation ball are enumerated, so `shape` may describe
/// a torus far too large to store.
pub fn packet_modes(
    rule: &TransitionRule,
    shape: &[usize],
    spec: &PacketSpec,
) -> Result<Vec<PacketMode>, LatticeError> {
    let d = rule.dim();
    if shape.len() != d || spec.k0.dim() != d {
        return Err(LatticeError::ShapeMismatch {
            field: shape.to_vec(),
            field_s: rule.internal_dim,
            dim: d,
            rule_s: rule.internal_dim,
        });
    }
    if !(spec.width.is_finite() && spec.width > 0.0) {
        return Err(LatticeError::InvalidWidth(spec.width));
    }
    if !rule.lattice.brillouin_zone().contains(&spec.k0) {
        return Err(LatticeError::OutsideZone(spec.k0.0.clone()));
    }
    let spacing = rule.lattice.face_spacing();
    let needed = 6.0 * spec.position_width();
    for (axis, (&l, sp)) in shape.iter().zip(&spacing).enumerate() {
        let available = l as f64 * sp;
        if available < needed {
            return Err(LatticeError::WidthTooLarge {
                width: spec.width,
                axis,
                needed,
                available,
            });
        }
    }
    let s = rule.internal_dim;
    let v0: Vec<C64> = match &spec.spinor {
        SpinorChoice::Custom(v) => {
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if v.len() != s || n == 0.0 {
                return Err(LatticeError::InvalidSpinor {
                    got: v.len(),
                    expected: s,
                });
            }
            v.iter().map(|z| z / n).collect()
        }
        SpinorChoice::Branch(b) => {
            if *b >= s {
                return Err(LatticeError::InvalidSpinor {
                    got: *b,
                    expected: s,
                });
            }
            let eig = UnitaryEigen::new(&build_ak(rule, &spec.k0));
            eig.vectors.column(*b).iter().copied().collect()
        }
    };

    let kappa0 = rule.lattice.to_dual(&spec.k0);
    let radius = TRUNCATION * spec.width;
    // Dual components obey |Δκⱼ| ≤ |Δk| because every basis column has unit length.
    let ranges: Vec<(i64, i64)> = shape
        .iter()
        .zip(&kappa0)
        .map(|(&l, &k0)| {
            let c = (k0 * l as f64 / (2.0 * PI)).round() as i64;
            let h = (radius * l as f64 / (2.0 * PI)).ceil() as i64 + 1;
            (c - h, c + h)
        })
        .collect();
    let mut candidates = Vec::new();
    let mut seen = BTreeSet::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'outer: loop {
        let wrapped: Vec<i64> = cur
            .iter()
            .zip(shape)
            .map(|(&m, &l)| m.rem_euclid(l as i64))
            .collect();
        let kappa: Vec<f64> = cur
            .iter()
            .zip(shape)
            .map(|(&m, &l)| 2.0 * PI * m as f64 / l as f64)
            .collect();
        let k = rule.lattice.from_dual(&kappa);
        let dk: f64 = k
            .0
            .iter()
            .zip(&spec.k0.0)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        if dk <= radius && seen.insert(wrapped.clone()) {
            candidates.push((wrapped, k, dk));
        }
        for j in (0..d).rev() {
            cur[j] += 1;
            if cur[j] <= ranges[j].1 {
                continue 'outer;
            }
            cur[j] = ranges[j].0;
        }
        break;
    }

    let branch = match spec.spinor {
        SpinorChoice::Branch(b) => Some(b),
        SpinorChoice::Custom(_) => None,
    };
    let mut modes: Vec<PacketMode> = candidates
        .into_par_iter()
        .map(|(index, k, dk)| {
            let g = (-dk * dk / (4.0 * spec.width * spec.width)).exp();
            let spinor = match branch {
                Some(b) => project_branch(&build_ak(rule, &k), b, &v0),
                None => v0.clone(),
            };
            PacketMode {
                index,
                k,
                amplitude: spinor.iter().map(|z| z * g).collect(),
            }
        })
        .collect();
    let total: f64 = modes
        .iter()
        .flat_map(|m| m.amplitude.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    for m in &mut modes {
        for z in &mut m.amplitude {
            *z /= total;
        }
    }
    Ok(modes)
}

/// Normalized projection of `v0` onto the eigenspace of `ak` holding the
/// `branch`-th ascending eigenphase.
fn project_branch(ak: &crate::linalg::Mat, branch: usize, v0: &[C64]) -> Vec<C64> {
    let eig = UnitaryEigen::new(ak);
    let w = eig.phases[branch];
    let s = v0.len();
    let mut out = vec![C64::new(0.0, 0.0); s];
    for (j, &p) in eig.phases.iter().enumerate() {
        if fold_phase(p - w).abs() > 1e-9 {
            continue;
        }
        let col = eig.vectors.column(j);
        let overlap: C64 = col.iter().zip(v0).map(|(a, b)| a.conj() * b).sum();
        for (o, c) in out.iter_mut().zip(col.iter()) {
            *o += c * overlap;
        }
    }
    let n = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-8 {
        return eig.vectors.column(branch).iter().copied().collect();
    }
    out.iter().map(|z| z / n).collect()
}

/// Unit-norm packet centred at the origin.
pub fn make_packet(
    rule: &TransitionRule,
    shape: &[usize],
    spec: &PacketSpec,
) -> Result<SpinorField, LatticeError> {
    let modes = packet_modes(rule, shape, spec)?;
    let s = rule.internal_dim;
    let mut field = SpinorField::zeros(shape, s);
    rule.check_torus(shape)?;
    let scale = (field.sites() as f64).sqrt();
    for m in &modes {
        let i = flatten_coords(&m.index, shape) * s;
        for (c, a) in m.amplitude.iter().enumerate() {
            field.data[i + c] += a * scale;
        }
    }
    fft_nd(&mut field.data, shape, s, true);
    field.normalize();
    Ok(field)
}
