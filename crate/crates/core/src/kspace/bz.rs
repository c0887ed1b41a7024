use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LatticeKind;

/// A wave-vector in units of inverse embedding length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KPoint(pub Vec<f64>);

impl KPoint {
    pub fn new(components: &[f64]) -> Self {
        Self(components.to_vec())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &KPoint) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with_offset(&self, axis: usize, delta: f64) -> Self {
        let mut v = self.0.clone();
        v[axis] += delta;
        Self(v)
    }

    /// Components padded with zeros to three dimensions. One-dimensional
    /// wave-vectors are placed on the z axis, matching the `σ_z` convention of
    /// the one-dimensional Weyl automaton.
    pub fn to_3d(&self) -> [f64; 3] {
        match self.0.as_slice() {
            [k] => [0.0, 0.0, *k],
            [a, b] => [*a, *b, 0.0],
            [a, b, c] => [*a, *b, *c],
            _ => [0.0; 3],
        }
    }
}

/// First Brillouin zone of one of the supported lattices.
///
/// * BCC: `|kᵢ ± kⱼ| ≤ √3 π` for `i ≠ j`.
/// * square: `−√2 π ≤ kᵢ ≤ √2 π`.
/// * line: `−π ≤ k ≤ π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrillouinZone {
    pub kind: LatticeKind,
}

impl BrillouinZone {
    pub fn new(kind: LatticeKind) -> Self {
        Self { kind }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            LatticeKind::Line => 1,
            LatticeKind::Square => 2,
            LatticeKind::Bcc => 3,
        }
    }

    /// Half-width of the axis-aligned bounding box.
    pub fn half_extent(&self) -> f64 {
        match self.kind {
            LatticeKind::Line => PI,
            LatticeKind::Square => 2f64.sqrt() * PI,
            LatticeKind::Bcc => 3f64.sqrt() * PI,
        }
    }

    pub fn contains(&self, k: &KPoint) -> bool {
        if k.dim() != self.dim() || !k.is_finite() {
            return false;
        }
        let e = self.half_extent() * (1.0 + 1e-12);
        match self.kind {
            LatticeKind::Line | LatticeKind::Square => k.0.iter().all(|x| x.abs() <= e),
            LatticeKind::Bcc => {
                let v = &k.0;
                (0..3).all(|i| {
                    (0..3)
                        .filter(|&j| j != i)
                        .all(|j| (v[i] + v[j]).abs() <= e && (v[i] - v[j]).abs() <= e)
                })
            }
        }
    }

    /// Uniform rejection sample from the zone.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> KPoint {
        let e = self.half_extent();
        loop {
            let k = KPoint((0..self.dim()).map(|_| rng.random_range(-e..=e)).collect());
            if self.contains(&k) {
                return k;
            }
        }
    }

    /// Regular grid with `n` points per axis over the bounding box, filtered
    /// to the zone.
    pub fn grid(&self, n: usize) -> Vec<KPoint> {
        if n == 0 {
            return Vec::new();
        }
        let e = self.half_extent();
        let axis: Vec<f64> = if n == 1 {
            vec![0.0]
        } else {
            (0..n)
                .map(|i| -e + 2.0 * e * i as f64 / (n - 1) as f64)
                .collect()
        };
        let mut out = Vec::new();
        let d = self.dim();
        let total = n.pow(d as u32);
        for flat in 0..total {
            let mut rem = flat;
            let mut comps = vec![0.0; d];
            for c in comps.iter_mut().rev() {
                *c = axis[rem % n];
                rem /= n;
            }
            let k = KPoint(comps);
            if self.contains(&k) {
                out.push(k);
            }
        }
        out
    }
}
