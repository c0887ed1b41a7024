use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cayley::GroupPresentation;
use crate::linalg::{Mat, C64};

use super::{BrillouinZone, KPoint, KspaceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Line,
    Square,
    Bcc,
}

/// A Cayley graph of `Zᵈ` together with its isotropic Euclidean embedding.
///
/// Integer coordinates are expressed in the basis of the first `d`
/// generators; `basis` holds the embedding of those unit vectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub kind: LatticeKind,
    pub dim: usize,
    pub basis: DMatrix<f64>,
    /// `S₊` as (label, integer coordinates).
    pub positive: Vec<(String, Vec<i64>)>,
}

impl Lattice {
    pub fn line() -> Self {
        Self {
            kind: LatticeKind::Line,
            dim: 1,
            basis: DMatrix::from_element(1, 1, 1.0),
            positive: vec![("h".into(), vec![1])],
        }
    }

    /// Square lattice with `h₁ = (1,1)/√2`, `h₂ = (1,−1)/√2`.
    pub fn square() -> Self {
        let r = 1.0 / 2f64.sqrt();
        Self {
            kind: LatticeKind::Square,
            dim: 2,
            basis: DMatrix::from_row_slice(2, 2, &[r, r, r, -r]),
            positive: vec![("h1".into(), vec![1, 0]), ("h2".into(), vec![0, 1])],
        }
    }

    /// BCC lattice: `h₁ = (1,1,1)/√3`, `h₂ = (1,−1,−1)/√3`,
    /// `h₃ = (−1,1,−1)/√3`, `h₄ = (−1,−1,1)/√3 = −(h₁+h₂+h₃)`.
    pub fn bcc() -> Self {
        let r = 1.0 / 3f64.sqrt();
        #[rustfmt::skip]
        let basis = DMatrix::from_row_slice(3, 3, &[
            r,  r, -r,
            r, -r,  r,
            r, -r, -r,
        ]);
        Self {
            kind: LatticeKind::Bcc,
            dim: 3,
            basis,
            positive: vec![
                ("h1".into(), vec![1, 0, 0]),
                ("h2".into(), vec![0, 1, 0]),
                ("h3".into(), vec![0, 0, 1]),
                ("h4".into(), vec![-1, -1, -1]),
            ],
        }
    }

    pub fn for_dim(dim: usize) -> Option<Self> {
        match dim {
            1 => Some(Self::line()),
            2 => Some(Self::square()),
            3 => Some(Self::bcc()),
            _ => None,
        }
    }

    pub fn embed(&self, coords: &[i64]) -> Vec<f64> {
        let x = nalgebra::DVector::from_iterator(self.dim, coords.iter().map(|&c| c as f64));
        (&self.basis * x).iter().copied().collect()
    }

    /// Wave-vector in the integer-coordinate dual: `κ = Bᵀ k`, so that
    /// `k · embed(x) = κ · x`.
    pub fn to_dual(&self, k: &KPoint) -> Vec<f64> {
        let kv = nalgebra::DVector::from_column_slice(&k.0);
        (self.basis.transpose() * kv).iter().copied().collect()
    }

    /// Inverse of [`Lattice::to_dual`].
    pub fn from_dual(&self, kappa: &[f64]) -> KPoint {
        let inv = self
            .basis
            .transpose()
            .try_inverse()
            .expect("lattice basis is invertible");
        let kv = nalgebra::DVector::from_column_slice(kappa);
        KPoint((inv * kv).iter().copied().collect())
    }

    /// `S = S₊ ∪ S₋` with embeddings; inverse labels carry a `^-1` suffix.
    pub fn generators(&self) -> Vec<RuleGenerator> {
        let mut out = Vec::with_capacity(2 * self.positive.len());
        for (label, coords) in &self.positive {
            out.push(RuleGenerator {
                label: label.clone(),
                coords: coords.clone(),
                embed: self.embed(coords),
                positive: true,
            });
        }
        for (label, coords) in &self.positive {
            let neg: Vec<i64> = coords.iter().map(|x| -x).collect();
            out.push(RuleGenerator {
                label: format!("{label}^-1"),
                embed: self.embed(&neg),
                coords: neg,
                positive: false,
            });
        }
        out
    }

    pub fn brillouin_zone(&self) -> BrillouinZone {
        BrillouinZone::new(self.kind)
    }

    /// The matching declared-Abelian group presentation.
    pub fn presentation(&self) -> GroupPresentation {
        match self.kind {
            LatticeKind::Line => GroupPresentation::z1(),
            LatticeKind::Square => GroupPresentation::square(),
            LatticeKind::Bcc => GroupPresentation::bcc(),
        }
    }

    /// Extent of the unit cell along each face normal, used to size tori.
    pub fn face_spacing(&self) -> Vec<f64> {
        let inv = self.basis.clone().try_inverse().expect("invertible");
        (0..self.dim)
            .map(|j| 1.0 / inv.row(j).norm())
            .collect()
    }
}

/// A neighbour direction `h ∈ S`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleGenerator {
    pub label: String,
    pub coords: Vec<i64>,
    pub embed: Vec<f64>,
    /// Member of `S₊` (as opposed to `S₋`).
    pub positive: bool,
}

/// A homogeneous linear automaton `A = Σ_h T_h ⊗ A_h` on a Cayley graph of
/// `Zᵈ`, with an optional self-interaction term `A_e`.
#[derive(Debug, Clone)]
pub struct TransitionRule {
    pub name: String,
    pub lattice: Lattice,
    /// Internal dimension `s`.
    pub internal_dim: usize,
    pub generators: Vec<RuleGenerator>,
    /// `A_h`, parallel to `generators`.
    pub matrices: Vec<Mat>,
    pub identity: Option<Mat>,
}

impl TransitionRule {
    pub fn new(
        name: impl Into<String>,
        lattice: Lattice,
        generators: Vec<RuleGenerator>,
        matrices: Vec<Mat>,
        identity: Option<Mat>,
    ) -> Result<Self, KspaceError> {
        if generators.len() != matrices.len() || matrices.is_empty() && identity.is_none() {
            return Err(KspaceError::InvalidRule(
                "one matrix per generator is required".into(),
            ));
        }
        let s = matrices
            .first()
            .or(identity.as_ref())
            .map(|m| m.nrows())
            .unwrap_or(0);
        if matrices
            .iter()
            .chain(identity.iter())
            .any(|m| m.nrows() != s || m.ncols() != s)
        {
            return Err(KspaceError::InvalidRule("matrices must be s×s".into()));
        }
        for g in &generators {
            if g.coords.len() != lattice.dim {
                return Err(KspaceError::DimensionMismatch {
                    expected: lattice.dim,
                    got: g.coords.len(),
                });
            }
            let neg: Vec<i64> = g.coords.iter().map(|x| -x).collect();
            if !generators.iter().any(|o| o.coords == neg) {
                return Err(KspaceError::InvalidRule(format!(
                    "generator set is not closed under inversion at {}",
                    g.label
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            lattice,
            internal_dim: s,
            generators,
            matrices,
            identity,
        })
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn matrix(&self, label: &str) -> Option<&Mat> {
        self.index_of(label).map(|i| &self.matrices[i])
    }

    /// All `(integer coordinates, A)` terms, including `A_e` at the origin.
    pub fn terms(&self) -> Vec<(Vec<i64>, &Mat)> {
        let mut out: Vec<(Vec<i64>, &Mat)> = self
            .generators
            .iter()
            .zip(&self.matrices)
            .map(|(g, m)| (g.coords.clone(), m))
            .collect();
        if let Some(e) = &self.identity {
            out.push((vec![0; self.dim()], e));
        }
        out
    }

    /// Copy with every `A_h` (not `A_e`) multiplied by `factor`.
    pub fn perturbed(&self, factor: f64) -> Self {
        let mut r = self.clone();
        for m in &mut r.matrices {
            *m *= C64::from(factor);
        }
        r.name = format!("{} (scaled {factor})", self.name);
        r
    }

    /// Identity automaton `A_e = I`, `A_h = 0`.
    pub fn identity_rule(lattice: Lattice, s: usize) -> Self {
        let gens = lattice.generators();
        let mats = vec![Mat::zeros(s, s); gens.len()];
        Self::new("identity", lattice, gens, mats, Some(Mat::identity(s, s)))
            .expect("identity rule is valid")
    }

    /// Rejects tori on which two distinct neighbourhood offsets coincide.
    pub fn check_torus(&self, shape: &[usize]) -> Result<(), KspaceError> {
        if shape.len() != self.dim() {
            return Err(KspaceError::DimensionMismatch {
                expected: self.dim(),
                got: shape.len(),
            });
        }
        let wrap = |c: &[i64]| -> Vec<i64> {
            c.iter()
                .zip(shape)
                .map(|(&x, &l)| x.rem_euclid(l as i64))
                .collect()
        };
        let mut offsets: Vec<Vec<i64>> = self.generators.iter().map(|g| g.coords.clone()).collect();
        offsets.push(vec![0; self.dim()]);
        for i in 0..offsets.len() {
            for j in (i + 1)..offsets.len() {
                if wrap(&offsets[i]) == wrap(&offsets[j]) {
                    return Err(KspaceError::WrapAround(format!(
                        "offsets {:?} and {:?} coincide on torus {:?}",
                        offsets[i], offsets[j], shape
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `A_k = A_e + Σ_h e^{−i k·h} A_h`.
pub fn build_ak(rule: &TransitionRule, k: &KPoint) -> Mat {
    let s = rule.internal_dim;
    let mut ak = rule.identity.clone().unwrap_or_else(|| Mat::zeros(s, s));
    for (g, m) in rule.generators.iter().zip(&rule.matrices) {
        let phase = C64::from_polar(1.0, -k.dot(&g.embed));
        ak += m * phase;
    }
    ak
}

/// Reciprocal-lattice period along dual axis `j`: `k → k + from_dual(2π eⱼ)`.
pub fn reciprocal_vector(lattice: &Lattice, j: usize) -> KPoint {
    let mut kappa = vec![0.0; lattice.dim];
    kappa[j] = 2.0 * PI;
    lattice.from_dual(&kappa)
}
