use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::linalg::{dist, fro, identity_residual, Mat, C64};

use super::{KspaceError, TransitionRule};

#[derive(Debug, Clone, Serialize)]
pub struct DifferenceResidual {
    /// Integer difference vector `h'' = h' − h`.
    pub difference: Vec<i64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitarityReport {
    /// `max(‖Σ A†A − I‖, ‖Σ AA† − I‖)`.
    pub cond1: f64,
    /// One entry per nonzero difference vector; the larger of the two
    /// partial sums `Σ A_h† A_h'` and `Σ A_h' A_h†`.
    pub cond2: Vec<DifferenceResidual>,
    pub worst: f64,
    pub pass: bool,
}

/// Checks both lines of the unitarity conditions on the transition matrices,
/// grouping pairs by the exact integer vector `h⁻¹h'`.
pub fn unitarity_report(rule: &TransitionRule, tol: f64) -> UnitarityReport {
    let s = rule.internal_dim;
    let terms = rule.terms();
    let mut left: BTreeMap<Vec<i64>, Mat> = BTreeMap::new();
    let mut right: BTreeMap<Vec<i64>, Mat> = BTreeMap::new();
    for (h, ah) in &terms {
        for (hp, ahp) in &terms {
            let diff: Vec<i64> = hp.iter().zip(h).map(|(a, b)| a - b).collect();
            *left.entry(diff.clone()).or_insert_with(|| Mat::zeros(s, s)) += ah.adjoint() * *ahp;
            *right.entry(diff).or_insert_with(|| Mat::zeros(s, s)) += *ahp * ah.adjoint();
        }
    }
    let zero = vec![0i64; rule.dim()];
    let cond1 = identity_residual(&left[&zero]).max(identity_residual(&right[&zero]));
    let cond2: Vec<DifferenceResidual> = left
        .iter()
        .filter(|(d, _)| **d != zero)
        .map(|(d, m)| DifferenceResidual {
            difference: d.clone(),
            residual: fro(m).max(fro(&right[d])),
        })
        .collect();
    let worst = cond2.iter().map(|r| r.residual).fold(cond1, f64::max);
    UnitarityReport {
        cond1,
        cond2,
        worst,
        pass: worst <= tol,
    }
}

/// An element of the isotropy group: a permutation of the generator labels
/// together with its unitary representative on the internal space.
#[derive(Debug, Clone)]
pub struct IsotropyElement {
    pub name: String,
    pub permutation: BTreeMap<String, String>,
    pub unitary: Mat,
}

#[derive(Debug, Clone)]
pub struct IsotropyGroup {
    pub elements: Vec<IsotropyElement>,
}

impl IsotropyGroup {
    /// Builds the label permutations induced by orthogonal maps `R` acting on
    /// the generator embeddings (`l(h) = R h`).
    pub fn from_orthogonal(
        rule: &TransitionRule,
        elements: Vec<(String, DMatrix<f64>, Mat)>,
    ) -> Result<Self, KspaceError> {
        let mut out = Vec::with_capacity(elements.len());
        for (name, r, u) in elements {
            let mut permutation = BTreeMap::new();
            for g in &rule.generators {
                let image = &r * nalgebra::DVector::from_column_slice(&g.embed);
                let target = rule
                    .generators
                    .iter()
                    .find(|o| {
                        o.embed
                            .iter()
                            .zip(image.iter())
                            .all(|(a, b)| (a - b).abs() < 1e-9)
                    })
                    .ok_or_else(|| KspaceError::UnmappedGenerator(g.label.clone()))?;
                permutation.insert(g.label.clone(), target.label.clone());
            }
            out.push(IsotropyElement {
                name,
                permutation,
                unitary: u,
            });
        }
        Ok(Self { elements: out })
    }

    /// Representatives conjugated entrywise (`U → U*`), the group under which
    /// the transposed automaton is covariant.
    pub fn conjugated(&self) -> Self {
        Self {
            elements: self
                .elements
                .iter()
                .map(|e| IsotropyElement {
                    name: e.name.clone(),
                    permutation: e.permutation.clone(),
                    unitary: e.unitary.map(|z| z.conj()),
                })
                .collect(),
        }
    }

    /// Block-diagonal representatives `U ⊕ U`.
    pub fn doubled(&self) -> Self {
        Self {
            elements: self
                .elements
                .iter()
                .map(|e| {
                    let z = Mat::zeros(2, 2);
                    IsotropyElement {
                        name: e.name.clone(),
                        permutation: e.permutation.clone(),
                        unitary: crate::linalg::block2(&e.unitary, &z, &z, &e.unitary),
                    }
                })
                .collect(),
        }
    }

    /// Whether the permutations compose within the set and the unitaries
    /// follow the same multiplication table up to a sign, with distinct
    /// permutations carried by distinct elements.
    pub fn is_closed_projective(&self, tol: f64) -> bool {
        let compose = |a: &BTreeMap<String, String>, b: &BTreeMap<String, String>| {
            b.iter()
                .map(|(k, v)| (k.clone(), a[v].clone()))
                .collect::<BTreeMap<_, _>>()
        };
        for a in &self.elements {
            for b in &self.elements {
                let perm = compose(&a.permutation, &b.permutation);
                let product = &a.unitary * &b.unitary;
                let found = self.elements.iter().any(|c| {
                    c.permutation == perm && sign_equal(&product, &c.unitary, tol)
                });
                if !found {
                    return false;
                }
            }
        }
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                if a.permutation == b.permutation {
                    return false;
                }
            }
        }
        true
    }
}

fn sign_equal(a: &Mat, b: &Mat, tol: f64) -> bool {
    dist(a, b) <= tol || dist(a, &(-b)) <= tol
}

#[derive(Debug, Clone, Serialize)]
pub struct IsotropyReport {
    pub worst_residual: f64,
    pub transitive: bool,
    pub group_closed: bool,
    pub pass: bool,
}

/// `A_{l(h)} = U_l A_h U_l†` for every element and every `h ∈ S`, plus
/// transitivity of the group on `S₊`.
pub fn isotropy_check(
    rule: &TransitionRule,
    group: &IsotropyGroup,
    tol: f64,
) -> Result<IsotropyReport, KspaceError> {
    let mut worst: f64 = 0.0;
    for el in &group.elements {
        let u = &el.unitary;
        let ud = u.adjoint();
        for (g, ah) in rule.generators.iter().zip(&rule.matrices) {
            let image = el
                .permutation
                .get(&g.label)
                .ok_or_else(|| KspaceError::UnmappedGenerator(g.label.clone()))?;
            let target = rule
                .matrix(image)
                .ok_or_else(|| KspaceError::UnmappedGenerator(image.clone()))?;
            worst = worst.max(dist(target, &(u * ah * &ud)));
        }
        if let Some(ae) = &rule.identity {
            worst = worst.max(dist(ae, &(u * ae * &ud)));
        }
    }
    let positive: Vec<&str> = rule
        .generators
        .iter()
        .filter(|g| g.positive)
        .map(|g| g.label.as_str())
        .collect();
    let transitive = positive.iter().all(|h| {
        positive.iter().all(|target| {
            group
                .elements
                .iter()
                .any(|el| el.permutation.get(*h).map(String::as_str) == Some(*target))
        })
    });
    let group_closed = group.is_closed_projective(1e-9);
    Ok(IsotropyReport {
        worst_residual: worst,
        transitive,
        group_closed,
        pass: worst <= tol && transitive && group_closed,
    })
}

/// Replaces the transition matrix of direction `label` at one target site.
#[derive(Debug, Clone)]
pub struct SitePatch {
    pub site: Vec<i64>,
    pub label: String,
    pub matrix: Mat,
}

/// The one-particle evolution of a rule on a periodic torus `Z_L₁ × … ×
/// Z_L_d`, as a dense matrix. Amplitude at site `x` after one step is
/// `Σ_h A_h ψ(x − h)`.
#[derive(Debug, Clone)]
pub struct TorusOperator {
    pub shape: Vec<usize>,
    pub internal_dim: usize,
    pub matrix: Mat,
}

impl TorusOperator {
    pub fn new(
        rule: &TransitionRule,
        shape: &[usize],
        patches: &[SitePatch],
    ) -> Result<Self, KspaceError> {
        rule.check_torus(shape)?;
        let s = rule.internal_dim;
        let sites: usize = shape.iter().product();
        let mut m = Mat::zeros(sites * s, sites * s);
        let mut terms: Vec<(String, Vec<i64>, Mat)> = rule
            .generators
            .iter()
            .zip(&rule.matrices)
            .map(|(g, a)| (g.label.clone(), g.coords.clone(), a.clone()))
            .collect();
        if let Some(e) = &rule.identity {
            terms.push(("e".into(), vec![0; rule.dim()], e.clone()));
        }
        for x in 0..sites {
            let xc = unflatten_index(x, shape);
            for (label, h, a) in &terms {
                let src: Vec<i64> = xc.iter().zip(h).map(|(p, q)| p - q).collect();
                let y = flatten_coords(&src, shape);
                let block = patches
                    .iter()
                    .find(|p| p.label == *label && wrap(&p.site, shape) == xc)
                    .map(|p| &p.matrix)
                    .unwrap_or(a);
                let mut view = m.view_mut((x * s, y * s), (s, s));
                view += block;
            }
        }
        Ok(Self {
            shape: shape.to_vec(),
            internal_dim: s,
            matrix: m,
        })
    }

    /// `(T_a ψ)(x) = ψ(x − a)`.
    pub fn translation(&self, a: &[i64]) -> Mat {
        let s = self.internal_dim;
        let sites: usize = self.shape.iter().product();
        let mut t = Mat::zeros(sites * s, sites * s);
        for x in 0..sites {
            let xc = unflatten_index(x, &self.shape);
            let src: Vec<i64> = xc.iter().zip(a).map(|(p, q)| p - q).collect();
            let y = flatten_coords(&src, &self.shape);
            for c in 0..s {
                t[(x * s + c, y * s + c)] = C64::from(1.0);
            }
        }
        t
    }

    /// Largest `‖U T − T U‖` over the unit translations and `extra` shifts.
    pub fn commutation_residual(&self, extra: &[Vec<i64>]) -> f64 {
        let d = self.shape.len();
        let mut shifts: Vec<Vec<i64>> = (0..d)
            .map(|j| {
                let mut e = vec![0; d];
                e[j] = 1;
                e
            })
            .collect();
        shifts.extend_from_slice(extra);
        shifts
            .iter()
            .map(|a| {
                let t = self.translation(a);
                fro(&(&self.matrix * &t - &t * &self.matrix))
            })
            .fold(0.0, f64::max)
    }
}

fn wrap(c: &[i64], shape: &[usize]) -> Vec<i64> {
    c.iter()
        .zip(shape)
        .map(|(&x, &l)| x.rem_euclid(l as i64))
        .collect()
}

/// Row-major site index of integer coordinates, wrapped onto the torus.
pub fn flatten_coords(c: &[i64], shape: &[usize]) -> usize {
    c.iter()
        .zip(shape)
        .fold(0usize, |acc, (&x, &l)| acc * l + x.rem_euclid(l as i64) as usize)
}

/// Inverse of [`flatten_coords`] with coordinates in `0..L`.
pub fn unflatten_index(mut idx: usize, shape: &[usize]) -> Vec<i64> {
    let mut out = vec![0i64; shape.len()];
    for (o, &l) in out.iter_mut().zip(shape).rev() {
        *o = (idx % l) as i64;
        idx /= l;
    }
    out
}

/// Whether the torus evolution commutes with all translations. `shifts`
/// lists additional translation vectors checked beyond the unit ones.
pub fn translation_covariance_check(
    rule: &TransitionRule,
    shape: &[usize],
    patches: &[SitePatch],
    shifts: &[Vec<i64>],
    tol: f64,
) -> Result<bool, KspaceError> {
    let op = TorusOperator::new(rule, shape, patches)?;
    Ok(op.commutation_residual(shifts) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_roundtrip() {
        let shape = [3, 4, 5];
        for i in 0..60 {
            assert_eq!(flatten_coords(&unflatten_index(i, &shape), &shape), i);
        }
        assert_eq!(flatten_coords(&[-1, 0, 0], &shape), flatten_coords(&[2, 0, 0], &shape));
    }
}
