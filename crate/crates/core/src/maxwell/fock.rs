use nalgebra_sparse::{CooMatrix, CscMatrix};
use serde::Serialize;

use crate::kspace::KPoint;
use crate::linalg::{dot3, norm3, pauli, real_cross, C64, ZERO};

use super::MaxwellError;

/// Sparse operator on the fermionic Fock space.
pub type SparseOp = CscMatrix<C64>;

/// Default bound on the total number of fermionic modes.
pub const DEFAULT_MODE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Species {
    Psi,
    Phi,
}

/// Mode `q` of one species; `q` indexes the offsets of a [`SmearingProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModeLabel {
    pub species: Species,
    pub q: usize,
}

/// Annihilation operators for `N` modes of `ψ` followed by `N` modes of `φ`,
/// built by the Jordan–Wigner construction on `2^{2N}` occupation states.
#[derive(Debug, Clone)]
pub struct FockAlgebra {
    pub modes_per_species: usize,
    pub dim: usize,
    pub labels: Vec<ModeLabel>,
    annihilators: Vec<SparseOp>,
}

pub fn build_fock(modes_per_species: usize, cap: usize) -> Result<FockAlgebra, MaxwellError> {
    let total = 2 * modes_per_species;
    if modes_per_species == 0 {
        return Err(MaxwellError::EmptyFock);
    }
    if total > cap {
        return Err(MaxwellError::CapExceeded { modes: total, cap });
    }
    let dim = 1usize << total;
    let annihilators = (0..total)
        .map(|j| {
            let mut coo = CooMatrix::new(dim, dim);
            for b in 0..dim {
                if b >> j & 1 == 1 {
                    let parity = (b & ((1 << j) - 1)).count_ones();
                    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
                    coo.push(b ^ (1 << j), b, C64::from(sign));
                }
            }
            CscMatrix::from(&coo)
        })
        .collect();
    let labels = (0..total)
        .map(|j| ModeLabel {
            species: if j < modes_per_species {
                Species::Psi
            } else {
                Species::Phi
            },
            q: j % modes_per_species,
        })
        .collect();
    Ok(FockAlgebra {
        modes_per_species,
        dim,
        labels,
        annihilators,
    })
}

impl FockAlgebra {
    pub fn modes(&self) -> usize {
        self.annihilators.len()
    }

    pub fn annihilator(&self, mode: usize) -> &SparseOp {
        &self.annihilators[mode]
    }

    pub fn creator(&self, mode: usize) -> SparseOp {
        adjoint(&self.annihilators[mode])
    }

    pub fn psi(&self, q: usize) -> &SparseOp {
        &self.annihilators[q]
    }

    pub fn phi(&self, q: usize) -> &SparseOp {
        &self.annihilators[self.modes_per_species + q]
    }

    pub fn number(&self, mode: usize) -> SparseOp {
        &self.creator(mode) * self.annihilator(mode)
    }

    /// Largest Frobenius residual of `{aᵢ, aⱼ} = 0` and `{aᵢ, aⱼ†} = δᵢⱼ`.
    pub fn car_residual(&self) -> f64 {
        let id = SparseOp::identity(self.dim);
        let mut worst: f64 = 0.0;
        for i in 0..self.modes() {
            for j in 0..self.modes() {
                let a = self.annihilator(i);
                let b = self.annihilator(j);
                worst = worst.max(sparse_norm(&anticommutator(a, b)));
                let mut ac = anticommutator(a, &self.creator(j));
                if i == j {
                    ac = &ac - &id;
                }
                worst = worst.max(sparse_norm(&ac));
            }
        }
        worst
    }

    /// Distinct eigenvalues of `aᵢ†aᵢ`, which is diagonal in the occupation
    /// basis.
    pub fn number_spectrum(&self, mode: usize) -> Vec<f64> {
        let n = self.number(mode);
        let mut diag = vec![0.0; self.dim];
        for (r, c, v) in n.triplet_iter() {
            if r == c {
                diag[r] = v.re;
            }
        }
        diag.sort_by(f64::total_cmp);
        diag.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        diag
    }

    /// The occupation-basis index with the given modes filled.
    pub fn basis_index(&self, occupied: &[usize]) -> usize {
        occupied.iter().fold(0, |acc, m| acc | 1 << m)
    }
}

pub fn adjoint(m: &SparseOp) -> SparseOp {
    let mut t = m.transpose();
    for v in t.values_mut() {
        *v = v.conj();
    }
    t
}

pub fn anticommutator(a: &SparseOp, b: &SparseOp) -> SparseOp {
    &(a * b) + &(b * a)
}

pub fn commutator(a: &SparseOp, b: &SparseOp) -> SparseOp {
    &(a * b) - &(b * a)
}

pub fn sparse_norm(m: &SparseOp) -> f64 {
    m.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Norm of column `c`, i.e. `‖M|c⟩‖` for a basis state.
fn column_norm(m: &SparseOp, c: usize) -> f64 {
    m.col(c).values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Uniform weights `f(q) = 1/√N_k` on a set of offsets `Ω_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmearingProfile {
    pub k: KPoint,
    pub offsets: Vec<KPoint>,
}

impl SmearingProfile {
    pub fn new(k: KPoint, offsets: Vec<KPoint>) -> Result<Self, MaxwellError> {
        if offsets.is_empty() {
            return Err(MaxwellError::EmptyProfile);
        }
        Ok(Self { k, offsets })
    }

    /// `N` offsets spaced by `spacing` along the first axis, centred on 0.
    pub fn line(k: KPoint, n: usize, spacing: f64) -> Result<Self, MaxwellError> {
        let d = k.dim();
        let offsets = (0..n)
            .map(|j| {
                let mut q = vec![0.0; d];
                if d > 0 {
                    q[0] = (j as f64 - (n as f64 - 1.0) / 2.0) * spacing;
                }
                KPoint(q)
            })
            .collect();
        Self::new(k, offsets)
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / (self.len() as f64).sqrt()
    }

    /// `Σ_q |f(q)|²`.
    pub fn normalization(&self) -> f64 {
        self.len() as f64 * self.weight().powi(2)
    }
}

/// Checks that `(u₁, u₂, n̂)` is orthonormal and right-handed.
pub fn check_frame(u1: &[f64; 3], u2: &[f64; 3], n: &[f64; 3]) -> Result<(), MaxwellError> {
    const TOL: f64 = 1e-12;
    let nn = norm3(n);
    if !(nn > 0.0) {
        return Err(MaxwellError::ZeroAxis);
    }
    let hat = n.map(|x| x / nn);
    let checks = [
        ("|u1| = 1", (norm3(u1) - 1.0).abs()),
        ("|u2| = 1", (norm3(u2) - 1.0).abs()),
        ("u1·u2 = 0", dot3(u1, u2).abs()),
        ("u1·n = 0", dot3(u1, &hat).abs()),
        ("u2·n = 0", dot3(u2, &hat).abs()),
    ];
    for (what, r) in checks {
        if r > TOL {
            return Err(MaxwellError::BadFrame(format!("{what} violated by {r:.3e}")));
        }
    }
    if dot3(&real_cross(u1, u2), &hat) <= 0.0 {
        return Err(MaxwellError::BadFrame("frame is left-handed".into()));
    }
    Ok(())
}

/// A right-handed polarization frame transverse to `n`.
pub fn frame_for(n: &[f64; 3]) -> Result<([f64; 3], [f64; 3]), MaxwellError> {
    let nn = norm3(n);
    if !(nn > 0.0) {
        return Err(MaxwellError::ZeroAxis);
    }
    let hat = n.map(|x| x / nn);
    let seed = if hat[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let mut u1 = real_cross(&seed, &hat);
    let m = norm3(&u1);
    u1 = u1.map(|x| x / m);
    let u2 = real_cross(&hat, &u1);
    Ok((u1, u2))
}

/// `σ·n̂` eigenvectors `(|+n̂⟩, |−n̂⟩)`.
fn helicity_spinors(hat: &[f64; 3]) -> ([C64; 2], [C64; 2]) {
    let theta = hat[2].clamp(-1.0, 1.0).acos();
    let phi = hat[1].atan2(hat[0]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = C64::from_polar(1.0, phi);
    (
        [C64::from(c), e * s],
        [-e.conj() * s, C64::from(c)],
    )
}

/// `Σ_ab χ_φ,a σ_ab χ_ψ,b` for the three Pauli matrices.
fn spinor_bilinear(chi_phi: &[C64; 2], chi_psi: &[C64; 2]) -> [C64; 3] {
    let sig = pauli();
    let mut out = [ZERO; 3];
    for (o, s) in out.iter_mut().zip(&sig) {
        for a in 0..2 {
            for b in 0..2 {
                *o += chi_phi[a] * s[(a, b)] * chi_psi[b];
            }
        }
    }
    out
}

/// `γʲ = uʲ·F` with `Fⁱ = Σ_q f(q) (χ_φᵀ σⁱ χ_ψ) φ_q ψ_q`.
///
/// Each mode carries a fixed helicity spinor: on even `q`, `ψ` is in `|+n̂⟩`
/// and `φ` in `|−n̂⟩*`; odd `q` swap the two. This makes `|uʲ·c(q)| = 1` and,
/// for an even number of modes, `Σ_q (u¹·c)(u²·c)* = 0`.
pub fn polarization_ops(
    fock: &FockAlgebra,
    profile: &SmearingProfile,
    u1: &[f64; 3],
    u2: &[f64; 3],
    n: &[f64; 3],
) -> Result<(SparseOp, SparseOp), MaxwellError> {
    check_frame(u1, u2, n)?;
    let nk = profile.len();
    if nk > fock.modes_per_species {
        return Err(MaxwellError::MissingModes {
            needed: nk,
            available: fock.modes_per_species,
        });
    }
    if nk % 2 == 1 {
        return Err(MaxwellError::OddProfile(nk));
    }
    let nn = norm3(n);
    let hat = n.map(|x| x / nn);
    let (plus, minus) = helicity_spinors(&hat);
    let conj = |v: [C64; 2]| v.map(|z| z.conj());
    let f = C64::from(profile.weight());
    let mut g1 = SparseOp::zeros(fock.dim, fock.dim);
    let mut g2 = SparseOp::zeros(fock.dim, fock.dim);
    for q in 0..nk {
        let (chi_psi, chi_phi) = if q % 2 == 0 {
            (plus, conj(minus))
        } else {
            (minus, conj(plus))
        };
        let c = spinor_bilinear(&chi_phi, &chi_psi);
        let w1 = c[0] * u1[0] + c[1] * u1[1] + c[2] * u1[2];
        let w2 = c[0] * u2[0] + c[1] * u2[1] + c[2] * u2[2];
        let pair = fock.phi(q) * fock.psi(q);
        g1 = &g1 + &(&pair * (f * w1));
        g2 = &g2 + &(&pair * (f * w2));
    }
    Ok((g1, g2))
}

/// `⟨0|γ γ†|0⟩`.
pub fn vacuum_norm(gamma: &SparseOp) -> f64 {
    let gg = gamma * &adjoint(gamma);
    gg.get_entry(0, 0).map(|e| e.into_value().re).unwrap_or(0.0)
}

/// Occupation states with `m` excitations of each species inside the first
/// `n_k` modes, every choice of occupied `q` for `ψ` and for `φ`.
pub fn excitation_family(
    fock: &FockAlgebra,
    n_k: usize,
    m: usize,
) -> Result<Vec<usize>, MaxwellError> {
    if m > n_k {
        return Err(MaxwellError::TooManyExcitations { m, n_k });
    }
    let subsets = combinations(n_k, m);
    let off = fock.modes_per_species;
    let mut out = Vec::with_capacity(subsets.len() * subsets.len());
    for a in &subsets {
        for b in &subsets {
            let modes: Vec<usize> = a.iter().copied().chain(b.iter().map(|q| q + off)).collect();
            out.push(fock.basis_index(&modes));
        }
    }
    Ok(out)
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// `max ‖([γⁱ, γʲ†] − δᵢⱼ)|s⟩‖` over `i, j ∈ {1, 2}` and the states of
/// [`excitation_family`].
pub fn boson_commutator_deviation(
    fock: &FockAlgebra,
    gammas: &(SparseOp, SparseOp),
    n_k: usize,
    m: usize,
) -> Result<f64, MaxwellError> {
    let states = excitation_family(fock, n_k, m)?;
    let gs = [&gammas.0, &gammas.1];
    let id = SparseOp::identity(fock.dim);
    let mut worst: f64 = 0.0;
    for (i, gi) in gs.iter().enumerate() {
        for (j, gj) in gs.iter().enumerate() {
            let mut c = commutator(gi, &adjoint(gj));
            if i == j {
                c = &c - &id;
            }
            for &s in &states {
                worst = worst.max(column_norm(&c, s));
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationRow {
    pub n_k: usize,
    pub m: usize,
    pub deviation: f64,
}

/// Commutator deviation for every `(N_k, M)` with `M ≤ N_k`, using `N_k`
/// modes per species and a frame transverse to `n`.
pub fn deviation_scan(
    sizes: &[usize],
    excitations: &[usize],
    n: &[f64; 3],
    cap: usize,
) -> Result<Vec<DeviationRow>, MaxwellError> {
    let (u1, u2) = frame_for(n)?;
    let mut rows = Vec::new();
    for &n_k in sizes {
        let fock = build_fock(n_k, cap)?;
        let profile = SmearingProfile::line(KPoint::zero(3), n_k, 1.0)?;
        let gammas = polarization_ops(&fock, &profile, &u1, &u2, n)?;
        for &m in excitations.iter().filter(|&&m| m <= n_k) {
            rows.push(DeviationRow {
                n_k,
                m,
                deviation: boson_commutator_deviation(&fock, &gammas, n_k, m)?,
            });
        }
    }
    Ok(rows)
}

/// CSV with columns `N_k, M, deviation`.
pub fn deviation_csv(rows: &[DeviationRow]) -> String {
    let mut out = String::from("N_k,M,deviation\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.15e}\n", r.n_k, r.m, r.deviation));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_relations() {
        let f = build_fock(1, DEFAULT_MODE_CAP).unwrap();
        let id = SparseOp::identity(f.dim);
        let a = f.annihilator(0);
        assert_eq!(sparse_norm(&(&anticommutator(a, &f.creator(0)) - &id)), 0.0);
        assert_eq!(sparse_norm(&anticommutator(a, f.annihilator(1))), 0.0);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(6, 2).len(), 15);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn helicity_eigenvectors() {
        let hat = [0.48, -0.6, 0.64];
        let (p, m) = helicity_spinors(&hat);
        let s = crate::linalg::sigma_dot(&hat);
        for (v, sign) in [(p, 1.0), (m, -1.0)] {
            for r in 0..2 {
                let lhs = s[(r, 0)] * v[0] + s[(r, 1)] * v[1];
                assert!((lhs - v[r] * sign).norm() < 1e-14);
            }
        }
    }
}
