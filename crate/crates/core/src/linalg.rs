//! Small dense complex linear algebra used throughout the crate: Pauli and
//! gamma matrices, norms, and spectral decompositions of unitaries.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;
pub type CVec3 = [C64; 3];

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn zeros(n: usize) -> Mat {
    Mat::zeros(n, n)
}

/// The three Pauli matrices `(σx, σy, σz)`.
pub fn pauli() -> [Mat; 3] {
    [
        Mat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Mat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// `σ · v` for a real three-vector.
pub fn sigma_dot(v: &[f64; 3]) -> Mat {
    let [sx, sy, sz] = pauli();
    sx * C64::from(v[0]) + sy * C64::from(v[1]) + sz * C64::from(v[2])
}

/// Builds a 4×4 matrix from 2×2 blocks `[[a, b], [c, d]]`.
pub fn block2(a: &Mat, b: &Mat, cc: &Mat, d: &Mat) -> Mat {
    let mut m = zeros(4);
    m.view_mut((0, 0), (2, 2)).copy_from(a);
    m.view_mut((0, 2), (2, 2)).copy_from(b);
    m.view_mut((2, 0), (2, 2)).copy_from(cc);
    m.view_mut((2, 2), (2, 2)).copy_from(d);
    m
}

/// `γ⁰ = offdiag(I, I)` in the spinorial (chiral) representation.
pub fn gamma0() -> Mat {
    block2(&zeros(2), &identity(2), &identity(2), &zeros(2))
}

/// Spatial gamma matrices `γⁱ = offdiag(σⁱ, −σⁱ)`.
pub fn gammas() -> [Mat; 3] {
    pauli().map(|s| block2(&zeros(2), &s, &(-s.clone()), &zeros(2)))
}

/// `γ⁰ γ · v` for a real three-vector.
pub fn alpha_dot(v: &[f64; 3]) -> Mat {
    let g0 = gamma0();
    let g = gammas();
    let mut m = zeros(4);
    for i in 0..3 {
        m += &g0 * &g[i] * C64::from(v[i]);
    }
    m
}

pub fn dagger(m: &Mat) -> Mat {
    m.adjoint()
}

pub fn fro(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dist(a: &Mat, b: &Mat) -> f64 {
    fro(&(a - b))
}

/// Frobenius distance of `m` from the identity.
pub fn identity_residual(m: &Mat) -> f64 {
    dist(m, &identity(m.nrows()))
}

/// `max(‖U†U − I‖, ‖UU† − I‖)`.
pub fn unitarity_residual(u: &Mat) -> f64 {
    let ud = u.adjoint();
    identity_residual(&(&ud * u)).max(identity_residual(&(u * &ud)))
}

pub fn hermiticity_residual(h: &Mat) -> f64 {
    dist(h, &h.adjoint())
}

pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

/// Matrix exponential (Padé scaling and squaring).
pub fn expm(m: &Mat) -> Mat {
    m.clone().exp()
}

/// `exp(−i H)`.
pub fn exp_minus_i(h: &Mat) -> Mat {
    expm(&(h * (-I)))
}

/// Folds an angle into `(−π, π]`.
pub fn fold_phase(w: f64) -> f64 {
    let mut x = (w + PI).rem_euclid(2.0 * PI) - PI;
    if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// Spectral decomposition of a unitary `U = Σ e^{−iωⱼ} |vⱼ⟩⟨vⱼ|`.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    /// Eigenphases `ωⱼ ∈ (−π, π]`, ascending.
    pub phases: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub vectors: Mat,
}

impl UnitaryEigen {
    /// Decomposes a (numerically) unitary matrix through its complex Schur
    /// form, which is diagonal for normal matrices.
    pub fn new(u: &Mat) -> Self {
        let n = u.nrows();
        let schur = nalgebra::Schur::try_new(u.clone(), 1e-15, 10_000)
            .unwrap_or_else(|| nalgebra::Schur::new(u.clone()));
        let (q, t) = schur.unpack();
        let mut pairs: Vec<(f64, usize)> =
            (0..n).map(|j| (fold_phase(-t[(j, j)].arg()), j)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut vectors = zeros(n);
        for (dst, &(_, src)) in pairs.iter().enumerate() {
            vectors.set_column(dst, &q.column(src));
        }
        Self {
            phases: pairs.iter().map(|p| p.0).collect(),
            vectors,
        }
    }

    /// Eigenvalues `e^{−iω}` in phase order.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.phases.iter().map(|w| C64::from_polar(1.0, -w)).collect()
    }

    /// `Σ f(ωⱼ) |vⱼ⟩⟨vⱼ|`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> Mat {
        let d = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
            self.phases.len(),
            self.phases.iter().map(|&w| f(w)),
        ));
        &self.vectors * d * self.vectors.adjoint()
    }
}

pub fn cross(a: &CVec3, b: &CVec3) -> CVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn real_cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Bilinear (non-conjugating) dot product of a real and a complex vector.
pub fn rdot(a: &[f64; 3], b: &CVec3) -> C64 {
    b[0] * a[0] + b[1] * a[1] + b[2] * a[2]
}

pub fn cnorm3(a: &CVec3) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn cvec_sub(a: &CVec3, b: &CVec3) -> CVec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cvec_scale(a: &CVec3, s: C64) -> CVec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn real_to_cvec(a: &[f64; 3]) -> CVec3 {
    [a[0].into(), a[1].into(), a[2].into()]
}

/// Spin-1 generators in the Cartesian basis, `(Jₖ)ᵢⱼ = −i εₖᵢⱼ`.
pub fn spin1_generators() -> [Matrix3<C64>; 3] {
    let mut js = [Matrix3::<C64>::zeros(); 3];
    for (k, jk) in js.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                jk[(i, j)] = -I * levi_civita(k, i, j);
            }
        }
    }
    js
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `Exp(−i v·J)`, the spin-1 rotation generated by `v`.
pub fn spin1_rotation(v: &[f64; 3]) -> Matrix3<C64> {
    let js = spin1_generators();
    let gen = (js[0] * C64::from(v[0]) + js[1] * C64::from(v[1]) + js[2] * C64::from(v[2])) * (-I);
    gen.exp()
}

pub fn apply3(m: &Matrix3<C64>, v: &CVec3) -> CVec3 {
    let mut out = [ZERO; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += m[(i, j)] * v[j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let s = pauli();
        for a in 0..3 {
            assert!(identity_residual(&(&s[a] * &s[a])) < 1e-15);
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let anti = &s[a] * &s[b] + &s[b] * &s[a];
                assert!(fro(&anti) < 1e-15);
            }
        }
        // σx σy = i σz
        assert!(dist(&(&s[0] * &s[1]), &(&s[2] * I)) < 1e-15);
    }

    #[test]
    fn clifford_relations() {
        let g0 = gamma0();
        let g = gammas();
        assert!(identity_residual(&(&g0 * &g0)) < 1e-15);
        for i in 0..3 {
            assert!(fro(&(&g0 * &g[i] + &g[i] * &g0)) < 1e-15);
            assert!(dist(&(&g[i] * &g[i]), &(-identity(4))) < 1e-15);
        }
    }

    #[test]
    fn fold_phase_range() {
        assert_eq!(fold_phase(-PI), PI);
        assert!((fold_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((fold_phase(0.5) - 0.5).abs() < 1e-15);
        assert!((fold_phase(-0.5 - 2.0 * PI) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn unitary_eigen_reconstructs() {
        let u = exp_minus_i(&sigma_dot(&[0.3, -0.2, 0.7]));
        let e = UnitaryEigen::new(&u);
        let w = (0.09f64 + 0.04 + 0.49).sqrt();
        assert!((e.phases[0] + w).abs() < 1e-12);
        assert!((e.phases[1] - w).abs() < 1e-12);
        let back = e.apply_fn(|p| C64::from_polar(1.0, -p));
        assert!(dist(&back, &u) < 1e-12);
    }

    #[test]
    fn spin1_rotation_is_right_handed() {
        // rotation by π/2 about z maps x̂ to ŷ
        let r = spin1_rotation(&[0.0, 0.0, PI / 2.0]);
        let v = apply3(&r, &[ONE, ZERO, ZERO]);
        assert!((v[1] - ONE).norm() < 1e-12 && v[0].norm() < 1e-12);
    }
}
