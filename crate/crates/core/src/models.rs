//! Concrete automata: Weyl rules in one, two and three dimensions, the Dirac
//! coupling of two Weyl rules, their continuum Hamiltonians, the `n`-vector
//! and the Planck-unit identities.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::kspace::{
    IsotropyGroup, KPoint, KspaceError, Lattice, RuleGenerator, TransitionRule,
};
use crate::linalg::{alpha_dot, dist, gamma0, identity, pauli, sigma_dot, Mat, C64, I};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("mass {0} outside [0, 1]")]
    MassOutOfRange(f64),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("sampling matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("re-synthesis residual {0:.3e}: A_k is not supported on the declared generators")]
    SupportMismatch(f64),
    #[error("n-vector is singular at ω = {0}")]
    Singular(f64),
    #[error("unit system is underdetermined")]
    Underdetermined,
    #[error("inconsistent units: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Kspace(#[from] KspaceError),
}

/// Chirality of the three-dimensional Weyl solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chirality {
    APlus,
    AMinus,
    BPlus,
    BMinus,
}

impl Chirality {
    pub const ALL: [Chirality; 4] = [Self::APlus, Self::AMinus, Self::BPlus, Self::BMinus];

    fn sign(self) -> f64 {
        match self {
            Self::APlus | Self::BPlus => 1.0,
            Self::AMinus | Self::BMinus => -1.0,
        }
    }

    fn transposed(self) -> bool {
        matches!(self, Self::BPlus | Self::BMinus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WeylVariant {
    D1,
    D2 { transposed: bool, theta: f64 },
    D3(Chirality),
}

impl WeylVariant {
    pub fn all_default() -> Vec<WeylVariant> {
        let mut v = vec![
            Self::D1,
            Self::D2 {
                transposed: false,
                theta: 0.0,
            },
            Self::D2 {
                transposed: true,
                theta: 0.0,
            },
        ];
        v.extend(Chirality::ALL.map(Self::D3));
        v
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::D1 => 1,
            Self::D2 { .. } => 2,
            Self::D3(_) => 3,
        }
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::for_dim(self.dim()).expect("dimension is 1, 2 or 3")
    }

    fn transposed(&self) -> bool {
        match self {
            Self::D1 => false,
            Self::D2 { transposed, .. } => *transposed,
            Self::D3(c) => c.transposed(),
        }
    }

    /// `(u_k, ñ_k)` with `A_k = u_k I − i σ·ñ_k`.
    pub fn closed_form(&self, k: &KPoint) -> (f64, [f64; 3]) {
        let (u, mut nt) = match *self {
            Self::D1 => {
                let x = k.0[0];
                (x.cos(), [0.0, 0.0, x.sin()])
            }
            Self::D2 { theta, .. } => {
                let r = 2f64.sqrt();
                let (sx, cx) = (k.0[0] / r).sin_cos();
                let (sy, cy) = (k.0[1] / r).sin_cos();
                let u = cx * cy;
                let mut nt = [sx * cy, cx * sy, sx * sy];
                if self.transposed() {
                    nt[1] = -nt[1];
                }
                let (s, c) = theta.sin_cos();
                let u2 = c * u + s * nt[0];
                let nt2 = [c * nt[0] - s * u, c * nt[1] + s * nt[2], c * nt[2] - s * nt[1]];
                return (u2, nt2);
            }
            Self::D3(ch) => {
                let r = 3f64.sqrt();
                let (sx, cx) = (k.0[0] / r).sin_cos();
                let (sy, cy) = (k.0[1] / r).sin_cos();
                let (sz, cz) = (k.0[2] / r).sin_cos();
                let p = ch.sign();
                (
                    cx * cy * cz + p * sx * sy * sz,
                    [
                        sx * cy * cz - p * cx * sy * sz,
                        cx * sy * cz + p * sx * cy * sz,
                        cx * cy * sz - p * sx * sy * cz,
                    ],
                )
            }
        };
        if self.transposed() {
            nt[1] = -nt[1];
        }
        (u, nt)
    }

    pub fn closed_form_ak(&self, k: &KPoint) -> Mat {
        let (u, nt) = self.closed_form(k);
        identity(2) * C64::from(u) - sigma_dot(&nt) * I
    }

    /// `arccos u_k`.
    pub fn omega(&self, k: &KPoint) -> f64 {
        self.closed_form(k).0.clamp(-1.0, 1.0).acos()
    }

    /// Analytic `∇u_k`.
    pub fn grad_u(&self, k: &KPoint) -> Vec<f64> {
        match *self {
            Self::D1 => vec![-k.0[0].sin()],
            Self::D2 { theta, .. } => {
                let r = 2f64.sqrt();
                let (sx, cx) = (k.0[0] / r).sin_cos();
                let (sy, cy) = (k.0[1] / r).sin_cos();
                let du = [-sx * cy / r, -cx * sy / r];
                let dnx = [cx * cy / r, -sx * sy / r];
                let (s, c) = theta.sin_cos();
                vec![c * du[0] + s * dnx[0], c * du[1] + s * dnx[1]]
            }
            Self::D3(ch) => {
                let r = 3f64.sqrt();
                let (sx, cx) = (k.0[0] / r).sin_cos();
                let (sy, cy) = (k.0[1] / r).sin_cos();
                let (sz, cz) = (k.0[2] / r).sin_cos();
                let p = ch.sign();
                vec![
                    (-sx * cy * cz + p * cx * sy * sz) / r,
                    (-cx * sy * cz + p * sx * cy * sz) / r,
                    (-cx * cy * sz + p * sx * sy * cz) / r,
                ]
            }
        }
    }

    /// Analytic gradient of `ω_k = arccos u_k`.
    pub fn closed_form_velocity(&self, k: &KPoint) -> Vec<f64> {
        let u = self.closed_form(k).0;
        let den = (1.0 - u * u).max(0.0).sqrt();
        self.grad_u(k).iter().map(|g| -g / den).collect()
    }

    /// `σ·k/√d`, with the transposed Pauli vector for the B solutions.
    pub fn target_hamiltonian(&self, k: &KPoint) -> Mat {
        let mut h = target_weyl_hamiltonian(self.dim(), k);
        if self.transposed() {
            h = h.transpose();
        }
        h
    }

    /// Covariance group of the rule. Three dimensions: binary rotations
    /// about the coordinate axes represented by `{I, iσx, iσy, iσz}`. Two
    /// dimensions: the exchange of `h₁` and `h₂` represented by `−iσx`.
    pub fn isotropy_group(&self, rule: &TransitionRule) -> Result<IsotropyGroup, KspaceError> {
        let [sx, sy, sz] = pauli();
        let elements = match self {
            Self::D1 => vec![("e".to_string(), DMatrix::identity(1, 1), identity(2))],
            Self::D2 { .. } => vec![
                ("e".to_string(), DMatrix::identity(2, 2), identity(2)),
                (
                    "exchange".to_string(),
                    DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0])),
                    sx * (-I),
                ),
            ],
            Self::D3(_) => {
                let diag = |v: [f64; 3]| DMatrix::from_diagonal(&DVector::from_vec(v.to_vec()));
                vec![
                    ("e".to_string(), DMatrix::identity(3, 3), identity(2)),
                    ("Rx".to_string(), diag([1.0, -1.0, -1.0]), sx * I),
                    ("Ry".to_string(), diag([-1.0, 1.0, -1.0]), sy * I),
                    ("Rz".to_string(), diag([-1.0, -1.0, 1.0]), sz * I),
                ]
            }
        };
        let group = IsotropyGroup::from_orthogonal(rule, elements)?;
        Ok(if self.transposed() {
            group.conjugated()
        } else {
            group
        })
    }
}

impl fmt::Display for WeylVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::D1 => write!(f, "weyl1d"),
            Self::D2 { transposed, theta } => {
                write!(f, "weyl2d{}", if *transposed { "B" } else { "" })?;
                if *theta != 0.0 {
                    write!(f, "(theta={theta})")?;
                }
                Ok(())
            }
            Self::D3(c) => write!(
                f,
                "weyl3d{}",
                match c {
                    Chirality::APlus => "+",
                    Chirality::AMinus => "-",
                    Chirality::BPlus => "B+",
                    Chirality::BMinus => "B-",
                }
            ),
        }
    }
}

impl FromStr for WeylVariant {
    type Err = ModelError;

    /// Accepts `weyl1d`, `weyl2d`, `weyl2dA`, `weyl2dB`, and `weyl3d±`,
    /// `weyl3dA±`, `weyl3dB±`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = match s.trim() {
            "weyl1d" => Self::D1,
            "weyl2d" | "weyl2dA" => Self::D2 {
                transposed: false,
                theta: 0.0,
            },
            "weyl2dB" => Self::D2 {
                transposed: true,
                theta: 0.0,
            },
            "weyl3d+" | "weyl3dA+" => Self::D3(Chirality::APlus),
            "weyl3d-" | "weyl3dA-" => Self::D3(Chirality::AMinus),
            "weyl3dB+" => Self::D3(Chirality::BPlus),
            "weyl3dB-" => Self::D3(Chirality::BMinus),
            other => return Err(ModelError::UnknownModel(other.to_string())),
        };
        Ok(v)
    }
}

/// `σ·k/√d`; one-dimensional wave-vectors sit on the z axis.
pub fn target_weyl_hamiltonian(d: usize, k: &KPoint) -> Mat {
    let v = k.to_3d().map(|x| x / (d as f64).sqrt());
    sigma_dot(&v)
}

/// `(n/√d) γ⁰γ·k + m γ⁰`.
pub fn target_dirac_hamiltonian(d: usize, k: &KPoint, m: f64) -> Mat {
    let n = (1.0 - m * m).max(0.0).sqrt();
    let v = k.to_3d().map(|x| n * x / (d as f64).sqrt());
    alpha_dot(&v) + gamma0() * C64::from(m)
}

/// Solves `A_k = A_e + Σ_h e^{−ik·h} A_h` for the coefficients by least
/// squares over sampled wave-vectors, then re-synthesises at fresh points.
pub fn extract_transition_matrices(
    ak: &dyn Fn(&KPoint) -> Mat,
    lattice: &Lattice,
    generators: &[RuleGenerator],
    with_identity: bool,
) -> Result<(Vec<Mat>, Option<Mat>), ModelError> {
    let terms = generators.len() + usize::from(with_identity);
    let samples = 2 * terms + 4;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let bz = lattice.brillouin_zone();
    let ks: Vec<KPoint> = (0..samples).map(|_| bz.sample(&mut rng)).collect();
    let s = ak(&ks[0]).nrows();
    let phi = DMatrix::<C64>::from_fn(samples, terms, |r, c| {
        if c < generators.len() {
            C64::from_polar(1.0, -ks[r].dot(&generators[c].embed))
        } else {
            C64::from(1.0)
        }
    });
    let svd = phi.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > 1e8 {
        return Err(ModelError::IllConditioned(cond));
    }
    let mut rhs = DMatrix::<C64>::zeros(samples, s * s);
    for (r, k) in ks.iter().enumerate() {
        let m = ak(k);
        for i in 0..s {
            for j in 0..s {
                rhs[(r, i * s + j)] = m[(i, j)];
            }
        }
    }
    let coeffs = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| ModelError::Inconsistent(e.to_string()))?;
    let snap = |x: f64| if x.abs() < 1e-14 { 0.0 } else { x };
    let unpack = |c: usize| {
        Mat::from_fn(s, s, |i, j| {
            let z = coeffs[(c, i * s + j)];
            C64::new(snap(z.re), snap(z.im))
        })
    };
    let matrices: Vec<Mat> = (0..generators.len()).map(unpack).collect();
    let id = with_identity.then(|| unpack(generators.len()));

    let mut worst: f64 = 0.0;
    for _ in 0..16 {
        let k = bz.sample(&mut rng);
        let mut synth = id.clone().unwrap_or_else(|| Mat::zeros(s, s));
        for (g, m) in generators.iter().zip(&matrices) {
            synth += m * C64::from_polar(1.0, -k.dot(&g.embed));
        }
        worst = worst.max(dist(&synth, &ak(&k)));
    }
    if worst > 1e-12 {
        return Err(ModelError::SupportMismatch(worst));
    }
    Ok((matrices, id))
}

/// The Weyl automaton as a transition rule, with coefficients recovered from
/// the closed form.
pub fn weyl_rule(v: WeylVariant) -> Result<TransitionRule, ModelError> {
    let lattice = v.lattice();
    let gens = lattice.generators();
    let (mats, _) = extract_transition_matrices(&|k| v.closed_form_ak(k), &lattice, &gens, false)?;
    Ok(TransitionRule::new(v.to_string(), lattice, gens, mats, None)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracParams {
    pub mass: f64,
    pub n: f64,
    pub weyl: WeylVariant,
}

impl DiracParams {
    pub fn new(mass: f64, weyl: WeylVariant) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&mass) {
            return Err(ModelError::MassOutOfRange(mass));
        }
        Ok(Self {
            mass,
            n: (1.0 - mass * mass).sqrt(),
            weyl,
        })
    }

    /// `D_k = n u_k I − i n γ⁰γ·ñ_k + i m γ⁰`.
    pub fn closed_form_ak(&self, k: &KPoint) -> Mat {
        let (u, nt) = self.weyl.closed_form(k);
        identity(4) * C64::from(self.n * u) - alpha_dot(&nt) * (I * self.n)
            + gamma0() * (I * self.mass)
    }

    /// `arccos(n u_k)`.
    pub fn omega(&self, k: &KPoint) -> f64 {
        (self.n * self.weyl.closed_form(k).0).clamp(-1.0, 1.0).acos()
    }

    pub fn closed_form_velocity(&self, k: &KPoint) -> Vec<f64> {
        let nu = self.n * self.weyl.closed_form(k).0;
        let den = (1.0 - nu * nu).max(0.0).sqrt();
        if den == 0.0 {
            return vec![0.0; self.weyl.dim()];
        }
        self.weyl
            .grad_u(k)
            .iter()
            .map(|g| -self.n * g / den)
            .collect()
    }

    pub fn target_hamiltonian(&self, k: &KPoint) -> Mat {
        target_dirac_hamiltonian(self.weyl.dim(), k, self.mass)
    }
}

/// The Dirac automaton: two Weyl automata coupled by the local mass term.
pub fn dirac_rule(p: DiracParams) -> Result<TransitionRule, ModelError> {
    let lattice = p.weyl.lattice();
    let gens = lattice.generators();
    let (mats, id) = extract_transition_matrices(&|k| p.closed_form_ak(k), &lattice, &gens, true)?;
    Ok(TransitionRule::new(
        format!("dirac[{}](m={})", p.weyl, p.mass),
        lattice,
        gens,
        mats,
        id,
    )?)
}

/// Basis order that splits the one-dimensional Dirac automaton into two
/// identical 2×2 blocks.
pub const DIRAC_1D_SPLIT: [usize; 4] = [0, 2, 3, 1];

/// `P D_k Pᵀ` for the permutation [`DIRAC_1D_SPLIT`].
pub fn permute_basis(m: &Mat, order: &[usize]) -> Mat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(order[i], order[j])])
}

/// Either kind of shipped automaton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Model {
    Weyl(WeylVariant),
    Dirac(DiracParams),
}

impl Model {
    /// Parses a model selector such as `weyl3d+`, `weyl2dB` or `dirac`.
    /// `dirac` couples the default Weyl rule of dimension `dirac_dim`;
    /// `dirac1d`, `dirac2d`, `dirac3d` fix it explicitly.
    pub fn parse(name: &str, mass: f64, theta: f64) -> Result<Self, ModelError> {
        let name = name.trim();
        let weyl_of_dim = |d: usize| match d {
            1 => WeylVariant::D1,
            2 => WeylVariant::D2 {
                transposed: false,
                theta,
            },
            _ => WeylVariant::D3(Chirality::APlus),
        };
        let dirac_dim = match name {
            "dirac" | "dirac3d" => Some(3),
            "dirac2d" => Some(2),
            "dirac1d" => Some(1),
            _ => None,
        };
        if let Some(d) = dirac_dim {
            return Ok(Self::Dirac(DiracParams::new(mass, weyl_of_dim(d))?));
        }
        let mut v: WeylVariant = name.parse()?;
        if let WeylVariant::D2 { theta: t, .. } = &mut v {
            *t = theta;
        }
        Ok(Self::Weyl(v))
    }

    pub fn dim(&self) -> usize {
        self.weyl().dim()
    }

    pub fn weyl(&self) -> WeylVariant {
        match self {
            Self::Weyl(v) => *v,
            Self::Dirac(p) => p.weyl,
        }
    }

    pub fn internal_dim(&self) -> usize {
        match self {
            Self::Weyl(_) => 2,
            Self::Dirac(_) => 4,
        }
    }

    pub fn rule(&self) -> Result<TransitionRule, ModelError> {
        match self {
            Self::Weyl(v) => weyl_rule(*v),
            Self::Dirac(p) => dirac_rule(*p),
        }
    }

    pub fn closed_form_ak(&self, k: &KPoint) -> Mat {
        match self {
            Self::Weyl(v) => v.closed_form_ak(k),
            Self::Dirac(p) => p.closed_form_ak(k),
        }
    }

    /// Closed-form eigenphases, ascending (each twice for Dirac).
    pub fn closed_form_dispersion(&self, k: &KPoint) -> Vec<f64> {
        match self {
            Self::Weyl(v) => {
                let w = v.omega(k);
                vec![-w, w]
            }
            Self::Dirac(p) => {
                let w = p.omega(k);
                vec![-w, -w, w, w]
            }
        }
    }

    pub fn closed_form_velocity(&self, k: &KPoint) -> Vec<f64> {
        match self {
            Self::Weyl(v) => v.closed_form_velocity(k),
            Self::Dirac(p) => p.closed_form_velocity(k),
        }
    }

    pub fn target_hamiltonian(&self, k: &KPoint) -> Mat {
        match self {
            Self::Weyl(v) => v.target_hamiltonian(k),
            Self::Dirac(p) => p.target_hamiltonian(k),
        }
    }

    pub fn isotropy_group(&self, rule: &TransitionRule) -> Result<IsotropyGroup, KspaceError> {
        match self {
            Self::Weyl(v) => v.isotropy_group(rule),
            Self::Dirac(p) => Ok(p.weyl.isotropy_group(rule)?.doubled()),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Weyl(v) => write!(f, "{v}"),
            Self::Dirac(p) => write!(f, "dirac[{}](m={})", p.weyl, p.mass),
        }
    }
}

/// `ñ_k`, `ω_k = arccos u_k` and `n_k = (ω/sin ω) ñ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NVector {
    pub tilde: [f64; 3],
    pub n: [f64; 3],
    pub omega: f64,
}

/// Computes the `n`-vector, using `ω/sin ω ≈ 1 + ω²/6 + 7ω⁴/360` when
/// `|sin ω| < 1e−6` near `ω = 0`.
pub fn n_vector(v: WeylVariant, k: &KPoint) -> Result<NVector, ModelError> {
    let (u, tilde) = v.closed_form(k);
    let omega = u.clamp(-1.0, 1.0).acos();
    let s = omega.sin();
    let f = if s.abs() < 1e-6 {
        if omega > FRAC_PI_2 {
            return Err(ModelError::Singular(omega));
        }
        ratio_series(omega)
    } else {
        omega / s
    };
    Ok(NVector {
        tilde,
        n: tilde.map(|x| f * x),
        omega,
    })
}

pub(crate) fn ratio_series(w: f64) -> f64 {
    let w2 = w * w;
    1.0 + w2 / 6.0 + 7.0 * w2 * w2 / 360.0
}

/// Physical scales: lattice step `a`, time step `τ`, mass unit `M`, with
/// `c = a/τ` and `ħ = M a c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    pub a: f64,
    pub tau: f64,
    pub mass: f64,
    pub c: f64,
    pub hbar: f64,
}

/// Known quantities; unknown ones are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UnitInputs {
    pub a: Option<f64>,
    pub tau: Option<f64>,
    pub mass: Option<f64>,
    pub c: Option<f64>,
    pub hbar: Option<f64>,
}

/// Completes a unit system from enough of its five quantities. Extra
/// quantities must agree with the identities to a relative `1e−12`.
pub fn planck_units(inp: UnitInputs) -> Result<UnitSystem, ModelError> {
    for (name, v) in [
        ("a", inp.a),
        ("tau", inp.tau),
        ("M", inp.mass),
        ("c", inp.c),
        ("hbar", inp.hbar),
    ] {
        if let Some(x) = v {
            if !(x.is_finite() && x > 0.0) {
                return Err(ModelError::Inconsistent(format!("{name} must be positive")));
            }
        }
    }
    let mut q = inp;
    loop {
        let before = q;
        match (q.a, q.tau, q.c) {
            (Some(a), Some(t), None) => q.c = Some(a / t),
            (Some(a), None, Some(c)) => q.tau = Some(a / c),
            (None, Some(t), Some(c)) => q.a = Some(c * t),
            _ => {}
        }
        match (q.mass, q.a, q.c, q.hbar) {
            (Some(m), Some(a), Some(c), None) => q.hbar = Some(m * a * c),
            (None, Some(a), Some(c), Some(h)) => q.mass = Some(h / (a * c)),
            (Some(m), None, Some(c), Some(h)) => q.a = Some(h / (m * c)),
            (Some(m), Some(a), None, Some(h)) => q.c = Some(h / (m * a)),
            _ => {}
        }
        if q == before {
            break;
        }
    }
    let (Some(a), Some(tau), Some(mass), Some(c), Some(hbar)) = (q.a, q.tau, q.mass, q.c, q.hbar)
    else {
        return Err(ModelError::Underdetermined);
    };
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    if !close(c, a / tau) {
        return Err(ModelError::Inconsistent(format!("c = {c} but a/tau = {}", a / tau)));
    }
    if !close(hbar, mass * a * c) {
        return Err(ModelError::Inconsistent(format!(
            "hbar = {hbar} but M a c = {}",
            mass * a * c
        )));
    }
    Ok(UnitSystem {
        a,
        tau,
        mass,
        c,
        hbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kspace::unitarity_report;
    use crate::linalg::ZERO;

    #[test]
    fn weyl1d_coefficients() {
        let r = weyl_rule(WeylVariant::D1).unwrap();
        let diag = |a: f64, b: f64| {
            Mat::from_row_slice(2, 2, &[C64::from(a), ZERO, ZERO, C64::from(b)])
        };
        assert!(dist(r.matrix("h").unwrap(), &diag(1.0, 0.0)) < 1e-14);
        assert!(dist(r.matrix("h^-1").unwrap(), &diag(0.0, 1.0)) < 1e-14);
    }

    #[test]
    fn shipped_rules_unitary() {
        for v in WeylVariant::all_default() {
            assert!(unitarity_report(&weyl_rule(v).unwrap(), 1e-12).pass, "{v}");
        }
        let p = DiracParams::new(0.3, WeylVariant::D3(Chirality::APlus)).unwrap();
        assert!(unitarity_report(&dirac_rule(p).unwrap(), 1e-12).pass);
    }

    #[test]
    fn dirac_identity_coefficient() {
        let p = DiracParams::new(0.6, WeylVariant::D1).unwrap();
        assert!((p.n - 0.8).abs() < 1e-15);
        let r = dirac_rule(p).unwrap();
        assert!(dist(r.identity.as_ref().unwrap(), &(gamma0() * (I * 0.6))) < 1e-13);
    }

    #[test]
    fn mass_range() {
        assert!(DiracParams::new(1.5, WeylVariant::D1).is_err());
        assert!(DiracParams::new(-0.1, WeylVariant::D1).is_err());
    }

    #[test]
    fn dirac_1d_splits() {
        let p = DiracParams::new(0.4, WeylVariant::D1).unwrap();
        let d = permute_basis(&p.closed_form_ak(&KPoint::new(&[0.7])), &DIRAC_1D_SPLIT);
        let tl = d.view((0, 0), (2, 2)).into_owned();
        let br = d.view((2, 2), (2, 2)).into_owned();
        assert!(dist(&tl, &br) < 1e-15);
        assert!(d.view((0, 2), (2, 2)).iter().all(|x| x.norm() < 1e-15));
        assert!(d.view((2, 0), (2, 2)).iter().all(|x| x.norm() < 1e-15));
    }

    #[test]
    fn unit_identities() {
        let u = planck_units(UnitInputs {
            a: Some(1.0),
            tau: Some(1.0),
            mass: Some(2.5),
            ..Default::default()
        })
        .unwrap();
        assert_eq!((u.c, u.hbar), (1.0, 2.5));
        let v = planck_units(UnitInputs {
            c: Some(3.0),
            hbar: Some(6.0),
            mass: Some(0.5),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(v.a, 6.0 / (0.5 * 3.0));
        assert_eq!(v.tau, v.a / 3.0);
        assert!(planck_units(UnitInputs {
            a: Some(1.0),
            tau: Some(1.0),
            c: Some(2.0),
            mass: Some(1.0),
            ..Default::default()
        })
        .is_err());
        assert_eq!(
            planck_units(UnitInputs {
                a: Some(1.0),
                ..Default::default()
            }),
            Err(ModelError::Underdetermined)
        );
    }

    #[test]
    fn parse_models() {
        assert_eq!(
            Model::parse("weyl3d+", 0.0, 0.0).unwrap(),
            Model::Weyl(WeylVariant::D3(Chirality::APlus))
        );
        assert!(Model::parse("dirac", 1.5, 0.0).is_err());
        assert!(Model::parse("weyl4d", 0.0, 0.0).is_err());
        for v in WeylVariant::all_default() {
            assert_eq!(v.to_string().parse::<WeylVariant>().unwrap(), v);
        }
    }
}
