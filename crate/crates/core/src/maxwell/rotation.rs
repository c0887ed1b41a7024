use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::kspace::KPoint;
use crate::linalg::{
    apply3, cnorm3, cross, cvec_scale, cvec_sub, dist, norm3, pauli, rdot, real_to_cvec,
    spin1_generators, spin1_rotation, CVec3, Mat, C64, I, ZERO,
};
use crate::models::{n_vector, WeylVariant};

use super::MaxwellError;

/// The composite field `G(k) = φᵀ σ ψ` at one wave-vector, with its rotation
/// axis `n_{k/2}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GField {
    pub k: KPoint,
    pub value: CVec3,
    pub n: [f64; 3],
}

impl GField {
    /// Builds `Gⁱ = φᵀ σⁱ ψ` from two spinors.
    pub fn from_spinors(
        v: WeylVariant,
        k: &KPoint,
        phi: &[C64; 2],
        psi: &[C64; 2],
    ) -> Result<Self, MaxwellError> {
        let n = half_n(v, k)?;
        let value = bilinear(&pauli(), phi, psi);
        Ok(Self {
            k: k.clone(),
            value,
            n,
        })
    }

    pub fn transverse(&self) -> Result<CVec3, MaxwellError> {
        transverse_project(&self.value, &self.n)
    }

    /// Residual `|n̂·G|` of the transverse part.
    pub fn longitudinal(&self) -> f64 {
        let nn = norm3(&self.n);
        if nn == 0.0 {
            return 0.0;
        }
        rdot(&self.n, &self.value).norm() / nn
    }

    /// Continuous-time evolution `G(t) = Exp(−i2n·J t) G(0)`.
    pub fn evolved(&self, t: f64) -> Self {
        Self {
            k: self.k.clone(),
            value: apply3(&rotation(&self.n, t), &self.value),
            n: self.n,
        }
    }
}

pub(crate) fn half_n(v: WeylVariant, k: &KPoint) -> Result<[f64; 3], MaxwellError> {
    Ok(n_vector(v, &k.scaled(0.5))?.n)
}

fn bilinear(ops: &[Mat; 3], phi: &[C64; 2], psi: &[C64; 2]) -> CVec3 {
    let mut out = [ZERO; 3];
    for (o, s) in out.iter_mut().zip(ops) {
        for a in 0..2 {
            for b in 0..2 {
                *o += phi[a] * s[(a, b)] * psi[b];
            }
        }
    }
    out
}

/// `R(t) = Exp(−i 2n·J t)`.
pub fn rotation(n: &[f64; 3], t: f64) -> Matrix3<C64> {
    spin1_rotation(&n.map(|x| 2.0 * x * t))
}

/// `−i 2n·J`, the generator of [`rotation`].
pub fn rotation_generator(n: &[f64; 3]) -> Matrix3<C64> {
    let js = spin1_generators();
    (js[0] * C64::from(n[0]) + js[1] * C64::from(n[1]) + js[2] * C64::from(n[2])) * (-2.0 * I)
}

/// `G − (n̂·G) n̂`.
pub fn transverse_project(g: &CVec3, n: &[f64; 3]) -> Result<CVec3, MaxwellError> {
    let nn = norm3(n);
    if !(nn > 0.0) {
        return Err(MaxwellError::ZeroAxis);
    }
    let hat = n.map(|x| x / nn);
    Ok(cvec_sub(g, &cvec_scale(&real_to_cvec(&hat), rdot(&hat, g))))
}

#[derive(Debug, Clone, Serialize)]
pub struct RotationReport {
    pub k: KPoint,
    pub t: u32,
    pub n: [f64; 3],
    /// `max_i ‖W^{†t} σⁱ W^t − Σⱼ Rᵢⱼ σʲ‖`.
    pub deviation: f64,
    /// `‖n·σ(t) − n·σ‖`, the invariance of the axis component.
    pub axis_deviation: f64,
}

/// Compares the conjugated Pauli matrices `W^{†t} σⁱ W^t`, with
/// `W = A_{k/2}`, against the spin-1 rotation `Exp(−i2n_{k/2}·J t)` applied
/// to the vector `(σ¹, σ², σ³)`.
pub fn conjugation_rotation_check(
    v: WeylVariant,
    k: &KPoint,
    t: u32,
) -> Result<RotationReport, MaxwellError> {
    let n = half_n(v, k)?;
    let w = v.closed_form_ak(&k.scaled(0.5));
    let wt = crate::lattice::matrix_power(&w, t);
    let wd = wt.adjoint();
    let sig = pauli();
    let conj: Vec<Mat> = sig.iter().map(|s| &wd * s * &wt).collect();
    let r = rotation(&n, t as f64);
    let mut deviation: f64 = 0.0;
    for i in 0..3 {
        let mut rhs = Mat::zeros(2, 2);
        for (j, s) in sig.iter().enumerate() {
            rhs += s * r[(i, j)];
        }
        deviation = deviation.max(dist(&conj[i], &rhs));
    }
    let axis = |m: &[Mat]| -> Mat {
        m.iter()
            .zip(&n)
            .fold(Mat::zeros(2, 2), |acc, (s, x)| acc + s * C64::from(*x))
    };
    let axis_deviation = dist(&axis(&conj), &axis(&sig));
    Ok(RotationReport {
        k: k.clone(),
        t,
        n,
        deviation,
        axis_deviation,
    })
}

/// `E = 2|n| Re G_T`, `B = 2|n| Im G_T`, the fields of a single transverse
/// component at `t = 0`.
pub fn eb_fields(g_t: &CVec3, n: &[f64; 3]) -> (CVec3, CVec3) {
    let m = norm3(n);
    (
        g_t.map(|z| C64::from(2.0 * m * z.re)),
        g_t.map(|z| C64::from(2.0 * m * z.im)),
    )
}

/// `G_T = (E + iB)/(2|n|)`.
pub fn reconstruct_g(e: &CVec3, b: &CVec3, n: &[f64; 3]) -> CVec3 {
    let m = 2.0 * norm3(n);
    [0, 1, 2].map(|i| (e[i] + I * b[i]) / m)
}

/// `E = |n|(G + P)`, `B = i|n|(P − G)` from a field `G` and its partner `P`,
/// which rotates about `−n`. At `t = 0`, `P = G*` and this reduces to
/// [`eb_fields`].
pub fn fields_from_pair(g: &CVec3, p: &CVec3, n: &[f64; 3]) -> (CVec3, CVec3) {
    let m = C64::from(norm3(n));
    (
        [0, 1, 2].map(|i| m * (g[i] + p[i])),
        [0, 1, 2].map(|i| I * m * (p[i] - g[i])),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxwellSample {
    pub t: f64,
    /// Largest `|n̂·X|/‖X‖` over `X ∈ {G_T, E, B}`.
    pub transversality: f64,
    /// `‖∂ₜE − i2n×B‖`.
    pub curl_e: f64,
    /// `‖∂ₜB + i2n×E‖`.
    pub curl_b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxwellReport {
    pub variant: String,
    pub k: KPoint,
    pub n: [f64; 3],
    pub samples: Vec<MaxwellSample>,
    /// `‖G(t) − Exp(−i2n·J t)G(0)‖` at integer `t` with `G(t)` built from
    /// spinors stepped by `A_{k/2}`.
    pub step_crosscheck: f64,
    /// `‖2n_{k/2} − k/√d‖`.
    pub small_k_gap: f64,
    pub worst_transversality: f64,
    pub worst_curl: f64,
}

/// Evolves a random transverse `G_T(k)` and checks that the derived `E`, `B`
/// fields are transverse and obey `∂ₜE = i2n×B`, `∂ₜB = −i2n×E`, with time
/// derivatives taken from the exact rotation generator.
pub fn maxwell_residual(
    v: WeylVariant,
    k: &KPoint,
    times: &[f64],
    seed: u64,
) -> Result<MaxwellReport, MaxwellError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spinor = || -> [C64; 2] {
        [0, 1].map(|_| {
            C64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        })
    };
    let (phi, psi) = (spinor(), spinor());
    let field = GField::from_spinors(v, k, &phi, &psi)?;
    let n = field.n;
    let nn = norm3(&n);
    let g0 = field.transverse()?;
    let p0 = g0.map(|z| z.conj());
    let gen = rotation_generator(&n);
    let n2 = real_to_cvec(&n.map(|x| 2.0 * x));
    let rel = |x: &CVec3| {
        let s = cnorm3(x);
        if s == 0.0 {
            0.0
        } else {
            rdot(&n, x).norm() / (nn * s)
        }
    };

    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let g = apply3(&rotation(&n, t), &g0);
        let p = apply3(&rotation(&n, -t), &p0);
        let (e, b) = fields_from_pair(&g, &p, &n);
        let dg = apply3(&gen, &g);
        let dp = apply3(&(-gen), &p);
        let (de, db) = fields_from_pair(&dg, &dp, &n);
        let curl_e = cnorm3(&cvec_sub(&de, &cvec_scale(&cross(&n2, &b), I)));
        let curl_b = cnorm3(&cvec_sub(&db, &cvec_scale(&cross(&n2, &e), -I)));
        samples.push(MaxwellSample {
            t,
            transversality: rel(&g).max(rel(&e)).max(rel(&b)),
            curl_e,
            curl_b,
        });
    }

    let w = v.closed_form_ak(&k.scaled(0.5));
    let g_full = field.value;
    let mut step_crosscheck: f64 = 0.0;
    let (mut a, mut bb) = (psi, phi);
    for t in 1..=4u32 {
        a = mul2(&w, &a);
        bb = mul2(&w.map(|z| z.conj()), &bb);
        let stepped = bilinear(&pauli(), &bb, &a);
        let rotated = apply3(&rotation(&n, t as f64), &g_full);
        step_crosscheck = step_crosscheck.max(cnorm3(&cvec_sub(&stepped, &rotated)));
    }

    let d = v.dim() as f64;
    let target = k.to_3d().map(|x| x / d.sqrt());
    let small_k_gap = norm3(&[0, 1, 2].map(|i| 2.0 * n[i] - target[i]));
    let worst_transversality = samples.iter().map(|s| s.transversality).fold(0.0, f64::max);
    let worst_curl = samples
        .iter()
        .map(|s| s.curl_e.max(s.curl_b))
        .fold(0.0, f64::max);
    Ok(MaxwellReport {
        variant: v.to_string(),
        k: k.clone(),
        n,
        samples,
        step_crosscheck,
        small_k_gap,
        worst_transversality,
        worst_curl,
    })
}

fn mul2(m: &Mat, x: &[C64; 2]) -> [C64; 2] {
    [
        m[(0, 0)] * x[0] + m[(0, 1)] * x[1],
        m[(1, 0)] * x[0] + m[(1, 1)] * x[1],
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct RotationSweep {
    pub variant: String,
    pub samples: usize,
    pub worst_deviation: f64,
    pub worst_axis_deviation: f64,
}

/// [`conjugation_rotation_check`] at `samples` random wave-vectors of the
/// Brillouin zone, each at a random integer time in `0..=t_max`. Points where
/// the `n`-vector is singular are redrawn.
pub fn rotation_sweep(
    v: WeylVariant,
    samples: usize,
    t_max: u32,
    seed: u64,
) -> Result<RotationSweep, MaxwellError> {
    use rand::Rng;
    use rayon::prelude::*;

    let bz = v.lattice().brillouin_zone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(samples);
    while points.len() < samples {
        let k = bz.sample(&mut rng);
        let t = rng.random_range(0..=t_max);
        if half_n(v, &k).is_ok() {
            points.push((k, t));
        }
    }
    let reports: Vec<RotationReport> = points
        .par_iter()
        .map(|(k, t)| conjugation_rotation_check(v, k, *t))
        .collect::<Result<_, _>>()?;
    Ok(RotationSweep {
        variant: v.to_string(),
        samples,
        worst_deviation: reports.iter().map(|r| r.deviation).fold(0.0, f64::max),
        worst_axis_deviation: reports.iter().map(|r| r.axis_deviation).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Chirality;

    #[test]
    fn generator_is_cross_product() {
        let n = [0.3, -0.2, 0.5];
        let x = [C64::new(1.0, 0.5), C64::new(-0.2, 0.1), C64::new(0.7, -1.0)];
        let lhs = apply3(&rotation_generator(&n), &x);
        let rhs = cross(&real_to_cvec(&n.map(|v| 2.0 * v)), &x);
        assert!(cnorm3(&cvec_sub(&lhs, &rhs)) < 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        let v = WeylVariant::D3(Chirality::APlus);
        let r = conjugation_rotation_check(v, &KPoint::new(&[0.4, 0.1, -0.9]), 0).unwrap();
        assert_eq!(r.deviation, 0.0);
    }
}
