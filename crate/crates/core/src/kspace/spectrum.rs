use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::linalg::{fold_phase, fro, unitarity_residual, Mat, UnitaryEigen, C64};

use super::{build_ak, KPoint, KspaceError, Tolerances, TransitionRule};

/// Phases closer than this to `±π` are treated as touching the branch cut.
const BRANCH_CUT_MARGIN: f64 = 1e-9;

fn checked_eigen(rule: &TransitionRule, k: &KPoint) -> Result<UnitaryEigen, KspaceError> {
    if k.dim() != rule.dim() {
        return Err(KspaceError::DimensionMismatch {
            expected: rule.dim(),
            got: k.dim(),
        });
    }
    let ak = build_ak(rule, k);
    let residual = unitarity_residual(&ak);
    if residual > Tolerances::default().spectral {
        return Err(KspaceError::NonUnitary { residual });
    }
    Ok(UnitaryEigen::new(&ak))
}

/// Ascending eigenphases `ω` of `A_k`, with eigenvalues `e^{−iω}`.
pub fn dispersion(rule: &TransitionRule, k: &KPoint) -> Result<Vec<f64>, KspaceError> {
    Ok(checked_eigen(rule, k)?.phases)
}

/// Principal `H = i log A_k`, so that `exp(−iH) = A_k`.
pub fn interpolating_hamiltonian(rule: &TransitionRule, k: &KPoint) -> Result<Mat, KspaceError> {
    let eig = checked_eigen(rule, k)?;
    if let Some(&phase) = eig
        .phases
        .iter()
        .find(|w| w.abs() > PI - BRANCH_CUT_MARGIN)
    {
        return Err(KspaceError::BranchCut { phase });
    }
    Ok(eig.apply_fn(C64::from))
}

/// Size of the largest cluster of coinciding eigenphases at a fixed generic
/// wave-vector: 1 for Weyl rules, 2 for Dirac rules.
pub fn generic_multiplicity(rule: &TransitionRule) -> usize {
    let k = KPoint((0..rule.dim()).map(|j| 0.213 + 0.137 * j as f64).collect());
    match dispersion(rule, &k) {
        Ok(phases) => max_cluster(&phases, 1e-7),
        Err(_) => 1,
    }
}

fn cluster_size(phases: &[f64], branch: usize, tol: f64) -> usize {
    let w = phases[branch];
    phases
        .iter()
        .filter(|&&x| fold_phase(x - w).abs() <= tol)
        .count()
}

fn max_cluster(phases: &[f64], tol: f64) -> usize {
    (0..phases.len())
        .map(|b| cluster_size(phases, b, tol))
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityOptions {
    pub step: f64,
    pub richardson: bool,
    /// Phases within this distance count as one degenerate cluster.
    pub gap_tol: f64,
}

impl Default for VelocityOptions {
    fn default() -> Self {
        Self {
            step: 1e-5,
            richardson: true,
            gap_tol: 1e-7,
        }
    }
}

/// Gradient of the `branch`-th ascending eigenphase by central differences.
pub fn group_velocity(
    rule: &TransitionRule,
    k: &KPoint,
    branch: usize,
    opts: &VelocityOptions,
) -> Result<Vec<f64>, KspaceError> {
    let s = rule.internal_dim;
    if branch >= s {
        return Err(KspaceError::BranchOutOfRange { branch, s });
    }
    let phases = dispersion(rule, k)?;
    let generic = generic_multiplicity(rule);
    let found = cluster_size(&phases, branch, opts.gap_tol);
    if found > generic {
        return Err(KspaceError::DegenerateBranch {
            branch,
            found,
            generic,
        });
    }
    let omega = |kk: &KPoint| -> Result<f64, KspaceError> { Ok(dispersion(rule, kk)?[branch]) };
    let central = |axis: usize, h: f64| -> Result<f64, KspaceError> {
        let plus = omega(&k.with_offset(axis, h))?;
        let minus = omega(&k.with_offset(axis, -h))?;
        Ok(fold_phase(plus - minus) / (2.0 * h))
    };
    (0..rule.dim())
        .map(|axis| {
            let coarse = central(axis, opts.step)?;
            if opts.richardson {
                let fine = central(axis, opts.step / 2.0)?;
                Ok((4.0 * fine - coarse) / 3.0)
            } else {
                Ok(coarse)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub prefactor: f64,
    /// `(|k|, mean residual)` per magnitude.
    pub points: Vec<(f64, f64)>,
}

/// Fits `log r(|k|) = log C + p log|k|`, where `r` is the direction-averaged
/// norm of `H_I(k) − target(k)`. With `subtract_offset` the `k = 0` value of
/// that difference is removed first.
pub fn small_k_residual_fit(
    rule: &TransitionRule,
    target: &dyn Fn(&KPoint) -> Mat,
    magnitudes: &[f64],
    directions: usize,
    seed: u64,
    subtract_offset: bool,
) -> Result<FitResult, KspaceError> {
    const FLOOR: f64 = 1e-12;
    let (min, max) = magnitudes
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    if magnitudes.len() < 2 || !(max >= 10.0 * min * (1.0 - 1e-12)) || min <= 0.0 {
        return Err(KspaceError::NarrowFitRange { min, max });
    }
    let d = rule.dim();
    let offset = if subtract_offset {
        let zero = KPoint::zero(d);
        Some(interpolating_hamiltonian(rule, &zero)? - target(&zero))
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Vec<f64>> = (0..directions.max(1))
        .map(|_| loop {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 {
                break v.iter().map(|x| x / n).collect();
            }
        })
        .collect();
    let mut points = Vec::with_capacity(magnitudes.len());
    for &m in magnitudes {
        let mut acc = 0.0;
        for dir in &dirs {
            let k = KPoint(dir.iter().map(|x| x * m).collect());
            let mut diff = interpolating_hamiltonian(rule, &k)? - target(&k);
            if let Some(o) = &offset {
                diff -= o;
            }
            acc += fro(&diff);
        }
        points.push((m, acc / dirs.len() as f64));
    }
    let worst = points.iter().map(|p| p.1).fold(0.0, f64::max);
    if worst < FLOOR {
        return Err(KspaceError::DegenerateFit {
            floor: FLOOR,
            max_residual: worst,
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(f64::MIN_POSITIVE).ln()).collect();
    let (slope, intercept) = linear_fit(&xs, &ys);
    Ok(FitResult {
        slope,
        prefactor: intercept.exp(),
        points,
    })
}

/// Ordinary least-squares line `y = a x + b`, returned as `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (a, my - a * mx)
}
