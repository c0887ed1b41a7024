use std::path::Path;

use anyhow::{anyhow, Context};
use qca_core::export::{gnuplot_script, to_versioned_json, write_atomic};
use qca_core::kspace::{
    dispersion, isotropy_check, linear_fit, unitarity_report, IsotropyReport, KPoint,
    TorusOperator, UnitarityReport,
};
use qca_core::lattice::{evolve_packet, trajectory_csv, PacketSpec};
use qca_core::linalg::fold_phase;
use qca_core::maxwell::{
    deviation_csv, deviation_scan, maxwell_residual, rotation_sweep, DeviationRow, MaxwellError,
    RotationSweep,
};
use qca_core::models::{planck_units, Model, ModelError, UnitInputs};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::Failure;

fn model(cfg: &RunConfig) -> Result<Model, Failure> {
    Model::parse(&cfg.model, cfg.mass, cfg.theta).map_err(Failure::config)
}

fn write(out: &Path, name: &str, body: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating {}", out.display()))
        .map_err(Failure::config)?;
    let path = out.join(name);
    write_atomic(&path, body.as_bytes())
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::config)
}

fn json<T: Serialize>(body: &T) -> Result<String, Failure> {
    to_versioned_json(body).map_err(|e| Failure::config(anyhow!(e)))
}

#[derive(Serialize)]
struct Residual {
    worst: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    model: String,
    perturb: f64,
    tol: f64,
    unitarity: UnitarityReport,
    isotropy: IsotropyReport,
    translation: Residual,
    dispersion: Residual,
    pass: bool,
}

pub fn verify(cfg: &RunConfig) -> Result<(), Failure> {
    let m = model(cfg)?;
    let mut rule = m.rule().map_err(Failure::config)?;
    if cfg.perturb != 0.0 {
        rule = rule.perturbed(1.0 + cfg.perturb);
    }
    let unitarity = unitarity_report(&rule, cfg.tol);
    let group = m
        .isotropy_group(&rule)
        .map_err(|e| Failure::config(anyhow!(e)))?;
    let isotropy = isotropy_check(&rule, &group, cfg.tol).map_err(|e| Failure::config(anyhow!(e)))?;
    let torus = TorusOperator::new(&rule, &vec![4; m.dim()], &[])
        .map_err(|e| Failure::config(anyhow!(e)))?;
    let tr = torus.commutation_residual(&[]);
    let translation = Residual {
        worst: tr,
        pass: tr <= cfg.tol,
    };

    let bz = rule.lattice.brillouin_zone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points: Vec<KPoint> = (0..cfg.samples).map(|_| bz.sample(&mut rng)).collect();
    let worst = points
        .par_iter()
        .map(|k| match dispersion(&rule, k) {
            Ok(w) => w
                .iter()
                .zip(m.closed_form_dispersion(k))
                .map(|(a, b)| fold_phase(a - b).abs())
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        })
        .reduce(|| 0.0, f64::max);
    let dispersion = Residual {
        worst,
        pass: worst <= cfg.tol.max(1e-10),
    };

    let pass = unitarity.pass && isotropy.pass && translation.pass && dispersion.pass;
    let report = VerifyReport {
        model: m.to_string(),
        perturb: cfg.perturb,
        tol: cfg.tol,
        unitarity,
        isotropy,
        translation,
        dispersion,
        pass,
    };
    let body = json(&report)?;
    write(&cfg.out, "verify.json", &body)?;
    print!("{body}");
    if pass {
        Ok(())
    } else {
        Err(Failure::verification(format!("{} failed verification", report.model)))
    }
}

pub fn dispersion_cmd(cfg: &RunConfig) -> Result<(), Failure> {
    let m = model(cfg)?;
    let rule = m.rule().map_err(Failure::config)?;
    let d = m.dim();
    let n = cfg.grid.unwrap_or(match d {
        1 => 101,
        2 => 41,
        _ => 15,
    });
    if n == 0 {
        return Err(Failure::config(anyhow!("grid size must be positive")));
    }
    let points = rule.lattice.brillouin_zone().grid(n);
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|k| {
            let w = dispersion(&rule, k)?;
            Ok(k.0.iter().copied().chain(w).collect())
        })
        .collect::<Result<_, qca_core::kspace::KspaceError>>()
        .map_err(|e| Failure::config(anyhow!(e)))?;
    let s = rule.internal_dim;
    let mut header: Vec<String> = (1..=d).map(|j| format!("k{j}")).collect();
    header.extend((1..=s).map(|b| format!("omega{b}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write(&cfg.out, "dispersion.csv", &qca_core::export::csv(&header, &rows))?;
    let ycols: Vec<usize> = (d + 1..=d + s).collect();
    write(
        &cfg.out,
        "dispersion.gp",
        &gnuplot_script("dispersion.csv", &format!("{m} dispersion"), 1, &ycols),
    )?;
    println!("{} grid points written to {}", rows.len(), cfg.out.join("dispersion.csv").display());
    Ok(())
}

#[derive(Serialize)]
struct EvolveSummary {
    model: String,
    shape: Vec<usize>,
    k0: Vec<f64>,
    width: f64,
    branch: usize,
    steps: usize,
    velocity: Vec<f64>,
    max_norm_deviation: f64,
    wrapped_at: Option<usize>,
}

pub fn evolve(cfg: &RunConfig) -> Result<(), Failure> {
    let m = model(cfg)?;
    let rule = m.rule().map_err(Failure::config)?;
    let d = m.dim();
    let shape = cfg.shape.clone().unwrap_or_else(|| match d {
        1 => vec![512],
        2 => vec![128, 128],
        _ => vec![48, 48, 48],
    });
    let k0 = cfg.k0.clone().unwrap_or_else(|| match d {
        1 => vec![1.0],
        2 => vec![0.8, 0.3],
        _ => vec![0.8, 0.0, 0.0],
    });
    let width = cfg.width.unwrap_or(match d {
        1 => 0.05,
        2 => 0.08,
        _ => 0.1,
    });
    let branch = cfg.branch.unwrap_or(rule.internal_dim - 1);
    let spec = PacketSpec::branch(KPoint(k0.clone()), width, branch);
    let target = |k: &KPoint| m.target_hamiltonian(k);
    let traj = evolve_packet(
        &rule,
        &shape,
        &spec,
        cfg.steps,
        cfg.compare.then_some(&target as _),
    )
    .map_err(|e| Failure::config(anyhow!(e)))?;

    write(&cfg.out, "trajectory.csv", &trajectory_csv(&traj))?;
    let ycols: Vec<usize> = (2..=d + 1).collect();
    write(
        &cfg.out,
        "trajectory.gp",
        &gnuplot_script("trajectory.csv", &format!("{m} centroid"), 1, &ycols),
    )?;

    let clean: Vec<_> = traj.rows.iter().filter(|r| !r.wrapped).collect();
    let ts: Vec<f64> = clean.iter().map(|r| r.t as f64).collect();
    let velocity = (0..d)
        .map(|j| {
            let xs: Vec<f64> = clean.iter().map(|r| r.centroid[j]).collect();
            linear_fit(&ts, &xs).0
        })
        .collect();
    let summary = EvolveSummary {
        model: m.to_string(),
        shape,
        k0,
        width,
        branch,
        steps: cfg.steps,
        velocity,
        max_norm_deviation: traj
            .rows
            .iter()
            .map(|r| (r.norm - 1.0).abs())
            .fold(0.0, f64::max),
        wrapped_at: traj.wrapped_at,
    };
    let body = json(&summary)?;
    write(&cfg.out, "evolve.json", &body)?;
    print!("{body}");
    match traj.wrapped_at {
        Some(step) => Err(Failure::verification(format!(
            "packet wrapped around the torus at step {step}"
        ))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct ResidualSummary {
    samples: usize,
    worst_transversality: f64,
    worst_curl: f64,
    worst_step_crosscheck: f64,
    /// `(|k|, ‖2n_{k/2} − k/√d‖)` along a fixed direction.
    small_k_gap: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct MaxwellOutput {
    model: String,
    rotation: RotationSweep,
    residuals: ResidualSummary,
    deviation: Vec<DeviationRow>,
    deviation_decreasing: bool,
    pass: bool,
}

fn maxwell_failure(e: MaxwellError) -> Failure {
    Failure::config(anyhow!(e))
}

pub fn maxwell(cfg: &RunConfig) -> Result<(), Failure> {
    let m = model(cfg)?;
    let Model::Weyl(v) = m else {
        return Err(Failure::config(anyhow!("maxwell needs a Weyl model, got {m}")));
    };
    let rotation = rotation_sweep(v, cfg.samples, cfg.t_max, cfg.seed).map_err(maxwell_failure)?;

    let bz = v.lattice().brillouin_zone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let times: Vec<f64> = (0..=2 * cfg.t_max).map(|i| 0.5 * i as f64).collect();
    let mut ks = Vec::with_capacity(cfg.samples);
    while ks.len() < cfg.samples {
        let k = bz.sample(&mut rng);
        if qca_core::models::n_vector(v, &k.scaled(0.5)).is_ok() && k.norm() > 0.0 {
            ks.push(k);
        }
    }
    let reports = ks
        .par_iter()
        .enumerate()
        .map(|(i, k)| maxwell_residual(v, k, &times, cfg.seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(maxwell_failure)?;
    let dir: Vec<f64> = {
        let raw = [0.48, -0.6, 0.64];
        raw[..v.dim()].to_vec()
    };
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let small_k_gap = [1e-3, 1e-2, 1e-1]
        .iter()
        .map(|&mag| {
            let k = KPoint(dir.iter().map(|x| x / norm * mag).collect());
            maxwell_residual(v, &k, &[0.0], cfg.seed).map(|r| (mag, r.small_k_gap))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(maxwell_failure)?;
    let residuals = ResidualSummary {
        samples: reports.len(),
        worst_transversality: reports.iter().map(|r| r.worst_transversality).fold(0.0, f64::max),
        worst_curl: reports.iter().map(|r| r.worst_curl).fold(0.0, f64::max),
        worst_step_crosscheck: reports.iter().map(|r| r.step_crosscheck).fold(0.0, f64::max),
        small_k_gap,
    };

    let deviation = deviation_scan(&cfg.sizes, &cfg.excitations, &rotation_axis(v)?, cfg.cap)
        .map_err(maxwell_failure)?;
    let deviation_decreasing = cfg.excitations.iter().filter(|&&e| e >= 1).all(|&e| {
        let col: Vec<f64> = deviation
            .iter()
            .filter(|r| r.m == e)
            .map(|r| r.deviation)
            .collect();
        col.windows(2).all(|w| w[1] < w[0])
    });

    let pass = rotation.worst_deviation <= cfg.tol
        && residuals.worst_transversality <= cfg.tol
        && residuals.worst_curl <= cfg.tol.max(1e-10)
        && deviation_decreasing;
    let out = MaxwellOutput {
        model: m.to_string(),
        rotation,
        residuals,
        deviation,
        deviation_decreasing,
        pass,
    };
    let body = json(&out)?;
    write(&cfg.out, "maxwell.json", &body)?;
    write(&cfg.out, "deviation.csv", &deviation_csv(&out.deviation))?;
    write(
        &cfg.out,
        "deviation.gp",
        &gnuplot_script("deviation.csv", "commutator deviation", 1, &[3]),
    )?;
    print!("{body}");
    if pass {
        Ok(())
    } else {
        Err(Failure::verification("maxwell checks failed".to_string()))
    }
}

/// A representative axis `n_{k/2}` for the Fock scan.
fn rotation_axis(v: qca_core::models::WeylVariant) -> Result<[f64; 3], Failure> {
    let k = KPoint((0..v.dim()).map(|j| 0.3 + 0.1 * j as f64).collect());
    Ok(qca_core::models::n_vector(v, &k.scaled(0.5))
        .map_err(Failure::config)?
        .n)
}

pub fn units(cfg: &RunConfig) -> Result<(), Failure> {
    let system = planck_units(UnitInputs {
        a: cfg.a,
        tau: cfg.tau,
        mass: cfg.unit_mass,
        c: cfg.c,
        hbar: cfg.hbar,
    })
    .map_err(|e| match e {
        ModelError::Inconsistent(_) => Failure::verification(e.to_string()),
        other => Failure::config(anyhow!(other)),
    })?;
    let body = json(&system)?;
    write(&cfg.out, "units.json", &body)?;
    print!("{body}");
    Ok(())
}
