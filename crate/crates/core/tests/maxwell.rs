use qca_core::kspace::KPoint;
use qca_core::linalg::{cnorm3, cvec_sub, rdot, C64};
use qca_core::maxwell::{
    boson_commutator_deviation, build_fock, check_frame, conjugation_rotation_check,
    deviation_csv, deviation_scan, eb_fields, polarization_ops, reconstruct_g, rotation_sweep,
    maxwell_residual, sparse_norm, transverse_project, vacuum_norm, MaxwellError,
    SmearingProfile, SparseOp, DEFAULT_MODE_CAP,
};
use qca_core::models::{n_vector, Chirality, WeylVariant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn random_cvec(rng: &mut ChaCha8Rng) -> [C64; 3] {
    [0, 1, 2].map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
}

#[test]
fn transverse_projection_cases() {
    let n = [0.2, -0.4, 0.9];
    let along = n.map(|x| C64::new(1.5 * x, -0.3 * x));
    assert!(cnorm3(&transverse_project(&along, &n).unwrap()) < 1e-15);
    let ortho = [0.9, 0.0, -0.2].map(|x| C64::new(x, 0.1 * x));
    let p = transverse_project(&ortho, &n).unwrap();
    assert!(cnorm3(&cvec_sub(&p, &ortho)) < 1e-15);
    assert_eq!(
        transverse_project(&ortho, &[0.0; 3]),
        Err(MaxwellError::ZeroAxis)
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let g = random_cvec(&mut rng);
        let n: [f64; 3] = [0, 1, 2].map(|_| StandardNormal.sample(&mut rng));
        let p = transverse_project(&g, &n).unwrap();
        assert!(rdot(&n, &p).norm() < 1e-13);
        let pp = transverse_project(&p, &n).unwrap();
        assert!(cnorm3(&cvec_sub(&p, &pp)) < 1e-14);
    }
}

#[test]
fn conjugation_matches_spin1_rotation() {
    for c in Chirality::ALL {
        let sweep = rotation_sweep(WeylVariant::D3(c), 100, 10, 7).unwrap();
        assert!(sweep.worst_deviation <= 1e-12, "{c:?}: {}", sweep.worst_deviation);
        assert!(sweep.worst_axis_deviation <= 1e-12);
    }
    for v in [WeylVariant::D1, WeylVariant::D2 { transposed: false, theta: 0.0 }] {
        assert!(rotation_sweep(v, 50, 10, 3).unwrap().worst_deviation <= 1e-12);
    }
    let r = conjugation_rotation_check(
        WeylVariant::D3(Chirality::BMinus),
        &KPoint::new(&[1.1, -0.3, 0.7]),
        0,
    )
    .unwrap();
    assert_eq!(r.deviation, 0.0);
}

#[test]
fn electric_magnetic_split() {
    let n = [0.1, 0.2, -0.3];
    let real = [C64::new(1.0, 0.0), C64::new(-2.0, 0.0), C64::new(0.5, 0.0)];
    let (_, b) = eb_fields(&real, &n);
    assert_eq!(cnorm3(&b), 0.0);
    let imag = real.map(|z| z * C64::new(0.0, 1.0));
    let (e, _) = eb_fields(&imag, &n);
    assert_eq!(cnorm3(&e), 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let g = random_cvec(&mut rng);
        let (e, b) = eb_fields(&g, &n);
        assert!(cnorm3(&cvec_sub(&reconstruct_g(&e, &b, &n), &g)) <= 1e-14);
    }
}

#[test]
fn curl_equations_and_transversality() {
    let v = WeylVariant::D3(Chirality::APlus);
    let times: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bz = v.lattice().brillouin_zone();
    for seed in 0..50 {
        let k = bz.sample(&mut rng);
        let rep = maxwell_residual(v, &k, &times, seed).unwrap();
        assert!(rep.worst_transversality <= 1e-12, "{}", rep.worst_transversality);
        assert!(rep.worst_curl <= 1e-10, "{}", rep.worst_curl);
        assert!(rep.step_crosscheck <= 1e-10, "{}", rep.step_crosscheck);
    }
    assert!(matches!(
        maxwell_residual(v, &KPoint::zero(3), &times, 0),
        Err(MaxwellError::ZeroAxis)
    ));
}

#[test]
fn small_k_gap_is_second_order() {
    let v = WeylVariant::D3(Chirality::APlus);
    let dir = [0.48, -0.6, 0.64];
    let gap = |m: f64| {
        let k = KPoint(dir.iter().map(|x| x * m).collect());
        maxwell_residual(v, &k, &[0.0], 0).unwrap().small_k_gap
    };
    let slope = (gap(1e-2) / gap(1e-3)).log10();
    assert!((slope - 2.0).abs() < 0.05, "{slope}");

    let d1 = maxwell_residual(WeylVariant::D1, &KPoint::new(&[1e-3]), &[0.0], 0).unwrap();
    assert!(d1.small_k_gap < 1e-15);
}

#[test]
fn fock_anticommutators_exact() {
    for n in 1..=3 {
        let f = build_fock(n, DEFAULT_MODE_CAP).unwrap();
        assert_eq!(f.car_residual(), 0.0);
        for mode in 0..f.modes() {
            assert_eq!(f.number_spectrum(mode), vec![0.0, 1.0]);
        }
    }
    assert_eq!(
        build_fock(7, DEFAULT_MODE_CAP).unwrap_err(),
        MaxwellError::CapExceeded { modes: 14, cap: 12 }
    );
    assert!(build_fock(7, 14).is_ok());
}

#[test]
fn polarization_frame_is_checked() {
    let n = [0.0, 0.0, 1.0];
    let f = build_fock(2, DEFAULT_MODE_CAP).unwrap();
    let p = SmearingProfile::line(KPoint::zero(3), 2, 0.1).unwrap();
    assert!(check_frame(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &n).is_ok());
    assert!(matches!(
        polarization_ops(&f, &p, &[1.0, 0.0, 0.0], &[0.6, 0.8, 0.0], &n),
        Err(MaxwellError::BadFrame(_))
    ));
    assert!(matches!(
        polarization_ops(&f, &p, &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &n),
        Err(MaxwellError::BadFrame(_))
    ));
    let big = SmearingProfile::line(KPoint::zero(3), 4, 0.1).unwrap();
    assert!(matches!(
        polarization_ops(&f, &big, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &n),
        Err(MaxwellError::MissingModes { .. })
    ));
}

#[test]
fn polarization_vacuum_properties() {
    let v = WeylVariant::D3(Chirality::APlus);
    let k = KPoint::new(&[0.3, -0.2, 0.5]);
    let n = n_vector(v, &k.scaled(0.5)).unwrap().n;
    let (u1, u2) = qca_core::maxwell::frame_for(&n).unwrap();
    for n_k in [2, 4] {
        let f = build_fock(n_k, DEFAULT_MODE_CAP).unwrap();
        let p = SmearingProfile::line(k.clone(), n_k, 0.05).unwrap();
        assert!((p.normalization() - 1.0).abs() < 1e-15);
        let (g1, g2) = polarization_ops(&f, &p, &u1, &u2, &n).unwrap();
        for g in [&g1, &g2] {
            assert!((vacuum_norm(g) - 1.0).abs() < 1e-12);
            let col: f64 = g.col(0).values().iter().map(|z| z.norm_sqr()).sum();
            assert_eq!(col, 0.0);
        }
        assert!(boson_commutator_deviation(&f, &(g1, g2), n_k, 0).unwrap() < 1e-12);
    }
}

#[test]
fn commutator_deviation_shrinks_with_modes() {
    let n = [0.2, 0.3, -0.4];
    let rows = deviation_scan(&[2, 4, 6], &[0, 1, 2], &n, DEFAULT_MODE_CAP).unwrap();
    for m in [1, 2] {
        let col: Vec<f64> = rows.iter().filter(|r| r.m == m).map(|r| r.deviation).collect();
        assert_eq!(col.len(), 3);
        assert!(col.windows(2).all(|w| w[1] < w[0]), "{col:?}");
    }
    for r in rows.iter().filter(|r| r.m == 0) {
        assert!(r.deviation < 1e-12);
    }
    let m1: Vec<f64> = rows.iter().filter(|r| r.m == 1).map(|r| r.deviation).collect();
    for (d, expect) in m1.iter().zip([1.0, 0.5, 1.0 / 3.0]) {
        assert!((d - expect).abs() < 1e-12);
    }

    let saturated = deviation_scan(&[2], &[2], &n, DEFAULT_MODE_CAP).unwrap();
    assert!(saturated[0].deviation >= 1.0);

    let csv = deviation_csv(&rows);
    assert!(csv.starts_with("N_k,M,deviation\n"));

    assert!(matches!(
        deviation_scan(&[8], &[1], &n, DEFAULT_MODE_CAP),
        Err(MaxwellError::CapExceeded { .. })
    ));
    let f = build_fock(2, DEFAULT_MODE_CAP).unwrap();
    let zero = SparseOp::zeros(f.dim, f.dim);
    assert!(matches!(
        boson_commutator_deviation(&f, &(zero.clone(), zero), 2, 3),
        Err(MaxwellError::TooManyExcitations { .. })
    ));
    assert_eq!(sparse_norm(&SparseOp::zeros(4, 4)), 0.0);
}
