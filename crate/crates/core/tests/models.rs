use qca_core::kspace::{
    build_ak, dispersion, group_velocity, interpolating_hamiltonian, isotropy_check,
    small_k_residual_fit, translation_covariance_check, unitarity_report, KPoint, SitePatch,
    TransitionRule, VelocityOptions,
};
use qca_core::linalg::{dist, exp_minus_i, hermiticity_residual, pauli, Mat, C64, I};
use qca_core::models::{
    dirac_rule, n_vector, weyl_rule, Chirality, DiracParams, Model, WeylVariant,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn all_models() -> Vec<Model> {
    let mut v: Vec<Model> = WeylVariant::all_default().into_iter().map(Model::Weyl).collect();
    for w in [
        WeylVariant::D1,
        WeylVariant::D2 { transposed: false, theta: 0.0 },
        WeylVariant::D3(Chirality::APlus),
        WeylVariant::D3(Chirality::BMinus),
    ] {
        for m in [0.0, 0.3, 0.6, 1.0] {
            v.push(Model::Dirac(DiracParams::new(m, w).unwrap()));
        }
    }
    v
}

#[test]
fn rules_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for model in all_models() {
        let rule = model.rule().unwrap();
        let bz = rule.lattice.brillouin_zone();
        for _ in 0..200 {
            let k = bz.sample(&mut rng);
            assert!(dist(&build_ak(&rule, &k), &model.closed_form_ak(&k)) < 1e-12, "{model}");
        }
    }
}

#[test]
fn isotropy_holds() {
    for model in all_models() {
        let rule = model.rule().unwrap();
        let g = model.isotropy_group(&rule).unwrap();
        let rep = isotropy_check(&rule, &g, 1e-12).unwrap();
        assert!(rep.pass, "{model}: {rep:?}");
    }
}

#[test]
fn wrong_representative_fails() {
    let v = WeylVariant::D3(Chirality::APlus);
    let rule = weyl_rule(v).unwrap();
    let mut g = v.isotropy_group(&rule).unwrap();
    g.elements[3].unitary = pauli()[2].clone();
    assert!(!isotropy_check(&rule, &g, 1e-12).unwrap().pass);
}

#[test]
fn dispersion_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for model in all_models() {
        let rule = model.rule().unwrap();
        let bz = rule.lattice.brillouin_zone();
        for _ in 0..200 {
            let k = bz.sample(&mut rng);
            let got = dispersion(&rule, &k).unwrap();
            let want = model.closed_form_dispersion(&k);
            for (a, b) in got.iter().zip(&want) {
                let d = (a - b).abs().min(2.0 * PI - (a - b).abs());
                assert!(d < 1e-10, "{model} {k:?} {got:?} {want:?}");
            }
        }
    }
}

#[test]
fn dispersion_examples() {
    let w1 = weyl_rule(WeylVariant::D1).unwrap();
    let p = dispersion(&w1, &KPoint::new(&[0.3])).unwrap();
    assert!((p[0] + 0.3).abs() < 1e-12 && (p[1] - 0.3).abs() < 1e-12);
    let w3 = weyl_rule(WeylVariant::D3(Chirality::APlus)).unwrap();
    let h = 3f64.sqrt() * PI / 2.0;
    let p = dispersion(&w3, &KPoint::new(&[h, h, h])).unwrap();
    assert!(p.iter().all(|x| x.abs() < 1e-7), "{p:?}");
    let d = dirac_rule(DiracParams::new(0.5, WeylVariant::D3(Chirality::APlus)).unwrap()).unwrap();
    let p = dispersion(&d, &KPoint::zero(3)).unwrap();
    assert!((p[0] + PI / 6.0).abs() < 1e-12 && (p[3] - PI / 6.0).abs() < 1e-12);
}

#[test]
fn build_ak_examples() {
    let w1 = weyl_rule(WeylVariant::D1).unwrap();
    let a = build_ak(&w1, &KPoint::new(&[PI / 2.0]));
    assert!(dist(&a, &(pauli()[2].clone() * (-I))) < 1e-12);
    assert!(dist(&build_ak(&w1, &KPoint::zero(1)), &Mat::identity(2, 2)) < 1e-12);
}

#[test]
fn unitarity_negative() {
    let w1 = weyl_rule(WeylVariant::D1).unwrap();
    let rep = unitarity_report(&w1.perturbed(1.01), 1e-12);
    assert!(!rep.pass);
    assert!((rep.cond1 - 0.0201 * 2f64.sqrt()).abs() < 5e-3, "{}", rep.cond1);
}

#[test]
fn hamiltonian_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let rule = weyl_rule(WeylVariant::D3(Chirality::APlus)).unwrap();
    let bz = rule.lattice.brillouin_zone();
    for _ in 0..100 {
        let k = bz.sample(&mut rng);
        let h = interpolating_hamiltonian(&rule, &k).unwrap();
        assert!(hermiticity_residual(&h) < 1e-12);
        assert!(dist(&exp_minus_i(&h), &build_ak(&rule, &k)) < 1e-12);
    }
    let w1 = weyl_rule(WeylVariant::D1).unwrap();
    let h = interpolating_hamiltonian(&w1, &KPoint::new(&[1.2])).unwrap();
    assert!(dist(&h, &(pauli()[2].clone() * C64::from(1.2))) < 1e-12);
    assert!(interpolating_hamiltonian(&w1, &KPoint::new(&[PI])).is_err());
}

#[test]
fn velocities() {
    let opts = VelocityOptions::default();
    let w1 = weyl_rule(WeylVariant::D1).unwrap();
    for k in [0.2, 1.0, 2.5] {
        let v = group_velocity(&w1, &KPoint::new(&[k]), 1, &opts).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-6);
    }
    let v3 = WeylVariant::D3(Chirality::APlus);
    let w3 = weyl_rule(v3).unwrap();
    let k = KPoint::new(&[6e-4, -5e-4, 6e-4]);
    let v = group_velocity(&w3, &k, 1, &opts).unwrap();
    let mag = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((mag - 1.0 / 3f64.sqrt()).abs() < 1e-3, "{mag}");
    let k = KPoint::new(&[0.4, -0.9, 0.3]);
    let v = group_velocity(&w3, &k, 1, &opts).unwrap();
    let cf = v3.closed_form_velocity(&k);
    for (a, b) in v.iter().zip(&cf) {
        assert!((a - b).abs() < 1e-8);
    }
    let d = dirac_rule(DiracParams::new(1.0, v3).unwrap()).unwrap();
    let v = group_velocity(&d, &k, 3, &opts).unwrap();
    assert!(v.iter().all(|x| x.abs() < 1e-9));
}

#[test]
fn small_k_fit() {
    let v3 = WeylVariant::D3(Chirality::APlus);
    let w3 = weyl_rule(v3).unwrap();
    let mags = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1];
    let fit = small_k_residual_fit(&w3, &|k| v3.target_hamiltonian(k), &mags, 8, 1, false).unwrap();
    assert!((fit.slope - 2.0).abs() < 0.2, "{fit:?}");
    let w1 = weyl_rule(WeylVariant::D1).unwrap();
    assert!(small_k_residual_fit(&w1, &|k| WeylVariant::D1.target_hamiltonian(k), &mags, 4, 1, false).is_err());
    for m in [0.01, 0.03, 0.1] {
        let p = DiracParams::new(m, v3).unwrap();
        let d = dirac_rule(p).unwrap();
        let fit = small_k_residual_fit(&d, &|k| p.target_hamiltonian(k), &mags, 8, 1, true).unwrap();
        eprintln!("dirac m={m}: slope {}", fit.slope);
    }
}

#[test]
fn translation_covariance() {
    let w = weyl_rule(WeylVariant::D2 { transposed: false, theta: 0.0 }).unwrap();
    assert!(translation_covariance_check(&w, &[4, 5], &[], &[vec![2, 3]], 1e-12).unwrap());
    let patch = SitePatch {
        site: vec![1, 1],
        label: "h1".into(),
        matrix: w.matrix("h1").unwrap() * C64::from(0.5),
    };
    assert!(!translation_covariance_check(&w, &[4, 5], &[patch], &[], 1e-12).unwrap());
    let id = TransitionRule::identity_rule(w.lattice.clone(), 2);
    assert!(translation_covariance_check(&id, &[3, 3], &[], &[], 1e-12).unwrap());
    assert!(translation_covariance_check(&w, &[2, 5], &[], &[], 1e-12).is_err());
}

#[test]
fn n_vector_values() {
    let nv = n_vector(WeylVariant::D1, &KPoint::new(&[0.5])).unwrap();
    assert!((nv.n[2] - 0.5).abs() < 1e-14);
    let z = n_vector(WeylVariant::D3(Chirality::APlus), &KPoint::zero(3)).unwrap();
    assert_eq!(z.n, [0.0; 3]);
}
