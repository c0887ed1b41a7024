//! Fixtures shared by the criterion benches.

use qca_core::kspace::TransitionRule;
use qca_core::lattice::SpinorField;
use qca_core::models::{dirac_rule, weyl_rule, Chirality, DiracParams, WeylVariant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named rules covering each lattice and both internal dimensions.
pub fn rules() -> Vec<(&'static str, TransitionRule)> {
    let weyl3 = WeylVariant::D3(Chirality::APlus);
    vec![
        ("weyl1d", weyl_rule(WeylVariant::D1).expect("shipped rule")),
        (
            "weyl2d",
            weyl_rule(WeylVariant::D2 { transposed: false, theta: 0.0 }).expect("shipped rule"),
        ),
        ("weyl3d+", weyl_rule(weyl3).expect("shipped rule")),
        (
            "dirac3d",
            dirac_rule(DiracParams::new(0.3, weyl3).expect("valid mass")).expect("shipped rule"),
        ),
    ]
}

/// A cubic torus with about `sites` sites in the rule's dimension.
pub fn shape_for(rule: &TransitionRule, sites: usize) -> Vec<usize> {
    let d = rule.dim();
    let side = (sites as f64).powf(1.0 / d as f64).round() as usize;
    vec![side.max(4); d]
}

pub fn random_field(rule: &TransitionRule, shape: &[usize], seed: u64) -> SpinorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpinorField::random(shape, rule.internal_dim, &mut rng)
}
