use proptest::prelude::*;
use qca_core::cayley::{
    cayley_ball, homogeneity_path_check, petersen_graph, reduce_word, word_metric,
    GroupPresentation, Letter, Word,
};

fn letters(gens: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, prop::bool::ANY), 0..12).prop_map(|v| {
        Word::new(
            v.into_iter()
                .map(|(g, up)| Letter::new(g, if up { 1 } else { -1 }))
                .collect(),
        )
    })
}

fn vec3() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 3)
}

proptest! {
    #[test]
    fn reduction_is_idempotent(w in letters(2)) {
        let p = GroupPresentation::square();
        let once = reduce_word(&w, &p.generators).unwrap();
        let twice = reduce_word(&once, &p.generators).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.len() <= w.len());
        prop_assert_eq!(p.word_vector(&once).unwrap(), p.word_vector(&w).unwrap());
    }

    #[test]
    fn word_times_inverse_reduces_to_empty(w in letters(4)) {
        let p = GroupPresentation::bcc();
        let r = p.reduce(&w.concat(&w.inverse())).unwrap();
        prop_assert!(r.is_empty());
    }

    #[test]
    fn bcc_metric_triangle_inequality(a in vec3(), b in vec3(), c in vec3()) {
        let p = GroupPresentation::bcc();
        let d = |x: &[i64], y: &[i64]| word_metric(&p, x, y, 24).unwrap();
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0);
    }

    #[test]
    fn abelian_paths_are_uniform(w in letters(2)) {
        let p = GroupPresentation::square();
        let g = cayley_ball(&p, 16).unwrap();
        let sample: Vec<_> = [[0i64, 0], [2, -1], [-3, 1], [0, 4]]
            .iter()
            .map(|c| g.vertex_at(c).unwrap())
            .collect();
        let report = homogeneity_path_check(&g, &w, &sample).unwrap();
        prop_assert!(report.uniform);
        let closed = p.word_vector(&w).unwrap().iter().all(|&x| x == 0);
        prop_assert_eq!(report.open.is_empty(), closed);
    }
}

#[test]
fn bcc_ball_has_degree_eight_inside() {
    let g = cayley_ball(&GroupPresentation::bcc(), 3).unwrap();
    let origin = g.vertex_at(&[0, 0, 0]).unwrap();
    assert_eq!(g.degree(origin), 8);
    let w = Word::parse("abcd", &g.generators()).unwrap();
    assert_eq!(g.apply_word(origin, &w), Ok(origin));
}

#[test]
fn petersen_is_not_homogeneous() {
    let g = petersen_graph();
    let w = Word::parse("brrbr", &g.generators()).unwrap();
    let report = homogeneity_path_check(&g, &w, &g.vertices).unwrap();
    assert!(!report.uniform);
    assert_eq!(report.closed.len(), 5);
    assert!(report.closed.contains(&1));
    assert!(report.open.contains(&(2, 3)));
}
