mod common;

use morsebott::complex::Complex;
use morsebott::homology::{chain_complex, Coefficients};
use proptest::prelude::*;

fn instance(seed: u64) -> Complex {
    common::random_simplicial(&mut common::rng(seed), 25)
}

proptest! {
    #[test]
    fn simplicial_complexes_validate(seed in any::<u64>()) {
        let k = instance(seed);
        let report = k.validate();
        prop_assert!(report.ok, "{:?}", report.violations);
        prop_assert!(chain_complex(&k, Coefficients::Integers).is_ok());
    }

    #[test]
    fn closures_are_subcomplexes(seed in any::<u64>(), pick in any::<u64>()) {
        let k = instance(seed);
        let cells = k
            .indices()
            .filter(|c| (pick >> (c.index() % 64)) & 1 == 1)
            .collect();
        let closure = k.closure(&cells);
        prop_assert!(k.is_subcomplex(&closure));
        prop_assert!(cells.is_subset(&closure));
        prop_assert_eq!(k.closure(&closure), closure);
    }

    #[test]
    fn facet_and_cofacet_views_agree(seed in any::<u64>()) {
        let k = instance(seed);
        for c in k.indices() {
            for r in k.facets(c) {
                prop_assert_eq!(r.parent, c);
                prop_assert!(k.cofacets(r.child).any(|q| q.parent == c));
                prop_assert_eq!(k.dim(r.child) + 1, k.dim(c));
            }
        }
    }
}

#[test]
fn flipped_sign_breaks_the_chain_condition() {
    let cells = [("a", 0), ("b", 0), ("c", 0), ("ab", 1), ("bc", 1), ("ac", 1), ("t", 2)];
    let mut faces = vec![
        ("ab", "a", -1, true),
        ("ab", "b", 1, true),
        ("bc", "b", -1, true),
        ("bc", "c", 1, true),
        ("ac", "a", -1, true),
        ("ac", "c", 1, true),
        ("t", "bc", 1, true),
        ("t", "ac", -1, true),
        ("t", "ab", 1, true),
    ];
    let good = Complex::build_from_incidence(cells, faces.clone()).unwrap();
    assert!(good.validate().ok);
    faces[8].2 = -1;
    let bad = Complex::build_from_incidence(cells, faces).unwrap();
    let report = bad.validate();
    assert!(!report.ok);
    assert!(report.violations.iter().all(|v| v.rule == "chain-condition"));
    assert!(chain_complex(&bad, Coefficients::Integers).is_err());
    // mod 2 the sign flip is invisible
    assert!(chain_complex(&bad, Coefficients::Mod2).is_ok());
}
