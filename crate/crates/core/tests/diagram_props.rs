mod common;

use conway_skein::catalog::parse_input;
use conway_skein::diagram::{braid_to_diagram, parse_pd, BraidWord, CrossingClass, Diagram, DiagramError};
use proptest::prelude::*;

use common::corpus_where;

fn braid() -> impl Strategy<Value = Diagram> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let letter = (1..n as i32).prop_flat_map(|g| prop::sample::select(vec![g, -g]));
            (Just(n), prop::collection::vec(letter, 0..8))
        })
        .prop_map(|(n, letters)| braid_to_diagram(&BraidWord::new(n, letters).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_encoding_round_trips(d in braid()) {
        let text = d.canonical_encode();
        let back = parse_pd(&text).unwrap();
        prop_assert_eq!(back.canonical_encode(), text.clone());
        prop_assert_eq!(parse_pd(&d.to_pd_text()).unwrap().canonical_encode(), text.clone());
        prop_assert_eq!(d.relabeled().0.canonical_encode(), text);
    }

    #[test]
    fn crossing_change_is_an_involution(d in braid()) {
        for c in 0..d.num_crossings() {
            let once = d.crossing_change(c).unwrap();
            prop_assert_eq!(once.writhe(), d.writhe() - 2 * d.sign(c).unwrap());
            prop_assert_eq!(once.crossing_change(c).unwrap().canonical_encode(), d.canonical_encode());
        }
    }

    #[test]
    fn mirror_negates_writhe(d in braid()) {
        let m = d.mirror();
        prop_assert_eq!(m.writhe(), -d.writhe());
        prop_assert_eq!(m.num_components(), d.num_components());
        prop_assert_eq!(m.mirror().canonical_encode(), d.canonical_encode());
    }

    #[test]
    fn smoothing_changes_components_by_one(d in braid()) {
        for c in 0..d.num_crossings() {
            let s = d.smooth(c).unwrap();
            prop_assert_eq!(s.num_crossings(), d.num_crossings() - 1);
            let expected = match d.classify(c).unwrap() {
                CrossingClass::SelfCrossing => d.num_components() + 1,
                CrossingClass::Mixed => d.num_components() - 1,
            };
            prop_assert_eq!(s.num_components(), expected);
        }
    }
}

#[test]
fn corpus_columns_match() {
    for e in corpus_where(|_| true) {
        assert_eq!(e.diagram.num_crossings(), e.crossings, "{}", e.name);
        assert_eq!(e.diagram.num_components(), e.components, "{}", e.name);
        assert_eq!(e.diagram.writhe(), e.writhe, "{}", e.name);
    }
}

#[test]
fn corpus_smoothings() {
    for e in corpus_where(|e| e.crossings <= 8) {
        let d = &e.diagram;
        for c in 0..d.num_crossings() {
            let delta = d.smooth(c).unwrap().num_components() as i64 - d.num_components() as i64;
            assert_eq!(delta.abs(), 1, "{} crossing {c}", e.name);
        }
        assert_eq!(d.mirror().writhe(), -d.writhe());
    }
}

#[test]
fn canonical_encoding_ignores_presentation() {
    for e in corpus_where(|e| e.crossings <= 7) {
        let text = e.diagram.canonical_encode();
        assert_eq!(parse_pd(&text).unwrap().canonical_encode(), text, "{}", e.name);
        assert_eq!(e.diagram.relabeled().0.canonical_encode(), text, "{}", e.name);
    }
}

#[test]
fn faces_satisfy_euler() {
    for e in corpus_where(|e| e.crossings > 0 && e.diagram.pieces().len() == 1) {
        let n = e.diagram.num_crossings();
        assert_eq!(e.diagram.faces().len(), n + 2, "{}", e.name);
    }
}

#[test]
fn invalid_inputs() {
    assert!(matches!(parse_pd("PD[X[1,2,3]]"), Err(DiagramError::Syntax { .. })));
    assert!(matches!(parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,7]]"), Err(DiagramError::EdgeCount { .. })));
    assert!(matches!(parse_pd("PD[X[1,1,2,2],X[3,4,3,4]]"), Err(DiagramError::NonPlanar)));
    assert!(parse_input("braid(2; 3)").is_err());
}

#[test]
fn braid_closures() {
    let t = parse_input("braid(2; 1 1 1)").unwrap();
    assert_eq!((t.num_crossings(), t.num_components(), t.writhe()), (3, 1, 3));
    let hopf = parse_input("braid(2; -1 -1)").unwrap();
    assert_eq!((hopf.num_components(), hopf.writhe()), (2, -2));
    let trivial = parse_input("braid(3; )").unwrap();
    assert_eq!((trivial.num_crossings(), trivial.free_loops()), (0, 3));
}
