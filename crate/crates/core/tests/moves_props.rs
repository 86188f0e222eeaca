mod common;

use conway_skein::algebra::{make_algebra, ConwayAlgebra};
use conway_skein::diagram::Diagram;
use conway_skein::moves::{
    apply_move, find_moves, format_events, parse_events, r1_insertions, r2_insertions, random_perturb, replay,
    trivialize, MoveError, MoveEvent,
};
use conway_skein::skein::evaluate;
use proptest::prelude::*;

use common::corpus_where;

fn gen_conway() -> ConwayAlgebra {
    make_algebra("gen-conway", None).unwrap()
}

fn all_moves(d: &Diagram) -> Vec<MoveEvent> {
    let mut out = find_moves(d);
    out.extend(r1_insertions(d));
    out.extend(r2_insertions(d));
    out
}

/// Some move of the given kind takes `d` back to a diagram encoded as `target`.
fn undone_by(d: &Diagram, target: &str, kind: fn(&MoveEvent) -> bool) -> bool {
    find_moves(d).iter().filter(|e| kind(e)).any(|e| apply_move(d, e).unwrap().canonical_encode() == target)
}

#[test]
fn every_move_preserves_the_invariant() {
    let algs = [gen_conway(), make_algebra("homflypt", None).unwrap()];
    for e in corpus_where(|e| e.crossings <= 5) {
        let base: Vec<_> = algs.iter().map(|a| evaluate(&e.diagram, a).unwrap()).collect();
        for ev in all_moves(&e.diagram) {
            let next = apply_move(&e.diagram, &ev).unwrap_or_else(|err| panic!("{} {ev}: {err}", e.name));
            let delta = next.num_crossings() as i64 - e.diagram.num_crossings() as i64;
            assert_eq!(delta, ev.crossing_delta(), "{} {ev}", e.name);
            assert_eq!(next.num_components(), e.diagram.num_components(), "{} {ev}", e.name);
            for (alg, b) in algs.iter().zip(&base) {
                assert_eq!(&evaluate(&next, alg).unwrap(), b, "{} {ev} under {}", e.name, alg.label());
            }
        }
    }
}

#[test]
fn event_text_round_trips() {
    for e in corpus_where(|e| e.crossings <= 6) {
        let events = all_moves(&e.diagram);
        let text = format_events(&events);
        assert_eq!(parse_events(&text).unwrap(), events, "{}", e.name);
    }
}

#[test]
fn insertions_have_inverses() {
    let is_r1 = |e: &MoveEvent| matches!(e, MoveEvent::R1Minus { .. });
    let is_r2 = |e: &MoveEvent| matches!(e, MoveEvent::R2Minus { .. });
    for e in corpus_where(|e| e.crossings <= 4) {
        let target = e.diagram.canonical_encode();
        for ev in r1_insertions(&e.diagram) {
            let up = apply_move(&e.diagram, &ev).unwrap();
            assert!(undone_by(&up, &target, is_r1), "{} {ev}", e.name);
        }
        for ev in r2_insertions(&e.diagram) {
            let up = apply_move(&e.diagram, &ev).unwrap();
            assert!(undone_by(&up, &target, is_r2), "{} {ev}", e.name);
        }
    }
}

#[test]
fn r3_is_an_involution() {
    let is_r3 = |e: &MoveEvent| matches!(e, MoveEvent::R3 { .. });
    let mut seen = 0;
    for e in corpus_where(|e| e.crossings <= 8) {
        let target = e.diagram.canonical_encode();
        for ev in find_moves(&e.diagram).into_iter().filter(is_r3) {
            let flipped = apply_move(&e.diagram, &ev).unwrap();
            assert!(undone_by(&flipped, &target, is_r3), "{} {ev}", e.name);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn inapplicable_moves_are_rejected() {
    let t = corpus_where(|e| e.name == "trefoil+").remove(0).diagram;
    let r1 = MoveEvent::R1Minus { crossing: 0 };
    assert!(matches!(apply_move(&t, &r1), Err(MoveError::Inapplicable { .. })));
    assert!(apply_move(&t, &MoveEvent::CrossingChange { crossing: 7 }).is_err());
    assert!(matches!(parse_events("R9@c1"), Err(MoveError::Parse(_))));
    assert!(matches!(parse_events("R1-@c0"), Err(MoveError::Parse(_))));
}

#[test]
fn trivialize_replays() {
    for e in corpus_where(|_| true) {
        let events = trivialize(&e.diagram).unwrap();
        let end = replay(&e.diagram, &events).unwrap();
        assert_eq!(end.num_crossings(), 0, "{}", e.name);
        assert_eq!(end.free_loops(), e.components, "{}", e.name);
        assert!(events.iter().all(|ev| ev.crossing_delta() <= 0), "{}", e.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perturbations_replay(seed in any::<u64>(), idx in 0usize..20, steps in 0usize..12) {
        let entries = corpus_where(|e| e.crossings <= 6);
        let e = &entries[idx % entries.len()];
        let p = random_perturb(&e.diagram, seed, steps, 12);
        prop_assert_eq!(p.events.len() + p.skipped, steps);
        let again = random_perturb(&e.diagram, seed, steps, 12);
        prop_assert_eq!(&again.events, &p.events);
        let replayed = replay(&e.diagram, &p.events).unwrap();
        prop_assert_eq!(replayed.canonical_encode(), p.diagram.canonical_encode());
        let alg = gen_conway();
        prop_assert_eq!(evaluate(&p.diagram, &alg).unwrap(), evaluate(&e.diagram, &alg).unwrap());
    }
}
