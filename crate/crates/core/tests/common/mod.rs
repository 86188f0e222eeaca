#![allow(dead_code)]

use conway_skein::algebra::{make_algebra, ConwayAlgebra, OpKind};
use conway_skein::catalog::{bundled_catalog, CorpusEntry};
use conway_skein::diagram::{CrossingClass, Diagram};
use conway_skein::laurent::LaurentPoly;

/// Every bundled algebra; nonlinear with the given root degrees.
pub fn algebras(ks: &[u32]) -> Vec<ConwayAlgebra> {
    let mut out: Vec<ConwayAlgebra> =
        ["classic3", "homflypt", "gen-conway", "gen-homflypt"].iter().map(|n| make_algebra(n, None).unwrap()).collect();
    out.extend(ks.iter().map(|&k| make_algebra("nonlinear", Some(k)).unwrap()));
    out
}

pub fn corpus_where(pred: impl Fn(&CorpusEntry) -> bool) -> Vec<CorpusEntry> {
    bundled_catalog().into_iter().filter(|e| pred(e)).collect()
}

pub fn poly(alg: &ConwayAlgebra, text: &str) -> LaurentPoly {
    LaurentPoly::parse(alg.vars(), text).unwrap()
}

/// Crossings first reached along the under-strand, walking components by
/// minimal label from their minimal edge. Written against the raw slot data.
fn bad_from_default_marking(d: &Diagram) -> Vec<usize> {
    let mut visited = vec![false; d.num_crossings()];
    let mut bad = Vec::new();
    for comp in d.components() {
        for &e in comp {
            let head = d.head(e);
            if !visited[head.crossing] {
                visited[head.crossing] = true;
                if head.slot == 0 {
                    bad.push(head.crossing);
                }
            }
        }
    }
    bad
}

/// Naive evaluator: resolves the LAST bad crossing and recomputes the
/// default marking at every step.
pub fn oracle_last_bad(d: &Diagram, alg: &ConwayAlgebra) -> LaurentPoly {
    let bad = bad_from_default_marking(d);
    let Some(&c) = bad.last() else {
        return alg.unit(d.num_components()).unwrap();
    };
    let x = d.crossings()[c];
    let same = d.component_of(x.slots[0]) == d.component_of(x.slots[1]);
    let op = match (same, x.positive) {
        (true, true) => OpKind::Circ,
        (true, false) => OpKind::Slash,
        (false, true) => OpKind::Star,
        (false, false) => OpKind::SSlash,
    };
    let switched = oracle_last_bad(&d.crossing_change(c).unwrap(), alg);
    let smoothed = oracle_last_bad(&d.smooth(c).unwrap(), alg);
    alg.apply(op, &switched, &smoothed).unwrap()
}

/// `W(L)` expressed through `W(L switched at c)` and `W(L smoothed at c)`.
pub fn expand_at(d: &Diagram, c: usize, alg: &ConwayAlgebra, w: &dyn Fn(&Diagram) -> LaurentPoly) -> LaurentPoly {
    let op = match (d.classify(c).unwrap(), d.sign(c).unwrap() > 0) {
        (CrossingClass::SelfCrossing, true) => OpKind::Circ,
        (CrossingClass::SelfCrossing, false) => OpKind::Slash,
        (CrossingClass::Mixed, true) => OpKind::Star,
        (CrossingClass::Mixed, false) => OpKind::SSlash,
    };
    alg.apply(op, &w(&d.crossing_change(c).unwrap()), &w(&d.smooth(c).unwrap())).unwrap()
}
