//! Skein recursion on the first bad crossing.
//!
//! A marking fixes a component order and a base edge per component. Walking
//! the components in order from their base edges, a crossing is bad when it
//! is first reached along its under-strand. A diagram without bad crossings
//! is descending and evaluates to the unit `a_n`, `n` its component count.
//! Otherwise the first bad crossing is switched and smoothed and the two
//! values are combined with the operation matching its class and sign.

use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::algebra::{AlgebraError, ConwayAlgebra, OpKind};
use crate::diagram::{CrossingClass, Diagram, DiagramError, Edge, EdgeMap};
use crate::laurent::LaurentPoly;

pub const MAX_CROSSINGS: usize = 64;

/// Below this size the two subtrees are evaluated on the current thread.
const PARALLEL_THRESHOLD: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    #[error("diagram has {0} crossings; at most {MAX_CROSSINGS} are supported")]
    TooLarge(usize),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Base edges listed in component order; each edge names its component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marking {
    bases: Vec<Edge>,
}

impl Marking {
    pub fn new(d: &Diagram, bases: Vec<Edge>) -> Result<Marking, SkeinError> {
        if bases.len() != d.components().len() {
            return Err(SkeinError::InvalidMarking(format!(
                "{} base edges for {} components",
                bases.len(),
                d.components().len()
            )));
        }
        let mut seen = vec![false; d.components().len()];
        for &b in &bases {
            if !d.has_edge(b) {
                return Err(SkeinError::InvalidMarking(format!("edge {b} not in diagram")));
            }
            let c = d.component_of(b);
            if std::mem::replace(&mut seen[c], true) {
                return Err(SkeinError::InvalidMarking(format!("two base edges on the component of edge {b}")));
            }
        }
        Ok(Marking { bases })
    }

    pub fn bases(&self) -> &[Edge] {
        &self.bases
    }

    /// Every component order combined with every base-edge choice.
    pub fn all(d: &Diagram) -> Vec<Marking> {
        let comps = d.components();
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..comps.len()).collect();
        all_orders(&mut order, 0, &mut |ord| {
            let mut bases = vec![Vec::new()];
            for &ci in ord {
                bases = bases
                    .into_iter()
                    .flat_map(|prefix: Vec<Edge>| {
                        comps[ci].iter().map(move |&e| {
                            let mut b = prefix.clone();
                            b.push(e);
                            b
                        })
                    })
                    .collect();
            }
            out.extend(bases.into_iter().map(|bases| Marking { bases }));
        });
        out
    }
}

fn all_orders(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        all_orders(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Components by minimal edge label, each based at its minimal label.
pub fn default_marking(d: &Diagram) -> Marking {
    Marking { bases: d.components().iter().map(|c| c[0]).collect() }
}

/// Bad crossings in order of first visit.
pub fn bad_crossings(d: &Diagram, m: &Marking) -> Vec<usize> {
    let mut seen = vec![false; d.num_crossings()];
    let mut bad = Vec::new();
    for &base in &m.bases {
        let mut e = base;
        loop {
            let h = d.head(e);
            if !std::mem::replace(&mut seen[h.crossing], true) && h.slot == 0 {
                bad.push(h.crossing);
            }
            e = d.succ(e);
            if e == base {
                break;
            }
        }
    }
    bad
}

fn first_bad(d: &Diagram, m: &Marking) -> Option<usize> {
    let mut seen = vec![false; d.num_crossings()];
    for &base in &m.bases {
        let mut e = base;
        loop {
            let h = d.head(e);
            if !std::mem::replace(&mut seen[h.crossing], true) && h.slot == 0 {
                return Some(h.crossing);
            }
            e = d.succ(e);
            if e == base {
                break;
            }
        }
    }
    None
}

/// The operation expressing `W(L)` through the switched and smoothed values.
pub fn op_for(class: CrossingClass, sign: i32) -> OpKind {
    match (class, sign > 0) {
        (CrossingClass::SelfCrossing, true) => OpKind::Circ,
        (CrossingClass::SelfCrossing, false) => OpKind::Slash,
        (CrossingClass::Mixed, true) => OpKind::Star,
        (CrossingClass::Mixed, false) => OpKind::SSlash,
    }
}

/// Carries a marking across the smoothing of crossing `c`.
///
/// Self smoothing: the piece holding the old base keeps its place and the
/// other piece is appended, based on the merged edge at the smoothing site.
/// If the old base's piece became a free loop, the other piece takes its
/// place. Mixed smoothing: the merged component keeps the earlier base and
/// the later one is dropped.
pub fn marking_after_smoothing(d: &Diagram, m: &Marking, c: usize, smoothed: &Diagram, map: &EdgeMap) -> Marking {
    let x = d.crossings()[c];
    let position = |comp: usize| m.bases.iter().position(|&b| d.component_of(b) == comp).expect("marking covers every component");
    let under = position(d.component_of(x.slots[0]));
    let over = position(d.component_of(x.slots[1]));
    let mut bases: Vec<Option<Edge>> = m.bases.iter().map(|&b| map.get(b)).collect();
    if under != over {
        bases[under.max(over)] = None;
    } else {
        let j = under;
        let sites = [map.get(x.slots[0]), map.get(x.slots[x.over_in()])];
        match bases[j] {
            Some(bj) => {
                let home = smoothed.component_of(bj);
                let other = sites.into_iter().flatten().find(|&e| smoothed.component_of(e) != home);
                bases.extend(other.map(Some));
            }
            None => bases[j] = sites.into_iter().flatten().next(),
        }
    }
    Marking { bases: bases.into_iter().flatten().collect() }
}

fn check_size(d: &Diagram) -> Result<(), SkeinError> {
    if d.num_crossings() > MAX_CROSSINGS {
        return Err(SkeinError::TooLarge(d.num_crossings()));
    }
    Ok(())
}

pub fn evaluate(d: &Diagram, alg: &ConwayAlgebra) -> Result<LaurentPoly, SkeinError> {
    evaluate_with(d, alg, &default_marking(d))
}

pub fn evaluate_with(d: &Diagram, alg: &ConwayAlgebra, m: &Marking) -> Result<LaurentPoly, SkeinError> {
    check_size(d)?;
    Marking::new(d, m.bases.clone())?;
    eval_rec(d, alg, m, None)
}

struct Split {
    crossing: usize,
    class: CrossingClass,
    sign: i32,
    switched: Diagram,
    smoothed: Diagram,
    smoothed_marking: Marking,
}

fn split(d: &Diagram, m: &Marking) -> Result<Option<Split>, SkeinError> {
    let Some(c) = first_bad(d, m) else {
        return Ok(None);
    };
    let class = d.classify(c)?;
    let sign = d.sign(c)?;
    let switched = d.crossing_change(c)?;
    let (smoothed, map) = d.smooth_with_map(c)?;
    let smoothed_marking = marking_after_smoothing(d, m, c, &smoothed, &map);
    Ok(Some(Split { crossing: c, class, sign, switched, smoothed, smoothed_marking }))
}

fn eval_rec(d: &Diagram, alg: &ConwayAlgebra, m: &Marking, cache: Option<&SkeinCache>) -> Result<LaurentPoly, SkeinError> {
    let key = cache.map(|_| d.canonical_encode());
    if let (Some(cache), Some(key)) = (cache, &key) {
        if let Some(v) = cache.get(key) {
            return Ok(v);
        }
    }
    let value = match split(d, m)? {
        None => alg.unit(d.num_components())?,
        Some(s) => {
            let (a, b) = if d.num_crossings() >= PARALLEL_THRESHOLD {
                rayon::join(
                    || eval_rec(&s.switched, alg, m, cache),
                    || eval_rec(&s.smoothed, alg, &s.smoothed_marking, cache),
                )
            } else {
                (eval_rec(&s.switched, alg, m, cache), eval_rec(&s.smoothed, alg, &s.smoothed_marking, cache))
            };
            alg.apply(op_for(s.class, s.sign), &a?, &b?)?
        }
    };
    if let (Some(cache), Some(key)) = (cache, key) {
        cache.insert(key, value.clone());
    }
    Ok(value)
}

/// Memo of subdiagram values keyed by canonical encoding, for one algebra.
/// Sound because the value does not depend on the marking.
#[derive(Debug, Default)]
pub struct SkeinCache {
    values: Mutex<HashMap<String, LaurentPoly>>,
}

impl SkeinCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(&self, key: &str) -> Option<LaurentPoly> {
        self.values.lock().expect("cache lock").get(key).cloned()
    }

    fn insert(&self, key: String, value: LaurentPoly) {
        self.values.lock().expect("cache lock").insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.values.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// As [`evaluate`], memoizing subdiagrams in `cache`. The cache must only
/// ever be used with one algebra.
pub fn evaluate_cached(d: &Diagram, alg: &ConwayAlgebra, cache: &SkeinCache) -> Result<LaurentPoly, SkeinError> {
    check_size(d)?;
    eval_rec(d, alg, &default_marking(d), Some(cache))
}

/// The full resolution tree.
#[derive(Debug, Clone, PartialEq)]
pub enum SkeinTrace {
    Leaf {
        diagram: String,
        components: usize,
        value: LaurentPoly,
    },
    Node {
        diagram: String,
        crossings: usize,
        bad: usize,
        crossing: usize,
        sign: i32,
        class: CrossingClass,
        op: OpKind,
        switched: Box<SkeinTrace>,
        smoothed: Box<SkeinTrace>,
        value: LaurentPoly,
    },
}

impl SkeinTrace {
    pub fn value(&self) -> &LaurentPoly {
        match self {
            SkeinTrace::Leaf { value, .. } | SkeinTrace::Node { value, .. } => value,
        }
    }

    /// Recomputes the root value from the leaves' component counts.
    pub fn replay(&self, alg: &ConwayAlgebra) -> Result<LaurentPoly, SkeinError> {
        match self {
            SkeinTrace::Leaf { components, .. } => Ok(alg.unit(*components)?),
            SkeinTrace::Node { op, switched, smoothed, .. } => {
                Ok(alg.apply(*op, &switched.replay(alg)?, &smoothed.replay(alg)?)?)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            SkeinTrace::Leaf { .. } => 1,
            SkeinTrace::Node { switched, smoothed, .. } => 1 + switched.node_count() + smoothed.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SkeinTrace::Leaf { .. } => 0,
            SkeinTrace::Node { switched, smoothed, .. } => 1 + switched.depth().max(smoothed.depth()),
        }
    }

    /// Indented text rendering, one line per node.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0, "");
        out
    }

    fn render_into(&self, out: &mut String, indent: usize, role: &str) {
        let pad = "  ".repeat(indent);
        match self {
            SkeinTrace::Leaf { diagram, components, value } => {
                out.push_str(&format!("{pad}{role}leaf {diagram}: a_{components} = {value}\n"));
            }
            SkeinTrace::Node { diagram, crossing, sign, class, op, switched, smoothed, value, .. } => {
                let class = match class {
                    CrossingClass::SelfCrossing => "self",
                    CrossingClass::Mixed => "mixed",
                };
                let sign = if *sign > 0 { '+' } else { '-' };
                out.push_str(&format!(
                    "{pad}{role}{diagram}: crossing {} ({class}, {sign}) via {} = {value}\n",
                    crossing + 1,
                    op.symbol()
                ));
                switched.render_into(out, indent + 1, "switch: ");
                smoothed.render_into(out, indent + 1, "smooth: ");
            }
        }
    }
}

pub fn trace(d: &Diagram, alg: &ConwayAlgebra) -> Result<SkeinTrace, SkeinError> {
    check_size(d)?;
    trace_rec(d, alg, &default_marking(d))
}

fn trace_rec(d: &Diagram, alg: &ConwayAlgebra, m: &Marking) -> Result<SkeinTrace, SkeinError> {
    let diagram = d.to_pd_text();
    Ok(match split(d, m)? {
        None => SkeinTrace::Leaf { diagram, components: d.num_components(), value: alg.unit(d.num_components())? },
        Some(s) => {
            let op = op_for(s.class, s.sign);
            let switched = trace_rec(&s.switched, alg, m)?;
            let smoothed = trace_rec(&s.smoothed, alg, &s.smoothed_marking)?;
            let value = alg.apply(op, switched.value(), smoothed.value())?;
            SkeinTrace::Node {
                diagram,
                crossings: d.num_crossings(),
                bad: bad_crossings(d, m).len(),
                crossing: s.crossing,
                sign: s.sign,
                class: s.class,
                op,
                switched: Box::new(switched),
                smoothed: Box::new(smoothed),
                value,
            }
        }
    })
}
