//! Reidemeister moves on PD diagrams.
//!
//! Reducing moves are located through faces: a monogon is an R1 curl, a bigon
//! whose one edge passes over at both ends is an R2 clasp, and a triangle whose
//! three strands are stacked top/middle/bottom admits R3. Insertion moves name
//! edges and sides explicitly. Free loops, written `oN`, may take part in
//! insertions; they are split components and can be placed in any face.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Crossing, Dart, Diagram, DiagramError, Edge, End, Faces};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move {event} does not apply: {reason}")]
    Inapplicable { event: String, reason: String },
    #[error("cannot parse move `{0}`")]
    Parse(String),
    #[error("no reduction found for {0}")]
    Stuck(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn letter(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// An edge label or a 1-based free loop index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strand {
    Edge(Edge),
    Loop(usize),
}

/// An R2 participant: a strand plus, for edges, the side facing the move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub strand: Strand,
    pub side: Option<Side>,
}

/// Indices are 0-based in memory and 1-based in text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveEvent {
    R1Minus { crossing: usize },
    R1Plus { strand: Strand, side: Side, over_first: bool },
    R2Minus { face: usize },
    R2Plus { over: Site, under: Site },
    R3 { face: usize },
    CrossingChange { crossing: usize },
    Rlt { component: usize },
}

impl MoveEvent {
    /// Change in crossing count when the event applies.
    pub fn crossing_delta(&self) -> i64 {
        match self {
            MoveEvent::R1Minus { .. } => -1,
            MoveEvent::R1Plus { .. } => 1,
            MoveEvent::R2Minus { .. } => -2,
            MoveEvent::R2Plus { .. } => 2,
            _ => 0,
        }
    }

    pub fn is_reducing(&self) -> bool {
        matches!(self, MoveEvent::R1Minus { .. } | MoveEvent::R2Minus { .. })
    }
}

fn fmt_strand(s: Strand) -> String {
    match s {
        Strand::Edge(e) => format!("e{e}"),
        Strand::Loop(i) => format!("o{i}"),
    }
}

fn fmt_site(s: &Site) -> String {
    let mut out = fmt_strand(s.strand);
    if let Some(side) = s.side {
        out.push(side.letter());
    }
    out
}

impl fmt::Display for MoveEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveEvent::R1Minus { crossing } => write!(f, "R1-@c{}", crossing + 1),
            MoveEvent::R1Plus { strand, side, over_first } => {
                write!(f, "R1+@{}/{}/{}", fmt_strand(*strand), side.letter(), if *over_first { 'o' } else { 'u' })
            }
            MoveEvent::R2Minus { face } => write!(f, "R2-@f{}", face + 1),
            MoveEvent::R2Plus { over, under } => write!(f, "R2+@{}/{}", fmt_site(over), fmt_site(under)),
            MoveEvent::R3 { face } => write!(f, "R3@f{}", face + 1),
            MoveEvent::CrossingChange { crossing } => write!(f, "CC@c{}", crossing + 1),
            MoveEvent::Rlt { component } => write!(f, "RLT@comp{}", component + 1),
        }
    }
}

fn parse_index(text: &str, prefix: &str, whole: &str) -> Result<usize, MoveError> {
    let bad = || MoveError::Parse(whole.to_string());
    let n: usize = text.strip_prefix(prefix).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    n.checked_sub(1).ok_or_else(bad)
}

fn parse_strand(text: &str, whole: &str) -> Result<Strand, MoveError> {
    let bad = || MoveError::Parse(whole.to_string());
    if let Some(rest) = text.strip_prefix('e') {
        let e: Edge = rest.parse().map_err(|_| bad())?;
        if e == 0 {
            return Err(bad());
        }
        Ok(Strand::Edge(e))
    } else if let Some(rest) = text.strip_prefix('o') {
        let i: usize = rest.parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        Ok(Strand::Loop(i))
    } else {
        Err(bad())
    }
}

fn parse_side(c: &str, whole: &str) -> Result<Side, MoveError> {
    match c {
        "L" => Ok(Side::Left),
        "R" => Ok(Side::Right),
        _ => Err(MoveError::Parse(whole.to_string())),
    }
}

fn parse_site(text: &str, whole: &str) -> Result<Site, MoveError> {
    let (body, side) = match text.char_indices().last() {
        Some((i, c @ ('L' | 'R'))) => (&text[..i], Some(parse_side(&c.to_string(), whole)?)),
        _ => (text, None),
    };
    let strand = parse_strand(body, whole)?;
    if matches!(strand, Strand::Loop(_)) && side.is_some() {
        return Err(MoveError::Parse(whole.to_string()));
    }
    Ok(Site { strand, side })
}

impl FromStr for MoveEvent {
    type Err = MoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let whole = s.trim();
        let bad = || MoveError::Parse(whole.to_string());
        let (kind, site) = whole.split_once('@').ok_or_else(bad)?;
        match kind {
            "R1-" => Ok(MoveEvent::R1Minus { crossing: parse_index(site, "c", whole)? }),
            "R2-" => Ok(MoveEvent::R2Minus { face: parse_index(site, "f", whole)? }),
            "R3" => Ok(MoveEvent::R3 { face: parse_index(site, "f", whole)? }),
            "CC" => Ok(MoveEvent::CrossingChange { crossing: parse_index(site, "c", whole)? }),
            "RLT" => Ok(MoveEvent::Rlt { component: parse_index(site, "comp", whole)? }),
            "R1+" => {
                let parts: Vec<&str> = site.split('/').collect();
                let [strand, side, first] = parts[..] else {
                    return Err(bad());
                };
                let over_first = match first {
                    "o" => true,
                    "u" => false,
                    _ => return Err(bad()),
                };
                Ok(MoveEvent::R1Plus { strand: parse_strand(strand, whole)?, side: parse_side(side, whole)?, over_first })
            }
            "R2+" => {
                let (over, under) = site.split_once('/').ok_or_else(bad)?;
                Ok(MoveEvent::R2Plus { over: parse_site(over, whole)?, under: parse_site(under, whole)? })
            }
            _ => Err(bad()),
        }
    }
}

/// Parses one event per line; blank lines and `#` comments are skipped.
pub fn parse_events(text: &str) -> Result<Vec<MoveEvent>, MoveError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

pub fn format_events(events: &[MoveEvent]) -> String {
    events.iter().map(|e| format!("{e}\n")).collect()
}

fn inapplicable(event: &MoveEvent, reason: impl Into<String>) -> MoveError {
    MoveError::Inapplicable { event: event.to_string(), reason: reason.into() }
}

fn over_at(end: End) -> bool {
    Crossing::is_over(end.slot)
}

/// The crossing of a monogon face, if `face` is one.
fn monogon_crossing(d: &Diagram, faces: &Faces, face: usize) -> Option<usize> {
    let f = &faces.faces[face];
    if f.len() != 1 {
        return None;
    }
    Some(d.tail(f[0].edge).crossing)
}

/// For a bigon face: its two crossings and whether one edge is over at both.
fn bigon(d: &Diagram, faces: &Faces, face: usize) -> Option<([usize; 2], bool)> {
    let f = &faces.faces[face];
    if f.len() != 2 || f[0].edge == f[1].edge {
        return None;
    }
    let e = f[0].edge;
    let (t, h) = (d.tail(e), d.head(e));
    if t.crossing == h.crossing {
        return None;
    }
    let coherent = over_at(t) == over_at(h);
    Some(([t.crossing, h.crossing], coherent))
}

struct Triangle {
    edges: [Edge; 3],
}

fn triangle(d: &Diagram, faces: &Faces, face: usize) -> Option<Triangle> {
    let f = &faces.faces[face];
    if f.len() != 3 {
        return None;
    }
    let edges = [f[0].edge, f[1].edge, f[2].edge];
    if edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2] {
        return None;
    }
    let end = |dart: &Dart| if dart.forward { d.head(dart.edge) } else { d.tail(dart.edge) };
    let corners = [end(&f[0]).crossing, end(&f[1]).crossing, end(&f[2]).crossing];
    if corners[0] == corners[1] || corners[1] == corners[2] || corners[0] == corners[2] {
        return None;
    }
    for e in edges {
        let (t, h) = (d.tail(e), d.head(e));
        if t.crossing == h.crossing || !corners.contains(&t.crossing) || !corners.contains(&h.crossing) {
            return None;
        }
    }
    Some(Triangle { edges })
}

/// 0 = over at both ends, 1 = mixed, 2 = under at both ends.
fn height(d: &Diagram, e: Edge) -> u8 {
    let o = |end| if over_at(end) { 0 } else { 1 };
    o(d.tail(e)) + o(d.head(e))
}

fn stacked(d: &Diagram, t: &Triangle) -> bool {
    let mut hs: Vec<u8> = t.edges.iter().map(|&e| height(d, e)).collect();
    hs.sort_unstable();
    hs == [0, 1, 2]
}

/// The R3 rewrite: the crossings along each strand swap order, so each
/// corner keeps its crossing index, sign and strands but faces the other way.
fn r3_rewrite(d: &Diagram, t: &Triangle) -> Result<Diagram, DiagramError> {
    let mut xs: Vec<Crossing> = d.crossings().to_vec();
    let slot = |end: End| d.crossings()[end.crossing].slots[end.slot];
    for &e in &t.edges {
        let (tl, hd) = (d.tail(e), d.head(e));
        let outer = |end: End| slot(End { crossing: end.crossing, slot: (end.slot + 2) % 4 });
        let (out_t, out_h) = (outer(tl), outer(hd));
        xs[tl.crossing].slots[tl.slot] = out_h;
        xs[tl.crossing].slots[(tl.slot + 2) % 4] = e;
        xs[hd.crossing].slots[hd.slot] = out_t;
        xs[hd.crossing].slots[(hd.slot + 2) % 4] = e;
    }
    let out = Diagram::new(xs, d.free_loops())?;
    Ok(out.relabeled().0)
}

/// All applicable reducing and R3 moves, then RLT candidates, in face order.
pub fn find_moves(d: &Diagram) -> Vec<MoveEvent> {
    let faces = d.faces();
    let mut out = Vec::new();
    let mut r1: Vec<usize> = (0..faces.len()).filter_map(|f| monogon_crossing(d, &faces, f)).collect();
    r1.sort_unstable();
    r1.dedup();
    out.extend(r1.into_iter().map(|crossing| MoveEvent::R1Minus { crossing }));
    for f in 0..faces.len() {
        if let Some((_, true)) = bigon(d, &faces, f) {
            out.push(MoveEvent::R2Minus { face: f });
        }
    }
    for f in 0..faces.len() {
        if let Some(t) = triangle(d, &faces, f) {
            if stacked(d, &t) && r3_rewrite(d, &t).is_ok() {
                out.push(MoveEvent::R3 { face: f });
            }
        }
    }
    let first_loop = d.components().len();
    out.extend((0..d.free_loops()).map(|i| MoveEvent::Rlt { component: first_loop + i }));
    out
}

fn next_label(d: &Diagram) -> Edge {
    d.edges().last().copied().unwrap_or(0) + 1
}

fn check_loop(d: &Diagram, event: &MoveEvent, i: usize) -> Result<(), MoveError> {
    if i == 0 || i > d.free_loops() {
        return Err(inapplicable(event, format!("there is no free loop o{i}")));
    }
    Ok(())
}

fn check_edge(d: &Diagram, event: &MoveEvent, e: Edge) -> Result<(), MoveError> {
    if !d.has_edge(e) {
        return Err(inapplicable(event, format!("there is no edge e{e}")));
    }
    Ok(())
}

fn r1_plus(d: &Diagram, event: &MoveEvent, strand: Strand, side: Side, over_first: bool) -> Result<Diagram, MoveError> {
    let n = next_label(d);
    let (e1, e2, e3) = match strand {
        Strand::Edge(_) => (n, n + 1, n + 2),
        Strand::Loop(_) => (n, n + 1, n),
    };
    let mut xs = d.crossings().to_vec();
    let mut loops = d.free_loops();
    match strand {
        Strand::Edge(e) => {
            check_edge(d, event, e)?;
            let (t, h) = (d.tail(e), d.head(e));
            xs[t.crossing].slots[t.slot] = e1;
            xs[h.crossing].slots[h.slot] = e3;
        }
        Strand::Loop(i) => {
            check_loop(d, event, i)?;
            loops -= 1;
        }
    }
    let curl = match (side, over_first) {
        (Side::Left, false) => Crossing::new([e1, e3, e2, e2], true),
        (Side::Left, true) => Crossing::new([e2, e1, e3, e2], false),
        (Side::Right, false) => Crossing::new([e1, e2, e2, e3], false),
        (Side::Right, true) => Crossing::new([e2, e2, e3, e1], true),
    };
    xs.push(curl);
    Ok(Diagram::new(xs, loops)?.relabeled().0)
}

enum Part {
    Dart(Dart),
    Loop,
}

/// Resolves unspecified sides: the first side pair whose faces coincide,
/// or that lie in different pieces.
fn resolve_sides(d: &Diagram, faces: &Faces, event: &MoveEvent, over: &Site, under: &Site) -> Result<(Part, Part), MoveError> {
    let piece_of = {
        let mut v = vec![0; d.num_crossings()];
        for (i, p) in d.pieces().iter().enumerate() {
            for &c in p {
                v[c] = i;
            }
        }
        v
    };
    let options = |s: &Site| -> Result<Vec<Option<Dart>>, MoveError> {
        match s.strand {
            Strand::Loop(i) => {
                check_loop(d, event, i)?;
                Ok(vec![None])
            }
            Strand::Edge(e) => {
                check_edge(d, event, e)?;
                let sides = match s.side {
                    Some(side) => vec![side],
                    None => vec![Side::Right, Side::Left],
                };
                Ok(sides.into_iter().map(|side| Some(Dart { edge: e, forward: side == Side::Right })).collect())
            }
        }
    };
    if let (Strand::Loop(a), Strand::Loop(b)) = (over.strand, under.strand) {
        if a == b {
            return Err(inapplicable(event, "a loop cannot pass over itself"));
        }
        if d.free_loops() < 2 {
            return Err(inapplicable(event, "needs two free loops"));
        }
    }
    if let (Strand::Edge(a), Strand::Edge(b)) = (over.strand, under.strand) {
        if a == b {
            return Err(inapplicable(event, "an edge cannot pass over itself"));
        }
    }
    for x in options(over)? {
        for y in options(under)? {
            let ok = match (x, y) {
                (Some(dx), Some(dy)) => {
                    let px = piece_of[d.tail(dx.edge).crossing];
                    let py = piece_of[d.tail(dy.edge).crossing];
                    px != py || d.face_of_dart(faces, dx) == d.face_of_dart(faces, dy)
                }
                _ => true,
            };
            if ok {
                let part = |o: Option<Dart>| o.map_or(Part::Loop, Part::Dart);
                return Ok((part(x), part(y)));
            }
        }
    }
    Err(inapplicable(event, "the edges share no face"))
}

fn r2_plus(d: &Diagram, event: &MoveEvent, over: &Site, under: &Site) -> Result<Diagram, MoveError> {
    let faces = d.faces();
    let (x, y) = resolve_sides(d, &faces, event, over, under)?;
    let mut xs = d.crossings().to_vec();
    let mut next = next_label(d);
    let mut loops = d.free_loops();
    // returns (a, b, c, forward): parts in dart order
    let mut split = |part: &Part, xs: &mut Vec<Crossing>| -> (Edge, Edge, Edge, bool) {
        match part {
            Part::Loop => {
                let (a, b) = (next, next + 1);
                next += 2;
                loops -= 1;
                (a, b, a, true)
            }
            Part::Dart(dart) => {
                let (n1, n2, n3) = (next, next + 1, next + 2);
                next += 3;
                let (t, h) = (d.tail(dart.edge), d.head(dart.edge));
                xs[t.crossing].slots[t.slot] = n1;
                xs[h.crossing].slots[h.slot] = n3;
                if dart.forward {
                    (n1, n2, n3, true)
                } else {
                    (n3, n2, n1, false)
                }
            }
        }
    };
    let (xa, xb, xc, xf) = split(&x, &mut xs);
    let (ya, yb, yc, yf) = split(&y, &mut xs);
    // ccw positions E, N, W, S; x runs N-S on the north, y runs E-W
    let y_in = if yf { 0 } else { 2 };
    let p = Crossing::from_ccw([yb, xa, yc, xb], y_in, if xf { 1 } else { 3 });
    let q = Crossing::from_ccw([ya, xc, yb, xb], y_in, if xf { 3 } else { 1 });
    xs.push(p);
    xs.push(q);
    Ok(Diagram::new(xs, loops)?.relabeled().0)
}

/// Applies one event. Stale or inapplicable events are errors.
pub fn apply_move(d: &Diagram, event: &MoveEvent) -> Result<Diagram, MoveError> {
    match *event {
        MoveEvent::R1Minus { crossing } => {
            if crossing >= d.num_crossings() {
                return Err(inapplicable(event, "no such crossing"));
            }
            let faces = d.faces();
            if !(0..faces.len()).any(|f| monogon_crossing(d, &faces, f) == Some(crossing)) {
                return Err(inapplicable(event, "crossing bounds no monogon"));
            }
            let x = d.crossings()[crossing];
            Ok(d.splice(&[(crossing, [(0, 2), (x.over_in(), x.over_out())])], true)?.0)
        }
        MoveEvent::R2Minus { face } => {
            let faces = d.faces();
            if face >= faces.len() {
                return Err(inapplicable(event, "no such face"));
            }
            match bigon(d, &faces, face) {
                Some(([a, b], true)) => {
                    let straight = |c: usize| {
                        let x = d.crossings()[c];
                        (c, [(0, 2), (x.over_in(), x.over_out())])
                    };
                    Ok(d.splice(&[straight(a), straight(b)], true)?.0)
                }
                Some((_, false)) => Err(inapplicable(event, "bigon strands alternate over and under")),
                None => Err(inapplicable(event, "face is not a bigon")),
            }
        }
        MoveEvent::R3 { face } => {
            let faces = d.faces();
            if face >= faces.len() {
                return Err(inapplicable(event, "no such face"));
            }
            let t = triangle(d, &faces, face).ok_or_else(|| inapplicable(event, "face is not a simple triangle"))?;
            if !stacked(d, &t) {
                return Err(inapplicable(event, "triangle strands are not stacked"));
            }
            r3_rewrite(d, &t).map_err(|e| inapplicable(event, e.to_string()))
        }
        MoveEvent::CrossingChange { crossing } => {
            d.crossing_change(crossing).map_err(|_| inapplicable(event, "no such crossing"))
        }
        MoveEvent::Rlt { component } => {
            let first_loop = d.components().len();
            if component < first_loop || component >= d.num_components() {
                return Err(inapplicable(event, "component is not a free loop"));
            }
            Ok(d.clone())
        }
        MoveEvent::R1Plus { strand, side, over_first } => r1_plus(d, event, strand, side, over_first),
        MoveEvent::R2Plus { over, under } => r2_plus(d, event, &over, &under),
    }
}

/// Applies events in order.
pub fn replay(d: &Diagram, events: &[MoveEvent]) -> Result<Diagram, MoveError> {
    events.iter().try_fold(d.clone(), |cur, e| apply_move(&cur, e))
}

/// All R1+ insertion sites. Free loops are interchangeable, so only `o1` is listed.
pub fn r1_insertions(d: &Diagram) -> Vec<MoveEvent> {
    let mut strands: Vec<Strand> = d.edges().iter().map(|&e| Strand::Edge(e)).collect();
    if d.free_loops() > 0 {
        strands.push(Strand::Loop(1));
    }
    let mut out = Vec::new();
    for strand in strands {
        for side in [Side::Left, Side::Right] {
            for over_first in [false, true] {
                out.push(MoveEvent::R1Plus { strand, side, over_first });
            }
        }
    }
    out
}

/// All R2+ insertion sites with explicit sides: ordered dart pairs on a
/// common face, dart pairs from different pieces, and pairs involving loops.
pub fn r2_insertions(d: &Diagram) -> Vec<MoveEvent> {
    let faces = d.faces();
    let pieces = d.pieces();
    let mut piece_of = vec![0; d.num_crossings()];
    for (i, p) in pieces.iter().enumerate() {
        for &c in p {
            piece_of[c] = i;
        }
    }
    let darts: Vec<Dart> = d.edges().iter().flat_map(|&e| [true, false].map(|forward| Dart { edge: e, forward })).collect();
    let site = |dart: Dart| Site {
        strand: Strand::Edge(dart.edge),
        side: Some(if dart.forward { Side::Right } else { Side::Left }),
    };
    let loop_site = |i| Site { strand: Strand::Loop(i), side: None };
    let mut out = Vec::new();
    for &x in &darts {
        for &y in &darts {
            if x.edge == y.edge {
                continue;
            }
            let same_piece = piece_of[d.tail(x.edge).crossing] == piece_of[d.tail(y.edge).crossing];
            if !same_piece || d.face_of_dart(&faces, x) == d.face_of_dart(&faces, y) {
                out.push(MoveEvent::R2Plus { over: site(x), under: site(y) });
            }
        }
    }
    if d.free_loops() > 0 {
        for &x in &darts {
            out.push(MoveEvent::R2Plus { over: site(x), under: loop_site(1) });
            out.push(MoveEvent::R2Plus { over: loop_site(1), under: site(x) });
        }
    }
    if d.free_loops() > 1 {
        out.push(MoveEvent::R2Plus { over: loop_site(1), under: loop_site(2) });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub diagram: Diagram,
    pub events: Vec<MoveEvent>,
    /// Steps where no move fit under the cap.
    pub skipped: usize,
}

/// Applies `steps` random moves, never exceeding `cap` crossings. Each step
/// picks a move kind uniformly among those available, then a site uniformly.
pub fn random_perturb(d: &Diagram, seed: u64, steps: usize, cap: usize) -> Perturbation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut events = Vec::new();
    let mut skipped = 0;
    for _ in 0..steps {
        let found = find_moves(&cur);
        let pick = |kind: fn(&MoveEvent) -> bool| -> Vec<MoveEvent> { found.iter().filter(|e| kind(e)).copied().collect() };
        let mut kinds: Vec<Vec<MoveEvent>> = vec![
            pick(|e| matches!(e, MoveEvent::R1Minus { .. })),
            pick(|e| matches!(e, MoveEvent::R2Minus { .. })),
            pick(|e| matches!(e, MoveEvent::R3 { .. })),
        ];
        let n = cur.num_crossings();
        if n < cap {
            kinds.push(r1_insertions(&cur));
        }
        if n + 2 <= cap {
            kinds.push(r2_insertions(&cur));
        }
        kinds.retain(|k| !k.is_empty());
        let Some(sites) = kinds.choose(&mut rng) else {
            skipped += 1;
            continue;
        };
        let event = sites[rng.gen_range(0..sites.len())];
        cur = apply_move(&cur, &event).expect("enumerated moves apply");
        events.push(event);
    }
    Perturbation { diagram: cur, events, skipped }
}

fn has_reduction(d: &Diagram) -> bool {
    let faces = d.faces();
    faces.faces.iter().any(|f| f.len() <= 2)
}

/// Key identifying a diagram up to crossing changes.
fn shadow_key(d: &Diagram) -> String {
    let mut s = d.clone();
    for c in 0..s.num_crossings() {
        if !s.crossings()[c].positive {
            s = s.crossing_change(c).expect("index in range");
        }
    }
    s.canonical_encode()
}

/// Crossing changes that stack a triangle's strands, fewest first.
fn stacking_changes(d: &Diagram, t: &Triangle) -> Vec<usize> {
    // rank[i] = height of triangle edge i; the corner shared by edges i and j
    // must have the lower-ranked edge over
    let mut best: Option<Vec<usize>> = None;
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let mut changes = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let (ei, ej) = (t.edges[i], t.edges[j]);
                let ends_i = [d.tail(ei), d.head(ei)];
                let Some(end) = ends_i.iter().find(|end| {
                    let c = end.crossing;
                    d.tail(ej).crossing == c || d.head(ej).crossing == c
                }) else {
                    continue;
                };
                let i_over = over_at(*end);
                if i_over != (perm[i] < perm[j]) {
                    changes.push(end.crossing);
                }
            }
        }
        changes.sort_unstable();
        if best.as_ref().is_none_or(|b| changes.len() < b.len()) {
            best = Some(changes);
        }
    }
    best.unwrap_or_default()
}

/// Breadth-first search over R3 moves (with stacking crossing changes) for a
/// diagram that has a monogon or bigon face.
fn search_r3(d: &Diagram, limit: usize) -> Option<Vec<MoveEvent>> {
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(shadow_key(d));
    let mut queue: VecDeque<(Diagram, Vec<MoveEvent>)> = VecDeque::new();
    queue.push_back((d.clone(), Vec::new()));
    while let Some((cur, path)) = queue.pop_front() {
        let faces = cur.faces();
        for f in 0..faces.len() {
            let Some(t) = triangle(&cur, &faces, f) else {
                continue;
            };
            let changes = stacking_changes(&cur, &t);
            let mut next = cur.clone();
            let mut steps = path.clone();
            for &c in &changes {
                next = next.crossing_change(c).expect("index in range");
                steps.push(MoveEvent::CrossingChange { crossing: c });
            }
            let event = MoveEvent::R3 { face: f };
            let Ok(moved) = apply_move(&next, &event) else {
                continue;
            };
            steps.push(event);
            if !seen.insert(shadow_key(&moved)) {
                continue;
            }
            if has_reduction(&moved) {
                return Some(steps);
            }
            if seen.len() >= limit {
                return None;
            }
            queue.push_back((moved, steps));
        }
    }
    None
}

const SEARCH_LIMIT: usize = 200_000;

/// Events taking `d` to a crossingless diagram using crossing changes,
/// R1-, R2-, R3 and RLT only.
///
/// Each round removes a monogon, else a bigon (after making the edge with
/// the smaller label pass over at both ends), else searches R3 moves for a
/// diagram that has one. Ties go to the smallest edge label. A free loop
/// created by a removal is recorded with an RLT event.
pub fn trivialize(d: &Diagram) -> Result<Vec<MoveEvent>, MoveError> {
    let mut cur = d.clone();
    let mut events = Vec::new();
    while cur.num_crossings() > 0 {
        let faces = cur.faces();
        let min_edge = |f: usize| faces.faces[f].iter().map(|dart| dart.edge).min().expect("faces are nonempty");
        let monogon = (0..faces.len()).filter(|&f| faces.faces[f].len() == 1).min_by_key(|&f| min_edge(f));
        let step: Vec<MoveEvent> = if let Some(f) = monogon {
            vec![MoveEvent::R1Minus { crossing: monogon_crossing(&cur, &faces, f).expect("monogon") }]
        } else if let Some(f) = (0..faces.len()).filter(|&f| bigon(&cur, &faces, f).is_some()).min_by_key(|&f| min_edge(f)) {
            let e = min_edge(f);
            let mut step = Vec::new();
            for end in [cur.tail(e), cur.head(e)] {
                if !over_at(end) {
                    step.push(MoveEvent::CrossingChange { crossing: end.crossing });
                }
            }
            step.push(MoveEvent::R2Minus { face: f });
            step
        } else {
            search_r3(&cur, SEARCH_LIMIT).ok_or_else(|| MoveError::Stuck(cur.to_pd_text()))?
        };
        for event in step {
            let before = cur.free_loops();
            cur = apply_move(&cur, &event)?;
            events.push(event);
            let first_loop = cur.components().len();
            for k in before..cur.free_loops() {
                events.push(MoveEvent::Rlt { component: first_loop + k });
            }
        }
    }
    Ok(events)
}
