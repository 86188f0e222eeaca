//! Oriented link diagrams as PD codes with free loops.
//!
//! A crossing lists its four edge labels counterclockwise starting from the
//! incoming under-edge, so the under-strand always runs slot 0 → slot 2. The
//! over-strand direction is stored explicitly as the crossing sign: a
//! positive crossing has its over-strand entering at slot 3 and leaving at
//! slot 1.
//!
//! Crossingless circles cannot be written in PD form and are carried as a
//! separate counter. Diagrams are immutable; every mutation builds a fresh,
//! revalidated value.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

pub type Edge = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("edge {label} appears {count} time(s); every edge must appear exactly twice")]
    EdgeCount { label: Edge, count: usize },
    #[error("inconsistent orientation: {0}")]
    Orientation(String),
    #[error("diagram is not planar")]
    NonPlanar,
    #[error("diagram has no components")]
    Empty,
    #[error("crossing index {0} out of range")]
    BadCrossing(usize),
    #[error("invalid braid: {0}")]
    Braid(String),
}

/// `slots` are counterclockwise from the incoming under-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub slots: [Edge; 4],
    pub positive: bool,
}

impl Crossing {
    pub fn new(slots: [Edge; 4], positive: bool) -> Self {
        Crossing { slots, positive }
    }

    /// Builds a crossing from edges listed counterclockwise starting anywhere,
    /// given the positions of the incoming under- and over-edges in that list.
    pub fn from_ccw(ccw: [Edge; 4], under_in: usize, over_in: usize) -> Self {
        debug_assert!(under_in % 2 != over_in % 2);
        let slots = [0, 1, 2, 3].map(|i| ccw[(under_in + i) % 4]);
        let positive = (over_in + 4 - under_in) % 4 == 3;
        Crossing { slots, positive }
    }

    pub fn over_in(&self) -> usize {
        if self.positive { 3 } else { 1 }
    }

    pub fn over_out(&self) -> usize {
        if self.positive { 1 } else { 3 }
    }

    pub fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in()
    }

    pub fn is_over(slot: usize) -> bool {
        slot % 2 == 1
    }

    pub fn sign(&self) -> i32 {
        if self.positive { 1 } else { -1 }
    }
}

/// One end of an edge: a crossing index and a slot position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub crossing: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossingClass {
    SelfCrossing,
    Mixed,
}

/// An edge traversed with (`forward`) or against its orientation. The face
/// traced by successive darts lies on the dart's right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: Edge,
    pub forward: bool,
}

#[derive(Debug, Clone)]
pub struct Faces {
    pub faces: Vec<Vec<Dart>>,
    /// Per edge index: `[face right of the edge, face left of the edge]`.
    sides: Vec<[usize; 2]>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// Old label → new label (or `None` when the edge closed up into a free loop).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeMap(HashMap<Edge, Option<Edge>>);

impl EdgeMap {
    pub fn get(&self, e: Edge) -> Option<Edge> {
        self.0.get(&e).copied().flatten()
    }

    fn then(&self, next: &HashMap<Edge, Edge>) -> EdgeMap {
        EdgeMap(self.0.iter().map(|(k, v)| (*k, v.and_then(|v| next.get(&v).copied()))).collect())
    }
}

#[derive(Clone)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    labels: Vec<Edge>,
    tails: Vec<End>,
    heads: Vec<End>,
    components: Vec<Vec<Edge>>,
    component_of: Vec<usize>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings && self.free_loops == other.free_loops
    }
}

impl Eq for Diagram {}

impl Hash for Diagram {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.crossings.hash(state);
        self.free_loops.hash(state);
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({})", self.to_pd_text())
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_text())
    }
}

impl Diagram {
    /// Validates and builds a diagram.
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Diagram, DiagramError> {
        Self::build(crossings, free_loops, true)
    }

    pub fn unlink(n: usize) -> Diagram {
        Diagram::new(Vec::new(), n).expect("crossingless diagrams are valid")
    }

    pub(crate) fn build(crossings: Vec<Crossing>, free_loops: usize, check_planar: bool) -> Result<Diagram, DiagramError> {
        let mut labels: Vec<Edge> = crossings.iter().flat_map(|x| x.slots).collect();
        labels.sort_unstable();
        let mut i = 0;
        while i < labels.len() {
            let mut j = i;
            while j < labels.len() && labels[j] == labels[i] {
                j += 1;
            }
            if j - i != 2 {
                return Err(DiagramError::EdgeCount { label: labels[i], count: j - i });
            }
            i = j;
        }
        labels.dedup();
        if labels.contains(&0) {
            return Err(DiagramError::Orientation("edge labels must be positive".into()));
        }

        let n = labels.len();
        let none = End { crossing: usize::MAX, slot: 0 };
        let mut tails = vec![none; n];
        let mut heads = vec![none; n];
        for (ci, x) in crossings.iter().enumerate() {
            for s in 0..4 {
                let k = labels.binary_search(&x.slots[s]).expect("label collected above");
                let end = End { crossing: ci, slot: s };
                let target = if x.is_incoming(s) { &mut heads[k] } else { &mut tails[k] };
                if target.crossing != usize::MAX {
                    return Err(DiagramError::Orientation(format!(
                        "edge {} has two {}",
                        x.slots[s],
                        if x.is_incoming(s) { "heads" } else { "tails" }
                    )));
                }
                *target = end;
            }
        }

        let mut d = Diagram {
            crossings,
            free_loops,
            labels,
            tails,
            heads,
            components: Vec::new(),
            component_of: vec![usize::MAX; n],
        };
        for k in 0..n {
            if d.component_of[k] != usize::MAX {
                continue;
            }
            let id = d.components.len();
            let mut cycle = Vec::new();
            let mut e = d.labels[k];
            loop {
                let ek = d.index(e);
                if d.component_of[ek] != usize::MAX {
                    break;
                }
                d.component_of[ek] = id;
                cycle.push(e);
                e = d.succ(e);
            }
            d.components.push(cycle);
        }
        if d.components.is_empty() && free_loops == 0 {
            return Err(DiagramError::Empty);
        }
        if check_planar && !d.is_planar() {
            return Err(DiagramError::NonPlanar);
        }
        Ok(d)
    }

    fn index(&self, e: Edge) -> usize {
        self.labels.binary_search(&e).expect("edge label belongs to this diagram")
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, c: usize) -> Result<&Crossing, DiagramError> {
        self.crossings.get(c).ok_or(DiagramError::BadCrossing(c))
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn edges(&self) -> &[Edge] {
        &self.labels
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.labels.binary_search(&e).is_ok()
    }

    /// Edge cycles in orientation order, each starting at its minimal label,
    /// sorted by minimal label.
    pub fn components(&self) -> &[Vec<Edge>] {
        &self.components
    }

    /// Edge cycles plus free loops.
    pub fn num_components(&self) -> usize {
        self.components.len() + self.free_loops
    }

    pub fn component_of(&self, e: Edge) -> usize {
        self.component_of[self.index(e)]
    }

    pub fn tail(&self, e: Edge) -> End {
        self.tails[self.index(e)]
    }

    pub fn head(&self, e: Edge) -> End {
        self.heads[self.index(e)]
    }

    /// The edge following `e` along the orientation.
    pub fn succ(&self, e: Edge) -> Edge {
        let h = self.head(e);
        self.crossings[h.crossing].slots[(h.slot + 2) % 4]
    }

    pub fn sign(&self, c: usize) -> Result<i32, DiagramError> {
        Ok(self.crossing(c)?.sign())
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(Crossing::sign).sum()
    }

    pub fn classify(&self, c: usize) -> Result<CrossingClass, DiagramError> {
        let x = self.crossing(c)?;
        Ok(if self.component_of(x.slots[0]) == self.component_of(x.slots[1]) {
            CrossingClass::SelfCrossing
        } else {
            CrossingClass::Mixed
        })
    }

    /// The two components meeting at `c` as (under, over).
    pub fn strand_components(&self, c: usize) -> Result<(usize, usize), DiagramError> {
        let x = self.crossing(c)?;
        Ok((self.component_of(x.slots[0]), self.component_of(x.slots[1])))
    }

    /// Swaps over and under at `c`. Edge labels are kept.
    pub fn crossing_change(&self, c: usize) -> Result<Diagram, DiagramError> {
        let x = *self.crossing(c)?;
        let [a, b, cc, d] = x.slots;
        let flipped = if x.positive {
            Crossing::new([d, a, b, cc], false)
        } else {
            Crossing::new([b, cc, d, a], true)
        };
        let mut xs = self.crossings.clone();
        xs[c] = flipped;
        Diagram::build(xs, self.free_loops, false)
    }

    /// Reflection of the plane: every crossing changes sign.
    pub fn mirror(&self) -> Diagram {
        let xs = self
            .crossings
            .iter()
            .map(|x| Crossing::new([x.slots[0], x.slots[3], x.slots[2], x.slots[1]], !x.positive))
            .collect();
        Diagram::build(xs, self.free_loops, false).expect("mirror of a valid diagram")
    }

    /// Oriented smoothing of `c`. Surviving crossings keep their relative order.
    pub fn smooth(&self, c: usize) -> Result<Diagram, DiagramError> {
        Ok(self.smooth_with_map(c)?.0)
    }

    /// Smoothing plus the relabeling of surviving edges.
    pub fn smooth_with_map(&self, c: usize) -> Result<(Diagram, EdgeMap), DiagramError> {
        let x = self.crossing(c)?;
        // incoming under joins outgoing over; incoming over joins outgoing under
        let pairs = [(0, x.over_out()), (x.over_in(), 2)];
        self.splice(&[(c, pairs)], false)
    }

    /// Deletes crossings, reconnecting each deleted crossing's incoming slot to
    /// the paired outgoing slot. Chains of edges through deleted crossings
    /// become single edges; closed chains become free loops. The result is
    /// relabeled canonically.
    pub(crate) fn splice(
        &self,
        removals: &[(usize, [(usize, usize); 2])],
        check_planar: bool,
    ) -> Result<(Diagram, EdgeMap), DiagramError> {
        let mut partner: HashMap<(usize, usize), usize> = HashMap::new();
        for &(c, pairs) in removals {
            self.crossing(c)?;
            for (i, o) in pairs {
                let x = &self.crossings[c];
                if !x.is_incoming(i) || x.is_incoming(o) {
                    return Err(DiagramError::Orientation("splice must pair incoming with outgoing".into()));
                }
                partner.insert((c, i), o);
            }
        }
        let removed: BTreeSet<usize> = removals.iter().map(|r| r.0).collect();

        let mut chain_of: HashMap<Edge, Option<Edge>> = HashMap::new();
        let mut next_label: Edge = 1;
        for &e in &self.labels {
            if removed.contains(&self.tail(e).crossing) {
                continue;
            }
            let label = next_label;
            next_label += 1;
            let mut cur = e;
            loop {
                chain_of.insert(cur, Some(label));
                let h = self.head(cur);
                if !removed.contains(&h.crossing) {
                    break;
                }
                let out = partner[&(h.crossing, h.slot)];
                cur = self.crossings[h.crossing].slots[out];
            }
        }
        let mut loops = 0;
        for &e in &self.labels {
            if chain_of.contains_key(&e) {
                continue;
            }
            loops += 1;
            let mut cur = e;
            while !chain_of.contains_key(&cur) {
                chain_of.insert(cur, None);
                let h = self.head(cur);
                let out = partner[&(h.crossing, h.slot)];
                cur = self.crossings[h.crossing].slots[out];
            }
        }

        let xs: Vec<Crossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, x)| Crossing::new(x.slots.map(|e| chain_of[&e].expect("surviving edge")), x.positive))
            .collect();
        let tmp = Diagram::build(xs, self.free_loops + loops, check_planar)?;
        let (out, relabel) = tmp.relabeled();
        Ok((out, EdgeMap(chain_of).then(&relabel)))
    }

    /// Relabels edges 1..2n: components in order of minimal label, each
    /// numbered along its orientation from its minimal label.
    pub fn relabeled(&self) -> (Diagram, HashMap<Edge, Edge>) {
        let mut map = HashMap::with_capacity(self.labels.len());
        let mut next = 1;
        for comp in &self.components {
            for &e in comp {
                map.insert(e, next);
                next += 1;
            }
        }
        let xs = self.crossings.iter().map(|x| Crossing::new(x.slots.map(|e| map[&e]), x.positive)).collect();
        let d = Diagram::build(xs, self.free_loops, false).expect("relabeling preserves validity");
        (d, map)
    }

    /// Traces all faces. Darts are visited in label order, forward first.
    pub fn faces(&self) -> Faces {
        let n = self.labels.len();
        let mut sides = vec![[usize::MAX; 2]; n];
        let mut faces = Vec::new();
        for k in 0..n {
            for (side, forward) in [(0, true), (1, false)] {
                if sides[k][side] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut face = Vec::new();
                let mut dart = Dart { edge: self.labels[k], forward };
                loop {
                    let dk = self.index(dart.edge);
                    let s = if dart.forward { 0 } else { 1 };
                    if sides[dk][s] != usize::MAX {
                        break;
                    }
                    sides[dk][s] = id;
                    face.push(dart);
                    dart = self.next_dart(dart);
                }
                faces.push(face);
            }
        }
        Faces { faces, sides }
    }

    /// The dart after `d` along the face on its right.
    pub fn next_dart(&self, d: Dart) -> Dart {
        let end = if d.forward { self.head(d.edge) } else { self.tail(d.edge) };
        let slot = (end.slot + 1) % 4;
        let x = &self.crossings[end.crossing];
        let g = x.slots[slot];
        Dart { edge: g, forward: !x.is_incoming(slot) }
    }

    /// Face on the right (`right = true`) or left of edge `e`.
    pub fn face_of_side(&self, faces: &Faces, e: Edge, right: bool) -> usize {
        faces.sides[self.index(e)][if right { 0 } else { 1 }]
    }

    pub fn face_of_dart(&self, faces: &Faces, d: Dart) -> usize {
        self.face_of_side(faces, d.edge, d.forward)
    }

    /// Connected pieces of the crossing graph, as sorted crossing index lists.
    pub fn pieces(&self) -> Vec<Vec<usize>> {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for k in 0..self.labels.len() {
            let a = find(&mut parent, self.tails[k].crossing);
            let b = find(&mut parent, self.heads[k].crossing);
            parent[a] = b;
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    fn is_planar(&self) -> bool {
        let faces = self.faces();
        let pieces = self.pieces();
        let mut piece_of = vec![0; self.crossings.len()];
        for (i, p) in pieces.iter().enumerate() {
            for &c in p {
                piece_of[c] = i;
            }
        }
        let mut face_count = vec![0i64; pieces.len()];
        for f in &faces.faces {
            let c = self.tail(f[0].edge).crossing;
            face_count[piece_of[c]] += 1;
        }
        pieces.iter().zip(face_count).all(|(p, f)| {
            let v = p.len() as i64;
            v - 2 * v + f == 2
        })
    }

    /// PD text with the current labels.
    pub fn to_pd_text(&self) -> String {
        format_pd(self.crossings.iter().map(|x| x.slots), self.free_loops)
    }

    /// Deterministic encoding: the lexicographically minimal PD code over all
    /// component orders and starting edges, with crossings sorted. Components
    /// whose orientation a PD code cannot express (two edges, over at both
    /// visits) are also tried reversed.
    pub fn canonical_encode(&self) -> String {
        let ambiguous: Vec<usize> = (0..self.components.len()).filter(|&i| self.orientation_ambiguous(i)).collect();
        let mut best: Option<Vec<[Edge; 4]>> = None;
        for mask in 0..(1u32 << ambiguous.len()) {
            let variant = if mask == 0 {
                self.clone()
            } else {
                let flip: Vec<usize> = ambiguous.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &c)| c).collect();
                self.reverse_overpass_components(&flip)
            };
            variant.min_labeling(&mut best);
        }
        format_pd(best.unwrap_or_default().into_iter(), self.free_loops)
    }

    fn orientation_ambiguous(&self, comp: usize) -> bool {
        let cyc = &self.components[comp];
        cyc.len() == 2 && cyc.iter().all(|&e| Crossing::is_over(self.tail(e).slot) && Crossing::is_over(self.head(e).slot))
    }

    fn reverse_overpass_components(&self, comps: &[usize]) -> Diagram {
        let mut xs = self.crossings.clone();
        for &c in comps {
            for &e in &self.components[c] {
                xs[self.tail(e).crossing].positive ^= true;
            }
        }
        Diagram::build(xs, self.free_loops, false).expect("reversing an overpass keeps validity")
    }

    fn min_labeling(&self, best: &mut Option<Vec<[Edge; 4]>>) {
        let r = self.components.len();
        let mut order: Vec<usize> = (0..r).collect();
        let mut map: HashMap<Edge, Edge> = HashMap::with_capacity(self.labels.len());
        permute(&mut order, 0, &mut |ord| {
            let mut starts = vec![0usize; r];
            loop {
                map.clear();
                let mut next = 1;
                for (pos, &ci) in ord.iter().enumerate() {
                    let cyc = &self.components[ci];
                    for j in 0..cyc.len() {
                        map.insert(cyc[(starts[pos] + j) % cyc.len()], next);
                        next += 1;
                    }
                }
                let mut code: Vec<[Edge; 4]> = self.crossings.iter().map(|x| x.slots.map(|e| map[&e])).collect();
                code.sort_unstable();
                if best.as_ref().is_none_or(|b| code < *b) {
                    *best = Some(code);
                }
                // odometer over starting edges
                let mut pos = 0;
                loop {
                    if pos == r {
                        return;
                    }
                    starts[pos] += 1;
                    if starts[pos] < self.components[ord[pos]].len() {
                        break;
                    }
                    starts[pos] = 0;
                    pos += 1;
                }
            }
        });
    }
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

fn format_pd<I: Iterator<Item = [Edge; 4]>>(crossings: I, free_loops: usize) -> String {
    let body: Vec<String> = crossings.map(|s| format!("X[{},{},{},{}]", s[0], s[1], s[2], s[3])).collect();
    let mut out = format!("PD[{}]", body.join(","));
    if free_loops > 0 {
        out.push_str(&format!("+O^{}", free_loops));
    }
    out
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, _src: src }
    }

    fn location(&self) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error(&self, message: impl Into<String>) -> DiagramError {
        let (line, column) = self.location();
        DiagramError::Syntax { line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), DiagramError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected `{c}`, found `{got}`"))),
            None => Err(self.error(format!("expected `{c}`, found end of input"))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if text.is_empty() || text == "-" {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("integer out of range")
        })
    }

    fn label(&mut self) -> Result<Edge, DiagramError> {
        let at = self.pos;
        let v = self.integer()?;
        if v <= 0 || v > Edge::MAX as i64 {
            self.pos = at;
            self.skip_ws();
            return Err(self.error("edge labels must be positive integers"));
        }
        Ok(v as Edge)
    }

    fn finish(&mut self) -> Result<(), DiagramError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected trailing `{c}`"))),
        }
    }
}

/// Parses `PD[X[a,b,c,d], ...]` with an optional `+O^k` suffix.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let mut cur = Cursor::new(text);
    cur.expect('P')?;
    cur.expect('D')?;
    cur.expect('[')?;
    let mut raw: Vec<[Edge; 4]> = Vec::new();
    if !cur.eat(']') {
        loop {
            cur.expect('X')?;
            cur.expect('[')?;
            let mut s = [0; 4];
            for (i, slot) in s.iter_mut().enumerate() {
                if i > 0 {
                    cur.expect(',')?;
                }
                *slot = cur.label()?;
            }
            cur.expect(']')?;
            raw.push(s);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    let mut free_loops = 0;
    if cur.eat('+') {
        cur.expect('O')?;
        cur.expect('^')?;
        let at = cur.pos;
        let k = cur.integer()?;
        if k < 0 {
            cur.pos = at;
            cur.skip_ws();
            return Err(cur.error("free loop count must be non-negative"));
        }
        free_loops = k as usize;
    }
    cur.finish()?;
    from_raw_pd(raw, free_loops)
}

/// Infers over-strand directions for raw PD crossings and validates.
///
/// Under-strands fix most directions. Components that pass over at every
/// visit fall back to label succession (labels increase along a component,
/// wrapping from its maximum to its minimum).
pub fn from_raw_pd(raw: Vec<[Edge; 4]>, free_loops: usize) -> Result<Diagram, DiagramError> {
    let mut occ: HashMap<Edge, Vec<End>> = HashMap::new();
    for (c, s) in raw.iter().enumerate() {
        for (i, &e) in s.iter().enumerate() {
            occ.entry(e).or_default().push(End { crossing: c, slot: i });
        }
    }
    let mut labels: Vec<Edge> = occ.keys().copied().collect();
    labels.sort_unstable();
    for &e in &labels {
        let n = occ[&e].len();
        if n != 2 {
            return Err(DiagramError::EdgeCount { label: e, count: n });
        }
    }

    // head(end) as either a constant or (crossing, negated) over `positive[c]`
    enum Head {
        Const(bool),
        Var(usize, bool),
    }
    let head = |end: End| match end.slot {
        0 => Head::Const(true),
        2 => Head::Const(false),
        1 => Head::Var(end.crossing, true),
        _ => Head::Var(end.crossing, false),
    };
    let n = raw.len();
    let mut fixed: Vec<Option<bool>> = vec![None; n];
    let mut links: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut queue = Vec::new();
    for &e in &labels {
        let ends = &occ[&e];
        match (head(ends[0]), head(ends[1])) {
            (Head::Const(a), Head::Const(b)) => {
                if a == b {
                    return Err(DiagramError::Orientation(format!("edge {e} runs against both under-strands")));
                }
            }
            (Head::Const(a), Head::Var(c, neg)) | (Head::Var(c, neg), Head::Const(a)) => {
                // head(var) = positive ^ neg must equal !a
                let want = !a ^ neg;
                if let Some(prev) = fixed[c] {
                    if prev != want {
                        return Err(DiagramError::Orientation(format!("crossing {} over-strand", c + 1)));
                    }
                } else {
                    fixed[c] = Some(want);
                    queue.push(c);
                }
            }
            (Head::Var(c1, n1), Head::Var(c2, n2)) => {
                if c1 != c2 {
                    // (p1 ^ n1) != (p2 ^ n2)  <=>  p1 ^ p2 = 1 ^ n1 ^ n2
                    let parity = true ^ n1 ^ n2;
                    links[c1].push((c2, parity));
                    links[c2].push((c1, parity));
                }
            }
        }
    }

    let propagate = |queue: &mut Vec<usize>, fixed: &mut Vec<Option<bool>>| -> Result<(), DiagramError> {
        while let Some(c) = queue.pop() {
            let v = fixed[c].expect("queued crossings are fixed");
            for &(o, parity) in &links[c] {
                let want = v ^ parity;
                match fixed[o] {
                    Some(prev) if prev != want => {
                        return Err(DiagramError::Orientation(format!("crossing {} over-strand", o + 1)));
                    }
                    Some(_) => {}
                    None => {
                        fixed[o] = Some(want);
                        queue.push(o);
                    }
                }
            }
        }
        Ok(())
    };
    propagate(&mut queue, &mut fixed)?;

    for c in 0..n {
        if fixed[c].is_some() {
            continue;
        }
        let component = strand_component(&raw, &occ, raw[c][1]);
        let next = |e: Edge| -> Edge {
            match component.iter().position(|&x| x == e) {
                Some(i) if i + 1 < component.len() => component[i + 1],
                _ => component[0],
            }
        };
        let (b, d) = (raw[c][1], raw[c][3]);
        let positive = if next(d) == b {
            true
        } else if next(b) == d {
            false
        } else {
            return Err(DiagramError::Orientation(format!(
                "over-strand at crossing {} follows neither an under-strand nor label succession",
                c + 1
            )));
        };
        fixed[c] = Some(positive);
        queue.push(c);
        propagate(&mut queue, &mut fixed)?;
    }

    let xs = raw
        .into_iter()
        .zip(fixed)
        .map(|(s, p)| Crossing::new(s, p.expect("all crossings resolved")))
        .collect();
    Diagram::new(xs, free_loops)
}

/// Sorted labels of the component containing `start`, following strands.
fn strand_component(raw: &[[Edge; 4]], occ: &HashMap<Edge, Vec<End>>, start: Edge) -> Vec<Edge> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(e) = stack.pop() {
        if !seen.insert(e) {
            continue;
        }
        for end in &occ[&e] {
            stack.push(raw[end.crossing][(end.slot + 2) % 4]);
        }
    }
    seen.into_iter().collect()
}

/// A braid on `strands` strands; letter `i` is `σ_|i|` with the sign of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, DiagramError> {
        if strands < 1 {
            return Err(DiagramError::Braid("need at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(DiagramError::Braid(format!("generator {l} out of range for {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }
}

/// Parses `braid(n; i1 i2 ...)`.
pub fn parse_braid(text: &str) -> Result<BraidWord, DiagramError> {
    let mut cur = Cursor::new(text);
    for ch in "braid".chars() {
        cur.expect(ch)?;
    }
    cur.expect('(')?;
    let at = cur.pos;
    let n = cur.integer()?;
    if n < 1 {
        cur.pos = at;
        cur.skip_ws();
        return Err(cur.error("strand count must be at least 1"));
    }
    cur.expect(';')?;
    let mut letters = Vec::new();
    while !cur.eat(')') {
        let at = cur.pos;
        let l = cur.integer()?;
        if l == 0 || l.unsigned_abs() >= n as u64 {
            cur.pos = at;
            cur.skip_ws();
            return Err(cur.error(format!("generator {l} out of range for {n} strands")));
        }
        letters.push(l as i32);
        cur.eat(',');
    }
    cur.finish()?;
    BraidWord::new(n as usize, letters)
}

/// PD code of the braid closure. A positive letter is a positive crossing.
pub fn braid_to_diagram(word: &BraidWord) -> Result<Diagram, DiagramError> {
    let n = word.strands;
    let mut next: Edge = 1;
    let initial: Vec<Edge> = (0..n)
        .map(|_| {
            next += 1;
            next - 1
        })
        .collect();
    let mut current = initial.clone();
    let mut raw: Vec<Crossing> = Vec::new();
    for &l in &word.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (x, y) = (current[i], current[i + 1]);
        let x_out = next;
        let y_out = next + 1;
        next += 2;
        // strand at i goes to i+1 (SW -> NE), strand at i+1 to i (SE -> NW)
        let crossing = if l > 0 {
            Crossing::new([y, x_out, y_out, x], true)
        } else {
            Crossing::new([x, y, x_out, y_out], false)
        };
        raw.push(crossing);
        current[i] = y_out;
        current[i + 1] = x_out;
    }
    // close: the final label at each position is identified with the initial one
    let mut rename: HashMap<Edge, Edge> = HashMap::new();
    let mut loops = 0;
    for (pos, &fin) in current.iter().enumerate() {
        if fin == initial[pos] {
            loops += 1;
        } else {
            rename.insert(fin, initial[pos]);
        }
    }
    let xs: Vec<Crossing> = raw
        .into_iter()
        .map(|x| Crossing::new(x.slots.map(|e| *rename.get(&e).unwrap_or(&e)), x.positive))
        .collect();
    let d = Diagram::new(xs, loops)?;
    Ok(d.relabeled().0)
}
