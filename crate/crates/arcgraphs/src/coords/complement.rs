//! Complementary regions of an embedded wall system.
//!
//! Walls are a disjoint normal system plus optionally whole
//! triangulation edges (which is how systems "realized with recorded
//! crossings" enter: an intersecting pair is realized by carrying one
//! arc to an edge first). Each triangle is cut into faces by its
//! segments; faces glue across non-wall edge gaps into regions. The
//! open Euler characteristic of a region is faces minus glued gaps
//! (regions contain no vertices: punctures and crossing points lie on
//! the walls), and boundary circles come from tracing the wall graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::picture::{cross, segment_other_end, trace_components, Component, SegEnd};
use super::word::{curve_word_class, CurveClass, CurveWord};
use super::{ClassCoords, System};
use crate::surface::{Corner, IdealTriangulation, Slot};
use crate::{Error, Result};

/// One complementary region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub genus: i64,
    pub boundary_circles: usize,
    pub euler_open: i64,
    pub interior_punctures: BTreeSet<usize>,
    pub boundary_punctures: BTreeSet<usize>,
    pub faces: usize,
}

#[derive(Debug, Clone)]
pub struct ComplementDecomposition {
    pub regions: Vec<Region>,
    /// Number of crossing points between walls.
    pub crossings: usize,
    /// Open Euler characteristic of the wall graph itself.
    pub euler_walls: i64,
}

impl ComplementDecomposition {
    /// Exactness check: open region characteristics plus the wall
    /// graph's recover the surface.
    pub fn euler_total(&self) -> i64 {
        self.regions.iter().map(|r| r.euler_open).sum::<i64>() + self.euler_walls
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Item {
    Sector { tri: usize, corner: u8, idx: u32 },
    Germ { tri: usize, corner: u8, j: u32 },
    Gap { tri: usize, side: u8, idx: u32 },
    Cross { tri: usize, side: u8, pos: u32 },
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Wall graph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum WEdge {
    /// Piece `seg` of traced component `comp` (between special points
    /// seg and seg+1 of that component).
    Strand { comp: usize, seg: usize },
    /// Piece of a wall edge spanning canonical gap `gap`.
    EdgePiece { edge: usize, gap: u32 },
    /// Closed strand with no wall-edge crossings.
    FreeCircle { comp: usize },
}

/// A germ: a wall-edge end at a vertex of the wall graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Germ {
    edge: WEdge,
    /// True if this is the start (lower end) of the piece in its own
    /// orientation.
    start: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum WVertex {
    Punct(usize),
    Crossing { edge: usize, pos: u32 },
}

/// Entries of a vertex's counterclockwise fan: germs interleaved with
/// crossed non-wall slots (for boundary-parallel words) and sector
/// faces (for region lookup).
#[derive(Debug, Clone, Copy)]
enum FanEntry {
    Germ(Germ),
    Passed(Slot),
    SectorFace(usize),
}

pub struct Cut<'a> {
    pub trig: &'a IdealTriangulation,
    pub sys: System,
    pub walls: BTreeSet<usize>,
    comps: Vec<Component>,
    faces_tri: Vec<usize>,
    face_of: HashMap<Item, usize>,
    region_of_face: Vec<usize>,
    region_count: usize,
    glued_gaps: Vec<(usize, usize)>, // face pairs
    /// Special-point step indices per component (wall-edge crossings).
    specials: Vec<Vec<usize>>,
    fans: HashMap<WVertex, Vec<FanEntry>>,
    orbits: Vec<(usize, Vec<Slot>)>, // (region, boundary-parallel word)
    crossings: usize,
}

fn corner_counts(trig: &IdealTriangulation, sys: &System, tri: usize) -> [i64; 3] {
    sys.corner_counts(trig, tri).expect("cut systems are validated")
}

impl<'a> Cut<'a> {
    pub fn new(
        trig: &'a IdealTriangulation,
        classes: &[ClassCoords],
    ) -> Result<Cut<'a>> {
        let mut sys = System::empty(trig.edge_count());
        let mut walls = BTreeSet::new();
        let mut normals: Vec<&ClassCoords> = Vec::new();
        for c in classes {
            if c.reference() != trig.id() {
                return Err(Error::ReferenceMismatch);
            }
            match c {
                ClassCoords::Arc(a) => match a.is_edge() {
                    Some(e) => {
                        walls.insert(e);
                    }
                    None => {
                        normals.push(c);
                        sys = sys.sum(&a.system(trig));
                    }
                },
                ClassCoords::Curve(cc) => {
                    normals.push(c);
                    sys = sys.sum(&cc.system);
                }
            }
        }
        // The normal part must be a genuinely disjoint union.
        sys.validate(trig).map_err(|e| {
            Error::Invalid(format!("system is not realized disjointly: {e}"))
        })?;
        let comps = trace_components(trig, &sys);
        let mut want: Vec<System> = normals.iter().map(|c| c.as_system(trig)).collect();
        let mut got: Vec<System> = comps.iter().map(|c| c.to_system(trig)).collect();
        want.sort();
        got.sort();
        if want != got {
            return Err(Error::Invalid(
                "system is not realized disjointly: components do not match".into(),
            ));
        }
        let mut cut = Cut {
            trig,
            sys,
            walls,
            comps,
            faces_tri: Vec::new(),
            face_of: HashMap::new(),
            region_of_face: Vec::new(),
            region_count: 0,
            glued_gaps: Vec::new(),
            specials: Vec::new(),
            fans: HashMap::new(),
            orbits: Vec::new(),
            crossings: 0,
        };
        cut.build_faces()?;
        cut.glue();
        cut.build_wall_graph();
        cut.trace_orbits()?;
        Ok(cut)
    }

    fn terminals_at(&self, tri: usize, corner: u8) -> u32 {
        self.sys.terminals_at(Corner { tri, corner })
    }

    fn circle(&self, tri: usize) -> Vec<Item> {
        let mut items = Vec::new();
        for (c, k) in [(1u8, 0u8), (2, 1), (0, 2)] {
            let t_count = self.terminals_at(tri, c);
            items.push(Item::Sector { tri, corner: c, idx: 0 });
            for g in 0..t_count {
                // Boundary-ccw order visits germs by decreasing
                // terminal index.
                items.push(Item::Germ { tri, corner: c, j: t_count - g });
                items.push(Item::Sector { tri, corner: c, idx: g + 1 });
            }
            let w = self.sys.weights[self.trig.sides(tri)[k as usize]];
            items.push(Item::Gap { tri, side: k, idx: 0 });
            for p in 1..=w {
                items.push(Item::Cross { tri, side: k, pos: p });
                items.push(Item::Gap { tri, side: k, idx: p });
            }
        }
        items
    }

    fn mate(&self, tri: usize, side: u8, pos: u32) -> Item {
        match segment_other_end(self.trig, &self.sys, Slot { tri, side }, pos) {
            SegEnd::OnSlot(s, p) => Item::Cross { tri, side: s.side, pos: p },
            SegEnd::AtCorner(c) => {
                let n = corner_counts(self.trig, &self.sys, tri);
                let j = pos - n[(c.corner as usize + 1) % 3] as u32;
                Item::Germ { tri, corner: c.corner, j }
            }
        }
    }

    fn build_faces(&mut self) -> Result<()> {
        for tri in 0..self.trig.triangle_count() {
            let items = self.circle(tri);
            let index_of: HashMap<Item, usize> =
                items.iter().enumerate().map(|(i, &it)| (it, i)).collect();
            // Chord endpoints pair up via the picture.
            let mut mate_idx: HashMap<usize, usize> = HashMap::new();
            for (i, it) in items.iter().enumerate() {
                let m = match *it {
                    Item::Cross { tri, side, pos } => self.mate(tri, side, pos),
                    Item::Germ { tri, corner, j } => {
                        let n = corner_counts(self.trig, &self.sys, tri);
                        let pos = n[(corner as usize + 1) % 3] as u32 + j;
                        Item::Cross { tri, side: corner, pos }
                    }
                    _ => continue,
                };
                let mi = *index_of.get(&m).ok_or_else(|| {
                    Error::Matching { tri, detail: "segment endpoints do not pair".into() }
                })?;
                mate_idx.insert(i, mi);
            }
            // Scan with a chord stack; the face of a boundary interval
            // is the stack state.
            let mut stack: Vec<usize> = Vec::new();
            let mut face_keys: HashMap<Vec<usize>, usize> = HashMap::new();
            for (i, it) in items.iter().enumerate() {
                match *it {
                    Item::Cross { .. } | Item::Germ { .. } => {
                        let m = mate_idx[&i];
                        if m > i {
                            stack.push(i);
                        } else {
                            let top = stack.pop();
                            if top != Some(m) {
                                return Err(Error::Matching {
                                    tri,
                                    detail: "segments cross inside a triangle".into(),
                                });
                            }
                        }
                    }
                    Item::Sector { .. } | Item::Gap { .. } => {
                        let face = *face_keys.entry(stack.clone()).or_insert_with(|| {
                            self.faces_tri.push(tri);
                            self.faces_tri.len() - 1
                        });
                        self.face_of.insert(*it, face);
                    }
                }
            }
            if !stack.is_empty() {
                return Err(Error::Matching { tri, detail: "unmatched segment endpoint".into() });
            }
        }
        Ok(())
    }

    fn glue(&mut self) {
        let mut uf = UnionFind::new(self.faces_tri.len());
        for e in 0..self.trig.edge_count() {
            if self.walls.contains(&e) {
                continue;
            }
            let [a, b] = self.trig.slots_of(e);
            let w = self.sys.weights[e];
            for g in 0..=w {
                let fa = self.face_of[&Item::Gap { tri: a.tri, side: a.side, idx: g }];
                let fb = self.face_of[&Item::Gap { tri: b.tri, side: b.side, idx: w - g }];
                uf.union(fa, fb);
                self.glued_gaps.push((fa, fb));
            }
        }
        let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
        self.region_of_face = (0..self.faces_tri.len())
            .map(|f| {
                let r = uf.find(f);
                let n = roots.len();
                *roots.entry(r).or_insert(n)
            })
            .collect();
        self.region_count = roots.len();
    }

    /// Canonical position of a crossing step on its edge.
    fn canonical_pos(&self, slot: Slot, pos: u32) -> (usize, u32) {
        let e = self.trig.edge_of(slot);
        if self.trig.slots_of(e)[0] == slot {
            (e, pos)
        } else {
            (e, self.sys.weights[e] + 1 - pos)
        }
    }

    fn build_wall_graph(&mut self) {
        // Special points per component: steps that cross wall edges.
        self.specials = self
            .comps
            .iter()
            .map(|c| {
                let steps = match c {
                    Component::Arc(a) => &a.steps,
                    Component::Curve(cu) => &cu.steps,
                };
                steps
                    .iter()
                    .enumerate()
                    .filter(|(_, (s, _))| self.walls.contains(&self.trig.edge_of(*s)))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        self.crossings = self.specials.iter().map(|v| v.len()).sum();
        // Fans at crossings on wall edges.
        for (ci, comp) in self.comps.iter().enumerate() {
            let steps = match comp {
                Component::Arc(a) => &a.steps,
                Component::Curve(cu) => &cu.steps,
            };
            for (si, &step_idx) in self.specials[ci].iter().enumerate() {
                let (slot, pos) = steps[step_idx];
                let (e, cpos) = self.canonical_pos(slot, pos);
                let v = WVertex::Crossing { edge: e, pos: cpos };
                // Strand pieces around this crossing.
                let arriving = self.strand_piece(ci, si, true);
                let leaving = self.strand_piece(ci, si, false);
                // Germ into the canonical triangle is the piece on the
                // canonical side: arriving if the step exits from the
                // canonical slot.
                let canonical = self.trig.slots_of(e)[0] == slot;
                let (into_canon, into_partner) = if canonical {
                    (arriving, leaving)
                } else {
                    (leaving, arriving)
                };
                let fan = vec![
                    FanEntry::Germ(Germ { edge: WEdge::EdgePiece { edge: e, gap: cpos }, start: true }),
                    FanEntry::Germ(into_canon),
                    FanEntry::Germ(Germ {
                        edge: WEdge::EdgePiece { edge: e, gap: cpos - 1 },
                        start: false,
                    }),
                    FanEntry::Germ(into_partner),
                ];
                self.fans.insert(v, fan);
            }
        }
        // Fans at punctures.
        for (v, cycle) in self.trig.vertex_cycles() {
            let mut fan = Vec::new();
            for c in cycle {
                let t_count = self.terminals_at(c.tri, c.corner);
                let n = corner_counts(self.trig, &self.sys, c.tri);
                for j in 1..=t_count {
                    fan.push(FanEntry::SectorFace(
                        self.face_of[&Item::Sector { tri: c.tri, corner: c.corner, idx: t_count - j + 1 }],
                    ));
                    let pos = n[(c.corner as usize + 1) % 3] as u32 + j;
                    fan.push(FanEntry::Germ(self.terminal_germ(c, pos)));
                }
                fan.push(FanEntry::SectorFace(
                    self.face_of[&Item::Sector { tri: c.tri, corner: c.corner, idx: 0 }],
                ));
                // Crossing side corner+1 next.
                let slot = Slot { tri: c.tri, side: (c.corner + 1) % 3 };
                let e = self.trig.edge_of(slot);
                if self.walls.contains(&e) {
                    // Head of the slot is corner side+2; v sits at the
                    // head iff this slot's head corner is c.
                    let head_is_here = (slot.side + 2) % 3 == c.corner;
                    debug_assert!(head_is_here || (slot.side + 1) % 3 == c.corner);
                    let canonical = self.trig.slots_of(e)[0] == slot;
                    let w = self.sys.weights[e];
                    // Piece at the canonical tail is gap 0 start; at the
                    // canonical head it is gap w end.
                    let at_canonical_head = canonical == head_is_here;
                    let germ = if at_canonical_head {
                        Germ { edge: WEdge::EdgePiece { edge: e, gap: w }, start: false }
                    } else {
                        Germ { edge: WEdge::EdgePiece { edge: e, gap: 0 }, start: true }
                    };
                    fan.push(FanEntry::Germ(germ));
                } else {
                    fan.push(FanEntry::Passed(slot));
                }
            }
            self.fans.insert(WVertex::Punct(v), fan);
        }
    }

    /// Terminal germ at a corner: which component piece starts or ends
    /// here, found by walking one step of the trace.
    fn terminal_germ(&self, c: Corner, pos: u32) -> Germ {
        for (ci, comp) in self.comps.iter().enumerate() {
            let a = match comp {
                Component::Arc(a) => a,
                Component::Curve(_) => continue,
            };
            if a.start == c && a.steps.first().map(|&(s, p)| (s, p)) == Some((Slot { tri: c.tri, side: c.corner }, pos)) {
                return Germ { edge: self.first_piece(ci), start: true };
            }
            if a.end == c {
                let (last_slot, last_pos) = *a.steps.last().expect("traced arcs cross something");
                let (s2, p2) = cross(self.trig, &self.sys, last_slot, last_pos);
                if s2.side == c.corner && s2.tri == c.tri && p2 == pos {
                    return Germ { edge: self.last_piece(ci), start: false };
                }
            }
        }
        unreachable!("terminal germ not found at {c:?} pos {pos}")
    }

    fn first_piece(&self, comp: usize) -> WEdge {
        WEdge::Strand { comp, seg: 0 }
    }

    fn last_piece(&self, comp: usize) -> WEdge {
        WEdge::Strand { comp, seg: self.specials[comp].len() }
    }

    /// Strand piece adjacent to the si-th special point of a component:
    /// arriving (before) or leaving (after).
    fn strand_piece(&self, comp: usize, si: usize, arriving: bool) -> Germ {
        match &self.comps[comp] {
            Component::Arc(_) => {
                let seg = if arriving { si } else { si + 1 };
                Germ { edge: WEdge::Strand { comp, seg }, start: !arriving }
            }
            Component::Curve(_) => {
                let m = self.specials[comp].len();
                let seg = if arriving { si } else { (si + 1) % m };
                Germ { edge: WEdge::Strand { comp, seg }, start: !arriving }
            }
        }
    }

    /// Vertex at a germ's free end.
    fn germ_vertex(&self, g: Germ) -> WVertex {
        match g.edge {
            WEdge::EdgePiece { edge, gap } => {
                let w = self.sys.weights[edge];
                let slot = self.trig.slots_of(edge)[0];
                let (tail, head) = self.trig.slot_endpoints(slot);
                if g.start {
                    if gap == 0 {
                        WVertex::Punct(tail)
                    } else {
                        WVertex::Crossing { edge, pos: gap }
                    }
                } else if gap == w {
                    WVertex::Punct(head)
                } else {
                    WVertex::Crossing { edge, pos: gap + 1 }
                }
            }
            WEdge::Strand { comp, seg } => {
                let steps = match &self.comps[comp] {
                    Component::Arc(a) => &a.steps,
                    Component::Curve(c) => &c.steps,
                };
                let sp = &self.specials[comp];
                match &self.comps[comp] {
                    Component::Arc(a) => {
                        if g.start {
                            if seg == 0 {
                                WVertex::Punct(self.trig.vertex_at(a.start))
                            } else {
                                let (slot, pos) = steps[sp[seg - 1]];
                                let (e, p) = self.canonical_pos(slot, pos);
                                WVertex::Crossing { edge: e, pos: p }
                            }
                        } else if seg == sp.len() {
                            WVertex::Punct(self.trig.vertex_at(a.end))
                        } else {
                            let (slot, pos) = steps[sp[seg]];
                            let (e, p) = self.canonical_pos(slot, pos);
                            WVertex::Crossing { edge: e, pos: p }
                        }
                    }
                    Component::Curve(_) => {
                        let m = sp.len();
                        let idx = if g.start { sp[(seg + m - 1) % m] } else { sp[seg] };
                        let (slot, pos) = steps[idx];
                        let (e, p) = self.canonical_pos(slot, pos);
                        WVertex::Crossing { edge: e, pos: p }
                    }
                }
            }
            WEdge::FreeCircle { .. } => unreachable!("free circles have no germs"),
        }
    }

    /// Word emitted by traveling a strand piece: the non-wall crossings
    /// strictly between its bounding special points.
    fn piece_word(&self, comp: usize, seg: usize, forward: bool) -> Vec<Slot> {
        let steps = match &self.comps[comp] {
            Component::Arc(a) => &a.steps,
            Component::Curve(c) => &c.steps,
        };
        let sp = &self.specials[comp];
        let idxs: Vec<usize> = match &self.comps[comp] {
            Component::Arc(_) => {
                let lo = if seg == 0 { 0 } else { sp[seg - 1] + 1 };
                let hi = if seg == sp.len() { steps.len() } else { sp[seg] };
                (lo..hi).collect()
            }
            Component::Curve(_) => {
                let m = sp.len();
                let lo = sp[(seg + m - 1) % m] + 1;
                let hi = sp[seg];
                if (seg + m - 1) % m < seg || m == 1 {
                    // May wrap around the cyclic word.
                    if lo <= hi {
                        (lo..hi).collect()
                    } else {
                        (lo..steps.len()).chain(0..hi).collect()
                    }
                } else {
                    (lo..steps.len()).chain(0..hi).collect()
                }
            }
        };
        if forward {
            idxs.iter().map(|&i| steps[i].0).collect()
        } else {
            idxs.iter().rev().map(|&i| self.trig.partner(steps[i].0)).collect()
        }
    }

    /// Fan walk: slots passed between a germ's position and the next
    /// germ counterclockwise, plus that germ and a sector face sample.
    fn fan_step(&self, v: WVertex, g: Germ) -> (Vec<Slot>, Germ, Option<usize>) {
        let fan = &self.fans[&v];
        let pos = fan
            .iter()
            .position(|e| matches!(e, FanEntry::Germ(x) if *x == g))
            .expect("arriving germ present in fan");
        let n = fan.len();
        let mut passed = Vec::new();
        let mut face = None;
        for k in 1..=n {
            match fan[(pos + k) % n] {
                FanEntry::Germ(g2) => return (passed, g2, face),
                FanEntry::Passed(s) => passed.push(s),
                FanEntry::SectorFace(f) => face = Some(face.unwrap_or(f)),
            }
        }
        unreachable!("fan without germs")
    }

    fn trace_orbits(&mut self) -> Result<()> {
        // Directed W-edges: (edge, forward).
        let mut all: BTreeSet<(WEdge, bool)> = BTreeSet::new();
        for (ci, comp) in self.comps.iter().enumerate() {
            let m = self.specials[ci].len();
            match comp {
                Component::Arc(_) => {
                    for seg in 0..=m {
                        all.insert((WEdge::Strand { comp: ci, seg }, true));
                        all.insert((WEdge::Strand { comp: ci, seg }, false));
                    }
                }
                Component::Curve(_) => {
                    if m == 0 {
                        all.insert((WEdge::FreeCircle { comp: ci }, true));
                        all.insert((WEdge::FreeCircle { comp: ci }, false));
                    } else {
                        for seg in 0..m {
                            all.insert((WEdge::Strand { comp: ci, seg }, true));
                            all.insert((WEdge::Strand { comp: ci, seg }, false));
                        }
                    }
                }
            }
        }
        for &e in &self.walls {
            for gap in 0..=self.sys.weights[e] {
                all.insert((WEdge::EdgePiece { edge: e, gap }, true));
                all.insert((WEdge::EdgePiece { edge: e, gap }, false));
            }
        }
        let mut seen: BTreeSet<(WEdge, bool)> = BTreeSet::new();
        let items: Vec<(WEdge, bool)> = all.iter().cloned().collect();
        for start in items {
            if seen.contains(&start) {
                continue;
            }
            // Free circles: each side is one boundary circle.
            if let (WEdge::FreeCircle { comp }, fwd) = start {
                seen.insert(start);
                let steps = match &self.comps[comp] {
                    Component::Curve(c) => &c.steps,
                    _ => unreachable!(),
                };
                let word: Vec<Slot> = if fwd {
                    steps.iter().map(|(s, _)| *s).collect()
                } else {
                    steps.iter().rev().map(|(s, _)| self.trig.partner(*s)).collect()
                };
                // Region: face left of the strand in this direction.
                let (slot, pos) = steps[0];
                let face = if fwd {
                    self.face_of[&Item::Gap { tri: slot.tri, side: slot.side, idx: pos }]
                } else {
                    self.face_of[&Item::Gap { tri: slot.tri, side: slot.side, idx: pos - 1 }]
                };
                let region = self.region_of_face[face];
                self.orbits.push((region, word));
                continue;
            }
            let mut word = Vec::new();
            let mut region: Option<usize> = None;
            let mut cur = start;
            let mut guard = 0;
            loop {
                guard += 1;
                if guard > 1_000_000 {
                    return Err(Error::SearchLimit { what: "wall orbit".into(), limit: 1_000_000 });
                }
                seen.insert(cur);
                // Emit the piece's own word and find the arrival germ.
                let arrive = match cur.0 {
                    WEdge::Strand { comp, seg } => {
                        word.extend(self.piece_word(comp, seg, cur.1));
                        Germ { edge: cur.0, start: !cur.1 }
                    }
                    WEdge::EdgePiece { edge, gap } => {
                        if region.is_none() {
                            let w = self.sys.weights[edge];
                            let [a, b] = self.trig.slots_of(edge);
                            let face = if cur.1 {
                                self.face_of[&Item::Gap { tri: a.tri, side: a.side, idx: gap }]
                            } else {
                                self.face_of[&Item::Gap { tri: b.tri, side: b.side, idx: w - gap }]
                            };
                            region = Some(self.region_of_face[face]);
                        }
                        Germ { edge: cur.0, start: !cur.1 }
                    }
                    WEdge::FreeCircle { .. } => unreachable!(),
                };
                let v = self.germ_vertex(arrive);
                let (passed, next_germ, face) = self.fan_step(v, arrive);
                word.extend(passed);
                if region.is_none() {
                    if let Some(f) = face {
                        region = Some(self.region_of_face[f]);
                    }
                }
                // Leave along the next germ, away from the vertex.
                cur = (next_germ.edge, next_germ.start);
                if cur == start {
                    break;
                }
            }
            let region = region.ok_or_else(|| {
                Error::Invalid("wall orbit saw no adjacent face".into())
            })?;
            self.orbits.push((region, word));
        }
        Ok(())
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }

    pub fn region_of(&self, face: usize) -> usize {
        self.region_of_face[face]
    }

    /// Faces adjacent to a puncture's corner sectors, per region.
    fn sectors_of_vertex(&self, v: usize) -> Vec<(Corner, u32, usize)> {
        let mut out = Vec::new();
        for (vv, cycle) in self.trig.vertex_cycles() {
            if vv != v {
                continue;
            }
            for c in cycle {
                let t_count = self.terminals_at(c.tri, c.corner);
                for idx in 0..=t_count {
                    let f = self.face_of[&Item::Sector { tri: c.tri, corner: c.corner, idx }];
                    out.push((c, idx, f));
                }
            }
        }
        out
    }

    /// Whether a puncture carries any wall germ (terminal or wall-edge
    /// end).
    fn vertex_on_walls(&self, v: usize) -> bool {
        self.fans
            .get(&WVertex::Punct(v))
            .map(|fan| fan.iter().any(|e| matches!(e, FanEntry::Germ(_))))
            .unwrap_or(false)
    }

    pub fn decomposition(&self) -> ComplementDecomposition {
        let mut faces = vec![0usize; self.region_count];
        for f in 0..self.faces_tri.len() {
            faces[self.region_of_face[f]] += 1;
        }
        let mut glued = vec![0i64; self.region_count];
        for &(fa, _) in &self.glued_gaps {
            glued[self.region_of_face[fa]] += 1;
        }
        let mut circles = vec![0usize; self.region_count];
        for (r, _) in &self.orbits {
            circles[*r] += 1;
        }
        let mut interior = vec![BTreeSet::new(); self.region_count];
        let mut boundary = vec![BTreeSet::new(); self.region_count];
        for v in 0..self.trig.punctures().len() {
            let sectors = self.sectors_of_vertex(v);
            let regions: BTreeSet<usize> =
                sectors.iter().map(|&(_, _, f)| self.region_of_face[f]).collect();
            if self.vertex_on_walls(v) {
                for r in regions {
                    boundary[r].insert(v);
                }
            } else {
                debug_assert_eq!(regions.len(), 1);
                for r in regions {
                    interior[r].insert(v);
                }
            }
        }
        let regions = (0..self.region_count)
            .map(|r| {
                let euler_open = faces[r] as i64 - glued[r];
                let p = interior[r].len() as i64;
                let b = circles[r] as i64;
                // euler_open = 2 - 2g - b - p.
                let genus = (2 - euler_open - b - p) / 2;
                Region {
                    genus,
                    boundary_circles: circles[r],
                    euler_open,
                    interior_punctures: interior[r].clone(),
                    boundary_punctures: boundary[r].clone(),
                    faces: faces[r],
                }
            })
            .collect();
        // Wall graph Euler characteristic: crossings minus open pieces
        // (free circles contribute zero).
        let mut pieces = 0i64;
        for (ci, comp) in self.comps.iter().enumerate() {
            let m = self.specials[ci].len();
            match comp {
                Component::Arc(_) => pieces += m as i64 + 1,
                Component::Curve(_) => pieces += m as i64,
            }
        }
        for &e in &self.walls {
            pieces += self.sys.weights[e] as i64 + 1;
        }
        ComplementDecomposition {
            regions,
            crossings: self.crossings,
            euler_walls: self.crossings as i64 - pieces,
        }
    }

    /// Boundary-parallel loops of the wall system, one per wall-graph
    /// face, each tagged with its region and classified as a curve.
    pub fn boundary_loops(&self) -> Result<Vec<(usize, CurveClass)>> {
        let mut out = Vec::new();
        for (r, word) in &self.orbits {
            let class = curve_word_class(self.trig, CurveWord { exits: word.clone() })?;
            out.push((*r, class));
        }
        Ok(out)
    }

    /// Route an embedded arc between two puncture sectors through a
    /// region, as a word. Returns None when the sectors are in
    /// different regions or no face path exists.
    pub fn route_arc(
        &self,
        from: (Corner, u32),
        to: (Corner, u32),
    ) -> Option<crate::coords::word::ArcWord> {
        let f_from = *self.face_of.get(&Item::Sector {
            tri: from.0.tri,
            corner: from.0.corner,
            idx: from.1,
        })?;
        let f_to = *self.face_of.get(&Item::Sector { tri: to.0.tri, corner: to.0.corner, idx: to.1 })?;
        if self.region_of_face[f_from] != self.region_of_face[f_to] {
            return None;
        }
        // BFS over faces through glued gaps.
        let mut adj: HashMap<usize, Vec<(usize, Slot)>> = HashMap::new();
        for e in 0..self.trig.edge_count() {
            if self.walls.contains(&e) {
                continue;
            }
            let [a, b] = self.trig.slots_of(e);
            let w = self.sys.weights[e];
            for g in 0..=w {
                let fa = self.face_of[&Item::Gap { tri: a.tri, side: a.side, idx: g }];
                let fb = self.face_of[&Item::Gap { tri: b.tri, side: b.side, idx: w - g }];
                adj.entry(fa).or_default().push((fb, a));
                adj.entry(fb).or_default().push((fa, b));
            }
        }
        let mut prev: HashMap<usize, (usize, Slot)> = HashMap::new();
        let mut queue = std::collections::VecDeque::from([f_from]);
        let mut seen: BTreeSet<usize> = BTreeSet::from([f_from]);
        while let Some(f) = queue.pop_front() {
            if f == f_to {
                break;
            }
            for &(g, slot) in adj.get(&f).into_iter().flatten() {
                if seen.insert(g) {
                    prev.insert(g, (f, slot));
                    queue.push_back(g);
                }
            }
        }
        if f_from != f_to && !prev.contains_key(&f_to) {
            return None;
        }
        let mut exits = Vec::new();
        let mut cur = f_to;
        while cur != f_from {
            let (p, slot) = prev[&cur];
            exits.push(slot);
            cur = p;
        }
        exits.reverse();
        Some(crate::coords::word::ArcWord { start: from.0, exits, end: to.0 })
    }

    /// All sectors at a puncture with their regions.
    pub fn puncture_sectors(&self, v: usize) -> Vec<(Corner, u32, usize)> {
        self.sectors_of_vertex(v)
            .into_iter()
            .map(|(c, idx, f)| (c, idx, self.region_of_face[f]))
            .collect()
    }

    /// Region containing a puncture in its interior, if any.
    pub fn region_containing(&self, v: usize) -> Option<usize> {
        if self.vertex_on_walls(v) {
            return None;
        }
        self.sectors_of_vertex(v)
            .first()
            .map(|&(_, _, f)| self.region_of_face[f])
    }
}

/// Complementary decomposition of a finite system of classes, which
/// must be realized disjointly except that arcs carried as whole edges
/// may cross the normal part (the recorded crossings).
pub fn cut_complement(
    trig: &IdealTriangulation,
    classes: &[ClassCoords],
) -> Result<ComplementDecomposition> {
    Ok(Cut::new(trig, classes)?.decomposition())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{normalize_arc, normalize_curve};
    use crate::oracle::square::{self, Slope};
    use crate::surface::SurfaceSpec;

    fn torus() -> IdealTriangulation {
        crate::surface::build_base_triangulation(&SurfaceSpec::standard(1, 1, 1)).unwrap()
    }

    fn sphere3() -> IdealTriangulation {
        crate::surface::build_base_triangulation(&SurfaceSpec::standard(0, 3, 0)).unwrap()
    }

    fn slope_arc(trig: &IdealTriangulation, s: Slope) -> ClassCoords {
        if let Some(e) = s.is_edge_slope() {
            let mut raw = vec![0i64; trig.edge_count()];
            raw[e] = -1;
            return ClassCoords::Arc(normalize_arc(trig, &raw, &Default::default()).unwrap());
        }
        let w = square::slope_word(s).unwrap();
        let mut weights = vec![0i64; trig.edge_count()];
        for slot in &w.exits {
            weights[trig.edge_of(*slot)] += 1;
        }
        let mut terminals = std::collections::BTreeMap::new();
        *terminals.entry(w.start).or_insert(0u32) += 1;
        *terminals.entry(w.end).or_insert(0u32) += 1;
        ClassCoords::Arc(normalize_arc(trig, &weights, &terminals).unwrap())
    }

    #[test]
    fn empty_system_is_one_region() {
        let trig = sphere3();
        let d = cut_complement(&trig, &[]).unwrap();
        assert_eq!(d.regions.len(), 1);
        let r = &d.regions[0];
        assert_eq!(r.genus, 0);
        assert_eq!(r.boundary_circles, 0);
        assert_eq!(r.interior_punctures.len(), 3);
        assert_eq!(d.euler_total(), -1);
    }

    #[test]
    fn sphere_cut_along_one_edge_arc() {
        let trig = sphere3();
        // Cut along edge 0 (an arc between two punctures): a disk with
        // the third puncture inside.
        let mut raw = vec![0i64; trig.edge_count()];
        raw[0] = -1;
        let a = ClassCoords::Arc(normalize_arc(&trig, &raw, &Default::default()).unwrap());
        let d = cut_complement(&trig, &[a]).unwrap();
        assert_eq!(d.regions.len(), 1);
        let r = &d.regions[0];
        assert_eq!(r.genus, 0, "{r:?}");
        assert_eq!(r.boundary_circles, 1);
        assert_eq!(r.interior_punctures.len(), 1);
        assert_eq!(r.boundary_punctures.len(), 2);
        assert_eq!(d.euler_total(), -1);
    }

    #[test]
    fn torus_cut_along_slope_arc() {
        let trig = torus();
        for s in [Slope::new(0, 1).unwrap(), Slope::new(2, 1).unwrap(), Slope::new(3, 5).unwrap()] {
            let d = cut_complement(&trig, &[slope_arc(&trig, s)]).unwrap();
            assert_eq!(d.regions.len(), 1, "slope {s}");
            let r = &d.regions[0];
            // Cutting the once-punctured torus along an essential arc
            // opens it into an annulus; both circles pass the puncture.
            assert_eq!(r.genus, 0, "slope {s}: {r:?}");
            assert_eq!(r.boundary_circles, 2);
            assert_eq!(r.interior_punctures.len(), 0);
            assert_eq!(r.boundary_punctures.len(), 1);
            assert_eq!(d.euler_total(), -1);
        }
    }

    #[test]
    fn torus_cut_along_two_disjoint_arcs() {
        let trig = torus();
        // Slopes 0/1 and 1/0 are disjoint; cutting along both opens the
        // torus into a disk.
        let a = slope_arc(&trig, Slope::new(0, 1).unwrap());
        let b = slope_arc(&trig, Slope::new(1, 0).unwrap());
        let d = cut_complement(&trig, &[a, b]).unwrap();
        assert_eq!(d.regions.len(), 1);
        let r = &d.regions[0];
        assert_eq!((r.genus, r.boundary_circles), (0, 1), "{r:?}");
        assert_eq!(d.euler_total(), -1);
    }

    #[test]
    fn torus_cut_along_closed_curve() {
        let trig = torus();
        let c = normalize_curve(&trig, &[0, 1, 1]).unwrap();
        let d = cut_complement(&trig, &[ClassCoords::Curve(c)]).unwrap();
        // An essential curve on the punctured torus leaves one region
        // of genus zero with two boundary circles and the puncture.
        assert_eq!(d.regions.len(), 1);
        let r = &d.regions[0];
        assert_eq!((r.genus, r.boundary_circles), (0, 2), "{r:?}");
        assert_eq!(r.boundary_punctures.len(), 0);
        assert_eq!(r.interior_punctures.len(), 1);
        assert_eq!(d.euler_total(), -1);
    }

    #[test]
    fn crossing_pair_with_edge_wall() {
        let trig = torus();
        // Edge 1 (slope infinity) as a wall plus the slope 1/2 arc,
        // which crosses it once.
        let mut raw = vec![0i64; trig.edge_count()];
        raw[1] = -1;
        let e = ClassCoords::Arc(normalize_arc(&trig, &raw, &Default::default()).unwrap());
        let a = slope_arc(&trig, Slope::new(1, 2).unwrap());
        let d = cut_complement(&trig, &[e, a]).unwrap();
        assert_eq!(d.crossings, 1);
        assert_eq!(d.euler_total(), -1);
        let total_faces: usize = d.regions.iter().map(|r| r.faces).sum();
        assert!(total_faces > 2);
    }

    #[test]
    fn boundary_loop_of_arc_neighborhood() {
        let trig = sphere3();
        let mut raw = vec![0i64; trig.edge_count()];
        raw[0] = -1;
        let a = ClassCoords::Arc(normalize_arc(&trig, &raw, &Default::default()).unwrap());
        let cut = Cut::new(&trig, &[a]).unwrap();
        let loops = cut.boundary_loops().unwrap();
        assert_eq!(loops.len(), 1);
        // The neighborhood boundary of an arc joining two of the three
        // punctures encircles them: peripheral around the third from
        // the other side, so it is peripheral or trivial only around
        // the remaining puncture; on the three-punctured sphere it is
        // peripheral around the third puncture.
        match &loops[0].1 {
            CurveClass::Peripheral(v) => {
                let (x, y) = trig.edge_endpoints(0);
                assert!(*v != x && *v != y);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn route_arc_between_punctures() {
        let trig = sphere3();
        let cut = Cut::new(&trig, &[]).unwrap();
        let s0 = cut.puncture_sectors(0);
        let s1 = cut.puncture_sectors(1);
        let w = cut.route_arc((s0[0].0, s0[0].1), (s1[0].0, s1[0].1)).unwrap();
        let arc = crate::coords::word::arc_word_to_coords(&trig, w).unwrap();
        let (a, b) = match arc.repr {
            crate::coords::ArcRepr::Edge(e) => trig.edge_endpoints(e),
            _ => arc.endpoints,
        };
        assert_eq!((a.min(b), a.max(b)), (0, 1));
    }
}
