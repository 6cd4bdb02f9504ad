//! Transport of classes across local retriangulation moves.
//!
//! Every move replaces a set of triangles; a traced word is cut into
//! maximal passages through the replaced region and each passage is
//! rerouted by a move-specific router. Flip rewrites are canonical;
//! split and handle moves carry a fixed convention for where the new
//! topology sits relative to the strands (recorded in the router
//! tables), which makes the stage inclusions definite maps.

use super::picture::{trace_components, Component};
use super::word::{arc_word_to_coords, curve_word_class, ArcWord, CurveClass, CurveWord};
use super::{ArcCoords, ArcRepr, ClassCoords, CurveCoords};
use crate::surface::{Corner, IdealTriangulation, MoveRecord, Slot};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Side(Slot),
    Corner(Corner),
}

#[derive(Debug, Clone)]
enum Routed {
    Path { start: Option<Corner>, exits: Vec<Slot>, end: Option<Corner> },
    WholeSentinel(usize),
}

trait Router {
    fn in_region(&self, tri: usize) -> bool;
    fn interior_edge(&self, edge: usize) -> bool;
    fn route(&self, entry: End, exit: End) -> Result<Routed>;
}

// ---------------------------------------------------------------- flip

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SquareItem {
    L,
    Bm,
    R,
    T,
    D1,
    D2,
    Pa,
    Pb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FClass {
    Below,
    Above,
    Neutral,
}

struct FlipRouter {
    edge: usize,
    ta: usize,
    ka: u8,
    tb: usize,
    kb: u8,
}

impl FlipRouter {
    fn side_item(&self, s: Slot) -> Result<SquareItem> {
        let m = |x: u8| x % 3;
        if s.tri == self.ta && s.side == m(self.ka + 1) {
            Ok(SquareItem::T)
        } else if s.tri == self.ta && s.side == m(self.ka + 2) {
            Ok(SquareItem::L)
        } else if s.tri == self.tb && s.side == m(self.kb + 1) {
            Ok(SquareItem::Bm)
        } else if s.tri == self.tb && s.side == m(self.kb + 2) {
            Ok(SquareItem::R)
        } else {
            Err(Error::Invalid(format!("slot {s:?} is not a square boundary slot")))
        }
    }

    fn corner_item(&self, c: Corner) -> Result<SquareItem> {
        let m = |x: u8| x % 3;
        if c.tri == self.ta {
            if c.corner == self.ka {
                Ok(SquareItem::Pa)
            } else if c.corner == m(self.ka + 1) {
                Ok(SquareItem::D1)
            } else {
                Ok(SquareItem::D2)
            }
        } else if c.tri == self.tb {
            if c.corner == self.kb {
                Ok(SquareItem::Pb)
            } else if c.corner == m(self.kb + 1) {
                Ok(SquareItem::D2)
            } else {
                Ok(SquareItem::D1)
            }
        } else {
            Err(Error::Invalid("corner outside flip square".into()))
        }
    }

    fn class(i: SquareItem) -> FClass {
        match i {
            SquareItem::L | SquareItem::Bm | SquareItem::D1 => FClass::Below,
            SquareItem::R | SquareItem::T | SquareItem::D2 => FClass::Above,
            SquareItem::Pa | SquareItem::Pb => FClass::Neutral,
        }
    }

    /// New triangle holding the piece of the given class: tA holds the
    /// below side (corners d1, pb, pa), tB the above side.
    fn tri_of(&self, c: FClass) -> usize {
        match c {
            FClass::Below => self.ta,
            FClass::Above => self.tb,
            FClass::Neutral => unreachable!(),
        }
    }

    fn boundary_slot(&self, i: SquareItem) -> Slot {
        match i {
            SquareItem::L => Slot { tri: self.ta, side: 1 },
            SquareItem::Bm => Slot { tri: self.ta, side: 2 },
            SquareItem::R => Slot { tri: self.tb, side: 1 },
            SquareItem::T => Slot { tri: self.tb, side: 2 },
            _ => unreachable!(),
        }
    }

    fn corner_in(&self, i: SquareItem, tri: usize) -> Corner {
        let corner = match (i, tri == self.ta) {
            (SquareItem::D1, true) => 0,
            (SquareItem::D2, false) => 0,
            (SquareItem::Pa, true) => 2,
            (SquareItem::Pa, false) => 1,
            (SquareItem::Pb, true) => 1,
            (SquareItem::Pb, false) => 2,
            _ => unreachable!("corner {i:?} not in triangle {tri}"),
        };
        Corner { tri, corner }
    }
}

impl Router for FlipRouter {
    fn in_region(&self, tri: usize) -> bool {
        tri == self.ta || tri == self.tb
    }

    fn interior_edge(&self, edge: usize) -> bool {
        edge == self.edge
    }

    fn route(&self, entry: End, exit: End) -> Result<Routed> {
        let entry_item = match entry {
            End::Side(s) => self.side_item(s)?,
            End::Corner(c) => self.corner_item(c)?,
        };
        let exit_item = match exit {
            End::Side(s) => self.side_item(s)?,
            End::Corner(c) => self.corner_item(c)?,
        };
        let (ce, cx) = (Self::class(entry_item), Self::class(exit_item));
        if ce == FClass::Neutral && cx == FClass::Neutral {
            return Ok(Routed::WholeSentinel(self.edge));
        }
        let crosses = matches!(
            (ce, cx),
            (FClass::Below, FClass::Above) | (FClass::Above, FClass::Below)
        );
        let first_tri = if ce != FClass::Neutral { self.tri_of(ce) } else { self.tri_of(cx) };
        let last_tri = if cx != FClass::Neutral { self.tri_of(cx) } else { self.tri_of(ce) };
        let mut exits = Vec::new();
        if crosses {
            exits.push(Slot { tri: first_tri, side: 0 });
        }
        let start = match entry {
            End::Corner(_) => Some(self.corner_in(entry_item, first_tri)),
            End::Side(_) => None,
        };
        let end = match exit {
            End::Corner(_) => Some(self.corner_in(exit_item, last_tri)),
            End::Side(_) => {
                exits.push(self.boundary_slot(exit_item));
                None
            }
        };
        Ok(Routed::Path { start, exits, end })
    }
}

// --------------------------------------------------------------- split

struct SplitRouter {
    tri: usize,
    new_tris: [usize; 3],
}

impl Router for SplitRouter {
    fn in_region(&self, tri: usize) -> bool {
        tri == self.tri
    }

    fn interior_edge(&self, _edge: usize) -> bool {
        false
    }

    fn route(&self, entry: End, exit: End) -> Result<Routed> {
        let nt = |i: usize| self.new_tris[i % 3];
        match (entry, exit) {
            (End::Side(a), End::Side(b)) => {
                let (i, j) = (a.side as usize, b.side as usize);
                if i == j {
                    return Err(Error::Invalid("bounce passage in split region".into()));
                }
                let k = 3 - i - j;
                // Chord at corner u_k crossing the cevian g_k.
                let exits = if i == (k + 1) % 3 {
                    vec![Slot { tri: nt(i), side: 1 }, Slot { tri: nt(j), side: 0 }]
                } else {
                    vec![Slot { tri: nt(i), side: 2 }, Slot { tri: nt(j), side: 0 }]
                };
                Ok(Routed::Path { start: None, exits, end: None })
            }
            (End::Corner(c), End::Side(b)) => {
                let i = c.corner as usize;
                if b.side as usize != i {
                    return Err(Error::Invalid("terminal does not cross its opposite side".into()));
                }
                Ok(Routed::Path {
                    start: Some(Corner { tri: nt(i + 2), corner: 1 }),
                    exits: vec![Slot { tri: nt(i + 2), side: 1 }, Slot { tri: nt(i), side: 0 }],
                    end: None,
                })
            }
            (End::Side(a), End::Corner(c)) => {
                let i = c.corner as usize;
                if a.side as usize != i {
                    return Err(Error::Invalid("terminal does not cross its opposite side".into()));
                }
                Ok(Routed::Path {
                    start: None,
                    exits: vec![Slot { tri: nt(i), side: 2 }],
                    end: Some(Corner { tri: nt(i + 2), corner: 1 }),
                })
            }
            (End::Corner(_), End::Corner(_)) => {
                Err(Error::Invalid("corner-to-corner passage is a sentinel class".into()))
            }
        }
    }
}

// -------------------------------------------------------------- handle

struct HandleRouter<'a> {
    tri: usize,
    new_tris: [usize; 5],
    new_edges: [usize; 6],
    new_trig: &'a IdealTriangulation,
}

impl<'a> HandleRouter<'a> {
    fn p(&self, i: usize) -> usize {
        // P_1..P_5 of the heptagon fan.
        self.new_tris[i - 1]
    }

    /// New boundary slot carrying old side s_i.
    fn boundary_slot(&self, i: usize) -> Slot {
        match i {
            0 => Slot { tri: self.p(5), side: 0 },
            1 => Slot { tri: self.p(5), side: 1 },
            2 => Slot { tri: self.p(4), side: 0 },
            _ => unreachable!(),
        }
    }

    /// Patch corner sector of old corner u_k adjacent to old side s_i.
    fn sector(&self, k: usize, side: usize) -> Corner {
        match (k, side) {
            (0, 1) => Corner { tri: self.p(5), corner: 0 },
            (0, 2) => Corner { tri: self.p(4), corner: 1 },
            (1, 2) => Corner { tri: self.p(4), corner: 2 },
            (1, 0) => Corner { tri: self.p(5), corner: 1 },
            (2, 0) => Corner { tri: self.p(5), corner: 2 },
            (2, 1) => Corner { tri: self.p(5), corner: 2 },
            _ => unreachable!("corner u{k} is not on side s{side}"),
        }
    }

    fn is_interior(&self, edge: usize) -> bool {
        self.new_edges.contains(&edge)
    }

    /// Walk the corner fan from one sector to another staying on
    /// interior edges, recording crossed slots.
    fn corner_walk(&self, from: Corner, to: Corner) -> Result<Vec<Slot>> {
        'dir: for next in [true, false] {
            let mut c = from;
            let mut exits = Vec::new();
            for _ in 0..64 {
                if c == to {
                    return Ok(exits);
                }
                let slot = Slot {
                    tri: c.tri,
                    side: if next { (c.corner + 1) % 3 } else { (c.corner + 2) % 3 },
                };
                if !self.is_interior(self.new_trig.edge_of(slot)) {
                    continue 'dir;
                }
                exits.push(slot);
                c = if next { self.new_trig.rot_next(c) } else { self.new_trig.rot_prev(c) };
            }
            return Err(Error::SearchLimit { what: "handle corner walk".into(), limit: 64 });
        }
        Err(Error::Invalid("corner walk found no interior route".into()))
    }
}

impl<'a> Router for HandleRouter<'a> {
    fn in_region(&self, tri: usize) -> bool {
        tri == self.tri
    }

    fn interior_edge(&self, _edge: usize) -> bool {
        false
    }

    fn route(&self, entry: End, exit: End) -> Result<Routed> {
        match (entry, exit) {
            (End::Side(a), End::Side(b)) => {
                let (i, j) = (a.side as usize, b.side as usize);
                if i == j {
                    return Err(Error::Invalid("bounce passage in handle region".into()));
                }
                let k = 3 - i - j;
                let mut exits = self.corner_walk(self.sector(k, i), self.sector(k, j))?;
                exits.push(self.boundary_slot(j));
                Ok(Routed::Path { start: None, exits, end: None })
            }
            (End::Corner(c), End::Side(b)) => {
                let i = c.corner as usize;
                if b.side as usize != i {
                    return Err(Error::Invalid("terminal does not cross its opposite side".into()));
                }
                let (start, exits) = match i {
                    0 => (
                        Corner { tri: self.p(4), corner: 1 },
                        vec![Slot { tri: self.p(4), side: 1 }, self.boundary_slot(0)],
                    ),
                    1 => (Corner { tri: self.p(5), corner: 1 }, vec![self.boundary_slot(1)]),
                    2 => (
                        Corner { tri: self.p(5), corner: 2 },
                        vec![Slot { tri: self.p(5), side: 2 }, self.boundary_slot(2)],
                    ),
                    _ => unreachable!(),
                };
                Ok(Routed::Path { start: Some(start), exits, end: None })
            }
            (End::Side(a), End::Corner(c)) => {
                let i = c.corner as usize;
                if a.side as usize != i {
                    return Err(Error::Invalid("terminal does not cross its opposite side".into()));
                }
                let (exits, end) = match i {
                    0 => (
                        vec![Slot { tri: self.p(5), side: 2 }],
                        Corner { tri: self.p(4), corner: 1 },
                    ),
                    1 => (vec![], Corner { tri: self.p(5), corner: 1 }),
                    2 => (
                        vec![Slot { tri: self.p(4), side: 1 }],
                        Corner { tri: self.p(5), corner: 2 },
                    ),
                    _ => unreachable!(),
                };
                Ok(Routed::Path { start: None, exits, end: Some(end) })
            }
            (End::Corner(_), End::Corner(_)) => {
                Err(Error::Invalid("corner-to-corner passage is a sentinel class".into()))
            }
        }
    }
}

// ------------------------------------------------------------- rewrite

struct Rewritten {
    start: Option<Corner>,
    exits: Vec<Slot>,
    end: Option<Corner>,
    sentinel: Option<usize>,
}

fn rewrite(
    old: &IdealTriangulation,
    router: &dyn Router,
    start: Option<Corner>,
    initial_entry: Option<End>,
    exits: &[Slot],
    end: Option<Corner>,
) -> Result<Rewritten> {
    let mut out = Rewritten { start: None, exits: Vec::new(), end: None, sentinel: None };
    let mut passage: Option<End> = initial_entry;
    match start {
        Some(c) if router.in_region(c.tri) => passage = Some(End::Corner(c)),
        Some(c) => out.start = Some(c),
        None => {}
    }
    let emit = |routed: Routed, out: &mut Rewritten| -> Result<()> {
        match routed {
            Routed::WholeSentinel(e) => {
                out.sentinel = Some(e);
            }
            Routed::Path { start, exits, end } => {
                if let Some(s) = start {
                    debug_assert!(out.start.is_none() && out.exits.is_empty());
                    out.start = Some(s);
                }
                out.exits.extend(exits);
                if let Some(e) = end {
                    out.end = Some(e);
                }
            }
        }
        Ok(())
    };
    for &x in exits {
        if let Some(entry) = passage.take() {
            if router.interior_edge(old.edge_of(x)) {
                passage = Some(entry);
                continue;
            }
            emit(router.route(entry, End::Side(x))?, &mut out)?;
        } else {
            out.exits.push(x);
        }
        let into = old.partner(x);
        if router.in_region(into.tri) {
            passage = Some(End::Side(into));
        }
    }
    match end {
        Some(c) => {
            if let Some(entry) = passage.take() {
                emit(router.route(entry, End::Corner(c))?, &mut out)?;
            } else {
                out.end = Some(c);
            }
        }
        None => {
            // Cyclic case: any trailing open passage is the wrap-around
            // to the initial entry, which was already processed.
        }
    }
    Ok(out)
}

fn make_router<'a>(
    rec: &MoveRecord,
    new_trig: &'a IdealTriangulation,
) -> Box<dyn Router + 'a> {
    match rec {
        MoveRecord::Flip { edge, tri_a, side_a, tri_b, side_b } => Box::new(FlipRouter {
            edge: *edge,
            ta: *tri_a,
            ka: *side_a,
            tb: *tri_b,
            kb: *side_b,
        }),
        MoveRecord::Split { tri, new_tris, .. } => Box::new(SplitRouter {
            tri: *tri,
            new_tris: *new_tris,
        }),
        MoveRecord::Handle { tri, new_tris, new_edges } => Box::new(HandleRouter {
            tri: *tri,
            new_tris: *new_tris,
            new_edges: *new_edges,
            new_trig,
        }),
    }
}

/// Transport a class across one move.
pub fn transport(
    old: &IdealTriangulation,
    new: &IdealTriangulation,
    rec: &MoveRecord,
    class: &ClassCoords,
) -> Result<ClassCoords> {
    if class.reference() != old.id() {
        return Err(Error::ReferenceMismatch);
    }
    match class {
        ClassCoords::Arc(arc) => transport_arc(old, new, rec, arc).map(ClassCoords::Arc),
        ClassCoords::Curve(c) => transport_curve(old, new, rec, c).map(ClassCoords::Curve),
    }
}

pub fn transport_arc(
    old: &IdealTriangulation,
    new: &IdealTriangulation,
    rec: &MoveRecord,
    arc: &ArcCoords,
) -> Result<ArcCoords> {
    if arc.reference != old.id() {
        return Err(Error::ReferenceMismatch);
    }
    if let Some(e) = arc.is_edge() {
        if let MoveRecord::Flip { edge, tri_a, tri_b, .. } = rec {
            if e == *edge {
                // The old diagonal crosses the new one exactly once.
                let w = ArcWord {
                    start: Corner { tri: *tri_a, corner: 0 },
                    exits: vec![Slot { tri: *tri_a, side: 0 }],
                    end: Corner { tri: *tri_b, corner: 0 },
                };
                return arc_word_to_coords(new, w);
            }
        }
        let (a, b) = new.edge_endpoints(e);
        return Ok(ArcCoords {
            reference: new.id().to_string(),
            repr: ArcRepr::Edge(e),
            endpoints: if a <= b { (a, b) } else { (b, a) },
        });
    }
    let sys = arc.system(old);
    let comps = trace_components(old, &sys);
    let traced = match comps.as_slice() {
        [Component::Arc(a)] => a.clone(),
        _ => return Err(Error::Invalid("arc coordinates do not trace to one arc".into())),
    };
    let router = make_router(rec, new);
    let exits: Vec<Slot> = traced.steps.iter().map(|(s, _)| *s).collect();
    let r = rewrite(old, router.as_ref(), Some(traced.start), None, &exits, Some(traced.end))?;
    if let Some(e) = r.sentinel {
        let mut raw = vec![0i64; new.edge_count()];
        raw[e] = -1;
        return super::normalize_arc(new, &raw, &Default::default());
    }
    let (start, end) = match (r.start, r.end) {
        (Some(s), Some(e)) => (s, e),
        _ => return Err(Error::Invalid("rewritten arc lost an endpoint".into())),
    };
    arc_word_to_coords(new, ArcWord { start, exits: r.exits, end })
}

pub fn transport_curve(
    old: &IdealTriangulation,
    new: &IdealTriangulation,
    rec: &MoveRecord,
    curve: &CurveCoords,
) -> Result<CurveCoords> {
    if curve.reference != old.id() {
        return Err(Error::ReferenceMismatch);
    }
    let comps = trace_components(old, &curve.system);
    let traced = match comps.as_slice() {
        [Component::Curve(c)] => c.clone(),
        _ => return Err(Error::Invalid("curve coordinates do not trace to one curve".into())),
    };
    let router = make_router(rec, new);
    let exits: Vec<Slot> = traced.steps.iter().map(|(s, _)| *s).collect();
    // Rotate so the word starts right after a non-interior crossing;
    // the wrap-around entry seeds the rewrite.
    let cut = exits
        .iter()
        .position(|s| !router.interior_edge(old.edge_of(*s)))
        .ok_or_else(|| Error::Invalid("curve crosses only the interior edge".into()))?;
    let mut rotated: Vec<Slot> = exits[cut + 1..].to_vec();
    rotated.extend_from_slice(&exits[..=cut]);
    let into = old.partner(exits[cut]);
    let initial = router.in_region(into.tri).then_some(End::Side(into));
    let r = rewrite(old, router.as_ref(), None, initial, &rotated, None)?;
    if r.sentinel.is_some() {
        return Err(Error::Invalid("curve passage cannot be a sentinel".into()));
    }
    match curve_word_class(new, CurveWord { exits: r.exits })? {
        CurveClass::Essential(c) => Ok(c),
        CurveClass::Peripheral(v) => Err(Error::Invalid(format!(
            "transported curve became peripheral around puncture index {v}"
        ))),
        CurveClass::Trivial => Err(Error::Invalid("transported curve became trivial".into())),
    }
}

/// Apply a sequence of flips to a class, returning the final
/// triangulation and transported coordinates.
pub fn transfer(
    trig: &IdealTriangulation,
    class: &ClassCoords,
    flips: &[usize],
) -> Result<(IdealTriangulation, ClassCoords)> {
    let mut cur_trig = trig.clone();
    let mut cur = class.clone();
    for &e in flips {
        let (next, rec) = cur_trig.flip(e)?;
        cur = transport(&cur_trig, &next, &rec, &cur)?;
        cur_trig = next;
    }
    Ok((cur_trig, cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::normalize_arc;
    use crate::oracle::square::{self, Slope};
    use crate::surface::SurfaceSpec;
    use std::collections::BTreeMap;

    fn torus() -> IdealTriangulation {
        crate::surface::build_base_triangulation(&SurfaceSpec::standard(1, 1, 1)).unwrap()
    }

    fn slope_arc(trig: &IdealTriangulation, s: Slope) -> ArcCoords {
        if let Some(e) = s.is_edge_slope() {
            let mut raw = vec![0i64; trig.edge_count()];
            raw[e] = -1;
            return normalize_arc(trig, &raw, &BTreeMap::new()).unwrap();
        }
        let w = square::slope_word(s).unwrap();
        let mut weights = vec![0i64; trig.edge_count()];
        for slot in &w.exits {
            weights[trig.edge_of(*slot)] += 1;
        }
        let mut terminals = BTreeMap::new();
        *terminals.entry(w.start).or_insert(0u32) += 1;
        *terminals.entry(w.end).or_insert(0u32) += 1;
        normalize_arc(trig, &weights, &terminals).unwrap()
    }

    #[test]
    fn flip_and_flip_back_is_identity_on_arcs() {
        let trig = torus();
        for slope in square::slopes_in_box(4) {
            for e in 0..trig.edge_count() {
                let arc = ClassCoords::Arc(slope_arc(&trig, slope));
                let (t1, rec1) = trig.flip(e).unwrap();
                let moved = transport(&trig, &t1, &rec1, &arc).unwrap();
                let (t2, rec2) = t1.flip(e).unwrap();
                let back = transport(&t1, &t2, &rec2, &moved).unwrap();
                assert_eq!(t2.canonical_key(), trig.canonical_key());
                // Triangle labels may have moved; compare weight vectors
                // and total data instead of raw ids.
                assert_eq!(
                    back.weight_vec(t2.edge_count()),
                    arc.weight_vec(trig.edge_count()),
                    "slope {slope} edge {e}"
                );
            }
        }
    }

    #[test]
    fn flipping_the_diagonal_turns_the_antidiagonal_into_an_edge() {
        // Spec-style check: in the standard model, the flip of the
        // slope-1 edge produces the slope -1 edge.
        let trig = torus();
        let arc = ClassCoords::Arc(slope_arc(&trig, Slope::new(-1, 1).unwrap()));
        let (t1, rec) = trig.flip(2).unwrap();
        let moved = transport(&trig, &t1, &rec, &arc).unwrap();
        match moved {
            ClassCoords::Arc(a) => assert_eq!(a.is_edge(), Some(2), "{a:?}"),
            _ => panic!(),
        }
    }

    #[test]
    fn old_diagonal_crosses_new_one_once() {
        let trig = torus();
        let arc = ClassCoords::Arc(slope_arc(&trig, Slope::new(1, 1).unwrap()));
        let (t1, rec) = trig.flip(2).unwrap();
        let moved = transport(&trig, &t1, &rec, &arc).unwrap();
        match moved {
            ClassCoords::Arc(a) => {
                assert_eq!(a.is_edge(), None);
                assert_eq!(a.total_weight(), 1);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn transfer_round_trip_long_sequences() {
        let trig = torus();
        let arc = ClassCoords::Arc(slope_arc(&trig, Slope::new(3, 5).unwrap()));
        let flips = [0usize, 1, 2, 1, 0];
        let mut seq: Vec<usize> = flips.to_vec();
        let mut rev: Vec<usize> = flips.iter().rev().cloned().collect();
        seq.append(&mut rev);
        let (t_end, moved) = transfer(&trig, &arc, &seq).unwrap();
        assert_eq!(t_end.canonical_key(), trig.canonical_key());
        assert_eq!(
            moved.weight_vec(t_end.edge_count()),
            arc.weight_vec(trig.edge_count())
        );
    }

    #[test]
    fn split_preserves_slope_arc_validity() {
        let trig = torus();
        let (t1, rec) = trig.split_triangle(1, "p1").unwrap();
        for slope in square::slopes_in_box(4) {
            let arc = ClassCoords::Arc(slope_arc(&trig, slope));
            let moved = transport(&trig, &t1, &rec, &arc).unwrap();
            match moved {
                ClassCoords::Arc(a) => {
                    assert_eq!(a.reference, t1.id());
                }
                _ => panic!(),
            }
        }
    }

    #[test]
    fn handle_preserves_slope_arc_validity() {
        let trig = torus();
        let (t1, rec) = trig.attach_handle(0).unwrap();
        for slope in square::slopes_in_box(3) {
            let arc = ClassCoords::Arc(slope_arc(&trig, slope));
            let moved = transport(&trig, &t1, &rec, &arc).unwrap();
            match moved {
                ClassCoords::Arc(a) => assert_eq!(a.reference, t1.id()),
                _ => panic!(),
            }
        }
    }

    #[test]
    fn curve_transport_across_flip() {
        let trig = torus();
        // Horizontal curve: weights (0, 1, 1).
        let c = crate::coords::normalize_curve(&trig, &[0, 1, 1]).unwrap();
        let (t1, rec) = trig.flip(0).unwrap();
        let moved = transport_curve(&trig, &t1, &rec, &c).unwrap();
        let (t2, rec2) = t1.flip(0).unwrap();
        let back = transport_curve(&t1, &t2, &rec2, &moved).unwrap();
        assert_eq!(back.system.weights, c.system.weights);
    }
}
