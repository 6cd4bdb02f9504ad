//! Canonical embedded picture of a normal system and its trace.
//!
//! Positions along a side are numbered 1..=w from the corner `k+1` end
//! of side `k`. The blocks are: chords at corner k+1 (innermost first),
//! then terminal segments of corner k, then chords at corner k+2
//! (innermost last). This layout, together with the reversing gluing,
//! reconstructs the embedded system from the counts alone.

use std::collections::HashSet;

use super::System;
use crate::surface::{Corner, IdealTriangulation, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegEnd {
    /// The segment leaves the triangle through this slot/position.
    OnSlot(Slot, u32),
    /// The segment ends at this corner's vertex.
    AtCorner(Corner),
}

/// Other end, within its triangle, of the segment hitting `slot` at
/// position `pos`.
pub fn segment_other_end(
    trig: &IdealTriangulation,
    sys: &System,
    slot: Slot,
    pos: u32,
) -> SegEnd {
    let tri = slot.tri;
    let k = slot.side as usize;
    let n = sys
        .corner_counts(trig, tri)
        .expect("picture built from validated systems");
    let sides = trig.sides(tri);
    let w = |j: usize| sys.weights[sides[j]];
    let t_k = sys.terminals_at(Corner { tri, corner: k as u8 });
    let n_k1 = n[(k + 1) % 3] as u32;
    let n_k2 = n[(k + 2) % 3] as u32;
    debug_assert_eq!(w(k), n_k1 + t_k + n_k2, "side weight decomposition");
    debug_assert!(pos >= 1 && pos <= w(k));
    if pos <= n_k1 {
        // Chord at corner k+1; other end on side k+2, innermost last.
        let j = pos;
        let other = ((k + 2) % 3) as u8;
        SegEnd::OnSlot(Slot { tri, side: other }, w((k + 2) % 3) - j + 1)
    } else if pos <= n_k1 + t_k {
        SegEnd::AtCorner(Corner { tri, corner: k as u8 })
    } else {
        // Chord at corner k+2; other end on side k+1 at position j.
        let j = w(k) - pos + 1;
        let other = ((k + 1) % 3) as u8;
        SegEnd::OnSlot(Slot { tri, side: other }, j)
    }
}

/// Position of the j-th terminal (1-based) of a corner on its opposite
/// side.
pub fn terminal_position(trig: &IdealTriangulation, sys: &System, c: Corner, j: u32) -> u32 {
    let n = sys.corner_counts(trig, c.tri).expect("validated");
    n[(c.corner as usize + 1) % 3] as u32 + j
}

/// Cross an edge: the same point seen from the partner slot.
pub fn cross(trig: &IdealTriangulation, sys: &System, slot: Slot, pos: u32) -> (Slot, u32) {
    let e = trig.edge_of(slot);
    let w = sys.weights[e];
    (trig.partner(slot), w + 1 - pos)
}

/// An arc strand with its slot positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedArc {
    pub start: Corner,
    pub steps: Vec<(Slot, u32)>,
    pub end: Corner,
}

/// A closed strand; `steps` is cyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedCurve {
    pub steps: Vec<(Slot, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Arc(TracedArc),
    Curve(TracedCurve),
}

impl Component {
    /// Coordinates of this component alone.
    pub fn to_system(&self, trig: &IdealTriangulation) -> System {
        let mut sys = System::empty(trig.edge_count());
        let steps = match self {
            Component::Arc(a) => &a.steps,
            Component::Curve(c) => &c.steps,
        };
        for (s, _) in steps {
            sys.weights[trig.edge_of(*s)] += 1;
        }
        if let Component::Arc(a) = self {
            *sys.terminals.entry(a.start).or_insert(0) += 1;
            *sys.terminals.entry(a.end).or_insert(0) += 1;
        }
        sys
    }
}

fn canonical_pos(trig: &IdealTriangulation, sys: &System, slot: Slot, pos: u32) -> (usize, u32) {
    let e = trig.edge_of(slot);
    if trig.slots_of(e)[0] == slot {
        (e, pos)
    } else {
        (e, sys.weights[e] + 1 - pos)
    }
}

/// Decompose the canonical picture into its strands.
pub fn trace_components(trig: &IdealTriangulation, sys: &System) -> Vec<Component> {
    let mut visited: HashSet<(usize, u32)> = HashSet::new();
    let mut out = Vec::new();
    // Arc components, one per terminal segment (each arc is traced from
    // both ends; the second trace is suppressed by the visited set).
    let terminals: Vec<(Corner, u32)> = sys.terminals.iter().map(|(c, n)| (*c, *n)).collect();
    for (c, count) in terminals {
        for j in 1..=count {
            let slot = Slot { tri: c.tri, side: c.corner };
            let pos = terminal_position(trig, sys, c, j);
            if visited.contains(&canonical_pos(trig, sys, slot, pos)) {
                continue;
            }
            let mut steps = Vec::new();
            let (mut slot, mut pos) = (slot, pos);
            let end = loop {
                visited.insert(canonical_pos(trig, sys, slot, pos));
                steps.push((slot, pos));
                let (s2, p2) = cross(trig, sys, slot, pos);
                match segment_other_end(trig, sys, s2, p2) {
                    SegEnd::AtCorner(c2) => break c2,
                    SegEnd::OnSlot(s3, p3) => {
                        slot = s3;
                        pos = p3;
                    }
                }
            };
            out.push(Component::Arc(TracedArc { start: c, steps, end }));
        }
    }
    // Remaining strands are closed.
    for e in 0..trig.edge_count() {
        for p in 1..=sys.weights[e] {
            if visited.contains(&(e, p)) {
                continue;
            }
            let start = (trig.slots_of(e)[0], p);
            let mut steps = Vec::new();
            let (mut slot, mut pos) = start;
            loop {
                visited.insert(canonical_pos(trig, sys, slot, pos));
                steps.push((slot, pos));
                let (s2, p2) = cross(trig, sys, slot, pos);
                match segment_other_end(trig, sys, s2, p2) {
                    SegEnd::AtCorner(_) => unreachable!("closed strand hit a terminal"),
                    SegEnd::OnSlot(s3, p3) => {
                        slot = s3;
                        pos = p3;
                    }
                }
                if (slot, pos) == start {
                    break;
                }
            }
            out.push(Component::Curve(TracedCurve { steps }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{normalize_arc, normalize_curve, ArcRepr};
    use crate::oracle::square::{self, Slope};
    use crate::surface::SurfaceSpec;
    use std::collections::BTreeMap;

    fn torus() -> IdealTriangulation {
        crate::surface::build_base_triangulation(&SurfaceSpec::standard(1, 1, 1)).unwrap()
    }

    /// Slope arcs via the oracle walk, re-encoded as coordinates.
    pub fn slope_system(trig: &IdealTriangulation, s: Slope) -> (Vec<i64>, BTreeMap<Corner, u32>) {
        let w = square::slope_word(s).unwrap();
        let mut weights = vec![0i64; trig.edge_count()];
        for slot in &w.exits {
            weights[trig.edge_of(*slot)] += 1;
        }
        let mut terminals = BTreeMap::new();
        *terminals.entry(w.start).or_insert(0u32) += 1;
        *terminals.entry(w.end).or_insert(0u32) += 1;
        (weights, terminals)
    }

    #[test]
    fn slope_arcs_validate_and_trace_to_one_component() {
        let trig = torus();
        for slope in square::slopes_in_box(5) {
            if slope.is_edge_slope().is_some() {
                continue;
            }
            let (w, t) = slope_system(&trig, slope);
            let arc = normalize_arc(&trig, &w, &t).unwrap();
            match &arc.repr {
                ArcRepr::Normal(sys) => {
                    assert_eq!(sys.total_weight(), square::coord_sum(slope), "slope {slope}");
                }
                _ => panic!("slope {slope} is not an edge"),
            }
        }
    }

    #[test]
    fn traced_word_matches_oracle_walk() {
        let trig = torus();
        for slope in [Slope::new(2, 1).unwrap(), Slope::new(-1, 2).unwrap(), Slope::new(3, 5).unwrap()] {
            let oracle_word = square::slope_word(slope).unwrap();
            let (w, t) = slope_system(&trig, slope);
            let arc = normalize_arc(&trig, &w, &t).unwrap();
            let sys = match &arc.repr {
                ArcRepr::Normal(s) => s.clone(),
                _ => unreachable!(),
            };
            let comps = trace_components(&trig, &sys);
            assert_eq!(comps.len(), 1);
            let traced = match &comps[0] {
                Component::Arc(a) => a,
                _ => panic!(),
            };
            let fwd: Vec<Slot> = traced.steps.iter().map(|(s, _)| *s).collect();
            let same = fwd == oracle_word.exits
                && traced.start == oracle_word.start
                && traced.end == oracle_word.end;
            // Or the reverse traversal: exits become partner slots, reversed.
            let rev: Vec<Slot> = oracle_word
                .exits
                .iter()
                .rev()
                .map(|s| trig.partner(*s))
                .collect();
            let same_rev = fwd == rev
                && traced.start == oracle_word.end
                && traced.end == oracle_word.start;
            assert!(same || same_rev, "slope {slope}: {traced:?} vs {oracle_word:?}");
        }
    }

    #[test]
    fn doubled_arc_traces_to_two_parallel_copies() {
        let trig = torus();
        let (w, t) = slope_system(&trig, Slope::new(2, 5).unwrap());
        let arc = normalize_arc(&trig, &w, &t).unwrap();
        let sys = match &arc.repr {
            ArcRepr::Normal(s) => s.clone(),
            _ => unreachable!(),
        };
        let double = sys.sum(&sys);
        let comps = trace_components(&trig, &double);
        assert_eq!(comps.len(), 2);
        for c in comps {
            assert_eq!(c.to_system(&trig), sys);
        }
    }

    #[test]
    fn curve_from_doubled_slope_weights() {
        // The closed curve of slope p/q crosses the edges |det| times;
        // e.g. slope 0/1 curve: weights (0, 1, 1).
        let trig = torus();
        let c = normalize_curve(&trig, &[0, 1, 1]).unwrap();
        let comps = trace_components(&trig, &c.system);
        assert_eq!(comps.len(), 1);
        assert!(matches!(comps[0], Component::Curve(_)));
    }
}
