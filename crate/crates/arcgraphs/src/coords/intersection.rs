//! Geometric intersection numbers.
//!
//! Disjointness is decided by summing coordinates: two classes can be
//! realized disjointly exactly when the summed data is a valid system
//! whose canonical trace decomposes into the two original classes.
//! Exact counts reduce to edge weights: an arc is carried to a
//! triangulation edge by flips (the weight-descent search below) and
//! the partner's weight on that edge is the intersection number; a
//! curve paired with a curve is handled by the twist-growth method in
//! `twist`.

use std::collections::{BinaryHeap, HashSet};

use super::picture::trace_components;
use super::transfer::transport;
use super::{ArcCoords, ClassCoords, System};
use crate::surface::IdealTriangulation;
use crate::{Error, Result};

/// Exact disjointness test. Classes must share a reference
/// triangulation.
pub fn disjoint(trig: &IdealTriangulation, a: &ClassCoords, b: &ClassCoords) -> Result<bool> {
    if a.reference() != trig.id() || b.reference() != trig.id() {
        return Err(Error::ReferenceMismatch);
    }
    if a == b {
        return Ok(true);
    }
    let edge_a = match a {
        ClassCoords::Arc(x) => x.is_edge(),
        _ => None,
    };
    let edge_b = match b {
        ClassCoords::Arc(x) => x.is_edge(),
        _ => None,
    };
    match (edge_a, edge_b) {
        (Some(_), Some(_)) => return Ok(true),
        (Some(e), None) => return Ok(b.as_system(trig).weights[e] == 0),
        (None, Some(e)) => return Ok(a.as_system(trig).weights[e] == 0),
        (None, None) => {}
    }
    let sa = a.as_system(trig);
    let sb = b.as_system(trig);
    Ok(disjoint_systems(trig, &sa, &sb))
}

/// Core of the disjointness test on bare systems (each assumed to be a
/// valid single- or multi-component system).
pub fn disjoint_systems(trig: &IdealTriangulation, sa: &System, sb: &System) -> bool {
    let sum = sa.sum(sb);
    if sum.validate(trig).is_err() {
        return false;
    }
    let comps = trace_components(trig, &sum);
    let mut want: Vec<System> = Vec::new();
    for s in [sa, sb] {
        for c in trace_components(trig, s) {
            want.push(c.to_system(trig));
        }
    }
    let mut got: Vec<System> = comps.iter().map(|c| c.to_system(trig)).collect();
    if got.len() != want.len() {
        return false;
    }
    got.sort();
    want.sort();
    got == want
}

/// Flip an arc down to a triangulation edge. Returns the final
/// triangulation, the edge id, and the flip sequence used.
pub fn descend_to_edge(
    trig: &IdealTriangulation,
    arc: &ArcCoords,
) -> Result<(IdealTriangulation, usize, Vec<usize>)> {
    if arc.reference != trig.id() {
        return Err(Error::ReferenceMismatch);
    }
    if let Some(e) = arc.is_edge() {
        return Ok((trig.clone(), e, Vec::new()));
    }

    #[derive(PartialEq, Eq)]
    struct State {
        weight: u64,
        order: u64,
        trig: IdealTriangulation,
        arc: ArcCoords,
        flips: Vec<usize>,
    }
    impl Ord for State {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            // Min-heap by (weight, order).
            other
                .weight
                .cmp(&self.weight)
                .then(other.order.cmp(&self.order))
        }
    }
    impl PartialOrd for State {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut heap = BinaryHeap::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut order = 0u64;
    let key = |t: &IdealTriangulation, a: &ArcCoords| format!("{}|{:?}|{:?}", t.id(), a.repr, a.endpoints);
    seen.insert(key(trig, arc));
    heap.push(State {
        weight: arc.total_weight(),
        order,
        trig: trig.clone(),
        arc: arc.clone(),
        flips: Vec::new(),
    });
    let limit = 200_000usize;
    let mut popped = 0usize;
    while let Some(st) = heap.pop() {
        popped += 1;
        if popped > limit {
            break;
        }
        if let Some(e) = st.arc.is_edge() {
            return Ok((st.trig, e, st.flips));
        }
        let sys = st.arc.system(&st.trig);
        for e in 0..st.trig.edge_count() {
            if sys.weights[e] == 0 {
                continue;
            }
            let Ok((next, rec)) = st.trig.flip(e) else { continue };
            let Ok(moved) = transport(&st.trig, &next, &rec, &ClassCoords::Arc(st.arc.clone()))
            else {
                continue;
            };
            let ClassCoords::Arc(moved) = moved else { unreachable!() };
            if !seen.insert(key(&next, &moved)) {
                continue;
            }
            order += 1;
            let mut flips = st.flips.clone();
            flips.push(e);
            heap.push(State { weight: moved.total_weight(), order, trig: next, arc: moved, flips });
        }
    }
    Err(Error::SearchLimit { what: "arc weight descent".into(), limit })
}

/// Geometric intersection number of two classes over the same
/// triangulation. Symmetric; zero exactly on disjoint pairs; endpoint
/// contact at punctures never counts.
pub fn intersection_number(
    trig: &IdealTriangulation,
    a: &ClassCoords,
    b: &ClassCoords,
) -> Result<u64> {
    if a.reference() != trig.id() || b.reference() != trig.id() {
        return Err(Error::ReferenceMismatch);
    }
    if a == b {
        return Ok(0);
    }
    // Edge arcs read off the partner weight directly.
    if let ClassCoords::Arc(x) = a {
        if let Some(e) = x.is_edge() {
            return Ok(b.as_system(trig).weights[e] as u64);
        }
    }
    if let ClassCoords::Arc(y) = b {
        if let Some(e) = y.is_edge() {
            return Ok(a.as_system(trig).weights[e] as u64);
        }
    }
    match (a, b) {
        (ClassCoords::Arc(x), _) => count_against_arc(trig, x, b),
        (_, ClassCoords::Arc(y)) => count_against_arc(trig, y, a),
        (ClassCoords::Curve(x), ClassCoords::Curve(y)) => {
            if disjoint(trig, a, b)? {
                Ok(0)
            } else {
                super::twist::curve_curve_intersection(trig, x, y)
            }
        }
    }
}

fn count_against_arc(
    trig: &IdealTriangulation,
    arc: &ArcCoords,
    other: &ClassCoords,
) -> Result<u64> {
    let (final_trig, edge, flips) = descend_to_edge(trig, arc)?;
    let (t_end, moved) = super::transfer::transfer(trig, other, &flips)?;
    debug_assert_eq!(t_end.id(), final_trig.id());
    if let ClassCoords::Arc(m) = &moved {
        if let Some(f) = m.is_edge() {
            return Ok(if f == edge { 0 } else { 0 });
        }
    }
    Ok(moved.as_system(&t_end).weights[edge] as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{normalize_arc, normalize_curve};
    use crate::oracle::square::{self, Slope};
    use crate::surface::SurfaceSpec;
    use std::collections::BTreeMap;

    fn torus() -> IdealTriangulation {
        crate::surface::build_base_triangulation(&SurfaceSpec::standard(1, 1, 1)).unwrap()
    }

    pub fn slope_arc(trig: &IdealTriangulation, s: Slope) -> ArcCoords {
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
    fn disjointness_matches_oracle() {
        let trig = torus();
        let slopes = square::slopes_in_box(4);
        for &a in &slopes {
            for &b in &slopes {
                let ca = ClassCoords::Arc(slope_arc(&trig, a));
                let cb = ClassCoords::Arc(slope_arc(&trig, b));
                assert_eq!(
                    disjoint(&trig, &ca, &cb).unwrap(),
                    square::disjoint(a, b),
                    "{a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn counts_match_oracle() {
        let trig = torus();
        let slopes = square::slopes_in_box(3);
        for &a in &slopes {
            for &b in &slopes {
                let ca = ClassCoords::Arc(slope_arc(&trig, a));
                let cb = ClassCoords::Arc(slope_arc(&trig, b));
                assert_eq!(
                    intersection_number(&trig, &ca, &cb).unwrap(),
                    square::crossings(a, b),
                    "{a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn spec_pairs() {
        let trig = torus();
        let s = |p, q| ClassCoords::Arc(slope_arc(&trig, Slope::new(p, q).unwrap()));
        assert_eq!(intersection_number(&trig, &s(0, 1), &s(1, 0)).unwrap(), 0);
        assert_eq!(intersection_number(&trig, &s(1, 0), &s(2, 5)).unwrap(), 4);
        let a = s(3, 5);
        assert_eq!(intersection_number(&trig, &a, &a).unwrap(), 0);
    }

    #[test]
    fn arc_curve_counts() {
        let trig = torus();
        // Closed curve of slope 1/0 has weights det with each edge slope.
        let curve = normalize_curve(&trig, &[1, 0, 1]).unwrap();
        let a = ClassCoords::Arc(slope_arc(&trig, Slope::new(0, 1).unwrap()));
        let c = ClassCoords::Curve(curve);
        // Arc of slope 0 crosses the vertical closed curve once.
        assert_eq!(intersection_number(&trig, &a, &c).unwrap(), 1);
        let b = ClassCoords::Arc(slope_arc(&trig, Slope::new(1, 0).unwrap()));
        assert_eq!(intersection_number(&trig, &b, &c).unwrap(), 0);
        let d = ClassCoords::Arc(slope_arc(&trig, Slope::new(2, 5).unwrap()));
        // det((2,5),(1,0)) = |2*0 - 5*1| = 5.
        assert_eq!(intersection_number(&trig, &d, &c).unwrap(), 5);
    }

    #[test]
    fn transport_to_split_surface_preserves_counts() {
        let trig = torus();
        let (t1, rec) = trig.split_triangle(1, "p1").unwrap();
        let slopes = square::slopes_in_box(3);
        for &a in &slopes {
            for &b in &slopes {
                let ca = transport(&trig, &t1, &rec, &ClassCoords::Arc(slope_arc(&trig, a))).unwrap();
                let cb = transport(&trig, &t1, &rec, &ClassCoords::Arc(slope_arc(&trig, b))).unwrap();
                assert_eq!(
                    intersection_number(&t1, &ca, &cb).unwrap(),
                    square::crossings(a, b),
                    "{a} vs {b} after split"
                );
            }
        }
    }

    #[test]
    fn transport_to_handle_surface_preserves_counts() {
        let trig = torus();
        let (t1, rec) = trig.attach_handle(0).unwrap();
        let slopes = square::slopes_in_box(2);
        for &a in &slopes {
            for &b in &slopes {
                let ca = transport(&trig, &t1, &rec, &ClassCoords::Arc(slope_arc(&trig, a))).unwrap();
                let cb = transport(&trig, &t1, &rec, &ClassCoords::Arc(slope_arc(&trig, b))).unwrap();
                assert_eq!(
                    intersection_number(&t1, &ca, &cb).unwrap(),
                    square::crossings(a, b),
                    "{a} vs {b} after handle"
                );
            }
        }
    }
}
