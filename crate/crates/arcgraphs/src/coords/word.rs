//! Edge-crossing words and combinatorial tightening.
//!
//! A word records a strand as the sequence of slots it exits through;
//! after crossing `exits[i]` the strand is inside the partner triangle
//! and must exit through a slot of that triangle. Tightening removes
//! same-slot bounces and endpoint crossings over edges adjacent to the
//! endpoint's corner; a tight word is a normal representative.

use super::{normalize_arc, normalize_curve, picture, ArcCoords, CurveCoords, System};
use crate::surface::{Corner, IdealTriangulation, Slot};
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcWord {
    pub start: Corner,
    pub exits: Vec<Slot>,
    pub end: Corner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveWord {
    pub exits: Vec<Slot>,
}

impl ArcWord {
    pub fn validate(&self, trig: &IdealTriangulation) -> Result<()> {
        let mut tri = self.start.tri;
        for s in &self.exits {
            if s.tri != tri {
                return Err(Error::Invalid(format!(
                    "word chain broken: exit {s:?} not in triangle {tri}"
                )));
            }
            tri = trig.partner(*s).tri;
        }
        if self.end.tri != tri {
            return Err(Error::Invalid("word chain broken at the end corner".into()));
        }
        Ok(())
    }

    pub fn reversed(&self, trig: &IdealTriangulation) -> ArcWord {
        ArcWord {
            start: self.end,
            exits: self.exits.iter().rev().map(|s| trig.partner(*s)).collect(),
            end: self.start,
        }
    }
}

impl CurveWord {
    pub fn validate(&self, trig: &IdealTriangulation) -> Result<()> {
        if self.exits.is_empty() {
            return Err(Error::Inessential);
        }
        let n = self.exits.len();
        for i in 0..n {
            let expect = trig.partner(self.exits[i]).tri;
            if self.exits[(i + 1) % n].tri != expect {
                return Err(Error::Invalid("cyclic word chain broken".into()));
            }
        }
        Ok(())
    }
}

/// Result of tightening an arc word.
#[derive(Debug, Clone)]
pub enum TightArc {
    /// The arc is isotopic to a triangulation edge.
    Sentinel(usize),
    Word(ArcWord),
}

pub fn tighten_arc(trig: &IdealTriangulation, mut w: ArcWord) -> Result<TightArc> {
    w.validate(trig)?;
    loop {
        // Start cusp: first crossing over an edge adjacent to the start
        // corner slides off around the puncture.
        if let Some(&first) = w.exits.first() {
            let k = w.start.corner;
            if first.side != k {
                debug_assert_eq!(first.tri, w.start.tri);
                w.start = if first.side == (k + 1) % 3 {
                    trig.rot_next(w.start)
                } else {
                    trig.rot_prev(w.start)
                };
                w.exits.remove(0);
                continue;
            }
        }
        // End cusp.
        if let Some(&last) = w.exits.last() {
            let entry = trig.partner(last);
            let k = w.end.corner;
            if entry.side != k {
                debug_assert_eq!(entry.tri, w.end.tri);
                w.end = if entry.side == (k + 1) % 3 {
                    trig.rot_next(w.end)
                } else {
                    trig.rot_prev(w.end)
                };
                w.exits.pop();
                continue;
            }
        }
        // Bounces.
        let mut bounced = false;
        let mut i = 0;
        while i + 1 < w.exits.len() {
            if w.exits[i + 1] == trig.partner(w.exits[i]) {
                w.exits.drain(i..=i + 1);
                bounced = true;
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        if bounced {
            continue;
        }
        break;
    }
    if w.exits.is_empty() {
        if w.start.tri != w.end.tri {
            return Err(Error::Invalid("tight word chain broken".into()));
        }
        if w.start.corner == w.end.corner {
            return Err(Error::Inessential);
        }
        let side = 3 - w.start.corner - w.end.corner;
        return Ok(TightArc::Sentinel(trig.sides(w.start.tri)[side as usize]));
    }
    Ok(TightArc::Word(w))
}

#[derive(Debug, Clone)]
pub enum TightCurve {
    Word(CurveWord),
    /// Bounds a disk: tightened to nothing.
    Trivial,
}

pub fn tighten_curve(trig: &IdealTriangulation, mut w: CurveWord) -> Result<TightCurve> {
    if w.exits.is_empty() {
        return Ok(TightCurve::Trivial);
    }
    w.validate(trig)?;
    loop {
        let n = w.exits.len();
        if n == 0 {
            return Ok(TightCurve::Trivial);
        }
        let mut removed = false;
        for i in 0..n {
            let j = (i + 1) % n;
            if w.exits[j] == trig.partner(w.exits[i]) {
                // Remove both, careful with wraparound order.
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                w.exits.remove(b);
                w.exits.remove(a);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    if w.exits.is_empty() {
        Ok(TightCurve::Trivial)
    } else {
        Ok(TightCurve::Word(w))
    }
}

fn word_system(trig: &IdealTriangulation, exits: &[Slot], ends: Option<(Corner, Corner)>) -> System {
    let mut sys = System::empty(trig.edge_count());
    for s in exits {
        sys.weights[trig.edge_of(*s)] += 1;
    }
    if let Some((a, b)) = ends {
        *sys.terminals.entry(a).or_insert(0) += 1;
        *sys.terminals.entry(b).or_insert(0) += 1;
    }
    sys
}

/// Convert a (not necessarily tight) arc word into coordinates,
/// verifying that the result traces back to the same strand.
pub fn arc_word_to_coords(trig: &IdealTriangulation, w: ArcWord) -> Result<ArcCoords> {
    match tighten_arc(trig, w)? {
        TightArc::Sentinel(e) => {
            let mut raw = vec![0i64; trig.edge_count()];
            raw[e] = -1;
            normalize_arc(trig, &raw, &BTreeMap::new())
        }
        TightArc::Word(w) => {
            let sys = word_system(trig, &w.exits, Some((w.start, w.end)));
            let raw: Vec<i64> = sys.weights.iter().map(|&x| x as i64).collect();
            let arc = normalize_arc(trig, &raw, &sys.terminals)?;
            // The canonical trace must reproduce the tight word.
            let comps = picture::trace_components(trig, &sys);
            let traced = match comps.as_slice() {
                [picture::Component::Arc(a)] => a,
                _ => return Err(Error::Invalid("arc word does not trace to one arc".into())),
            };
            let fwd: Vec<Slot> = traced.steps.iter().map(|(s, _)| *s).collect();
            let ok_fwd = fwd == w.exits && traced.start == w.start && traced.end == w.end;
            let rev = w.reversed(trig);
            let ok_rev = fwd == rev.exits && traced.start == rev.start && traced.end == rev.end;
            if !ok_fwd && !ok_rev {
                return Err(Error::Invalid("word does not describe an embedded arc".into()));
            }
            Ok(arc)
        }
    }
}

/// Outcome of interpreting a closed word.
#[derive(Debug, Clone)]
pub enum CurveClass {
    Essential(CurveCoords),
    Peripheral(usize),
    Trivial,
}

/// Convert a closed word into a curve class, classifying inessential
/// outcomes rather than failing on them.
pub fn curve_word_class(trig: &IdealTriangulation, w: CurveWord) -> Result<CurveClass> {
    let w = match tighten_curve(trig, w)? {
        TightCurve::Trivial => return Ok(CurveClass::Trivial),
        TightCurve::Word(w) => w,
    };
    let sys = word_system(trig, &w.exits, None);
    for v in 0..trig.punctures().len() {
        if sys.weights == super::link_weights(trig, v) {
            return Ok(CurveClass::Peripheral(v));
        }
    }
    let raw: Vec<i64> = sys.weights.iter().map(|&x| x as i64).collect();
    let curve = normalize_curve(trig, &raw)?;
    let comps = picture::trace_components(trig, &sys);
    let traced = match comps.as_slice() {
        [picture::Component::Curve(c)] => c,
        _ => return Err(Error::Invalid("curve word does not trace to one curve".into())),
    };
    let fwd: Vec<Slot> = traced.steps.iter().map(|(s, _)| *s).collect();
    if !cyclic_equal(&fwd, &w.exits) {
        let rev: Vec<Slot> = w.exits.iter().rev().map(|s| trig.partner(*s)).collect();
        if !cyclic_equal(&fwd, &rev) {
            return Err(Error::Invalid("word does not describe an embedded curve".into()));
        }
    }
    Ok(CurveClass::Essential(curve))
}

fn cyclic_equal(a: &[Slot], b: &[Slot]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|r| (0..a.len()).all(|i| a[i] == b[(i + r) % b.len()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::square::{self};
    use crate::surface::SurfaceSpec;

    fn torus() -> IdealTriangulation {
        crate::surface::build_base_triangulation(&SurfaceSpec::standard(1, 1, 1)).unwrap()
    }

    #[test]
    fn oracle_words_round_trip_through_tightening() {
        let trig = torus();
        for slope in square::slopes_in_box(6) {
            if slope.is_edge_slope().is_some() {
                continue;
            }
            let w = square::slope_word(slope).unwrap();
            let arc = arc_word_to_coords(
                &trig,
                ArcWord { start: w.start, exits: w.exits.clone(), end: w.end },
            )
            .unwrap();
            assert_eq!(arc.total_weight(), square::coord_sum(slope), "slope {slope}");
        }
    }

    #[test]
    fn bounce_and_cusp_reduce_to_sentinel() {
        let trig = torus();
        // Start at a corner, cross an adjacent edge and come straight
        // back: must tighten to an edge of the start triangle.
        let c = Corner { tri: 0, corner: 0 };
        let adj = Slot { tri: 0, side: 1 };
        let back = trig.partner(adj);
        let w = ArcWord {
            start: c,
            exits: vec![adj, back],
            end: Corner { tri: 0, corner: 1 },
        };
        match tighten_arc(&trig, w).unwrap() {
            TightArc::Sentinel(e) => assert_eq!(e, trig.sides(0)[2]),
            TightArc::Word(w) => panic!("expected sentinel, got {w:?}"),
        }
    }

    #[test]
    fn trivial_curve_detected() {
        let trig = torus();
        let s = Slot { tri: 0, side: 0 };
        let w = CurveWord { exits: vec![s, trig.partner(s)] };
        assert!(matches!(tighten_curve(&trig, w).unwrap(), TightCurve::Trivial));
    }

    #[test]
    fn peripheral_word_classified() {
        let trig = torus();
        // Walk once around the only puncture: exits are the rotation's
        // crossed slots.
        let start = Corner { tri: 0, corner: 0 };
        let mut exits = Vec::new();
        let mut c = start;
        loop {
            exits.push(Slot { tri: c.tri, side: (c.corner + 1) % 3 });
            c = trig.rot_next(c);
            if c == start {
                break;
            }
        }
        let class = curve_word_class(&trig, CurveWord { exits }).unwrap();
        assert!(matches!(class, CurveClass::Peripheral(0)));
    }

    #[test]
    fn slope_curve_word_is_essential() {
        let trig = torus();
        // The horizontal closed curve crosses the diagonal and the
        // vertical edge once each: exit the upper triangle through the
        // diagonal, the lower one through the right side.
        let w = CurveWord {
            exits: vec![Slot { tri: 1, side: 2 }, Slot { tri: 0, side: 0 }],
        };
        w.validate(&trig).unwrap();
        let class = curve_word_class(&trig, w).unwrap();
        match class {
            CurveClass::Essential(c) => assert_eq!(c.system.weights, vec![0, 1, 1]),
            other => panic!("{other:?}"),
        }
    }
}
