//! Normal (edge-intersection) coordinates for essential arcs and
//! simple closed curves on an ideal triangulation.
//!
//! A class is stored as one weight per edge plus, for arcs, the count
//! of terminal segments at each triangle corner. Weights are crossing
//! numbers with the open edges; an arc that is isotopic to an edge is
//! stored as that edge ("sentinel" form, serialized as -1 on the edge).
//! The pair (weights, terminals) determines the embedded normal picture
//! uniquely, which is what `picture` reconstructs.

pub mod complement;
pub mod intersection;
pub mod picture;
pub mod transfer;
pub mod twist;
pub mod word;

pub use complement::{cut_complement, ComplementDecomposition, Cut, Region};
pub use intersection::{disjoint, intersection_number};
pub use transfer::{transfer, transport};
pub use twist::dehn_twist;
pub use word::{ArcWord, CurveWord};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::surface::{Corner, IdealTriangulation};
use crate::{Error, Result};

/// Bare multiweight data of an embedded normal system (any number of
/// components). Weights are indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct System {
    pub weights: Vec<u32>,
    pub terminals: BTreeMap<Corner, u32>,
}

impl System {
    pub fn empty(edges: usize) -> System {
        System { weights: vec![0; edges], terminals: BTreeMap::new() }
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }

    pub fn terminal_count(&self) -> u32 {
        self.terminals.values().sum()
    }

    pub fn terminals_at(&self, c: Corner) -> u32 {
        self.terminals.get(&c).copied().unwrap_or(0)
    }

    /// Pointwise sum; the disjoint-union candidate of two systems.
    pub fn sum(&self, other: &System) -> System {
        debug_assert_eq!(self.weights.len(), other.weights.len());
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| a + b)
            .collect();
        let mut terminals = self.terminals.clone();
        for (c, n) in &other.terminals {
            *terminals.entry(*c).or_insert(0) += n;
        }
        System { weights, terminals }
    }

    /// Corner-chord counts (n_0, n_1, n_2) of a triangle, derived from
    /// the weights and terminal counts; `None` if the matching
    /// conditions fail there.
    pub fn corner_counts(&self, trig: &IdealTriangulation, tri: usize) -> Option<[i64; 3]> {
        let sides = trig.sides(tri);
        let w = |k: usize| self.weights[sides[k]] as i64;
        let t = |k: usize| self.terminals_at(Corner { tri, corner: k as u8 }) as i64;
        let mut n = [0i64; 3];
        for k in 0..3 {
            let v = w((k + 1) % 3) + w((k + 2) % 3) - w(k) + t(k) - t((k + 1) % 3) - t((k + 2) % 3);
            if v < 0 || v % 2 != 0 {
                return None;
            }
            n[k] = v / 2;
        }
        Some(n)
    }

    /// Check all per-triangle matching conditions, naming the first
    /// violated triangle.
    pub fn validate(&self, trig: &IdealTriangulation) -> Result<()> {
        if self.weights.len() != trig.edge_count() {
            return Err(Error::CoordLength { expected: trig.edge_count(), got: self.weights.len() });
        }
        for (c, n) in &self.terminals {
            if c.tri >= trig.triangle_count() || c.corner > 2 {
                return Err(Error::Invalid(format!("terminal corner out of range: {c:?}")));
            }
            if *n == 0 {
                return Err(Error::Invalid("zero terminal entry".into()));
            }
        }
        for tri in 0..trig.triangle_count() {
            let n = self.corner_counts(trig, tri).ok_or_else(|| Error::Matching {
                tri,
                detail: "corner counts are negative or odd".into(),
            })?;
            let t: Vec<u32> = (0..3u8)
                .map(|k| self.terminals_at(Corner { tri, corner: k }))
                .collect();
            let busy: Vec<usize> = (0..3).filter(|&k| t[k] > 0).collect();
            if busy.len() > 1 {
                return Err(Error::Matching {
                    tri,
                    detail: format!("terminal segments at {} corners would cross", busy.len()),
                });
            }
            if let Some(&k) = busy.first() {
                if n[k] != 0 {
                    return Err(Error::Matching {
                        tri,
                        detail: format!(
                            "corner {k} carries both terminal and corner-parallel segments"
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A single essential arc: either literally a triangulation edge, or a
/// positive-weight normal class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcRepr {
    Edge(usize),
    Normal(System),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcCoords {
    pub reference: String,
    pub repr: ArcRepr,
    /// Puncture indices of the two endpoints, sorted.
    pub endpoints: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveCoords {
    pub reference: String,
    pub system: System,
}

/// Either kind of class, for operations that accept both.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassCoords {
    Arc(ArcCoords),
    Curve(CurveCoords),
}

impl ClassCoords {
    pub fn reference(&self) -> &str {
        match self {
            ClassCoords::Arc(a) => &a.reference,
            ClassCoords::Curve(c) => &c.reference,
        }
    }

    pub fn as_system(&self, trig: &IdealTriangulation) -> System {
        match self {
            ClassCoords::Arc(a) => a.system(trig),
            ClassCoords::Curve(c) => c.system.clone(),
        }
    }

    pub fn weight_vec(&self, edges: usize) -> Vec<i64> {
        match self {
            ClassCoords::Arc(a) => a.weight_vec(edges),
            ClassCoords::Curve(c) => c.system.weights.iter().map(|&w| w as i64).collect(),
        }
    }
}

impl ArcCoords {
    /// Serialized weight vector with the -1 sentinel convention.
    pub fn weight_vec(&self, edges: usize) -> Vec<i64> {
        match &self.repr {
            ArcRepr::Edge(e) => {
                let mut v = vec![0i64; edges];
                v[*e] = -1;
                v
            }
            ArcRepr::Normal(sys) => sys.weights.iter().map(|&w| w as i64).collect(),
        }
    }

    pub fn total_weight(&self) -> u64 {
        match &self.repr {
            ArcRepr::Edge(_) => 0,
            ArcRepr::Normal(sys) => sys.total_weight(),
        }
    }

    /// The arc as a plain system. Sentinel arcs are lifted to their
    /// one-crossing normal picture only where a positive-weight system
    /// is genuinely required; here an edge arc contributes nothing and
    /// the caller must special-case it.
    pub fn system(&self, trig: &IdealTriangulation) -> System {
        match &self.repr {
            ArcRepr::Edge(_) => System::empty(trig.edge_count()),
            ArcRepr::Normal(sys) => sys.clone(),
        }
    }

    pub fn is_edge(&self) -> Option<usize> {
        match self.repr {
            ArcRepr::Edge(e) => Some(e),
            ArcRepr::Normal(_) => None,
        }
    }
}

fn sorted(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Validate raw coordinates as a single essential arc.
///
/// The sentinel form (-1 on one edge, 0 elsewhere, no terminals) is the
/// arc equal to that edge. Otherwise weights must be nonnegative with
/// exactly two terminal segments, and the traced picture must be a
/// single arc component.
pub fn normalize_arc(
    trig: &IdealTriangulation,
    raw: &[i64],
    terminals: &BTreeMap<Corner, u32>,
) -> Result<ArcCoords> {
    if raw.len() != trig.edge_count() {
        return Err(Error::CoordLength { expected: trig.edge_count(), got: raw.len() });
    }
    let negs: Vec<usize> = (0..raw.len()).filter(|&e| raw[e] < 0).collect();
    if negs.len() == 1 && raw[negs[0]] == -1 {
        if raw.iter().any(|&w| w > 0) || !terminals.is_empty() {
            return Err(Error::Invalid(
                "sentinel -1 must come with zero weights and no terminals".into(),
            ));
        }
        let e = negs[0];
        let (a, b) = trig.edge_endpoints(e);
        return Ok(ArcCoords {
            reference: trig.id().to_string(),
            repr: ArcRepr::Edge(e),
            endpoints: sorted(a, b),
        });
    }
    if !negs.is_empty() {
        return Err(Error::Invalid("negative weights other than a single -1 sentinel".into()));
    }
    if raw.iter().all(|&w| w == 0) && terminals.is_empty() {
        return Err(Error::Inessential);
    }
    let sys = System {
        weights: raw.iter().map(|&w| w as u32).collect(),
        terminals: terminals.clone(),
    };
    sys.validate(trig)?;
    if sys.terminal_count() != 2 {
        return Err(Error::Invalid(format!(
            "an arc has exactly 2 terminal segments, got {}",
            sys.terminal_count()
        )));
    }
    let comps = picture::trace_components(trig, &sys);
    if comps.len() != 1 {
        return Err(Error::Invalid(format!(
            "coordinates describe {} components, not a single arc",
            comps.len()
        )));
    }
    let (a, b) = match &comps[0] {
        picture::Component::Arc(w) => (trig.vertex_at(w.start), trig.vertex_at(w.end)),
        picture::Component::Curve(_) => {
            return Err(Error::Invalid("coordinates describe a closed curve".into()))
        }
    };
    Ok(ArcCoords { reference: trig.id().to_string(), repr: ArcRepr::Normal(sys), endpoints: sorted(a, b) })
}

/// Validate raw coordinates as a single essential simple closed curve.
pub fn normalize_curve(trig: &IdealTriangulation, raw: &[i64]) -> Result<CurveCoords> {
    if raw.len() != trig.edge_count() {
        return Err(Error::CoordLength { expected: trig.edge_count(), got: raw.len() });
    }
    if raw.iter().any(|&w| w < 0) {
        return Err(Error::Invalid("curve weights must be nonnegative".into()));
    }
    if raw.iter().all(|&w| w == 0) {
        return Err(Error::Inessential);
    }
    let sys = System { weights: raw.iter().map(|&w| w as u32).collect(), terminals: BTreeMap::new() };
    sys.validate(trig)?;
    let comps = picture::trace_components(trig, &sys);
    if comps.len() != 1 {
        return Err(Error::Invalid(format!(
            "coordinates describe {} components, not a single curve",
            comps.len()
        )));
    }
    if !matches!(comps[0], picture::Component::Curve(_)) {
        return Err(Error::Invalid("coordinates describe an arc".into()));
    }
    // Essential means not isotopic into a puncture: peripheral curves
    // have exactly the link weights of some vertex.
    for v in 0..trig.punctures().len() {
        if sys.weights == link_weights(trig, v) {
            return Err(Error::Invalid(format!(
                "curve is peripheral around puncture {}",
                trig.punctures()[v]
            )));
        }
    }
    Ok(CurveCoords { reference: trig.id().to_string(), system: sys })
}

/// Weights of the loop around a puncture: one crossing per edge end at
/// that vertex.
pub fn link_weights(trig: &IdealTriangulation, v: usize) -> Vec<u32> {
    let mut w = vec![0u32; trig.edge_count()];
    for e in 0..trig.edge_count() {
        let (a, b) = trig.edge_endpoints(e);
        w[e] = (a == v) as u32 + (b == v) as u32;
    }
    w
}

/// The peripheral loop around a puncture as a curve system (not an
/// essential curve; used as a building block by surgeries).
pub fn peripheral_system(trig: &IdealTriangulation, v: usize) -> System {
    System { weights: link_weights(trig, v), terminals: BTreeMap::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceSpec;

    fn torus() -> IdealTriangulation {
        crate::surface::build_base_triangulation(&SurfaceSpec::standard(1, 1, 1)).unwrap()
    }

    #[test]
    fn sentinel_round_trip() {
        let t = torus();
        let raw = vec![0, -1, 0];
        let a = normalize_arc(&t, &raw, &BTreeMap::new()).unwrap();
        assert_eq!(a.is_edge(), Some(1));
        assert_eq!(a.weight_vec(t.edge_count()), vec![0, -1, 0]);
    }

    #[test]
    fn empty_rejected() {
        let t = torus();
        let err = normalize_arc(&t, &[0, 0, 0], &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, Error::Inessential));
    }

    #[test]
    fn bad_matching_names_triangle() {
        let t = torus();
        // Weight 1 on a single edge with no terminals is odd at both triangles.
        let err = normalize_curve(&t, &[1, 0, 0]).unwrap_err();
        assert!(matches!(err, Error::Matching { .. }), "{err}");
    }

    #[test]
    fn peripheral_curve_rejected() {
        let t = torus();
        let w: Vec<i64> = link_weights(&t, 0).iter().map(|&x| x as i64).collect();
        let err = normalize_curve(&t, &w).unwrap_err();
        assert!(format!("{err}").contains("peripheral"));
    }
}
