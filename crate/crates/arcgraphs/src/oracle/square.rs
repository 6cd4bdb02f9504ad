//! Square model of the once-punctured torus.
//!
//! The surface is the unit-square torus with the single puncture at the
//! lattice points. An essential arc is the image of the straight
//! segment from (0,0) to (q,p) with gcd(p,q)=1, so arcs are rational
//! slopes p/q (plus 1/0). Crossing numbers are counted by enumerating
//! segment translates with exact integer orientation tests; nothing in
//! here touches normal coordinates.

use serde::{Deserialize, Serialize};

use crate::surface::{Corner, Slot};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::Invalid("slope 0/0".into()));
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn infinity() -> Slope {
        Slope { p: 1, q: 0 }
    }

    pub fn parse(s: &str) -> Result<Slope> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| Error::Invalid(format!("slope must look like p/q: {s}")))?;
        let p: i64 = p.trim().parse().map_err(|_| Error::Invalid(format!("bad slope {s}")))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::Invalid(format!("bad slope {s}")))?;
        Slope::new(p, q)
    }

    /// |p s' - q p'|: the crossing number of the corresponding closed
    /// curves on the torus.
    pub fn det(self, other: Slope) -> i64 {
        (self.p * other.q - self.q * other.p).abs()
    }

    /// The three triangulation edges of the standard model are the
    /// slopes 0/1, 1/0 and 1/1, indexed like the edges of
    /// `IdealTriangulation::fan_polygon(1, _)`.
    pub fn edge_slopes() -> [Slope; 3] {
        [Slope { p: 0, q: 1 }, Slope { p: 1, q: 0 }, Slope { p: 1, q: 1 }]
    }

    pub fn is_edge_slope(self) -> Option<usize> {
        Slope::edge_slopes().iter().position(|&e| e == self)
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

type Pt = (i128, i128);

fn orient(a: Pt, b: Pt, c: Pt) -> i128 {
    let v = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    v.signum()
}

/// Strict transversal crossing of two closed segments; endpoint touches
/// do not count. Valid here because segments between coprime lattice
/// points contain no interior lattice points, so endpoint contact only
/// happens at shared lattice points.
fn segments_cross(a: (Pt, Pt), b: (Pt, Pt)) -> bool {
    let d1 = orient(a.0, a.1, b.0);
    let d2 = orient(a.0, a.1, b.1);
    let d3 = orient(b.0, b.1, a.0);
    let d4 = orient(b.0, b.1, a.1);
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Geometric intersection number of the arcs of two slopes, by
/// enumeration of translates.
pub fn crossings(a: Slope, b: Slope) -> u64 {
    if a == b {
        return 0;
    }
    let sa = ((0i128, 0i128), (a.q as i128, a.p as i128));
    let sb = ((0i128, 0i128), (b.q as i128, b.p as i128));
    // Translates of sb that can reach sa's bounding box.
    let (xlo, xhi) = (0.min(a.q as i128), 0.max(a.q as i128));
    let (ylo, yhi) = (0.min(a.p as i128), 0.max(a.p as i128));
    let (bxlo, bxhi) = (0.min(b.q as i128), 0.max(b.q as i128));
    let (bylo, byhi) = (0.min(b.p as i128), 0.max(b.p as i128));
    let mut count = 0u64;
    for tx in (xlo - bxhi - 1)..=(xhi - bxlo + 1) {
        for ty in (ylo - byhi - 1)..=(yhi - bylo + 1) {
            let tb = ((sb.0 .0 + tx, sb.0 .1 + ty), (sb.1 .0 + tx, sb.1 .1 + ty));
            if segments_cross(sa, tb) {
                count += 1;
            }
        }
    }
    count
}

pub fn disjoint(a: Slope, b: Slope) -> bool {
    crossings(a, b) == 0
}

/// Sum of the crossing numbers with the three model edges; the
/// coordinate weight of the arc in the standard triangulation.
pub fn coord_sum(s: Slope) -> u64 {
    if s.is_edge_slope().is_some() {
        return 0;
    }
    Slope::edge_slopes().iter().map(|&e| crossings(s, e)).sum()
}

/// All slopes with |p| <= bound and q <= bound (reduced), including 1/0.
pub fn slopes_in_box(bound: i64) -> Vec<Slope> {
    let mut out = vec![Slope::infinity()];
    for q in 1..=bound {
        for p in -bound..=bound {
            if gcd(p, q) == 1 {
                out.push(Slope { p, q });
            }
        }
    }
    out
}

/// Edge-crossing word of the slope arc in the standard triangulation,
/// obtained by walking the straight segment through the triangulated
/// plane. Triangle 0 is the lower-right half of each unit square,
/// triangle 1 the upper-left half; see the slot table in the source.
#[derive(Debug, Clone)]
pub struct SlopeWord {
    pub start: Corner,
    pub exits: Vec<Slot>,
    pub end: Corner,
}

// Slot layout of the standard torus triangulation (fan_polygon(1, _)):
// lower triangle 0: bottom = slot(0,2) edge 0, right = slot(0,0) edge 1,
// diagonal = slot(0,1) edge 2; upper triangle 1: top = slot(1,0) edge 0,
// left = slot(1,1) edge 1, diagonal = slot(1,2) edge 2.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    sq: (i64, i64),
    upper: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CellSide {
    Bottom,
    Right,
    Top,
    Left,
    Diag,
}

impl Cell {
    fn tri(self) -> usize {
        usize::from(self.upper)
    }
    fn slot(self, side: CellSide) -> Slot {
        match (self.upper, side) {
            (false, CellSide::Bottom) => Slot { tri: 0, side: 2 },
            (false, CellSide::Right) => Slot { tri: 0, side: 0 },
            (false, CellSide::Diag) => Slot { tri: 0, side: 1 },
            (true, CellSide::Top) => Slot { tri: 1, side: 0 },
            (true, CellSide::Left) => Slot { tri: 1, side: 1 },
            (true, CellSide::Diag) => Slot { tri: 1, side: 2 },
            _ => unreachable!(),
        }
    }
    /// Corner index of the lattice point `pt` in this cell, if it is
    /// one of the cell's corners.
    fn corner_of(self, pt: (i64, i64)) -> Option<u8> {
        let (x, y) = (pt.0 - self.sq.0, pt.1 - self.sq.1);
        let local = match (x, y) {
            (0, 0) => Some(0u8), // bl: corner 0 in both triangles
            (1, 1) => Some(if self.upper { 1 } else { 2 }), // tr
            (1, 0) => (!self.upper).then_some(1), // br, lower only
            (0, 1) => self.upper.then_some(2),    // tl, upper only
            _ => None,
        };
        local
    }
}

/// Walk the segment (0,0) -> (q,p) through the triangulated plane.
pub fn slope_word(s: Slope) -> Result<SlopeWord> {
    if s.is_edge_slope().is_some() {
        return Err(Error::Invalid(format!("slope {s} is a triangulation edge")));
    }
    // Normalize direction to q >= 1 (0/1 and 1/0 are edges, excluded).
    let (p, q) = if s.q > 0 { (s.p, s.q) } else { (-s.p, -s.q) };
    debug_assert!(q >= 1);
    let target = (q, p);
    // Initial cell around the origin in direction (q, p).
    let my = if p > 0 { 0 } else { -1 };
    let upper = if p > 0 { p > q } else { true };
    let mut cell = Cell { sq: (0, my), upper };
    let start = Corner { tri: cell.tri(), corner: cell.corner_of((0, 0)).expect("origin is a cell corner") };
    // Walk with exact parameters t = num/den along (tq, tp).
    let mut exits = Vec::new();
    let mut guard = 0;
    // Current parameter as a fraction num/den, den > 0.
    let (mut num, mut den): (i128, i128) = (0, 1);
    loop {
        guard += 1;
        if guard > 10_000_000 {
            return Err(Error::SearchLimit { what: format!("slope walk {s}"), limit: 10_000_000 });
        }
        // If the target lattice point is a corner of this cell and lies
        // at t = 1, we are done once the remaining path stays inside.
        // Candidate exit lines for this cell.
        let (sx, sy) = (cell.sq.0 as i128, cell.sq.1 as i128);
        let (pq, pp) = (q as i128, p as i128);
        let mut best: Option<(i128, i128, CellSide)> = None; // (num, den) with t = num/den
        let mut consider = |tn: i128, td: i128, side: CellSide| {
            let (tn, td) = if td < 0 { (-tn, -td) } else { (tn, td) };
            if td == 0 {
                return;
            }
            // t must be strictly ahead of the current parameter.
            if tn * den <= num * td {
                return;
            }
            if let Some((bn, bd, _)) = best {
                if tn * bd >= bn * td {
                    return;
                }
            }
            best = Some((tn, td, side));
        };
        if cell.upper {
            // Sides: top y = sy+1, left x = sx, diagonal y - x = sy - sx.
            if pp != 0 {
                consider(sy + 1, pp, CellSide::Top);
            }
            if pq != 0 {
                consider(sx, pq, CellSide::Left);
            }
            if pp - pq != 0 {
                consider(sy - sx, pp - pq, CellSide::Diag);
            }
        } else {
            if pp != 0 {
                consider(sy, pp, CellSide::Bottom);
            }
            if pq != 0 {
                consider(sx + 1, pq, CellSide::Right);
            }
            if pp - pq != 0 {
                consider(sy - sx, pp - pq, CellSide::Diag);
            }
        }
        let (tn, td, side) = best.expect("segment always exits the cell");
        // Reached the end of the segment before the next wall?
        if tn * 1 >= td {
            // t_exit >= 1: the endpoint (q,p) is a corner of this cell.
            let end_corner = cell
                .corner_of(target)
                .expect("segment endpoint must be a corner of the final cell");
            return Ok(SlopeWord { start, exits, end: Corner { tri: cell.tri(), corner: end_corner } });
        }
        exits.push(cell.slot(side));
        num = tn;
        den = td;
        cell = match side {
            CellSide::Diag => Cell { sq: cell.sq, upper: !cell.upper },
            CellSide::Top => Cell { sq: (cell.sq.0, cell.sq.1 + 1), upper: false },
            CellSide::Bottom => Cell { sq: (cell.sq.0, cell.sq.1 - 1), upper: true },
            CellSide::Right => Cell { sq: (cell.sq.0 + 1, cell.sq.1), upper: true },
            CellSide::Left => Cell { sq: (cell.sq.0 - 1, cell.sq.1), upper: false },
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_formula_matches_enumeration() {
        // The conjectured |ps - qr| - 1 rule, validated by enumeration.
        let slopes = slopes_in_box(7);
        for &a in &slopes {
            for &b in &slopes {
                let d = a.det(b);
                let expect = if d == 0 { 0 } else { (d - 1) as u64 };
                assert_eq!(crossings(a, b), expect, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn spec_values() {
        let s = |p, q| Slope::new(p, q).unwrap();
        assert_eq!(crossings(s(0, 1), s(1, 0)), 0);
        assert_eq!(crossings(s(1, 0), s(2, 5)), 4);
        assert_eq!(crossings(s(1, 1), s(0, 1)), 0);
        assert!(disjoint(s(1, 0), s(1, 2)) == false);
    }

    #[test]
    fn coordinate_sums() {
        let s = |p, q| Slope::new(p, q).unwrap();
        assert_eq!(coord_sum(s(0, 1)), 0);
        assert_eq!(coord_sum(s(-1, 1)), 1);
        assert_eq!(coord_sum(s(2, 1)), 1);
        assert_eq!(coord_sum(s(1, 2)), 1);
        assert_eq!(coord_sum(s(2, 5)), (2 - 1) + (5 - 1) + (3 - 1));
    }

    #[test]
    fn words_have_the_right_crossing_counts() {
        for &slope in slopes_in_box(6).iter() {
            if slope.is_edge_slope().is_some() {
                continue;
            }
            let w = slope_word(slope).unwrap();
            let mut per_edge = [0u64; 3];
            for s in &w.exits {
                let edge = match (s.tri, s.side) {
                    (0, 2) | (1, 0) => 0,
                    (0, 0) | (1, 1) => 1,
                    (0, 1) | (1, 2) => 2,
                    _ => unreachable!(),
                };
                per_edge[edge] += 1;
            }
            for (e, es) in Slope::edge_slopes().iter().enumerate() {
                assert_eq!(per_edge[e], crossings(slope, *es), "slope {slope} edge {e}");
            }
        }
    }
}
