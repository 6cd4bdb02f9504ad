//! The arc graph of the once-punctured torus as a graph on rational
//! slopes, with exact BFS distances.
//!
//! Adjacency is disjointness of the slope arcs, which by the square
//! model is |ps' - qp'| <= 1. BFS runs inside a box |p|, q <= bound;
//! distances are validated by recomputing with a doubled bound, so a
//! reported distance is exact whenever the stability check passes.

use std::collections::{HashMap, VecDeque};

use super::square::Slope;
use crate::{Error, Result};

pub struct FareyGraph {
    pub bound: i64,
}

fn in_box(s: Slope, bound: i64) -> bool {
    s.p.abs() <= bound && s.q <= bound
}

fn extgcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extgcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl FareyGraph {
    pub fn new(bound: i64) -> FareyGraph {
        FareyGraph { bound }
    }

    /// Neighbors of a slope inside the box: solutions of p s - q r = ±1.
    pub fn neighbors(&self, v: Slope) -> Vec<Slope> {
        let (p, q) = (v.p, v.q);
        let (g, x, y) = extgcd(p, q);
        debug_assert_eq!(g.abs(), 1);
        // p*s - q*r = 1 with s = g*x, r = -g*y (sign fix for g = -1).
        let (s0, r0) = (x / g, -y / g);
        let mut out = Vec::new();
        // Range of t keeping |r0 + t p| and |s0 + t q| within the box.
        let span = 2 * self.bound + 2;
        for sign in [1i64, -1] {
            for t in -span..=span {
                let r = sign * (r0 + t * p);
                let s = sign * (s0 + t * q);
                if let Ok(n) = Slope::new(r, s) {
                    if in_box(n, self.bound) && n != v {
                        out.push(n);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        debug_assert!(out.iter().all(|&n| v.det(n) == 1));
        out
    }

    pub fn distances_from(&self, src: Slope) -> HashMap<Slope, u32> {
        let mut dist = HashMap::new();
        dist.insert(src, 0u32);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for n in self.neighbors(v) {
                dist.entry(n).or_insert_with(|| {
                    queue.push_back(n);
                    d + 1
                });
            }
        }
        dist
    }

    pub fn distance(&self, a: Slope, b: Slope) -> Option<u32> {
        if a == b {
            return Some(0);
        }
        let mut dist = HashMap::new();
        dist.insert(a, 0u32);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for n in self.neighbors(v) {
                if n == b {
                    return Some(d + 1);
                }
                dist.entry(n).or_insert_with(|| {
                    queue.push_back(n);
                    d + 1
                });
            }
        }
        None
    }
}

/// Exact distance with a stability check: the BFS bound is doubled
/// until two consecutive rounds agree.
pub fn stable_distance(a: Slope, b: Slope, start_bound: i64) -> Result<u32> {
    let mut bound = start_bound.max(a.p.abs()).max(a.q).max(b.p.abs()).max(b.q);
    let mut prev: Option<u32> = None;
    for _ in 0..6 {
        let d = FareyGraph::new(bound).distance(a, b);
        match (prev, d) {
            (Some(x), Some(y)) if x == y => return Ok(y),
            _ => {
                prev = d;
                bound *= 2;
            }
        }
    }
    Err(Error::SearchLimit { what: format!("farey distance {a} to {b}"), limit: 6 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::square::{disjoint, slopes_in_box};

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn neighbors_are_exactly_the_disjoint_slopes() {
        let g = FareyGraph::new(6);
        for &v in slopes_in_box(3).iter() {
            let ns = g.neighbors(v);
            for &w in slopes_in_box(6).iter() {
                if w == v {
                    continue;
                }
                assert_eq!(ns.contains(&w), disjoint(v, w), "v={v} w={w}");
            }
        }
    }

    #[test]
    fn known_distances() {
        assert_eq!(stable_distance(s(0, 1), s(1, 0), 8).unwrap(), 1);
        assert_eq!(stable_distance(s(1, 0), s(1, 2), 8).unwrap(), 2);
        // Twist family: all integer slopes hang off 1/0.
        for n in 2..6 {
            assert_eq!(stable_distance(s(0, 1), s(n, 1), 8).unwrap(), 2);
        }
        // A Fibonacci-style pair is farther away.
        assert!(stable_distance(s(5, 8), s(1, 0), 16).unwrap() >= 3);
    }
}
