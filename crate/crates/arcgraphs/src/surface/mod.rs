//! Finite-type surfaces, ideal triangulations, and exhaustions of
//! infinite-type surfaces by finite-type stages.

pub mod triangulation;

pub use triangulation::{Corner, IdealTriangulation, MoveRecord, Slot};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::{Error, Result};

/// A finite-type punctured surface: genus, labeled punctures, and a
/// marked subset `P` of punctures used by the relative arc graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub punctures: Vec<String>,
    #[serde(default)]
    pub marked: BTreeSet<String>,
}

impl SurfaceSpec {
    pub fn new(genus: u32, punctures: Vec<String>, marked: BTreeSet<String>) -> Result<Self> {
        let spec = SurfaceSpec { genus, punctures, marked };
        spec.validate()?;
        Ok(spec)
    }

    /// Convenience constructor with punctures labeled `p0..p{n-1}` and
    /// the first `marked` of them in `P`.
    pub fn standard(genus: u32, punctures: usize, marked: usize) -> Self {
        let labels: Vec<String> = (0..punctures).map(|i| format!("p{i}")).collect();
        let marked = labels.iter().take(marked).cloned().collect();
        SurfaceSpec { genus, punctures: labels, marked }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for p in &self.punctures {
            if !seen.insert(p) {
                return Err(Error::Invalid(format!("duplicate puncture label {p}")));
            }
        }
        for m in &self.marked {
            if !self.punctures.contains(m) {
                return Err(Error::UnknownPuncture(m.clone()));
            }
        }
        Ok(())
    }

    /// 3g - 3 + p.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.punctures.len() as i64
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures.len() as i64
    }

    pub fn puncture_index(&self, label: &str) -> Result<usize> {
        self.punctures
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| Error::UnknownPuncture(label.to_string()))
    }

    pub fn require_complexity(&self, at_least: i64) -> Result<()> {
        if self.complexity() < at_least {
            return Err(Error::Invalid(format!(
                "complexity {} < required {at_least}",
                self.complexity()
            )));
        }
        Ok(())
    }
}

/// Deterministic base triangulation for a finite-type surface.
///
/// Genus handled by a fan-triangulated 4g-gon with the standard
/// identification word, extra punctures by repeated triangle splits.
pub fn build_base_triangulation(spec: &SurfaceSpec) -> Result<IdealTriangulation> {
    spec.validate()?;
    let g = spec.genus as usize;
    let p = spec.punctures.len();
    if p == 0 {
        return Err(Error::NoTriangulation {
            reason: "at least one puncture is required (all vertices are ideal)".into(),
        });
    }
    if g == 0 && p < 3 {
        return Err(Error::NoTriangulation {
            reason: format!("no ideal triangulation for genus 0 with {p} puncture(s)"),
        });
    }
    let (mut trig, base_punctures) = if g == 0 {
        (IdealTriangulation::double_triangle(&spec.punctures[..3]), 3)
    } else {
        (IdealTriangulation::fan_polygon(g as u32, &spec.punctures[0]), 1)
    };
    for k in base_punctures..p {
        // Split the highest-index triangle; fixed rule for reproducibility.
        let target = trig.triangle_count() - 1;
        let (next, _rec) = trig.split_triangle(target, &spec.punctures[k])?;
        trig = next;
    }
    trig.validate()?;
    debug_assert_eq!(trig.edge_count() as i64, 6 * g as i64 - 6 + 3 * p as i64);
    debug_assert_eq!(trig.triangle_count() as i64, 4 * g as i64 - 4 + 2 * p as i64);
    Ok(trig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexity_and_euler() {
        let s = SurfaceSpec::standard(1, 1, 1);
        assert_eq!(s.complexity(), 1);
        assert_eq!(s.euler_characteristic(), -1);
        let s = SurfaceSpec::standard(0, 5, 2);
        assert_eq!(s.complexity(), 2);
    }

    #[test]
    fn base_counts_match_euler_formula() {
        for (g, p) in [(1u32, 1usize), (0, 3), (0, 4), (0, 5), (1, 2), (2, 1), (2, 2)] {
            let spec = SurfaceSpec::standard(g, p, 1.min(p));
            let t = build_base_triangulation(&spec).unwrap();
            assert_eq!(t.edge_count(), (6 * g as i64 - 6 + 3 * p as i64) as usize, "(g,p)=({g},{p})");
            assert_eq!(t.triangle_count(), (4 * g as i64 - 4 + 2 * p as i64) as usize);
            t.validate().unwrap();
        }
    }

    #[test]
    fn excluded_cases_rejected() {
        for p in [1usize, 2] {
            let spec = SurfaceSpec::standard(0, p, 0);
            let err = build_base_triangulation(&spec).unwrap_err();
            assert!(matches!(err, Error::NoTriangulation { .. }));
        }
    }
}
