//! Exact arc arithmetic in an annulus, via the universal cover.
//!
//! An arc runs from a point on the top boundary circle to a point on
//! the bottom one; its isotopy class rel endpoints is the straight
//! segment from (start, 1) to (end + winding, 0) in R x [0,1], with
//! both circles parameterized by [0,1). Positions are exact rationals.

/// Position on a circle as a fraction num/den in [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CirclePos {
    pub num: i64,
    pub den: i64,
}

impl CirclePos {
    pub fn new(num: i64, den: i64) -> CirclePos {
        assert!(den > 0 && num >= 0 && num < den);
        CirclePos { num, den }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnulusArcModel {
    pub top: CirclePos,
    pub bottom: CirclePos,
    pub winding: i64,
}

fn cmp_frac(a: (i128, i128), b: (i128, i128)) -> std::cmp::Ordering {
    // a, b with positive denominators.
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

/// Minimal crossing number of two annulus arcs with distinct endpoints:
/// the number of integer translates of `b` whose lift separates the
/// endpoints of `a`'s lift.
pub fn crossings(a: AnnulusArcModel, b: AnnulusArcModel) -> u64 {
    // Lift of a: top at ta = a.top, bottom at ba = a.bottom + a.winding.
    // Lift of b + m: top at b.top + m, bottom at b.bottom + b.winding + m.
    // They cross iff (ta - tb - m) and (ba - bb - m) have strict
    // opposite signs (segments between two horizontal lines).
    let ta = (a.top.num as i128, a.top.den as i128);
    let ba = (
        a.bottom.num as i128 + a.winding as i128 * a.bottom.den as i128,
        a.bottom.den as i128,
    );
    let tb = (b.top.num as i128, b.top.den as i128);
    let bb = (
        b.bottom.num as i128 + b.winding as i128 * b.bottom.den as i128,
        b.bottom.den as i128,
    );
    // dt = ta - tb, db = ba - bb as fractions.
    let dt = (ta.0 * tb.1 - tb.0 * ta.1, ta.1 * tb.1);
    let db = (ba.0 * bb.1 - bb.0 * ba.1, ba.1 * bb.1);
    let mut count = 0u64;
    // Crossing for translate m iff sign(dt - m) * sign(db - m) < 0.
    let lo = -(3 + (dt.0.abs() / dt.1).max(db.0.abs() / db.1));
    let hi = -lo;
    for m in lo..=hi {
        let sm = cmp_frac(dt, (m, 1)) as i64;
        let sb = cmp_frac(db, (m, 1)) as i64;
        if sm * sb < 0 {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(tn: i64, td: i64, bn: i64, bd: i64, w: i64) -> AnnulusArcModel {
        AnnulusArcModel { top: CirclePos::new(tn, td), bottom: CirclePos::new(bn, bd), winding: w }
    }

    #[test]
    fn winding_difference_drives_crossings() {
        // Arcs with the same endpoints and winding difference k cross
        // |k| - 1 times (shared endpoints absorb one crossing); offset
        // endpoints in this arrangement cross |k| times.
        let a = arc(0, 4, 0, 4, 0);
        for k in -5..=5i64 {
            let same = arc(0, 4, 0, 4, k);
            assert_eq!(crossings(a, same), (k.abs() - 1).max(0) as u64, "same k={k}");
            let offset = arc(1, 4, 1, 4, k);
            assert_eq!(crossings(a, offset), k.unsigned_abs(), "offset k={k}");
        }
    }

    #[test]
    fn parallel_arcs_disjoint() {
        let a = arc(0, 4, 0, 4, 2);
        let b = arc(1, 4, 1, 4, 2);
        assert_eq!(crossings(a, b), 0);
        assert_eq!(crossings(b, a), 0);
    }

    #[test]
    fn symmetric() {
        let a = arc(0, 8, 3, 8, 1);
        let b = arc(5, 8, 1, 8, -2);
        assert_eq!(crossings(a, b), crossings(b, a));
    }
}
