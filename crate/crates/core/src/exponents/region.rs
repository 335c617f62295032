//! The conjectured type set `Q(mu, alpha)` and the region `R(mu, alpha)`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{cross, int, on_segment, PQPoint, Q, RegionSpec};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPoints {
    pub q1: PQPoint,
    pub q2: PQPoint,
    pub q3: PQPoint,
    pub q4: PQPoint,
}

impl QPoints {
    pub fn as_array(&self) -> [PQPoint; 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }
}

/// The four vertices `Q1, Q2_mu, Q3_mu, Q4_alpha`.
pub fn q_points(spec: &RegionSpec) -> Result<QPoints> {
    spec.validate()?;
    let mu = spec.require_mu()?;
    let d = int(spec.d as i128);
    let a = spec.alpha;
    let one = Q::one();
    let q2 = (d - one) / (d - one + mu);
    let q3_den = d - mu + one;
    let q4_den = d * d + a * 2 - one;
    Ok(QPoints {
        q1: PQPoint::raw(Q::zero(), Q::zero()),
        q2: PQPoint::raw(q2, q2),
        q3: PQPoint::raw((d - mu) / q3_den, one / q3_den),
        q4: PQPoint::raw(d * (d - one) / q4_den, (d - one) / q4_den),
    })
}

/// Counter-clockwise hull vertices with duplicates and collinear points
/// removed (monotone chain).
pub fn convex_hull(points: &[PQPoint]) -> Vec<PQPoint> {
    let mut pts: Vec<PQPoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<PQPoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= Q::zero() {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<PQPoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= Q::zero() {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionClass {
    /// Interior of the hull `Q(mu, alpha)`.
    InteriorQ,
    /// On the boundary of the hull, outside the half-open segment
    /// `(Q1, Q2_mu)`; every vertex gets this label.
    BoundaryQ,
    /// On the half-open edge `[Q1, Q2_mu)` but not a vertex.
    InR,
    Outside,
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionClass::InteriorQ => "interior_Q",
            RegionClass::BoundaryQ => "boundary_Q",
            RegionClass::InR => "in_R",
            RegionClass::Outside => "outside",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub class: RegionClass,
    /// Membership in `R(mu, alpha)`: interior, or `[Q1, Q2_mu)`. True for `Q1`
    /// even though `Q1` is labelled as a vertex.
    pub in_r: bool,
    pub vertex: bool,
}

/// Exact classification of a point against `Q(mu, alpha)` and `R(mu, alpha)`.
pub fn region_membership(point: PQPoint, spec: &RegionSpec) -> Result<Membership> {
    let qs = q_points(spec)?;
    let hull = convex_hull(&qs.as_array());
    let vertex = qs.as_array().contains(&point);
    let on_r_edge = on_segment(point, qs.q1, qs.q2) && point != qs.q2;

    let (inside, boundary) = match hull.len() {
        0 => (false, false),
        1 => (false, point == hull[0]),
        2 => (false, on_segment(point, hull[0], hull[1])),
        n => {
            let mut all_positive = true;
            let mut any_negative = false;
            for i in 0..n {
                let c = cross(hull[i], hull[(i + 1) % n], point);
                if c < Q::zero() {
                    any_negative = true;
                }
                if c <= Q::zero() {
                    all_positive = false;
                }
            }
            (all_positive, !all_positive && !any_negative)
        }
    };

    let class = if inside {
        RegionClass::InteriorQ
    } else if vertex {
        RegionClass::BoundaryQ
    } else if on_r_edge {
        RegionClass::InR
    } else if boundary {
        RegionClass::BoundaryQ
    } else {
        RegionClass::Outside
    };
    Ok(Membership {
        class,
        in_r: inside || on_r_edge,
        vertex,
    })
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    fn spec(d: u32, mu: Q, alpha: Q) -> RegionSpec {
        RegionSpec::new(d, Some(mu), alpha).unwrap()
    }

    #[test]
    fn q4_at_d2() {
        for (n, m) in [(1, 4), (1, 2), (2, 3), (1, 1)] {
            let a = rat(n, m);
            let q = q_points(&spec(2, a, a)).unwrap();
            let den = a * 2 + 3;
            assert_eq!(q.q4, PQPoint::raw(int(2) / den, int(1) / den));
        }
    }

    #[test]
    fn q2_equals_q3_when_mu_one() {
        let q = q_points(&spec(2, int(1), int(1))).unwrap();
        assert_eq!(q.q2, PQPoint::raw(rat(1, 2), rat(1, 2)));
        assert_eq!(q.q2, q.q3);
        // degenerate quadrilateral: three distinct vertices
        assert_eq!(convex_hull(&q.as_array()).len(), 3);
    }

    #[test]
    fn mu_zero_gives_corner() {
        let q = q_points(&spec(2, Q::zero(), rat(1, 2))).unwrap();
        assert_eq!(q.q2, PQPoint::raw(int(1), int(1)));
    }

    #[test]
    fn classification_examples() {
        for (mu, a) in [(rat(1, 2), rat(5, 6)), (int(1), int(1)), (rat(1, 3), rat(1, 2))] {
            let s = spec(2, mu, a);
            let q = q_points(&s).unwrap();
            for v in q.as_array() {
                assert_eq!(region_membership(v, &s).unwrap().class, RegionClass::BoundaryQ);
            }
            assert!(region_membership(q.q1, &s).unwrap().in_r);
            assert!(!region_membership(q.q2, &s).unwrap().in_r);
            assert!(!region_membership(q.q4, &s).unwrap().in_r);
            let mid = q.q1.midpoint(q.q2);
            let m = region_membership(mid, &s).unwrap();
            assert_eq!(m.class, RegionClass::InR);
            assert!(m.in_r);
            let far = PQPoint::raw(int(1), Q::zero());
            assert_eq!(region_membership(far, &s).unwrap().class, RegionClass::Outside);
            let centroid = PQPoint::raw(
                (q.q1.inv_p + q.q2.inv_p + q.q3.inv_p + q.q4.inv_p) / 4,
                (q.q1.inv_q + q.q2.inv_q + q.q3.inv_q + q.q4.inv_q) / 4,
            );
            assert_eq!(region_membership(centroid, &s).unwrap().class, RegionClass::InteriorQ);
        }
    }

    #[test]
    fn hull_ignores_order() {
        let s = spec(3, rat(1, 3), rat(2, 3));
        let q = q_points(&s).unwrap().as_array();
        let base = convex_hull(&q);
        let perm = [q[2], q[0], q[3], q[1]];
        assert_eq!(convex_hull(&perm), base);
    }
}
