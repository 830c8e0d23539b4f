use crate::error::{HtmError, Result};
use crate::mesh::Trixel;
use crate::region::{Convex, ConvexSign, Halfspace, Region, Sign};
use crate::vector::UnitVector;
use crate::EPS_GEOM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Inside,
    Partial,
    Outside,
}

fn corner_inside(h: &Halfspace, p: UnitVector) -> bool {
    h.normal.dot(p) > h.offset - EPS_GEOM
}

/// Parameters `s ∈ (0, 1)` at which the great-circle segment from `a` to `b`
/// crosses the boundary of `h`. The segment is parametrized by the tangent of
/// the half angle, so `s` is not proportional to arc length.
pub fn edge_roots(h: &Halfspace, a: UnitVector, b: UnitVector) -> Result<Vec<f64>> {
    let cross = a.cross(b).norm();
    let cos = a.dot(b);
    if cross < 1e-15 && cos < 0.0 {
        return Err(HtmError::InvalidEdge);
    }
    let theta = cross.atan2(cos);
    let u2 = (theta / 2.0).tan().powi(2);
    let (g1, g2, d) = (h.normal.dot(a), h.normal.dot(b), h.offset);

    let qa = -u2 * (g1 + d);
    let qb = g1 * (u2 - 1.0) + g2 * (u2 + 1.0);
    let qc = g1 - d;

    let mut roots = Vec::with_capacity(2);
    let scale = qa.abs().max(qb.abs()).max(qc.abs());
    if scale == 0.0 {
        return Ok(roots);
    }
    if qa.abs() <= 1e-15 * scale {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return Ok(roots);
        }
        let sq = disc.sqrt();
        let q = -0.5 * (qb + qb.signum() * sq);
        if q == 0.0 {
            roots.push(0.0);
        } else {
            roots.push(q / qa);
            if disc > 0.0 {
                roots.push(qc / q);
            }
        }
    }
    roots.retain(|s| *s > 0.0 && *s < 1.0);
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Number of boundary crossings strictly inside the segment `a → b`.
pub fn edge_hits(h: &Halfspace, a: UnitVector, b: UnitVector) -> Result<usize> {
    edge_roots(h, a, b).map(|r| r.len())
}

fn any_edge_hit(t: &Trixel, h: &Halfspace) -> bool {
    let [v0, v1, v2] = t.vertices();
    // trixel edges are at most a quarter circle, never antipodal
    [(v0, v1), (v1, v2), (v2, v0)]
        .iter()
        .any(|&(a, b)| edge_hits(h, a, b).map_or(true, |n| n > 0))
}

/// Circumscribed cap of the trixel: center and angular radius.
fn bounding_circle(t: &Trixel) -> (UnitVector, f64) {
    let [v0, v1, v2] = t.vertices();
    let center = (v1 - v0).cross(v2 - v1).normalize();
    (center, center.angle_to(v0))
}

pub fn classify_halfspace(t: &Trixel, h: &Halfspace) -> Classification {
    if h.covers_sphere() {
        return Classification::Inside;
    }
    let inside = t
        .vertices()
        .iter()
        .filter(|&&v| corner_inside(h, v))
        .count();
    match inside {
        3 if h.sign() != Sign::Negative => Classification::Inside,
        3 => {
            if any_edge_hit(t, h) || t.contains(-h.normal) {
                Classification::Partial
            } else {
                Classification::Inside
            }
        }
        1 | 2 => Classification::Partial,
        _ => {
            let (vb, phi_b) = bounding_circle(t);
            if h.normal.angle_to(vb) >= h.arcangle() + phi_b {
                Classification::Outside
            } else if any_edge_hit(t, h) || t.contains(h.normal) {
                Classification::Partial
            } else {
                Classification::Outside
            }
        }
    }
}

fn corners_inside_convex(t: &Trixel, c: &Convex) -> usize {
    t.vertices()
        .iter()
        .filter(|&&v| c.halfspaces().iter().all(|h| corner_inside(h, v)))
        .count()
}

fn hole_inside(t: &Trixel, c: &Convex) -> bool {
    c.halfspaces()
        .iter()
        .any(|h| h.sign() == Sign::Negative && !h.covers_sphere() && t.contains(-h.normal))
}

pub fn classify_convex(t: &Trixel, c: &Convex) -> Classification {
    use Classification::*;
    if c.is_empty() {
        return Outside;
    }
    match c.sign() {
        ConvexSign::Positive | ConvexSign::Zero => {
            let mut all_inside = true;
            for h in c.halfspaces() {
                match classify_halfspace(t, h) {
                    Outside => return Outside,
                    Partial => all_inside = false,
                    Inside => {}
                }
            }
            if all_inside {
                Inside
            } else {
                Partial
            }
        }
        ConvexSign::Negative => {
            let crossed = || c.halfspaces().iter().any(|h| any_edge_hit(t, h));
            match corners_inside_convex(t, c) {
                3 => {
                    if hole_inside(t, c) || crossed() {
                        Partial
                    } else {
                        Inside
                    }
                }
                1 | 2 => Partial,
                _ => {
                    if crossed() {
                        Partial
                    } else {
                        Outside
                    }
                }
            }
        }
        ConvexSign::Mixed => {
            if c.halfspaces()
                .iter()
                .any(|h| classify_halfspace(t, h) == Outside)
            {
                return Outside;
            }
            if corners_inside_convex(t, c) == 3
                && !hole_inside(t, c)
                && !c.halfspaces().iter().any(|h| any_edge_hit(t, h))
            {
                Inside
            } else {
                Partial
            }
        }
    }
}

pub fn classify_region(t: &Trixel, r: &Region) -> Classification {
    let mut all_outside = true;
    for c in &r.convexes {
        match classify_convex(t, c) {
            Classification::Inside => return Classification::Inside,
            Classification::Partial => all_outside = false,
            Classification::Outside => {}
        }
    }
    if all_outside {
        Classification::Outside
    } else {
        Classification::Partial
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{base_faces, id_to_trixel, name_to_id};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn face(name: &str) -> Trixel {
        id_to_trixel(name_to_id(name).unwrap())
    }

    #[test]
    fn half_angle_crossing() {
        let h = Halfspace::new(UnitVector::X, 0.5f64.sqrt()).unwrap();
        let roots = edge_roots(&h, UnitVector::X, UnitVector::Y).unwrap();
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(roots[0], 22.5f64.to_radians().tan(), epsilon = 1e-12);
    }

    #[test]
    fn equatorial_edge_misses_polar_cap() {
        let h = Halfspace::new(UnitVector::Z, 0.5).unwrap();
        assert_eq!(edge_hits(&h, UnitVector::X, UnitVector::Y).unwrap(), 0);
    }

    #[test]
    fn antipodal_edge_is_rejected() {
        let h = Halfspace::new(UnitVector::Z, 0.5).unwrap();
        assert!(matches!(
            edge_hits(&h, UnitVector::X, -UnitVector::X),
            Err(HtmError::InvalidEdge)
        ));
    }

    #[test]
    fn cap_strictly_inside_face() {
        let t = face("N3");
        let h = Halfspace::new(t.centroid(), 0.99).unwrap();
        assert_eq!(classify_halfspace(&t, &h), Classification::Partial);
    }

    #[test]
    fn distant_cap_is_outside() {
        let h = Halfspace::new(-UnitVector::Z, 0.5).unwrap();
        assert_eq!(classify_halfspace(&face("N0"), &h), Classification::Outside);
    }

    #[test]
    fn whole_sphere_is_inside() {
        let c = Convex::new(vec![Halfspace::whole_sphere()]);
        for t in base_faces() {
            assert_eq!(
                classify_halfspace(&t, &Halfspace::whole_sphere()),
                Classification::Inside
            );
            assert_eq!(classify_convex(&t, &c), Classification::Inside);
        }
    }

    #[test]
    fn hole_away_from_face() {
        // the hole sits around -(1,1,1)/√3, so N3 is untouched
        let hole = Halfspace::new(UnitVector::new(1.0, 1.0, 1.0), -0.99).unwrap();
        let c = Convex::new(vec![hole]);
        assert_eq!(classify_convex(&face("N3"), &c), Classification::Inside);
        assert_eq!(classify_convex(&face("S2"), &c), Classification::Partial);
        assert_eq!(classify_convex(&face("S1"), &c), Classification::Inside);
    }

    #[test]
    fn hole_inside_face() {
        let hole = Halfspace::new(UnitVector::new(-1.0, -1.0, -1.0), -0.99).unwrap();
        let c = Convex::new(vec![hole]);
        assert_eq!(classify_convex(&face("N3"), &c), Classification::Partial);
    }

    #[test]
    fn empty_convex_is_outside() {
        assert_eq!(
            classify_convex(&face("N0"), &Convex::new(vec![])),
            Classification::Outside
        );
    }

    fn random_unit(rng: &mut impl Rng) -> UnitVector {
        loop {
            let v = UnitVector::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v.normalize();
            }
        }
    }

    fn sample_in(t: &Trixel, rng: &mut impl Rng) -> UnitVector {
        let (mut a, mut b) = (rng.gen::<f64>(), rng.gen::<f64>());
        if a + b > 1.0 {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        (t.v0 * (1.0 - a - b) + t.v1 * a + t.v2 * b).normalize()
    }

    #[test]
    fn classification_agrees_with_sampling() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(1..4);
            let c = Convex::new(
                (0..n)
                    .map(|_| {
                        Halfspace::new(random_unit(&mut rng), rng.gen_range(-0.9..0.95)).unwrap()
                    })
                    .collect(),
            );
            let mut t = base_faces()[rng.gen_range(0..8)];
            for _ in 0..rng.gen_range(0..4) {
                t = t.subdivide().unwrap()[rng.gen_range(0..4)];
            }
            let class = classify_convex(&t, &c);
            for _ in 0..200 {
                let p = sample_in(&t, &mut rng);
                if c.halfspaces().iter().any(|h| h.margin(p).abs() < 1e-9) {
                    continue;
                }
                match class {
                    Classification::Inside => assert!(c.contains(p)),
                    Classification::Outside => assert!(!c.contains(p)),
                    Classification::Partial => {}
                }
            }
        }
    }
}
