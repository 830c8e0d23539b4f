//! Bounding circles, areas and arc lengths of simplified regions, and convex
//! hulls of point sets.

mod hull;

pub use hull::{convex_hull, HullResult};

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{HtmError, Result};
use crate::region::{
    lateral_angle, swept_azimuth, ArcEnd, ConvexBoundary, Halfspace, Patch, Region,
    SimplifiedRegion,
};
use crate::vector::UnitVector;
use crate::EPS_GEOM;

const FOUR_PI: f64 = 4.0 * PI;

/// Square degrees per steradian.
pub const SQ_DEG_PER_SR: f64 = (180.0 / PI) * (180.0 / PI);

fn colatitude_sin(h: &Halfspace) -> Result<f64> {
    let s = (1.0 - h.offset * h.offset).max(0.0).sqrt();
    if s <= 1e-12 || s.is_nan() {
        return Err(HtmError::DegenerateCircle(h.offset));
    }
    Ok(s)
}

/// Point on the boundary circle of `h` at lateral angle `phi`.
pub fn point_on_circle(h: &Halfspace, phi: f64) -> UnitVector {
    let (w, u) = h.frame();
    let sin_theta = (1.0 - h.offset * h.offset).max(0.0).sqrt();
    (h.normal * h.offset + (u * phi.cos() + w * phi.sin()) * sin_theta).normalize()
}

fn semilune_with_span(
    h: &Halfspace,
    sin_theta: f64,
    r1: UnitVector,
    r2: UnitVector,
    phi: f64,
) -> f64 {
    let d = h.offset;
    let half_chord = ((r2 - r1).norm() / 2.0).min(1.0);
    let ratio = if d == 0.0 {
        0.0
    } else {
        // tan(β/2) / tan θ with β the chord angle
        half_chord * d / ((1.0 - half_chord * half_chord).sqrt() * sin_theta)
    };
    let x = ratio.clamp(-1.0, 1.0).asin();
    if phi <= PI {
        2.0 * x - phi * d
    } else {
        TAU - 2.0 * x - phi * d
    }
}

/// Signed area between the counterclockwise arc of `h` from `r1` to `r2` and
/// the great-circle chord joining them; positive when the arc bulges away
/// from the chord's left side. Coincident endpoints mean the full circle.
pub fn semilune_area(h: &Halfspace, r1: UnitVector, r2: UnitVector) -> Result<f64> {
    let sin_theta = colatitude_sin(h)?;
    let phi = swept_azimuth(h, r1, r2);
    Ok(semilune_with_span(h, sin_theta, r1, r2, phi))
}

/// Length on the unit sphere of the counterclockwise arc of `h` from `r1` to `r2`.
pub fn arc_length(h: &Halfspace, r1: UnitVector, r2: UnitVector) -> Result<f64> {
    let sin_theta = colatitude_sin(h)?;
    Ok(swept_azimuth(h, r1, r2) * sin_theta)
}

/// Signed area of the geodesic triangle `a, b, c`; positive when counterclockwise.
pub fn triangle_area(a: UnitVector, b: UnitVector, c: UnitVector) -> f64 {
    2.0 * a.triple(b, c).atan2(1.0 + a.dot(b) + b.dot(c) + c.dot(a))
}

/// Start point, lateral angle and azimuth span of each arc in a patch.
struct ArcGeometry {
    halfspace: Halfspace,
    start: UnitVector,
    end: UnitVector,
    phi_start: f64,
    span: f64,
}

fn arc_geometry(b: &ConvexBoundary, p: &Patch) -> Vec<ArcGeometry> {
    p.arcs
        .iter()
        .map(|a| {
            let h = *b.halfspace(a);
            let start = b.point(a.start, a.halfspace);
            let end = b.point(a.end, a.halfspace);
            let span = if a.start == a.end {
                TAU
            } else {
                swept_azimuth(&h, start, end)
            };
            ArcGeometry {
                halfspace: h,
                start,
                end,
                phi_start: lateral_angle(&h, start),
                span,
            }
        })
        .collect()
}

/// Minimum over the arc of `cap.normal · r − cap.offset`. Along the arc this
/// is a sinusoid in the lateral angle, so the minimum is at an endpoint or at
/// the sinusoid's trough.
fn arc_margin(cap: &Halfspace, g: &ArcGeometry) -> f64 {
    let h = &g.halfspace;
    let (w, u) = h.frame();
    let sin_theta = (1.0 - h.offset * h.offset).max(0.0).sqrt();
    let base = cap.normal.dot(h.normal) * h.offset - cap.offset;
    let (cu, cw) = (cap.normal.dot(u) * sin_theta, cap.normal.dot(w) * sin_theta);
    let at = |phi: f64| base + cu * phi.cos() + cw * phi.sin();
    let mut m = at(g.phi_start).min(at(g.phi_start + g.span));
    let trough = cw.atan2(cu) + PI;
    let offset = (trough - g.phi_start).rem_euclid(TAU);
    if offset <= g.span {
        m = m.min(base - cu.hypot(cw));
    }
    m
}

fn encloses(cap: &Halfspace, vertices: &[UnitVector], arcs: &[ArcGeometry]) -> bool {
    vertices.iter().all(|&v| cap.margin(v) > -EPS_GEOM)
        && arcs.iter().all(|g| arc_margin(cap, g) > -EPS_GEOM)
}

/// Smallest cap enclosing the patch, chosen among the convex's own
/// halfspaces, two-point diameter circles and three-point circumcircles of
/// the patch roots extended by midpoints of its positive small-circle arcs.
pub fn patch_bounding_circle(b: &ConvexBoundary, p: &Patch) -> Result<Halfspace> {
    if p.arcs.is_empty() {
        return Err(HtmError::EmptyPatch);
    }
    let arcs = arc_geometry(b, p);
    if arcs.len() == 1 && p.arcs[0].start == ArcEnd::Westward {
        return Ok(arcs[0].halfspace);
    }

    let mut vertices: Vec<UnitVector> = Vec::with_capacity(2 * arcs.len());
    for g in &arcs {
        vertices.push(g.start);
        if g.halfspace.offset > 0.0 {
            vertices.push(point_on_circle(&g.halfspace, g.phi_start + g.span / 2.0));
        }
    }

    let mut best: Option<Halfspace> = None;
    let mut consider = |cap: Halfspace| {
        if best.is_none_or(|b| cap.offset > b.offset) && encloses(&cap, &vertices, &arcs) {
            best = Some(cap);
        }
    };
    for h in b.convex.halfspaces() {
        consider(*h);
    }
    let n = vertices.len();
    for i in 0..n {
        for j in i + 1..n {
            let sum = vertices[i] + vertices[j];
            if sum.norm() < 1e-12 {
                continue;
            }
            let center = sum.normalize();
            consider(Halfspace::new(center, center.dot(vertices[i]))?);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, bb, c) = (vertices[i], vertices[j], vertices[k]);
                let normal = (bb - a).cross(c - bb);
                if normal.norm() < 1e-14 {
                    continue;
                }
                let normal = normal.normalize();
                let d = normal.dot(a);
                consider(Halfspace::new(normal, d)?);
                consider(Halfspace::new(-normal, -d)?);
            }
        }
    }
    best.ok_or_else(|| HtmError::MalformedBoundary("no enclosing circle for patch".into()))
}

/// Area enclosed on the left of the patch loop, in `[0, 4π)`.
pub fn patch_area(b: &ConvexBoundary, p: &Patch) -> Result<f64> {
    if p.arcs.is_empty() {
        return Err(HtmError::EmptyPatch);
    }
    let arcs = arc_geometry(b, p);
    if arcs.len() == 1 && p.arcs[0].start == ArcEnd::Westward {
        return Ok(arcs[0].halfspace.cap_area());
    }

    // pieces of at most a quarter turn keep fan vertices away from antipodes
    let mut pieces: Vec<(Halfspace, UnitVector, UnitVector, f64)> = Vec::new();
    for g in &arcs {
        let m = (g.span / FRAC_PI_2).ceil().max(1.0) as usize;
        let step = g.span / m as f64;
        let mut prev = g.start;
        for k in 1..=m {
            let next = if k == m {
                g.end
            } else {
                point_on_circle(&g.halfspace, g.phi_start + step * k as f64)
            };
            pieces.push((g.halfspace, prev, next, step));
            prev = next;
        }
    }

    let bc = patch_bounding_circle(b, p)?.normal;
    let worst = |o: UnitVector| {
        pieces
            .iter()
            .map(|q| o.dot(q.1))
            .fold(f64::INFINITY, f64::min)
    };
    let centroid = pieces
        .iter()
        .fold(UnitVector::default(), |acc, q| acc + q.1);
    let mut origins = vec![bc];
    if centroid.norm() > 1e-9 {
        origins.push(centroid.normalize());
    }
    for axis in [UnitVector::X, UnitVector::Y, UnitVector::Z] {
        origins.extend([axis, -axis]);
    }
    let origin = origins
        .iter()
        .copied()
        .find(|&o| worst(o) > -0.9)
        .unwrap_or_else(|| {
            origins
                .iter()
                .copied()
                .max_by(|a, c| worst(*a).total_cmp(&worst(*c)))
                .unwrap()
        });

    let mut sum = 0.0;
    for (h, r1, r2, phi) in &pieces {
        let sin_theta = colatitude_sin(h)?;
        sum += triangle_area(origin, *r1, *r2) + semilune_with_span(h, sin_theta, *r1, *r2, *phi);
    }
    Ok(sum.rem_euclid(FOUR_PI))
}

/// Area of one simplified convex. Loops bounding the same component each
/// count the rest of the sphere once more, which the reduction modulo 4π
/// removes.
pub fn convex_area(b: &ConvexBoundary) -> Result<f64> {
    if b.is_whole_sphere() {
        return Ok(FOUR_PI);
    }
    let mut total = 0.0;
    for p in &b.patches {
        total += patch_area(b, p)?;
    }
    Ok(if b.patches.len() > 1 {
        total.rem_euclid(FOUR_PI)
    } else {
        total
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaReport {
    pub steradians: f64,
    /// Set when the bounding circles of two convexes intersect, in which case
    /// the sum may count shared area twice.
    pub overlap_warning: bool,
}

impl AreaReport {
    pub fn square_degrees(&self) -> f64 {
        self.steradians * SQ_DEG_PER_SR
    }
}

fn caps_meet(a: &Halfspace, b: &Halfspace) -> bool {
    a.normal.angle_to(b.normal) < a.arcangle() + b.arcangle()
}

/// Sum of convex areas; convexes are assumed disjoint.
pub fn region_area(s: &SimplifiedRegion) -> Result<AreaReport> {
    let mut steradians = 0.0;
    let mut bounds: Vec<Vec<Halfspace>> = Vec::with_capacity(s.convexes.len());
    for b in &s.convexes {
        steradians += convex_area(b)?;
        if b.is_whole_sphere() {
            bounds.push(vec![Halfspace::whole_sphere()]);
        } else {
            bounds.push(
                b.patches
                    .iter()
                    .map(|p| patch_bounding_circle(b, p))
                    .collect::<Result<_>>()?,
            );
        }
    }
    let overlap_warning = (0..bounds.len()).any(|i| {
        (i + 1..bounds.len()).any(|j| {
            bounds[i]
                .iter()
                .any(|a| bounds[j].iter().any(|c| caps_meet(a, c)))
        })
    });
    Ok(AreaReport {
        steradians,
        overlap_warning,
    })
}

/// Simplifies `r` and measures it.
pub fn area_of(r: &Region) -> Result<AreaReport> {
    region_area(&crate::region::simplify(r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{polygon, simplify_convex, Convex};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn hs(n: UnitVector, d: f64) -> Halfspace {
        Halfspace::new(n, d).unwrap()
    }

    #[test]
    fn great_circle_semilune_vanishes() {
        let h = hs(UnitVector::Z, 0.0);
        assert_eq!(
            semilune_area(&h, UnitVector::X, UnitVector::Y).unwrap(),
            0.0
        );
    }

    #[test]
    fn full_circle_semilune_is_the_cap() {
        let h = hs(UnitVector::new(0.3, -0.2, 0.9), 0.4);
        let r = h.westward_point().unwrap();
        assert_relative_eq!(
            semilune_area(&h, r, r).unwrap(),
            h.cap_area(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn semilune_matches_sector_minus_triangle() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        for _ in 0..2000 {
            let h = hs(
                UnitVector::from_lonlat_deg(rng.gen_range(0.0..360.0), rng.gen_range(-89.0..89.0)),
                rng.gen_range(-0.98..0.98),
            );
            let p1 = rng.gen_range(-PI..PI);
            let span = rng.gen_range(0.01..TAU - 0.01);
            let (r1, r2) = (point_on_circle(&h, p1), point_on_circle(&h, p1 + span));
            let s = semilune_area(&h, r1, r2).unwrap();
            // the cap sector from the center splits into the triangle and the semilune
            let sector = span * (1.0 - h.offset);
            let expected = sector - triangle_area(h.normal, r1, r2);
            let diff = (s - expected).rem_euclid(FOUR_PI);
            assert!(
                diff.min(FOUR_PI - diff) < 1e-9,
                "{h:?} span {span} got {s} want {expected}"
            );
        }
    }

    #[test]
    fn near_great_circle_is_stable() {
        let h = hs(UnitVector::Z, 1e-8);
        let s = semilune_area(&h, point_on_circle(&h, 0.0), point_on_circle(&h, 1.0)).unwrap();
        assert!(s.is_finite() && s.abs() < 1e-7);
    }

    #[test]
    fn degenerate_circles_are_rejected() {
        let h = hs(UnitVector::Z, 1.0);
        assert!(semilune_area(&h, UnitVector::Z, UnitVector::Z).is_err());
        assert!(arc_length(&h, UnitVector::Z, UnitVector::Z).is_err());
    }

    #[test]
    fn arc_lengths() {
        let eq = hs(UnitVector::Z, 0.0);
        assert_relative_eq!(
            arc_length(&eq, UnitVector::X, UnitVector::Y).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        let small = hs(UnitVector::Z, 0.5);
        let r = small.westward_point().unwrap();
        assert_relative_eq!(
            arc_length(&small, r, r).unwrap(),
            TAU * (60f64).to_radians().sin(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn basic_areas() {
        let cap = simplify_convex(&Convex::new(vec![hs(UnitVector::Z, 0.5)]))
            .unwrap()
            .unwrap();
        assert_relative_eq!(convex_area(&cap).unwrap(), PI, epsilon = 1e-12);
        let lune = simplify_convex(&Convex::new(vec![
            hs(UnitVector::X, 0.0),
            hs(UnitVector::Y, 0.0),
        ]))
        .unwrap()
        .unwrap();
        assert_relative_eq!(convex_area(&lune).unwrap(), PI, epsilon = 1e-12);
        let octant = simplify_convex(&polygon(&[UnitVector::X, UnitVector::Y, UnitVector::Z]))
            .unwrap()
            .unwrap();
        assert_relative_eq!(convex_area(&octant).unwrap(), FRAC_PI_2, epsilon = 1e-12);
        let belt = simplify_convex(&Convex::new(vec![
            hs(UnitVector::Z, -0.5),
            hs(-UnitVector::Z, -0.5),
        ]))
        .unwrap()
        .unwrap();
        assert_relative_eq!(convex_area(&belt).unwrap(), TAU, epsilon = 1e-12);
    }

    #[test]
    fn lens_of_two_caps() {
        // two 60° caps whose centers are 60° apart
        let a = hs(UnitVector::from_lonlat_deg(-30.0, 0.0), 0.5);
        let b = hs(UnitVector::from_lonlat_deg(30.0, 0.0), 0.5);
        let lens = simplify_convex(&Convex::new(vec![a, b])).unwrap().unwrap();
        let area = convex_area(&lens).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let n = 400_000;
        let hits = (0..n)
            .filter(|_| {
                let z: f64 = rng.gen_range(-1.0..1.0);
                let t: f64 = rng.gen_range(0.0..TAU);
                let s = (1.0 - z * z).sqrt();
                lens.convex
                    .contains(UnitVector::new(s * t.cos(), s * t.sin(), z))
            })
            .count();
        let p = hits as f64 / n as f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt() * FOUR_PI;
        assert!(
            (area - p * FOUR_PI).abs() < 4.0 * sigma,
            "{area} vs {}",
            p * FOUR_PI
        );
    }

    #[test]
    fn bounding_circle_of_face_is_circumcircle() {
        let b = simplify_convex(&polygon(&[UnitVector::X, UnitVector::Y, UnitVector::Z]))
            .unwrap()
            .unwrap();
        let bc = patch_bounding_circle(&b, &b.patches[0]).unwrap();
        let c = UnitVector::new(1.0, 1.0, 1.0).normalize();
        assert!((bc.normal - c).norm() < 1e-12);
        assert_relative_eq!(bc.offset, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn bounding_circle_of_single_cap_is_itself() {
        let h = hs(UnitVector::new(1.0, 2.0, 3.0), 0.7);
        let b = simplify_convex(&Convex::new(vec![h])).unwrap().unwrap();
        assert_eq!(
            patch_bounding_circle(&b, &b.patches[0]).unwrap(),
            b.convex.halfspaces()[0]
        );
    }

    #[test]
    fn empty_patch_is_an_error() {
        let b = simplify_convex(&Convex::new(vec![hs(UnitVector::Z, 0.5)]))
            .unwrap()
            .unwrap();
        assert!(matches!(
            patch_bounding_circle(&b, &Patch { arcs: vec![] }),
            Err(HtmError::EmptyPatch)
        ));
    }

    #[test]
    fn overlap_is_flagged() {
        let one = Convex::new(vec![hs(UnitVector::Z, 0.5)]);
        let near = Convex::new(vec![hs(UnitVector::from_lonlat_deg(0.0, 70.0), 0.5)]);
        let far = Convex::new(vec![hs(-UnitVector::Z, 0.5)]);
        let r = Region::new(vec![one.clone(), near]);
        assert!(area_of(&r).unwrap().overlap_warning);
        let r = Region::new(vec![one, far]);
        let report = area_of(&r).unwrap();
        assert!(!report.overlap_warning);
        assert_relative_eq!(report.steradians, TAU, epsilon = 1e-12);
        assert_relative_eq!(report.square_degrees(), TAU * SQ_DEG_PER_SR, epsilon = 1e-6);
    }
}
