use crate::error::{HtmError, Result};
use crate::region::{polygon, Convex};
use crate::vector::UnitVector;
use crate::EPS_GEOM;

#[derive(Debug, Clone, PartialEq)]
pub struct HullResult {
    /// Hull vertices in counterclockwise order.
    pub vertices: Vec<UnitVector>,
    pub convex: Convex,
}

fn cross2(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Spherical convex hull of points lying strictly within one hemisphere,
/// computed in the gnomonic projection around the points' mean direction.
pub fn convex_hull(points: &[UnitVector]) -> Result<HullResult> {
    let sum = points.iter().fold(UnitVector::default(), |acc, &p| acc + p);
    if sum.norm() < 1e-12 {
        return Err(if points.len() < 3 {
            HtmError::TooFewPoints(points.len())
        } else {
            HtmError::NotHemispheric
        });
    }
    let center = sum.normalize();
    if points.iter().any(|p| p.dot(center) <= EPS_GEOM) {
        return Err(HtmError::NotHemispheric);
    }
    let e1 = center.any_perpendicular();
    let e2 = center.cross(e1);

    let mut projected: Vec<((f64, f64), UnitVector)> = points
        .iter()
        .map(|&p| {
            let z = p.dot(center);
            ((p.dot(e1) / z, p.dot(e2) / z), p)
        })
        .collect();
    projected.sort_by(|a, b| a.0 .0.total_cmp(&b.0 .0).then(a.0 .1.total_cmp(&b.0 .1)));
    projected.dedup_by(|a, b| (a.0 .0 - b.0 .0).abs() < 1e-15 && (a.0 .1 - b.0 .1).abs() < 1e-15);
    if projected.len() < 3 {
        return Err(HtmError::TooFewPoints(projected.len()));
    }

    // Andrew's monotone chain; collinear points are dropped
    let mut hull: Vec<((f64, f64), UnitVector)> = Vec::with_capacity(2 * projected.len());
    for pass in 0..2 {
        let floor = hull.len();
        let iter: Box<dyn Iterator<Item = &((f64, f64), UnitVector)>> = if pass == 0 {
            Box::new(projected.iter())
        } else {
            Box::new(projected.iter().rev())
        };
        for &q in iter {
            while hull.len() >= floor + 2
                && cross2(hull[hull.len() - 2].0, hull[hull.len() - 1].0, q.0) <= 0.0
            {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(HtmError::TooFewPoints(hull.len()));
    }
    let vertices: Vec<UnitVector> = hull.into_iter().map(|(_, p)| p).collect();
    let convex = polygon(&vertices);
    Ok(HullResult { vertices, convex })
}
