use std::f64::consts::PI;

use super::id::{HtmId, MAX_DEPTH};
use crate::error::{HtmError, Result};
use crate::vector::UnitVector;
use crate::EPS_GEOM;

/// Octahedron vertices v0..v5.
const OCTAHEDRON: [UnitVector; 6] = [
    UnitVector::new(0.0, 0.0, 1.0),
    UnitVector::new(1.0, 0.0, 0.0),
    UnitVector::new(0.0, 1.0, 0.0),
    UnitVector::new(-1.0, 0.0, 0.0),
    UnitVector::new(0.0, -1.0, 0.0),
    UnitVector::new(0.0, 0.0, -1.0),
];

/// Vertex indices of S0, S1, S2, S3, N0, N1, N2, N3; ids 8..=15 in this order.
const BASE_FACES: [[usize; 3]; 8] = [
    [1, 5, 2],
    [2, 5, 3],
    [3, 5, 4],
    [4, 5, 1],
    [1, 0, 4],
    [4, 0, 3],
    [3, 0, 2],
    [2, 0, 1],
];

/// A spherical triangle of the mesh, vertices counterclockwise seen from outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trixel {
    pub id: HtmId,
    pub v0: UnitVector,
    pub v1: UnitVector,
    pub v2: UnitVector,
}

pub fn base_faces() -> [Trixel; 8] {
    std::array::from_fn(base_face)
}

fn base_face(i: usize) -> Trixel {
    let [a, b, c] = BASE_FACES[i];
    Trixel {
        id: HtmId::from_raw(8 + i as u64),
        v0: OCTAHEDRON[a],
        v1: OCTAHEDRON[b],
        v2: OCTAHEDRON[c],
    }
}

/// Child `k` of the triangle `(v0, v1, v2)` given the edge midpoints.
#[inline]
fn child_vertices(
    [v0, v1, v2]: [UnitVector; 3],
    [w0, w1, w2]: [UnitVector; 3],
    k: usize,
) -> [UnitVector; 3] {
    match k {
        0 => [v0, w2, w1],
        1 => [v1, w0, w2],
        2 => [v2, w1, w0],
        _ => [w0, w1, w2],
    }
}

#[inline]
fn midpoints([v0, v1, v2]: [UnitVector; 3]) -> [UnitVector; 3] {
    [v1.midpoint(v2), v0.midpoint(v2), v0.midpoint(v1)]
}

/// Smallest signed edge test `(vi × vj) · p`; non-negative means inside.
#[inline]
fn inside_score([v0, v1, v2]: [UnitVector; 3], p: UnitVector) -> f64 {
    v0.triple(v1, p).min(v1.triple(v2, p)).min(v2.triple(v0, p))
}

impl Trixel {
    #[inline]
    pub fn vertices(&self) -> [UnitVector; 3] {
        [self.v0, self.v1, self.v2]
    }

    pub fn depth(&self) -> u32 {
        self.id.depth()
    }

    pub fn centroid(&self) -> UnitVector {
        (self.v0 + self.v1 + self.v2).normalize()
    }

    /// Closed containment with the shared geometric tolerance.
    pub fn contains(&self, p: UnitVector) -> bool {
        inside_score(self.vertices(), p) >= -EPS_GEOM
    }

    /// The four children in order 0..3.
    pub fn subdivide(&self) -> Result<[Trixel; 4]> {
        if self.depth() >= MAX_DEPTH {
            return Err(HtmError::DepthLimitExceeded {
                depth: self.depth() + 1,
                min: 1,
                max: MAX_DEPTH,
            });
        }
        Ok(self.children_unchecked())
    }

    pub(crate) fn children_unchecked(&self) -> [Trixel; 4] {
        let v = self.vertices();
        let w = midpoints(v);
        std::array::from_fn(|k| {
            let [a, b, c] = child_vertices(v, w, k);
            Trixel {
                id: HtmId::from_raw((self.id.value() << 2) | k as u64),
                v0: a,
                v1: b,
                v2: c,
            }
        })
    }

    /// Side lengths (great-circle angles) opposite v0, v1, v2.
    pub fn sides(&self) -> [f64; 3] {
        [
            self.v1.angle_to(self.v2),
            self.v2.angle_to(self.v0),
            self.v0.angle_to(self.v1),
        ]
    }

    /// Inner angles at v0, v1, v2.
    pub fn inner_angles(&self) -> [f64; 3] {
        [
            vertex_angle(self.v0, self.v1, self.v2),
            vertex_angle(self.v1, self.v2, self.v0),
            vertex_angle(self.v2, self.v0, self.v1),
        ]
    }

    /// Area by spherical excess of the inner angles.
    pub fn area(&self) -> f64 {
        self.inner_angles().iter().sum::<f64>() - PI
    }
}

/// Angle at `a` between the great circles towards `b` and `c`.
fn vertex_angle(a: UnitVector, b: UnitVector, c: UnitVector) -> f64 {
    let n1 = a.cross(b);
    let n2 = a.cross(c);
    n1.cross(n2).norm().atan2(n1.dot(n2))
}

pub fn subdivide(t: &Trixel) -> Result<[Trixel; 4]> {
    t.subdivide()
}

fn check_depth(depth: u32) -> Result<()> {
    if (1..=MAX_DEPTH).contains(&depth) {
        Ok(())
    } else {
        Err(HtmError::DepthLimitExceeded {
            depth,
            min: 1,
            max: MAX_DEPTH,
        })
    }
}

/// First index in `candidates` whose closed triangle holds `p`. When rounding
/// leaves `p` marginally outside all of them, the least-violated one wins.
#[inline]
fn pick(
    candidates: impl Iterator<Item = [UnitVector; 3]>,
    p: UnitVector,
) -> (usize, [UnitVector; 3]) {
    let mut best = (0, [UnitVector::default(); 3], f64::NEG_INFINITY);
    for (i, tri) in candidates.enumerate() {
        let score = inside_score(tri, p);
        if score >= -EPS_GEOM {
            return (i, tri);
        }
        if score > best.2 {
            best = (i, tri, score);
        }
    }
    (best.0, best.1)
}

/// Id of the depth-`depth` trixel holding `p`. Points on shared edges go to the
/// first match in face order S0..N3 and child order 0..3.
pub fn point_to_id(p: UnitVector, depth: u32) -> Result<HtmId> {
    if !p.is_unit() {
        return Err(HtmError::InvalidVector {
            x: p.x,
            y: p.y,
            z: p.z,
        });
    }
    check_depth(depth)?;
    let (face, mut tri) = pick(BASE_FACES.iter().map(|f| f.map(|i| OCTAHEDRON[i])), p);
    let mut id = 8 + face as u64;
    for _ in 1..depth {
        let w = midpoints(tri);
        let (k, child) = pick((0..4).map(|k| child_vertices(tri, w, k)), p);
        id = (id << 2) | k as u64;
        tri = child;
    }
    Ok(HtmId::from_raw(id))
}

/// Replays the id's path from its base face.
pub fn id_to_trixel(id: HtmId) -> Trixel {
    let depth = id.depth();
    let base = base_face(id.base_face());
    let mut tri = base.vertices();
    for level in (0..depth - 1).rev() {
        let k = ((id.value() >> (2 * level)) & 3) as usize;
        tri = child_vertices(tri, midpoints(tri), k);
    }
    Trixel {
        id,
        v0: tri[0],
        v1: tri[1],
        v2: tri[2],
    }
}

/// Validating wrapper over [`id_to_trixel`] for raw values.
pub fn raw_id_to_trixel(value: u64) -> Result<Trixel> {
    Ok(id_to_trixel(HtmId::new(value)?))
}
