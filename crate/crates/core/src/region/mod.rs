//! Spherical regions as unions of convexes, each an intersection of halfspaces
//! (caps cut off by a plane), plus the simplification pipeline that reduces a
//! convex to its necessary halfspaces and traces its boundary arcs and patches.

mod boundary;
pub mod format;
mod halfspace;
mod roots;

pub(crate) use boundary::swept_azimuth;
pub use boundary::{
    assemble_arcs, assemble_patches, lateral_angle, simplify, simplify_convex, Arc, ArcEnd,
    ConvexBoundary, Patch, SimplifiedRegion,
};
pub use halfspace::{Halfspace, Sign};
pub use roots::{compute_roots, select_masking_circles, visibility, Root, RootFlag, Visibility};

use crate::vector::UnitVector;

/// Sign class of a convex, derived from the signs of its halfspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexSign {
    Negative,
    Zero,
    Positive,
    Mixed,
}

/// Intersection of halfspaces, kept sorted by ascending arcangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Convex {
    halfspaces: Vec<Halfspace>,
}

impl Convex {
    pub fn new(mut halfspaces: Vec<Halfspace>) -> Self {
        // stable: equal arcangles keep their input order
        halfspaces.sort_by(|a, b| b.offset.total_cmp(&a.offset));
        Convex { halfspaces }
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn sign(&self) -> ConvexSign {
        let pos = self.halfspaces.iter().any(|h| h.sign() == Sign::Positive);
        let neg = self.halfspaces.iter().any(|h| h.sign() == Sign::Negative);
        match (pos, neg) {
            (true, true) => ConvexSign::Mixed,
            (true, false) => ConvexSign::Positive,
            (false, true) => ConvexSign::Negative,
            (false, false) => ConvexSign::Zero,
        }
    }

    pub fn contains(&self, p: UnitVector) -> bool {
        self.halfspaces.iter().all(|h| h.contains(p))
    }

    /// Removes duplicates and whole-sphere members; `None` when the convex is
    /// provably empty (a complementary pair, or an offset above 1).
    pub fn trivial_simplify(&self) -> Option<Convex> {
        if self.halfspaces.iter().any(|h| h.offset > 1.0) {
            return None;
        }
        let mut kept: Vec<Halfspace> = Vec::with_capacity(self.halfspaces.len());
        for h in &self.halfspaces {
            if kept.iter().any(|k| k.same_as(h)) {
                continue;
            }
            if kept.iter().any(|k| k.complements(h)) {
                return None;
            }
            kept.push(*h);
        }
        if kept.iter().any(|h| !h.covers_sphere()) {
            kept.retain(|h| !h.covers_sphere());
        } else {
            kept.truncate(1);
        }
        Some(Convex { halfspaces: kept })
    }

    /// Pairwise tests, smallest cap against largest first: disjoint caps make the
    /// convex empty, and a cap containing a smaller one is dropped.
    pub fn pairwise_simplify(&self) -> Option<Convex> {
        let mut hs = self.halfspaces.clone();
        let mut i = 0;
        while i < hs.len() {
            let mut j = hs.len() - 1;
            while j > i {
                let small = hs[i].arcangle();
                let large = hs[j].arcangle();
                let gamma = hs[i].normal.angle_to(hs[j].normal);
                if gamma >= small + large {
                    return None;
                }
                if large - small >= gamma {
                    hs.remove(j);
                }
                j -= 1;
            }
            i += 1;
        }
        Some(Convex { halfspaces: hs })
    }
}

/// Union of convexes. An empty list is the empty region.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Region {
    pub convexes: Vec<Convex>,
}

impl Region {
    pub fn new(convexes: Vec<Convex>) -> Self {
        Region { convexes }
    }

    pub fn empty() -> Self {
        Region::default()
    }

    pub fn whole_sphere() -> Self {
        Region::new(vec![Convex::new(vec![Halfspace::whole_sphere()])])
    }

    pub fn from_convex(c: Convex) -> Self {
        Region::new(vec![c])
    }

    pub fn contains(&self, p: UnitVector) -> bool {
        self.convexes.iter().any(|c| c.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.convexes.is_empty()
    }
}

/// Convex of zero-offset halfspaces along the edges of a counterclockwise polygon.
pub fn polygon(vertices: &[UnitVector]) -> Convex {
    let n = vertices.len();
    Convex::new(
        (0..n)
            .map(|i| {
                Halfspace::from_parts(vertices[i].cross(vertices[(i + 1) % n]).normalize(), 0.0)
            })
            .collect(),
    )
}
