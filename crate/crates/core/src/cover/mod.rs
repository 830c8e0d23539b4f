//! Trixel classification against regions, recursive covers, and conversion
//! of covers to merged id ranges at a fixed depth.

mod classify;
mod ranges;

pub use classify::{
    classify_convex, classify_halfspace, classify_region, edge_hits, edge_roots, Classification,
};
pub use ranges::{to_ranges, IdRange, RangeSet};

use crate::error::{HtmError, Result};
use crate::measure::patch_bounding_circle;
use crate::mesh::{base_faces, HtmId, Trixel, MAX_DEPTH};
use crate::region::{Region, SimplifiedRegion};

pub const DEFAULT_MAX_DEPTH: u32 = 20;
pub const DEFAULT_RANGE_DEPTH: u32 = 21;
const MIN_DEPTH_FLOOR: u32 = 3;
const MIN_DEPTH_CEILING: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    Full,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverEntry {
    pub id: HtmId,
    pub coverage: Coverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverParams {
    pub min_depth: u32,
    pub max_depth: u32,
    pub range_depth: u32,
}

impl Default for CoverParams {
    fn default() -> Self {
        CoverParams {
            min_depth: MIN_DEPTH_FLOOR,
            max_depth: DEFAULT_MAX_DEPTH,
            range_depth: DEFAULT_RANGE_DEPTH,
        }
    }
}

impl CoverParams {
    /// Defaults with the minimum depth sized to the region: the shallowest
    /// depth whose mean trixel area is no larger than the largest patch
    /// bounding circle, kept within 3..=8.
    pub fn for_region(region: &SimplifiedRegion) -> Result<Self> {
        Ok(CoverParams {
            min_depth: default_min_depth(region)?,
            ..CoverParams::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |depth, min, max| Err(HtmError::DepthLimitExceeded { depth, min, max });
        if !(1..=MAX_DEPTH).contains(&self.range_depth) {
            return bad(self.range_depth, 1, MAX_DEPTH);
        }
        if !(1..=self.range_depth).contains(&self.max_depth) {
            return bad(self.max_depth, 1, self.range_depth);
        }
        if !(1..=self.max_depth).contains(&self.min_depth) {
            return bad(self.min_depth, 1, self.max_depth);
        }
        Ok(())
    }
}

/// Mean trixel area at `depth`, in steradians.
pub fn mean_trixel_area(depth: u32) -> f64 {
    std::f64::consts::PI / (2.0 * 4f64.powi(depth as i32 - 1))
}

pub fn default_min_depth(region: &SimplifiedRegion) -> Result<u32> {
    let mut largest: f64 = 0.0;
    for b in &region.convexes {
        if b.is_whole_sphere() {
            largest = largest.max(4.0 * std::f64::consts::PI);
        }
        for p in &b.patches {
            largest = largest.max(patch_bounding_circle(b, p)?.cap_area());
        }
    }
    Ok((MIN_DEPTH_FLOOR..=MIN_DEPTH_CEILING)
        .find(|&d| mean_trixel_area(d) <= largest)
        .unwrap_or(MIN_DEPTH_CEILING))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub entries: Vec<CoverEntry>,
    pub params: CoverParams,
}

impl Cover {
    pub fn full(&self) -> impl Iterator<Item = HtmId> + '_ {
        self.entries
            .iter()
            .filter(|e| e.coverage == Coverage::Full)
            .map(|e| e.id)
    }

    pub fn partial(&self) -> impl Iterator<Item = HtmId> + '_ {
        self.entries
            .iter()
            .filter(|e| e.coverage == Coverage::Partial)
            .map(|e| e.id)
    }

    /// Total area of the cover trixels, in steradians.
    pub fn area(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| crate::mesh::id_to_trixel(e.id).area())
            .sum()
    }

    /// The entry whose trixel holds the point at `id`'s position, if any.
    pub fn entry_for(&self, id: HtmId) -> Option<&CoverEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id || e.id.is_ancestor_of(id))
    }
}

/// Recursive descent from the base faces. Full trixels are accepted whole;
/// partial ones are split until a halting rule fires or `max_depth` is hit.
pub fn cover(region: &Region, params: &CoverParams) -> Result<Cover> {
    params.validate()?;
    let mut entries = Vec::new();
    for face in base_faces() {
        match classify_region(&face, region) {
            Classification::Inside => entries.push(CoverEntry {
                id: face.id,
                coverage: Coverage::Full,
            }),
            Classification::Partial => descend(&face, None, region, params, &mut entries),
            Classification::Outside => {}
        }
    }
    Ok(Cover {
        entries,
        params: *params,
    })
}

/// `parent_partial` is the number of partial children of `t`'s parent,
/// `t` included; base faces have none.
fn descend(
    t: &Trixel,
    parent_partial: Option<usize>,
    region: &Region,
    params: &CoverParams,
    out: &mut Vec<CoverEntry>,
) {
    let depth = t.depth();
    if depth >= params.max_depth {
        out.push(CoverEntry {
            id: t.id,
            coverage: Coverage::Partial,
        });
        return;
    }
    let children = t
        .subdivide()
        .expect("max_depth is validated against the mesh limit");
    let classes = children.map(|c| classify_region(&c, region));
    let partial = classes
        .iter()
        .filter(|&&c| c == Classification::Partial)
        .count();
    let full = classes
        .iter()
        .filter(|&&c| c == Classification::Inside)
        .count();

    let halt = partial == 4
        || full > 2
        || (partial == 3 && full == 1)
        || (depth >= params.min_depth && partial > 1 && parent_partial == Some(3));
    if halt {
        out.push(CoverEntry {
            id: t.id,
            coverage: Coverage::Partial,
        });
        return;
    }
    for (child, class) in children.iter().zip(classes) {
        match class {
            Classification::Inside => out.push(CoverEntry {
                id: child.id,
                coverage: Coverage::Full,
            }),
            Classification::Partial => descend(child, Some(partial), region, params, out),
            Classification::Outside => {}
        }
    }
}
