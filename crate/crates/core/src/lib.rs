//! Hierarchical triangular mesh (HTM) indexing of the unit sphere.
//!
//! The mesh starts from the eight faces of an octahedron and splits every
//! spherical triangle (trixel) into four. Areas are described as regions:
//! unions of convexes, each an intersection of plane-bounded caps. Regions
//! are simplified, measured, covered by trixels and turned into id ranges for
//! searching a point catalog sorted by HTM id.

pub mod catalog;
pub mod cover;
pub mod error;
pub mod measure;
pub mod mesh;
pub mod region;
pub mod vector;

pub use catalog::{build_index, ingest, CatalogEntry, CostModel, IndexedCatalog, QueryOptions};
pub use cover::{cover, to_ranges, Classification, Cover, CoverParams, RangeSet};
pub use error::{HtmError, Result};
pub use measure::{convex_hull, region_area, AreaReport, HullResult};
pub use mesh::{point_to_id, HtmId, Trixel, TrixelName};
pub use region::{simplify, Convex, Halfspace, Region, SimplifiedRegion};
pub use vector::UnitVector;

/// Tolerance for plane and containment comparisons.
pub const EPS_GEOM: f64 = 1e-9;
