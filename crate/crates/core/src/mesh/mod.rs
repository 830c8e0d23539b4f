//! The octahedron-rooted hierarchical triangular mesh: trixel geometry,
//! point lookup, id/name encoding and per-depth shape statistics.

mod id;
mod stats;
mod trixel;

pub use id::{depth_of, id_to_name, name_to_id, HtmId, TrixelName, ID_MAX_DEPTH, MAX_DEPTH};
pub use stats::{for_each_trixel, mesh_stats, MeshStats, STATS_MAX_DEPTH};
pub use trixel::{base_faces, id_to_trixel, point_to_id, raw_id_to_trixel, subdivide, Trixel};
