//! Point catalogs indexed by HTM id: CSV ingest, range-scan queries with a
//! fine filter, cone searches and the probe/compare cost model.

mod cost;
mod index_file;

pub use cost::{
    mean_trixel_area_arcmin2, suggest_depth, CostModel, DEFAULT_COST_RATIO, FULL_SKY_ARCMIN2,
};

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::cover::{cover, to_ranges, CoverParams};
use crate::error::{HtmError, Result};
use crate::mesh::{point_to_id, HtmId, MAX_DEPTH};
use crate::region::{simplify, Convex, Halfspace, Region};
use crate::vector::UnitVector;

pub const DEFAULT_INDEX_DEPTH: u32 = 21;

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogRow {
    pub object_id: String,
    pub position: UnitVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub rows: Vec<CatalogRow>,
    pub skipped: Vec<SkippedRow>,
}

/// Reads `id,lon_deg,lat_deg` CSV. Malformed rows are collected in `skipped`
/// with their line numbers; a wrong header is an error.
pub fn ingest<R: Read>(reader: R) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_ascii_lowercase).collect();
    if header != ["id", "lon_deg", "lat_deg"] {
        return Err(HtmError::Parse {
            line: 1,
            message: format!(
                "expected header id,lon_deg,lat_deg, got {}",
                header.join(",")
            ),
        });
    }
    let mut out = Ingested::default();
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                out.skipped.push(SkippedRow {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        match parse_row(&record) {
            Ok(row) => out.rows.push(row),
            Err(reason) => out.skipped.push(SkippedRow { line, reason }),
        }
    }
    Ok(out)
}

fn parse_row(record: &csv::StringRecord) -> std::result::Result<CatalogRow, String> {
    if record.len() != 3 {
        return Err(format!("expected 3 fields, found {}", record.len()));
    }
    let number = |i: usize, name: &str| {
        record[i]
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("{name} {:?} is not a finite number", &record[i]))
    };
    let lon = number(1, "longitude")?;
    let lat = number(2, "latitude")?;
    if !(-90.0..=90.0).contains(&lat) {
        return Err(format!("latitude {lat} outside [-90, 90]"));
    }
    if record[0].is_empty() {
        return Err("empty object id".into());
    }
    Ok(CatalogRow {
        object_id: record[0].to_string(),
        position: UnitVector::from_lonlat_deg(lon, lat),
    })
}

pub fn ingest_path(path: impl AsRef<Path>) -> Result<Ingested> {
    ingest(File::open(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub object_id: String,
    pub position: UnitVector,
    pub htm_id: HtmId,
}

/// Catalog sorted by (HTM id, object id) for range scans.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedCatalog {
    depth: u32,
    entries: Vec<CatalogEntry>,
    density: f64,
}

pub fn build_index(rows: Vec<CatalogRow>, depth: u32) -> Result<IndexedCatalog> {
    if !(1..=MAX_DEPTH).contains(&depth) {
        return Err(HtmError::DepthLimitExceeded {
            depth,
            min: 1,
            max: MAX_DEPTH,
        });
    }
    let mut entries = rows
        .into_iter()
        .map(|r| {
            Ok(CatalogEntry {
                htm_id: point_to_id(r.position, depth)?,
                object_id: r.object_id,
                position: r.position,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| {
        a.htm_id
            .cmp(&b.htm_id)
            .then_with(|| a.object_id.cmp(&b.object_id))
    });
    let density = entries.len() as f64 / FULL_SKY_ARCMIN2;
    Ok(IndexedCatalog {
        depth,
        entries,
        density,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryOptions {
    pub max_ranges: usize,
    /// Cover depth limit; defaults to the cost model's suggestion.
    pub max_depth: Option<u32>,
    pub min_depth: Option<u32>,
    /// Overrides the measured density in the cost model.
    pub density: Option<f64>,
    pub cost_ratio: f64,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            max_ranges: usize::MAX,
            max_depth: None,
            min_depth: None,
            density: None,
            cost_ratio: DEFAULT_COST_RATIO,
        }
    }
}

/// Work done by one query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryCounters {
    /// Range probes issued against the index.
    pub ranges_scanned: usize,
    pub full_ranges: usize,
    /// Entries returned by the range scans.
    pub candidates: usize,
    /// Point-in-region tests performed.
    pub fine_tests: usize,
    pub matches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult<'a> {
    /// Matching entries ordered by object id.
    pub entries: Vec<&'a CatalogEntry>,
    pub counters: QueryCounters,
    pub cover_depth: u32,
}

impl IndexedCatalog {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Objects per square arcminute.
    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    /// Entries whose id lies in `lo..=hi`.
    pub fn scan(&self, lo: u64, hi: u64) -> &[CatalogEntry] {
        let start = self.entries.partition_point(|e| e.htm_id.value() < lo);
        let end = self.entries.partition_point(|e| e.htm_id.value() <= hi);
        &self.entries[start..end.max(start)]
    }

    pub fn cost_model(&self, opts: &QueryOptions) -> Result<CostModel> {
        let density = opts.density.unwrap_or(self.density);
        CostModel::new(opts.cost_ratio, density)
    }

    /// Cover, convert to ranges at the index depth, scan, and test only the
    /// candidates from ranges not known to lie fully inside.
    pub fn query_region(&self, region: &Region, opts: &QueryOptions) -> Result<QueryResult<'_>> {
        let simplified = simplify(region)?;
        let mut counters = QueryCounters::default();
        if simplified.is_empty() || self.entries.is_empty() {
            return Ok(QueryResult {
                entries: Vec::new(),
                counters,
                cover_depth: 0,
            });
        }
        let max_depth = match opts.max_depth {
            Some(d) => d,
            None => self.cost_model(opts)?.suggest_depth(),
        }
        .min(self.depth);
        let min_depth = match opts.min_depth {
            Some(d) => d,
            None => CoverParams::for_region(&simplified)?.min_depth,
        }
        .min(max_depth);
        let params = CoverParams {
            min_depth,
            max_depth,
            range_depth: self.depth,
        };
        let region = simplified.region();
        let ranges = to_ranges(&cover(&region, &params)?, opts.max_ranges)?;

        let mut entries = Vec::new();
        for r in &ranges.intervals {
            let found = self.scan(r.lo, r.hi);
            counters.ranges_scanned += 1;
            counters.candidates += found.len();
            if r.full {
                counters.full_ranges += 1;
                entries.extend(found.iter());
            } else {
                counters.fine_tests += found.len();
                entries.extend(found.iter().filter(|e| region.contains(e.position)));
            }
        }
        entries.sort_by(|a, b| a.object_id.cmp(&b.object_id).then(a.htm_id.cmp(&b.htm_id)));
        counters.matches = entries.len();
        Ok(QueryResult {
            entries,
            counters,
            cover_depth: max_depth,
        })
    }

    /// Objects within `radius_deg` of `center`, nearest first, with their
    /// angular distances in degrees.
    pub fn nearby(
        &self,
        center: UnitVector,
        radius_deg: f64,
        opts: &QueryOptions,
    ) -> Result<Vec<(&CatalogEntry, f64)>> {
        if !(radius_deg > 0.0 && radius_deg.is_finite()) {
            return Err(HtmError::InvalidRadius(radius_deg));
        }
        let cap = Halfspace::cap(center, radius_deg.to_radians());
        let found = self.query_region(&Region::from_convex(Convex::new(vec![cap])), opts)?;
        let mut out: Vec<(&CatalogEntry, f64)> = found
            .entries
            .into_iter()
            .map(|e| (e, angular_distance(center, e.position).to_degrees()))
            .collect();
        out.sort_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then_with(|| a.0.object_id.cmp(&b.0.object_id))
        });
        Ok(out)
    }
}

/// Great-circle distance from the half chord, accurate at small separations.
pub fn angular_distance(a: UnitVector, b: UnitVector) -> f64 {
    2.0 * ((a - b).norm() / 2.0).min(1.0).asin()
}

/// Nautical miles to degrees of arc.
pub fn nautical_miles_to_deg(nm: f64) -> f64 {
    nm / 60.0
}
