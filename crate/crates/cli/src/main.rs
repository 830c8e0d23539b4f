use std::fs;
use std::io::{self, BufWriter, ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use htm::catalog::{
    self, nautical_miles_to_deg, CostModel, IndexedCatalog, QueryOptions, DEFAULT_COST_RATIO,
};
use htm::cover::{cover, to_ranges, CoverParams, Coverage, DEFAULT_MAX_DEPTH, DEFAULT_RANGE_DEPTH};
use htm::measure::{convex_hull, region_area};
use htm::mesh::{id_to_trixel, mesh_stats, point_to_id, HtmId, TrixelName};
use htm::region::format::{parse_region, write_patches, write_region};
use htm::region::{simplify, Region};
use htm::UnitVector;

#[derive(Parser)]
#[command(name = "htm", version, about = "Hierarchical triangular mesh tools")]
struct Cli {
    /// Print one JSON object per line instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trixel containing a point.
    Lookup {
        #[arg(allow_negative_numbers = true)]
        lon: f64,
        #[arg(allow_negative_numbers = true)]
        lat: f64,
        #[arg(long, default_value_t = 21)]
        depth: u32,
    },
    /// Corner vectors of a trixel given by id or name.
    Vertices { trixel: String },
    /// Trixel cover of a region.
    Cover(CoverArgs),
    /// Simplified region, or its boundary patches.
    Simplify {
        #[arg(long)]
        region: PathBuf,
        #[arg(long)]
        patches: bool,
    },
    /// Area of a region.
    Area {
        #[arg(long)]
        region: PathBuf,
    },
    /// Convex hull of a CSV point list, written as a region.
    Hull {
        #[arg(long)]
        points: PathBuf,
    },
    /// Build a binary index from a CSV catalog.
    BuildIndex {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = catalog::DEFAULT_INDEX_DEPTH)]
        depth: u32,
        /// Fail if any row is malformed.
        #[arg(long)]
        strict: bool,
    },
    /// Objects of an index inside a region.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        region: PathBuf,
        #[command(flatten)]
        tuning: QueryTuning,
        /// Report probe and filter counters.
        #[arg(long)]
        counters: bool,
    },
    /// Objects of an index within a radius of a point.
    Nearby {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lon: f64,
        #[arg(long, allow_negative_numbers = true)]
        lat: f64,
        /// Radius in degrees.
        #[arg(
            long,
            conflicts_with = "radius_nm",
            required_unless_present = "radius_nm"
        )]
        radius: Option<f64>,
        /// Radius in nautical miles (one arcminute each).
        #[arg(long)]
        radius_nm: Option<f64>,
        #[command(flatten)]
        tuning: QueryTuning,
    },
    /// Shape statistics of every trixel at one depth.
    Stats {
        #[arg(long)]
        depth: u32,
    },
    /// Cover depth suggested by the probe/compare cost model.
    DepthSuggest {
        /// Cost of a range probe relative to one point-in-region test.
        #[arg(long = "r", default_value_t = DEFAULT_COST_RATIO)]
        ratio: f64,
        /// Objects per square arcminute.
        #[arg(long)]
        density: f64,
    },
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long)]
    region: PathBuf,
    /// Defaults to a value sized from the region.
    #[arg(long)]
    min_depth: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    #[arg(long, default_value_t = DEFAULT_RANGE_DEPTH)]
    range_depth: u32,
    #[arg(long)]
    max_ranges: Option<usize>,
    #[arg(long, value_enum, default_value_t = CoverFormat::Ids)]
    format: CoverFormat,
}

#[derive(Args)]
struct QueryTuning {
    #[arg(long)]
    max_ranges: Option<usize>,
    /// Defaults to the cost model's suggestion.
    #[arg(long)]
    max_depth: Option<u32>,
    /// Overrides the measured catalog density.
    #[arg(long)]
    density: Option<f64>,
}

impl QueryTuning {
    fn options(&self) -> QueryOptions {
        QueryOptions {
            max_ranges: self.max_ranges.unwrap_or(usize::MAX),
            max_depth: self.max_depth,
            density: self.density,
            ..QueryOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverFormat {
    Ids,
    Names,
    Ranges,
}

fn read_region(path: &Path) -> Result<Region> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_region(&text).with_context(|| format!("parsing {}", path.display()))
}

fn vec3(v: UnitVector) -> Value {
    json!([v.x, v.y, v.z])
}

fn parse_trixel(text: &str) -> Result<HtmId> {
    if let Ok(value) = text.parse::<u64>() {
        return Ok(HtmId::new(value)?);
    }
    Ok(TrixelName::parse(text)?.to_id())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    let json = cli.json;
    match cli.command {
        Command::Lookup { lon, lat, depth } => {
            if !(-90.0..=90.0).contains(&lat) || !lon.is_finite() {
                bail!("position ({lon}, {lat}) is not a valid longitude/latitude");
            }
            let id = point_to_id(UnitVector::from_lonlat_deg(lon, lat), depth)?;
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({"name": id.name().as_str(), "id": id.value(), "depth": depth})
                )?;
            } else {
                writeln!(out, "{} {}", id.name(), id.value())?;
            }
        }
        Command::Vertices { trixel } => {
            let id = parse_trixel(&trixel)?;
            let t = id_to_trixel(id);
            if json {
                let corners: Vec<Value> = t.vertices().into_iter().map(vec3).collect();
                writeln!(
                    out,
                    "{}",
                    json!({"name": id.name().as_str(), "id": id.value(), "vertices": corners})
                )?;
            } else {
                for v in t.vertices() {
                    writeln!(out, "{v}")?;
                }
            }
        }
        Command::Cover(args) => run_cover(args, json, out)?,
        Command::Simplify { region, patches } => {
            let s = simplify(&read_region(&region)?)?;
            if json {
                for b in &s.convexes {
                    let halfspaces: Vec<Value> = b
                        .convex
                        .halfspaces()
                        .iter()
                        .map(|h| json!([h.normal.x, h.normal.y, h.normal.z, h.offset]))
                        .collect();
                    let mut obj = json!({"halfspaces": halfspaces});
                    if patches {
                        let list: Vec<Value> = b
                            .patches
                            .iter()
                            .map(|p| {
                                let arcs: Vec<Value> = p
                                    .arcs
                                    .iter()
                                    .map(|a| {
                                        json!({
                                            "halfspace": a.halfspace,
                                            "start": vec3(b.point(a.start, a.halfspace)),
                                            "end": vec3(b.point(a.end, a.halfspace)),
                                        })
                                    })
                                    .collect();
                                Value::Array(arcs)
                            })
                            .collect();
                        obj["patches"] = Value::Array(list);
                    }
                    writeln!(out, "{obj}")?;
                }
            } else if patches {
                write!(out, "{}", write_patches(&s))?;
            } else {
                write!(out, "{}", write_region(&s.region()))?;
            }
        }
        Command::Area { region } => {
            let report = region_area(&simplify(&read_region(&region)?)?)?;
            if report.overlap_warning {
                eprintln!("warning: convexes may overlap; shared area is counted more than once");
            }
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "steradians": report.steradians,
                        "square_degrees": report.square_degrees(),
                        "overlap_warning": report.overlap_warning,
                    })
                )?;
            } else {
                writeln!(out, "{} sr", report.steradians)?;
                writeln!(out, "{} deg2", report.square_degrees())?;
            }
        }
        Command::Hull { points } => {
            let ingested = catalog::ingest_path(&points)
                .with_context(|| format!("reading {}", points.display()))?;
            for s in &ingested.skipped {
                eprintln!("line {}: {}", s.line, s.reason);
            }
            let positions: Vec<UnitVector> = ingested.rows.iter().map(|r| r.position).collect();
            let hull = convex_hull(&positions)?;
            if json {
                let vertices: Vec<Value> = hull
                    .vertices
                    .iter()
                    .map(|v| {
                        let (lon, lat) = v.to_lonlat_deg();
                        json!([lon, lat])
                    })
                    .collect();
                let halfspaces: Vec<Value> = hull
                    .convex
                    .halfspaces()
                    .iter()
                    .map(|h| json!([h.normal.x, h.normal.y, h.normal.z, h.offset]))
                    .collect();
                writeln!(
                    out,
                    "{}",
                    json!({"vertices": vertices, "halfspaces": halfspaces})
                )?;
            } else {
                write!(out, "{}", write_region(&Region::from_convex(hull.convex)))?;
            }
        }
        Command::BuildIndex {
            input,
            out: out_path,
            depth,
            strict,
        } => {
            let ingested = catalog::ingest_path(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            for s in &ingested.skipped {
                eprintln!("line {}: {}", s.line, s.reason);
            }
            if strict && !ingested.skipped.is_empty() {
                bail!(
                    "{} malformed rows; index not written",
                    ingested.skipped.len()
                );
            }
            let skipped = ingested.skipped.len();
            let index = catalog::build_index(ingested.rows, depth)?;
            index
                .save(&out_path)
                .with_context(|| format!("writing {}", out_path.display()))?;
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({"indexed": index.len(), "skipped": skipped, "depth": depth, "density": index.density()})
                )?;
            } else {
                writeln!(
                    out,
                    "indexed {} objects at depth {depth} ({skipped} skipped)",
                    index.len()
                )?;
            }
        }
        Command::Query {
            index,
            region,
            tuning,
            counters,
        } => {
            let catalog = IndexedCatalog::load(&index)
                .with_context(|| format!("loading {}", index.display()))?;
            let region = read_region(&region)?;
            let result = catalog.query_region(&region, &tuning.options())?;
            for e in &result.entries {
                if json {
                    writeln!(
                        out,
                        "{}",
                        json!({"id": e.object_id, "htm_id": e.htm_id.value()})
                    )?;
                } else {
                    writeln!(out, "{}", e.object_id)?;
                }
            }
            if counters {
                let c = result.counters;
                if json {
                    writeln!(
                        out,
                        "{}",
                        json!({"counters": {
                            "cover_depth": result.cover_depth,
                            "ranges_scanned": c.ranges_scanned,
                            "full_ranges": c.full_ranges,
                            "candidates": c.candidates,
                            "fine_tests": c.fine_tests,
                            "matches": c.matches,
                        }})
                    )?;
                } else {
                    eprintln!(
                        "cover_depth={} ranges_scanned={} full_ranges={} candidates={} fine_tests={} matches={}",
                        result.cover_depth, c.ranges_scanned, c.full_ranges, c.candidates, c.fine_tests, c.matches
                    );
                }
            }
        }
        Command::Nearby {
            index,
            lon,
            lat,
            radius,
            radius_nm,
            tuning,
        } => {
            if !(-90.0..=90.0).contains(&lat) || !lon.is_finite() {
                bail!("position ({lon}, {lat}) is not a valid longitude/latitude");
            }
            let radius = match (radius, radius_nm) {
                (Some(r), _) => r,
                (None, Some(nm)) => nautical_miles_to_deg(nm),
                (None, None) => bail!("one of --radius or --radius-nm is required"),
            };
            let catalog = IndexedCatalog::load(&index)
                .with_context(|| format!("loading {}", index.display()))?;
            let found = catalog.nearby(
                UnitVector::from_lonlat_deg(lon, lat),
                radius,
                &tuning.options(),
            )?;
            for (e, dist) in found {
                if json {
                    writeln!(out, "{}", json!({"id": e.object_id, "distance_deg": dist}))?;
                } else {
                    writeln!(out, "{} {dist}", e.object_id)?;
                }
            }
        }
        Command::Stats { depth } => {
            let s = mesh_stats(depth)?;
            let fields = [
                ("count", s.count as f64),
                ("area_min", s.area_min),
                ("area_max", s.area_max),
                ("area_mean", s.area_mean),
                ("area_rel_variance", s.area_rel_variance),
                ("area_sum", s.area_sum),
                ("arc_min", s.arc_min),
                ("arc_max", s.arc_max),
                ("arc_mean", s.arc_mean),
                ("arc_rel_variance", s.arc_rel_variance),
                ("min_inner_angle", s.min_inner_angle),
                ("max_inner_angle", s.max_inner_angle),
            ];
            if json {
                let mut obj = json!({"depth": depth});
                for (k, v) in fields {
                    obj[k] = json!(v);
                }
                obj["count"] = json!(s.count);
                writeln!(out, "{obj}")?;
            } else {
                writeln!(out, "depth {depth}")?;
                writeln!(out, "count {}", s.count)?;
                for (k, v) in &fields[1..] {
                    writeln!(out, "{k} {v}")?;
                }
            }
        }
        Command::DepthSuggest { ratio, density } => {
            let model = CostModel::new(ratio, density)?;
            let depth = model.suggest_depth();
            let trixel = catalog::mean_trixel_area_arcmin2(depth);
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "depth": depth,
                        "break_even_arcmin2": model.break_even_area(),
                        "trixel_area_arcmin2": trixel,
                    })
                )?;
            } else {
                writeln!(out, "depth {depth}")?;
                writeln!(out, "break_even_arcmin2 {}", model.break_even_area())?;
                writeln!(out, "trixel_area_arcmin2 {trixel}")?;
            }
        }
    }
    Ok(())
}

fn run_cover(args: CoverArgs, json: bool, out: &mut impl Write) -> Result<()> {
    let simplified = simplify(&read_region(&args.region)?)?;
    let min_depth = match args.min_depth {
        Some(d) => d,
        None => CoverParams::for_region(&simplified)?
            .min_depth
            .min(args.max_depth),
    };
    let params = CoverParams {
        min_depth,
        max_depth: args.max_depth,
        range_depth: args.range_depth,
    };
    let c = cover(&simplified.region(), &params)?;
    match args.format {
        CoverFormat::Ranges => {
            let ranges = to_ranges(&c, args.max_ranges.unwrap_or(usize::MAX))?;
            for r in &ranges.intervals {
                if json {
                    writeln!(out, "{}", json!({"lo": r.lo, "hi": r.hi, "full": r.full}))?;
                } else {
                    writeln!(out, "{} {}", r.lo, r.hi)?;
                }
            }
        }
        format => {
            if args.max_ranges.is_some() {
                bail!("--max-ranges applies only to --format ranges");
            }
            for e in &c.entries {
                let full = e.coverage == Coverage::Full;
                let tag = if full { "full" } else { "partial" };
                if json {
                    writeln!(
                        out,
                        "{}",
                        json!({"id": e.id.value(), "name": e.id.name().as_str(), "full": full})
                    )?;
                } else if matches!(format, CoverFormat::Names) {
                    writeln!(out, "{} {tag}", e.id.name())?;
                } else {
                    writeln!(out, "{} {tag}", e.id.value())?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = BufWriter::new(io::stdout().lock());
    let result = run(cli, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|io| io.kind() == ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
