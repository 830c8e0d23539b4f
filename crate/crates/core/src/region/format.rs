//! Line-oriented region text format.
//!
//! ```text
//! REGION
//! CONVEX
//! HALFSPACE x y z d
//! CIRCLE lon_deg lat_deg radius_deg
//! POLY lon1 lat1 lon2 lat2 ...
//! ```
//!
//! `#` starts a comment. Shapes appearing before any `CONVEX` line open one
//! implicitly. Boundary output is written as `PATCH k` lines, each followed by
//! `ARC halfspaceIndex x1 y1 z1 x2 y2 z2` lines.

use std::fmt::Write as _;

use super::{polygon, Convex, Halfspace, Region, SimplifiedRegion};
use crate::error::{HtmError, Result};
use crate::vector::UnitVector;

fn parse_err(line: usize, message: impl Into<String>) -> HtmError {
    HtmError::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, tokens: &[&str]) -> Result<Vec<f64>> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("expected a finite number, got {t:?}")))
        })
        .collect()
}

pub fn parse_region(text: &str) -> Result<Region> {
    let mut convexes: Vec<Vec<Halfspace>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        let shape: Vec<Halfspace> = match keyword.to_ascii_uppercase().as_str() {
            "REGION" => {
                if !args.is_empty() {
                    return Err(parse_err(line, "REGION takes no arguments"));
                }
                continue;
            }
            "CONVEX" => {
                if !args.is_empty() {
                    return Err(parse_err(line, "CONVEX takes no arguments"));
                }
                convexes.push(Vec::new());
                continue;
            }
            "HALFSPACE" => {
                let v = numbers(line, args)?;
                if v.len() != 4 {
                    return Err(parse_err(line, "HALFSPACE needs x y z d"));
                }
                let h = Halfspace::new(UnitVector::new(v[0], v[1], v[2]), v[3])
                    .map_err(|e| parse_err(line, e.to_string()))?;
                vec![h]
            }
            "CIRCLE" => {
                let v = numbers(line, args)?;
                if v.len() != 3 {
                    return Err(parse_err(line, "CIRCLE needs lon lat radius"));
                }
                if !(-90.0..=90.0).contains(&v[1]) {
                    return Err(parse_err(line, format!("latitude {} out of range", v[1])));
                }
                vec![Halfspace::cap(
                    UnitVector::from_lonlat_deg(v[0], v[1]),
                    v[2].to_radians(),
                )]
            }
            "POLY" => {
                let v = numbers(line, args)?;
                if v.len() < 6 || v.len() % 2 != 0 {
                    return Err(parse_err(line, "POLY needs at least three lon lat pairs"));
                }
                let vertices: Vec<UnitVector> = v
                    .chunks(2)
                    .map(|p| UnitVector::from_lonlat_deg(p[0], p[1]))
                    .collect();
                for k in 0..vertices.len() {
                    let edge = vertices[k].cross(vertices[(k + 1) % vertices.len()]);
                    if edge.norm() < 1e-15 {
                        return Err(parse_err(line, format!("polygon edge {k} is degenerate")));
                    }
                }
                polygon(&vertices).halfspaces().to_vec()
            }
            other => return Err(parse_err(line, format!("unknown keyword {other:?}"))),
        };
        if convexes.is_empty() {
            convexes.push(Vec::new());
        }
        convexes.last_mut().unwrap().extend(shape);
    }
    Ok(Region::new(
        convexes
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(Convex::new)
            .collect(),
    ))
}

pub fn write_region(r: &Region) -> String {
    let mut out = String::from("REGION\n");
    for c in &r.convexes {
        out.push_str("CONVEX\n");
        for h in c.halfspaces() {
            let _ = writeln!(out, "HALFSPACE {h}");
        }
    }
    out
}

/// Boundary listing: a `CONVEX` line per convex, then its patches and arcs.
/// Patch numbers run across the whole region; halfspace indices refer to the
/// simplified convex.
pub fn write_patches(s: &SimplifiedRegion) -> String {
    let mut out = String::new();
    let mut k = 0;
    for b in &s.convexes {
        out.push_str("CONVEX\n");
        for p in &b.patches {
            let _ = writeln!(out, "PATCH {k}");
            for a in &p.arcs {
                let (r1, r2) = (b.point(a.start, a.halfspace), b.point(a.end, a.halfspace));
                let _ = writeln!(out, "ARC {} {r1} {r2}", a.halfspace);
            }
            k += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::simplify;

    #[test]
    fn round_trip() {
        let text = "# two convexes\nREGION\nCONVEX\nHALFSPACE 0 0 1 0.5\nCONVEX\nCIRCLE 90 0 10\n";
        let r = parse_region(text).unwrap();
        assert_eq!(r.convexes.len(), 2);
        let again = parse_region(&write_region(&r)).unwrap();
        for (a, b) in r.convexes.iter().zip(&again.convexes) {
            for (h, g) in a.halfspaces().iter().zip(b.halfspaces()) {
                assert!((h.normal - g.normal).norm() < 1e-14);
                assert!((h.offset - g.offset).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn implicit_convex_and_poly() {
        let r = parse_region("POLY 0 0 90 0 0 90 # octant\n").unwrap();
        assert_eq!(r.convexes.len(), 1);
        assert_eq!(r.convexes[0].len(), 3);
        assert!(r.contains(UnitVector::new(1.0, 1.0, 1.0).normalize()));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_region("CONVEX\nHALFSPACE 0 0 1\n").unwrap_err();
        assert!(matches!(err, HtmError::Parse { line: 2, .. }), "{err}");
        assert!(parse_region("BOGUS 1\n").is_err());
        assert!(parse_region("HALFSPACE 0 0 0 0.5\n").is_err());
        assert!(parse_region("CIRCLE 0 95 1\n").is_err());
    }

    #[test]
    fn empty_text_is_empty_region() {
        assert!(parse_region("# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn patch_listing() {
        let r = parse_region("CIRCLE 0 90 30\n").unwrap();
        let text = write_patches(&simplify(&r).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "CONVEX");
        assert_eq!(lines[1], "PATCH 0");
        assert!(lines[2].starts_with("ARC 0 "));
        assert_eq!(lines.len(), 3);
    }
}
