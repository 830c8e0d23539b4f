use std::f64::consts::TAU;

use super::roots::{compute_roots, select_masking_circles, visibility, Root, RootFlag, Visibility};
use super::{Convex, Halfspace, Region, Sign};
use crate::error::{HtmError, Result};
use crate::vector::UnitVector;

/// Endpoint of an arc: a good root, or the westward point of a full circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcEnd {
    Root(usize),
    Westward,
}

/// Counterclockwise piece of a halfspace's boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub halfspace: usize,
    pub start: ArcEnd,
    pub end: ArcEnd,
}

impl Arc {
    pub fn is_full_circle(&self) -> bool {
        self.start == self.end
    }
}

/// Closed loop of arcs bounding one connected piece of a convex (or one side
/// of a hole).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Patch {
    pub arcs: Vec<Arc>,
}

/// Azimuth of `r` around the halfspace normal, increasing counterclockwise.
pub fn lateral_angle(h: &Halfspace, r: UnitVector) -> f64 {
    let (w, u) = h.frame();
    w.dot(r).atan2(u.dot(r))
}

/// Builds arcs from the good roots. Each root ends an arc of its first parent
/// and starts an arc of its second; along one circle, every starting root
/// connects to the next ending root counterclockwise.
pub fn assemble_arcs(c: &Convex, roots: &[Root]) -> Vec<Arc> {
    let hs = c.halfspaces();
    let mut arcs = Vec::new();
    for (h, half) in hs.iter().enumerate() {
        // (azimuth, root index, starts an arc here)
        let mut on_circle: Vec<(f64, usize, bool)> = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.flag == RootFlag::Good && (r.parents.0 == h || r.parents.1 == h))
            .map(|(i, r)| (lateral_angle(half, r.position), i, r.parents.1 == h))
            .collect();
        match on_circle.len() {
            0 => {}
            1 => {
                let r = ArcEnd::Root(on_circle[0].1);
                arcs.push(Arc {
                    halfspace: h,
                    start: r,
                    end: r,
                });
            }
            n => {
                on_circle.sort_by(|a, b| a.0.total_cmp(&b.0));
                for k in 0..n {
                    if !on_circle[k].2 {
                        continue;
                    }
                    let next_end = (1..=n).map(|s| on_circle[(k + s) % n]).find(|e| !e.2);
                    if let Some(end) = next_end {
                        arcs.push(Arc {
                            halfspace: h,
                            start: ArcEnd::Root(on_circle[k].1),
                            end: ArcEnd::Root(end.1),
                        });
                    }
                }
            }
        }
    }
    arcs
}

/// Chains rooted arcs into loops, starting each loop at the smallest remaining
/// root id. Rootless bounding circles come first and rootless holes last, each
/// as a single full-circle patch.
pub fn assemble_patches(arcs: &[Arc], bounding: &[usize], holes: &[usize]) -> Result<Vec<Patch>> {
    let full = |h: &usize| Patch {
        arcs: vec![Arc {
            halfspace: *h,
            start: ArcEnd::Westward,
            end: ArcEnd::Westward,
        }],
    };
    let root_of = |e: ArcEnd| match e {
        ArcEnd::Root(i) => Ok(i),
        ArcEnd::Westward => Err(HtmError::MalformedBoundary(
            "rooted arc list contains a rootless endpoint".into(),
        )),
    };

    let mut patches: Vec<Patch> = bounding.iter().map(full).collect();
    let mut remaining: Vec<Arc> = arcs.to_vec();
    while !remaining.is_empty() {
        let mut first = 0;
        for (i, a) in remaining.iter().enumerate() {
            if root_of(a.start)? < root_of(remaining[first].start)? {
                first = i;
            }
        }
        let start = remaining[first].start;
        let mut loop_arcs = vec![remaining.remove(first)];
        while loop_arcs.last().unwrap().end != start {
            let want = loop_arcs.last().unwrap().end;
            let next = remaining
                .iter()
                .position(|a| a.start == want)
                .ok_or_else(|| {
                    HtmError::MalformedBoundary(format!(
                        "no arc continues from root {}",
                        root_of(want).unwrap_or(0)
                    ))
                })?;
            loop_arcs.push(remaining.remove(next));
        }
        patches.push(Patch { arcs: loop_arcs });
    }
    patches.extend(holes.iter().map(full));
    Ok(patches)
}

/// A simplified convex together with its boundary description. Root parents
/// and arc halfspace indices refer to `convex`; arc roots index `roots`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBoundary {
    pub convex: Convex,
    pub roots: Vec<Root>,
    pub arcs: Vec<Arc>,
    pub patches: Vec<Patch>,
}

impl ConvexBoundary {
    pub fn is_whole_sphere(&self) -> bool {
        self.convex.len() == 1 && self.convex.halfspaces()[0].covers_sphere()
    }

    /// Position of an arc endpoint.
    pub fn point(&self, end: ArcEnd, halfspace: usize) -> UnitVector {
        match end {
            ArcEnd::Root(i) => self.roots[i].position,
            ArcEnd::Westward => self.convex.halfspaces()[halfspace]
                .westward_point()
                .expect("boundary circles have a perimeter"),
        }
    }

    pub fn halfspace(&self, arc: &Arc) -> &Halfspace {
        &self.convex.halfspaces()[arc.halfspace]
    }
}

/// Reduces a convex to its necessary halfspaces and traces its boundary.
/// `Ok(None)` means the convex is empty.
pub fn simplify_convex(c: &Convex) -> Result<Option<ConvexBoundary>> {
    let Some(c) = c.trivial_simplify().and_then(|c| c.pairwise_simplify()) else {
        return Ok(None);
    };
    let hs = c.halfspaces();
    // a cap of zero radius has no area
    if hs.iter().any(|h| h.offset >= 1.0) {
        return Ok(None);
    }
    if hs.len() == 1 && hs[0].covers_sphere() {
        return Ok(Some(ConvexBoundary {
            convex: c,
            roots: Vec::new(),
            arcs: Vec::new(),
            patches: Vec::new(),
        }));
    }

    let mut roots = compute_roots(&c);
    let mut keep = select_masking_circles(&c, &mut roots);
    let mut has_roots = vec![false; hs.len()];
    for r in &roots {
        has_roots[r.parents.0] = true;
        has_roots[r.parents.1] = true;
    }

    let mut bounding = Vec::new();
    let mut holes = Vec::new();
    for h in (0..hs.len()).filter(|&h| !has_roots[h]) {
        let visible = visibility(&c, h) == Visibility::Inside;
        if hs[h].sign() == Sign::Negative {
            keep[h] = visible;
            if visible {
                holes.push(h);
            }
        } else {
            keep[h] = true;
            if visible {
                bounding.push(h);
            }
        }
    }

    let any_good = roots.iter().any(|r| r.flag == RootFlag::Good);
    if !any_good && bounding.is_empty() && holes.is_empty() {
        return Ok(None);
    }

    let arcs = assemble_arcs(&c, &roots);
    let patches = assemble_patches(&arcs, &bounding, &holes)?;

    // renumber halfspaces and good roots into the reduced convex
    let mut new_index = vec![usize::MAX; hs.len()];
    let mut kept = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        if keep[i] {
            new_index[i] = kept.len();
            kept.push(*h);
        }
    }
    let mut new_root = vec![usize::MAX; roots.len()];
    let mut good = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        if r.flag == RootFlag::Good {
            new_root[i] = good.len();
            good.push(Root {
                parents: (new_index[r.parents.0], new_index[r.parents.1]),
                ..*r
            });
        }
    }
    let remap_end = |e: ArcEnd| match e {
        ArcEnd::Root(i) => ArcEnd::Root(new_root[i]),
        ArcEnd::Westward => ArcEnd::Westward,
    };
    let remap = |a: &Arc| Arc {
        halfspace: new_index[a.halfspace],
        start: remap_end(a.start),
        end: remap_end(a.end),
    };

    Ok(Some(ConvexBoundary {
        // `kept` preserves the arcangle order, so no re-sort happens here
        convex: Convex::new(kept),
        roots: good,
        arcs: arcs.iter().map(remap).collect(),
        patches: patches
            .iter()
            .map(|p| Patch {
                arcs: p.arcs.iter().map(remap).collect(),
            })
            .collect(),
    }))
}

/// A region whose convexes have been simplified; empty convexes are gone.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimplifiedRegion {
    pub convexes: Vec<ConvexBoundary>,
}

impl SimplifiedRegion {
    pub fn region(&self) -> Region {
        Region::new(self.convexes.iter().map(|b| b.convex.clone()).collect())
    }

    pub fn contains(&self, p: UnitVector) -> bool {
        self.convexes.iter().any(|b| b.convex.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.convexes.is_empty()
    }
}

pub fn simplify(r: &Region) -> Result<SimplifiedRegion> {
    let mut convexes = Vec::with_capacity(r.convexes.len());
    for c in &r.convexes {
        if let Some(b) = simplify_convex(c)? {
            convexes.push(b);
        }
    }
    Ok(SimplifiedRegion { convexes })
}

/// Counterclockwise azimuth swept from `r1` to `r2` around the halfspace
/// normal, in `(0, 2π]`; coincident points span the full circle.
pub(crate) fn swept_azimuth(h: &Halfspace, r1: UnitVector, r2: UnitVector) -> f64 {
    if (r1 - r2).norm() < 1e-12 {
        return TAU;
    }
    let phi = lateral_angle(h, r2) - lateral_angle(h, r1);
    if phi <= 0.0 {
        phi + TAU
    } else {
        phi
    }
}
