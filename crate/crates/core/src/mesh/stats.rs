use super::trixel::{base_faces, Trixel};
use crate::error::{HtmError, Result};

/// Deepest level [`mesh_stats`] will enumerate.
pub const STATS_MAX_DEPTH: u32 = 10;

/// Shape statistics over every trixel at one depth. Relative variances are
/// population standard deviation divided by the mean. Arc statistics count the
/// three sides of every trixel, so interior edges appear twice.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshStats {
    pub depth: u32,
    pub count: u64,
    pub area_min: f64,
    pub area_max: f64,
    pub area_mean: f64,
    pub area_rel_variance: f64,
    pub area_sum: f64,
    pub arc_min: f64,
    pub arc_max: f64,
    pub arc_mean: f64,
    pub arc_rel_variance: f64,
    pub max_inner_angle: f64,
    pub min_inner_angle: f64,
}

#[derive(Default)]
struct Running {
    n: u64,
    sum: f64,
    // Welford accumulators
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Running {
    fn new() -> Self {
        Running {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            ..Default::default()
        }
    }

    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    fn rel_spread(&self) -> f64 {
        (self.m2 / self.n as f64).sqrt() / self.mean
    }
}

/// Calls `visit` on every trixel at `depth`, in id order.
pub fn for_each_trixel(depth: u32, mut visit: impl FnMut(&Trixel)) {
    fn walk(t: &Trixel, remaining: u32, visit: &mut impl FnMut(&Trixel)) {
        if remaining == 0 {
            visit(t);
        } else {
            for c in t.children_unchecked() {
                walk(&c, remaining - 1, visit);
            }
        }
    }
    for f in base_faces() {
        walk(&f, depth - 1, &mut visit);
    }
}

pub fn mesh_stats(depth: u32) -> Result<MeshStats> {
    if !(1..=STATS_MAX_DEPTH).contains(&depth) {
        return Err(HtmError::DepthLimitExceeded {
            depth,
            min: 1,
            max: STATS_MAX_DEPTH,
        });
    }
    let mut area = Running::new();
    let mut arc = Running::new();
    let mut angle = Running::new();
    for_each_trixel(depth, |t| {
        let angles = t.inner_angles();
        area.push(angles.iter().sum::<f64>() - std::f64::consts::PI);
        for a in angles {
            angle.push(a);
        }
        for s in t.sides() {
            arc.push(s);
        }
    });
    Ok(MeshStats {
        depth,
        count: area.n,
        area_min: area.min,
        area_max: area.max,
        area_mean: area.mean,
        area_rel_variance: area.rel_spread(),
        area_sum: area.sum,
        arc_min: arc.min,
        arc_max: arc.max,
        arc_mean: arc.mean,
        arc_rel_variance: arc.rel_spread(),
        max_inner_angle: angle.max,
        min_inner_angle: angle.min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn depth_one_is_the_octahedron() {
        let s = mesh_stats(1).unwrap();
        assert_eq!(s.count, 8);
        assert_relative_eq!(s.area_min, PI / 2.0, epsilon = 1e-14);
        assert_relative_eq!(s.area_max, PI / 2.0, epsilon = 1e-14);
        assert_relative_eq!(s.max_inner_angle, PI / 2.0, epsilon = 1e-14);
        assert_relative_eq!(s.min_inner_angle, PI / 2.0, epsilon = 1e-14);
        assert!(s.area_rel_variance < 1e-12);
    }

    #[test]
    fn counts_follow_powers_of_four() {
        for d in 1..=6 {
            let s = mesh_stats(d).unwrap();
            assert_eq!(s.count, 8 * 4u64.pow(d - 1));
            assert_relative_eq!(s.area_sum, 4.0 * PI, max_relative = 1e-10);
        }
    }

    #[test]
    fn out_of_range_depth() {
        assert!(mesh_stats(0).is_err());
        assert!(mesh_stats(11).is_err());
    }
}
