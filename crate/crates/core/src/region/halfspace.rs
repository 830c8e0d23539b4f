use std::fmt;

use crate::error::{HtmError, Result};
use crate::vector::UnitVector;
use crate::EPS_GEOM;

/// Tolerance for recognizing duplicated or complementary halfspaces.
const SAME_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// The cap `{p : normal · p > offset}`. Negative offsets describe more than a
/// hemisphere, i.e. a hole around `-normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: UnitVector,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal`; fails on a zero or non-finite normal or offset.
    pub fn new(normal: UnitVector, offset: f64) -> Result<Self> {
        let normal = UnitVector::normalized(normal.x, normal.y, normal.z)?;
        if !offset.is_finite() {
            return Err(HtmError::DegenerateCircle(offset));
        }
        Ok(Halfspace { normal, offset })
    }

    pub(crate) const fn from_parts(normal: UnitVector, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    /// Cap of angular radius `radius` (radians) around `center`.
    pub fn cap(center: UnitVector, radius: f64) -> Self {
        Halfspace::from_parts(center.normalize(), radius.cos())
    }

    pub fn whole_sphere() -> Self {
        Halfspace::from_parts(UnitVector::Z, -1.0)
    }

    pub fn sign(&self) -> Sign {
        if self.offset > 0.0 {
            Sign::Positive
        } else if self.offset < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    /// Angular radius of the cap, `acos(offset)`.
    pub fn arcangle(&self) -> f64 {
        self.offset.clamp(-1.0, 1.0).acos()
    }

    /// Cap area `2π(1 − d)` with the offset clamped to `[-1, 1]`.
    pub fn cap_area(&self) -> f64 {
        2.0 * std::f64::consts::PI * (1.0 - self.offset.clamp(-1.0, 1.0))
    }

    #[inline]
    pub fn contains(&self, p: UnitVector) -> bool {
        self.normal.dot(p) > self.offset - EPS_GEOM
    }

    /// Signed distance of `p` from the bounding plane (positive inside).
    #[inline]
    pub fn margin(&self, p: UnitVector) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn complement(&self) -> Halfspace {
        Halfspace::from_parts(-self.normal, -self.offset)
    }

    pub fn covers_sphere(&self) -> bool {
        self.offset <= -1.0
    }

    pub(crate) fn same_as(&self, o: &Halfspace) -> bool {
        (self.normal - o.normal).norm() <= SAME_TOLERANCE
            && (self.offset - o.offset).abs() <= SAME_TOLERANCE
    }

    pub(crate) fn complements(&self, o: &Halfspace) -> bool {
        (self.normal + o.normal).norm() <= SAME_TOLERANCE
            && (self.offset + o.offset).abs() <= SAME_TOLERANCE
    }

    /// Eastward `w` and `u = w × n` unit vectors spanning the circle's plane.
    /// At the poles the longitude of the normal is taken as zero.
    pub fn frame(&self) -> (UnitVector, UnitVector) {
        let n = self.normal;
        let alpha = if n.x == 0.0 && n.y == 0.0 {
            0.0
        } else {
            n.y.atan2(n.x)
        };
        let (s, c) = alpha.sin_cos();
        let w = UnitVector::new(-s, c, 0.0);
        (w, w.cross(n))
    }

    /// The point on the boundary circle due west of the normal.
    pub fn westward_point(&self) -> Result<UnitVector> {
        if self.offset.abs() >= 1.0 {
            return Err(HtmError::DegenerateCircle(self.offset));
        }
        let (w, _) = self.frame();
        let sin_theta = (1.0 - self.offset * self.offset).sqrt();
        Ok(self.normal * self.offset - w * sin_theta)
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:.15}", self.normal, self.offset)
    }
}
