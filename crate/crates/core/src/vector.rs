//! Cartesian vectors on (and off) the unit sphere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{HtmError, Result};

/// Tolerance used when validating that a caller-supplied vector is unit length.
const UNIT_TOLERANCE: f64 = 1e-8;

/// A three-component vector. Most values in this crate are unit vectors, but
/// intermediate sums and cross products are not, so the type does not enforce
/// normalization; [`UnitVector::checked`] validates input that must be unit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UnitVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVector {
    pub const X: UnitVector = UnitVector::new(1.0, 0.0, 0.0);
    pub const Y: UnitVector = UnitVector::new(0.0, 1.0, 0.0);
    pub const Z: UnitVector = UnitVector::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        UnitVector { x, y, z }
    }

    /// Builds a normalized vector; fails on zero or non-finite input.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = UnitVector::new(x, y, z);
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(HtmError::InvalidVector { x, y, z });
        }
        Ok(v.scale(1.0 / n))
    }

    /// Accepts `(x, y, z)` only if it is already unit length (to 1e-8).
    pub fn checked(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = UnitVector::new(x, y, z);
        if v.is_unit() {
            Ok(v)
        } else {
            Err(HtmError::InvalidVector { x, y, z })
        }
    }

    /// Position from longitude/right ascension and latitude/declination, in degrees.
    pub fn from_lonlat_deg(lon: f64, lat: f64) -> Self {
        let (lon, lat) = (lon.to_radians(), lat.to_radians());
        let (slat, clat) = lat.sin_cos();
        let (slon, clon) = lon.sin_cos();
        UnitVector::new(clat * clon, clat * slon, slat)
    }

    /// Inverse of [`from_lonlat_deg`](Self::from_lonlat_deg); longitude in `[0, 360)`.
    pub fn to_lonlat_deg(self) -> (f64, f64) {
        let lon = self.y.atan2(self.x).to_degrees();
        let lon = if lon < 0.0 { lon + 360.0 } else { lon };
        let lat = self.z.clamp(-1.0, 1.0).asin().to_degrees();
        (lon, lat)
    }

    pub fn is_unit(self) -> bool {
        self.is_finite() && (self.norm_sq() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        UnitVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        UnitVector::new(self.x * s, self.y * s, self.z * s)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Rescales to unit length. The zero vector is returned unchanged.
    #[inline]
    pub fn normalize(self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self.scale(1.0 / n)
        }
    }

    /// Great-circle angle to `o` in radians, accurate for tiny and near-π separations.
    #[inline]
    pub fn angle_to(self, o: Self) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }

    /// Normalized midpoint of the shorter great-circle arc to `o`.
    #[inline]
    pub fn midpoint(self, o: Self) -> Self {
        (self + o).normalize()
    }

    /// Scalar triple product `(self × b) · c`.
    #[inline]
    pub fn triple(self, b: Self, c: Self) -> f64 {
        self.cross(b).dot(c)
    }

    /// Some unit vector perpendicular to `self`.
    pub fn any_perpendicular(self) -> Self {
        let helper = if self.x.abs() < 0.6 {
            UnitVector::X
        } else if self.y.abs() < 0.6 {
            UnitVector::Y
        } else {
            UnitVector::Z
        };
        self.cross(helper).normalize()
    }
}

impl Add for UnitVector {
    type Output = UnitVector;
    #[inline]
    fn add(self, o: Self) -> Self {
        UnitVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for UnitVector {
    type Output = UnitVector;
    #[inline]
    fn sub(self, o: Self) -> Self {
        UnitVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for UnitVector {
    type Output = UnitVector;
    #[inline]
    fn neg(self) -> Self {
        UnitVector::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for UnitVector {
    type Output = UnitVector;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15} {:.15} {:.15}", self.x, self.y, self.z)
    }
}
