use std::f64::consts::PI;

use crate::error::{HtmError, Result};
use crate::mesh::MAX_DEPTH;

/// Area of the whole sky in square arcminutes.
pub const FULL_SKY_ARCMIN2: f64 = 4.0 * PI * (10_800.0 / PI) * (10_800.0 / PI);

pub const DEFAULT_COST_RATIO: f64 = 5.0;

/// Mean trixel area at `depth`, in square arcminutes.
pub fn mean_trixel_area_arcmin2(depth: u32) -> f64 {
    FULL_SKY_ARCMIN2 / (8.0 * 4f64.powi(depth as i32 - 1))
}

/// Cost of an index range probe relative to one point-in-region test (`ratio`)
/// and the object density in objects per square arcminute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub ratio: f64,
    pub density: f64,
}

impl CostModel {
    pub fn new(ratio: f64, density: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite() && density > 0.0 && density.is_finite()) {
            return Err(HtmError::InvalidCostModel { ratio, density });
        }
        Ok(CostModel { ratio, density })
    }

    /// Trixel area (arcmin²) above which splitting pays for the extra probes.
    pub fn break_even_area(&self) -> f64 {
        12.0 * self.ratio / self.density
    }

    /// Deepest useful cover depth, `floor(12 − log4(R/D))` within `1..=26`.
    pub fn suggest_depth(&self) -> u32 {
        let raw = (12.0 - (self.ratio / self.density).log(4.0)).floor();
        raw.clamp(1.0, MAX_DEPTH as f64) as u32
    }
}

pub fn suggest_depth(model: &CostModel) -> u32 {
    model.suggest_depth()
}
