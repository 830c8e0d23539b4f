use super::{Cover, Coverage};
use crate::error::{HtmError, Result};

/// Inclusive interval of ids at the range depth. `full` is set only when every
/// id in it came from a Full cover entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdRange {
    pub lo: u64,
    pub hi: u64,
    pub full: bool,
}

impl IdRange {
    pub fn count(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, id: u64) -> bool {
        self.lo <= id && id <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeSet {
    pub depth: u32,
    pub intervals: Vec<IdRange>,
}

impl RangeSet {
    pub fn contains(&self, id: u64) -> bool {
        let i = self.intervals.partition_point(|r| r.hi < id);
        self.intervals.get(i).is_some_and(|r| r.lo <= id)
    }

    /// Number of range-depth ids covered.
    pub fn id_count(&self) -> u64 {
        self.intervals.iter().map(IdRange::count).sum()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Expands cover entries to id intervals at the cover's range depth, joins
/// adjacent intervals, then closes the smallest gaps until at most
/// `max_ranges` intervals remain.
pub fn to_ranges(cover: &Cover, max_ranges: usize) -> Result<RangeSet> {
    if max_ranges < 1 {
        return Err(HtmError::InvalidBudget(max_ranges));
    }
    let depth = cover.params.range_depth;
    let mut raw: Vec<IdRange> = Vec::with_capacity(cover.entries.len());
    for e in &cover.entries {
        let (lo, hi) = e.id.range_at(depth).ok_or(HtmError::RangeDepthTooShallow {
            range_depth: depth,
            entry_depth: e.id.depth(),
        })?;
        raw.push(IdRange {
            lo,
            hi,
            full: e.coverage == Coverage::Full,
        });
    }
    raw.sort_by_key(|r| r.lo);

    let mut merged: Vec<IdRange> = Vec::with_capacity(raw.len());
    for r in raw {
        match merged.last_mut() {
            Some(last) if last.hi + 1 == r.lo => {
                last.hi = r.hi;
                last.full &= r.full;
            }
            _ => merged.push(r),
        }
    }

    if merged.len() > max_ranges {
        let mut gaps: Vec<(u64, u64, usize)> = merged
            .windows(2)
            .enumerate()
            .map(|(i, w)| (w[1].lo - w[0].hi - 1, w[0].lo, i))
            .collect();
        gaps.sort_unstable();
        let mut close = vec![false; merged.len()];
        for &(_, _, i) in &gaps[..merged.len() - max_ranges] {
            close[i] = true;
        }
        let mut budgeted: Vec<IdRange> = Vec::with_capacity(max_ranges);
        let mut joining = false;
        for (i, r) in merged.iter().enumerate() {
            if joining {
                let last = budgeted.last_mut().unwrap();
                last.hi = r.hi;
                // the gap ids are overshoot, never Full
                last.full = false;
            } else {
                budgeted.push(*r);
            }
            joining = close[i];
        }
        merged = budgeted;
    }
    Ok(RangeSet {
        depth,
        intervals: merged,
    })
}
