use std::fmt;
use std::str::FromStr;

use crate::error::{HtmError, Result};

/// Deepest level representable in a 64-bit id.
pub const ID_MAX_DEPTH: u32 = 31;

/// Deepest level accepted by constructors. Below this, trixel sides approach
/// double precision resolution.
pub const MAX_DEPTH: u32 = 26;

/// `floor(log4(value))` for any non-zero value. Returns 0 for 0.
#[inline]
pub fn depth_of(value: u64) -> u32 {
    if value == 0 {
        0
    } else {
        (63 - value.leading_zeros()) / 2
    }
}

/// A bit-encoded trixel address: `10` (S) or `11` (N) followed by two bits per level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HtmId(u64);

impl HtmId {
    /// Validates the leading bit pattern and the depth cap.
    pub fn new(value: u64) -> Result<Self> {
        if value < 8 {
            return Err(HtmError::InvalidId(value));
        }
        let top = 63 - value.leading_zeros();
        if top.is_multiple_of(2) || top / 2 > MAX_DEPTH {
            return Err(HtmError::InvalidId(value));
        }
        Ok(HtmId(value))
    }

    /// Skips validation; callers guarantee a well-formed value.
    #[inline]
    pub(crate) const fn from_raw(value: u64) -> Self {
        HtmId(value)
    }

    #[inline]
    pub const fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn depth(self) -> u32 {
        depth_of(self.0)
    }

    pub fn is_north(self) -> bool {
        (self.0 >> (2 * self.depth())) & 1 == 1
    }

    /// Index 0..8 of the base face (S0..S3, N0..N3) this trixel descends from.
    pub fn base_face(self) -> usize {
        ((self.0 >> (2 * (self.depth() - 1))) - 8) as usize
    }

    pub fn parent(self) -> Option<HtmId> {
        (self.depth() > 1).then_some(HtmId(self.0 >> 2))
    }

    pub fn child(self, k: u64) -> Result<HtmId> {
        debug_assert!(k < 4);
        if self.depth() >= MAX_DEPTH {
            return Err(HtmError::DepthLimitExceeded {
                depth: self.depth() + 1,
                min: 1,
                max: MAX_DEPTH,
            });
        }
        Ok(HtmId((self.0 << 2) | k))
    }

    /// The ancestor at `depth`, or `None` if `depth` is deeper than this id.
    pub fn ancestor(self, depth: u32) -> Option<HtmId> {
        let own = self.depth();
        (depth >= 1 && depth <= own).then(|| HtmId(self.0 >> (2 * (own - depth))))
    }

    /// Whether `self` equals `other` or contains it.
    pub fn is_ancestor_of(self, other: HtmId) -> bool {
        other.ancestor(self.depth()) == Some(self)
    }

    /// Inclusive id interval covered by this trixel at `depth`; `None` when
    /// `depth` is shallower than the trixel or beyond the id width.
    pub fn range_at(self, depth: u32) -> Option<(u64, u64)> {
        if depth < self.depth() || depth > ID_MAX_DEPTH {
            return None;
        }
        let shift = 2 * (depth - self.depth());
        let lo = self.0 << shift;
        Some((lo, lo + ((1u64 << shift) - 1)))
    }

    pub fn name(self) -> TrixelName {
        let depth = self.depth();
        let mut s = String::with_capacity(depth as usize + 1);
        s.push(if self.is_north() { 'N' } else { 'S' });
        for level in (0..depth).rev() {
            let digit = (self.0 >> (2 * level)) & 3;
            s.push(char::from(b'0' + digit as u8));
        }
        TrixelName(s)
    }
}

impl fmt::Display for HtmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u64> for HtmId {
    type Error = HtmError;
    fn try_from(value: u64) -> Result<Self> {
        HtmId::new(value)
    }
}

/// Textual trixel name such as `N204130012`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrixelName(String);

impl TrixelName {
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let ok = bytes.len() >= 2
            && bytes.len() <= MAX_DEPTH as usize + 1
            && matches!(bytes[0], b'N' | b'S')
            && bytes[1..].iter().all(|b| (b'0'..=b'3').contains(b));
        if ok {
            Ok(TrixelName(text.to_owned()))
        } else {
            Err(HtmError::InvalidName(text.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn depth(&self) -> u32 {
        self.0.len() as u32 - 1
    }

    pub fn to_id(&self) -> HtmId {
        let bytes = self.0.as_bytes();
        let mut value: u64 = if bytes[0] == b'N' { 3 } else { 2 };
        for b in &bytes[1..] {
            value = (value << 2) | u64::from(b - b'0');
        }
        HtmId(value)
    }
}

impl fmt::Display for TrixelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for TrixelName {
    type Err = HtmError;
    fn from_str(s: &str) -> Result<Self> {
        TrixelName::parse(s)
    }
}

pub fn name_to_id(name: &str) -> Result<HtmId> {
    Ok(TrixelName::parse(name)?.to_id())
}

pub fn id_to_name(id: u64) -> Result<TrixelName> {
    Ok(HtmId::new(id)?.name())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_encodings() {
        assert_eq!(name_to_id("N01").unwrap().value(), 49);
        assert_eq!(name_to_id("N01").unwrap().value(), 0x31);
        assert_eq!(name_to_id("S0").unwrap().value(), 8);
        assert_eq!(depth_of(8), 1);
        assert_eq!(depth_of(49), 2);
        assert_eq!(id_to_name(49).unwrap().as_str(), "N01");
    }

    #[test]
    fn rejects_malformed_ids() {
        for bad in [0, 1, 7, 16, 31, 1 << 20] {
            assert!(HtmId::new(bad).is_err(), "{bad}");
        }
        // depth 27 is representable but above the constructor cap
        let deep = 3u64 << (2 * 27);
        assert!(HtmId::new(deep).is_err());
        assert!(HtmId::new(3u64 << (2 * 26)).is_ok());
    }

    #[test]
    fn rejects_malformed_names() {
        for bad in ["", "N", "X0", "N4", "n0", "S01a", "N0 "] {
            assert!(TrixelName::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn family_relations() {
        let n0 = HtmId::new(12).unwrap();
        let kids: Vec<u64> = (0..4).map(|k| n0.child(k).unwrap().value()).collect();
        assert_eq!(kids, vec![48, 49, 50, 51]);
        assert_eq!(HtmId::new(49).unwrap().parent(), Some(n0));
        assert!(n0.parent().is_none());
        assert_eq!(n0.range_at(2), Some((48, 51)));
        assert_eq!(n0.range_at(0), None);
        assert!(n0.is_ancestor_of(HtmId::new(49).unwrap()));
        assert!(!n0.is_ancestor_of(HtmId::new(52).unwrap()));
        assert_eq!(HtmId::new(63).unwrap().base_face(), 7);
        assert_eq!(HtmId::new(8).unwrap().base_face(), 0);
    }

    proptest! {
        #[test]
        fn name_id_round_trip(north in any::<bool>(), digits in proptest::collection::vec(0u8..4, 1..9)) {
            let mut name = String::from(if north { "N" } else { "S" });
            for d in &digits {
                name.push(char::from(b'0' + d));
            }
            let id = name_to_id(&name).unwrap();
            prop_assert_eq!(id.depth() as usize, digits.len());
            prop_assert_eq!(id.name().to_string(), name);
            prop_assert_eq!(HtmId::new(id.value()).unwrap(), id);
        }
    }
}
