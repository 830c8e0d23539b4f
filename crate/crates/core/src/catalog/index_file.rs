//! Binary index file, all integers and floats little-endian:
//!
//! | field     | size                                   |
//! |-----------|----------------------------------------|
//! | magic     | 8 bytes, `HTMIDX01`                    |
//! | depth     | u32                                    |
//! | reserved  | u32, zero                              |
//! | count     | u64                                    |
//! | density   | f64, objects per square arcminute      |
//! | ids       | count × u64, ascending                 |
//! | positions | count × 3 × f64                        |
//! | offsets   | (count + 1) × u64 into the name blob   |
//! | names     | UTF-8 object ids, concatenated         |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{CatalogEntry, IndexedCatalog};
use crate::error::{HtmError, Result};
use crate::mesh::{HtmId, MAX_DEPTH};
use crate::vector::UnitVector;

const MAGIC: &[u8; 8] = b"HTMIDX01";

fn bad(msg: impl Into<String>) -> HtmError {
    HtmError::IndexFormat(msg.into())
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| bad("truncated file"))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

impl IndexedCatalog {
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut w = BufWriter::new(w);
        w.write_all(MAGIC)?;
        w.write_all(&self.depth.to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        w.write_all(&(self.entries.len() as u64).to_le_bytes())?;
        w.write_all(&self.density.to_le_bytes())?;
        for e in &self.entries {
            w.write_all(&e.htm_id.value().to_le_bytes())?;
        }
        for e in &self.entries {
            for c in [e.position.x, e.position.y, e.position.z] {
                w.write_all(&c.to_le_bytes())?;
            }
        }
        let mut offset = 0u64;
        w.write_all(&offset.to_le_bytes())?;
        for e in &self.entries {
            offset += e.object_id.len() as u64;
            w.write_all(&offset.to_le_bytes())?;
        }
        for e in &self.entries {
            w.write_all(e.object_id.as_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut buf = Vec::new();
        BufReader::new(r).read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut c = Cursor { buf, pos: 0 };
        if c.take(8)? != MAGIC {
            return Err(bad("not an HTM index file"));
        }
        let depth = c.u32()?;
        if !(1..=MAX_DEPTH).contains(&depth) {
            return Err(bad(format!("index depth {depth} out of range")));
        }
        c.u32()?;
        let count = usize::try_from(c.u64()?).map_err(|_| bad("entry count overflows"))?;
        let density = c.f64()?;
        // every entry needs at least 40 bytes of fixed-size data
        if count > buf.len() / 40 {
            return Err(bad("entry count exceeds file size"));
        }

        let mut ids = Vec::with_capacity(count);
        for _ in 0..count {
            let id = HtmId::new(c.u64()?).map_err(|e| bad(e.to_string()))?;
            if id.depth() != depth {
                return Err(bad(format!("id {} is not at depth {depth}", id.value())));
            }
            ids.push(id);
        }
        if ids.windows(2).any(|w| w[0] > w[1]) {
            return Err(bad("ids are not sorted"));
        }
        let mut positions = Vec::with_capacity(count);
        for _ in 0..count {
            let (x, y, z) = (c.f64()?, c.f64()?, c.f64()?);
            positions.push(UnitVector::checked(x, y, z).map_err(|e| bad(e.to_string()))?);
        }
        let mut offsets = Vec::with_capacity(count + 1);
        for _ in 0..=count {
            offsets.push(c.u64()?);
        }
        let blob = &buf[c.pos..];
        if offsets[0] != 0
            || offsets.windows(2).any(|w| w[0] > w[1])
            || offsets[count] != blob.len() as u64
        {
            return Err(bad("inconsistent name offsets"));
        }
        let mut entries = Vec::with_capacity(count);
        for i in 0..count {
            let name = std::str::from_utf8(&blob[offsets[i] as usize..offsets[i + 1] as usize])
                .map_err(|_| bad(format!("object id {i} is not UTF-8")))?;
            entries.push(CatalogEntry {
                object_id: name.to_string(),
                position: positions[i],
                htm_id: ids[i],
            });
        }
        Ok(IndexedCatalog {
            depth,
            entries,
            density,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(File::open(path)?)
    }
}
