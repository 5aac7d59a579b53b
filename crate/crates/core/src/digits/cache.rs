//! The `SGND` digit cache file.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "SGND" | version u8 = 1 | base u16 | id_len u8 | id (UTF-8)
//!        | count u64 | count digit bytes | crc32 of everything before
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use super::{DigitBlock, MAX_BASE, MIN_BASE};

const MAGIC: &[u8; 4] = b"SGND";
const VERSION: u8 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CacheError {
    #[error("not a digit cache (bad magic)")]
    BadMagic,
    #[error("unsupported cache version {0}")]
    UnsupportedVersion(u8),
    #[error("cache file truncated")]
    Truncated,
    #[error("cache base {0} outside 2..=256")]
    BadBase(u16),
    #[error("constant identifier is not valid UTF-8 or longer than 255 bytes")]
    BadIdentifier,
    #[error("digit {digit} at position {position} is not below base {base}")]
    DigitOutOfRange { position: u64, digit: u8, base: u32 },
    #[error("checksum mismatch")]
    CrcMismatch,
    #[error("{0} trailing bytes after checksum")]
    TrailingBytes(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CacheError {
    fn from(e: std::io::Error) -> Self {
        CacheError::Io(e.to_string())
    }
}

/// Digits of one constant in one base, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitCache {
    pub constant_id: String,
    pub base: u32,
    pub digits: Vec<u8>,
}

impl DigitCache {
    pub fn block(&self) -> DigitBlock {
        DigitBlock {
            base: self.base,
            start: 1,
            digits: self.digits.clone(),
        }
    }

    pub fn encode(&self) -> Result<Vec<u8>, CacheError> {
        if !(MIN_BASE..=MAX_BASE).contains(&self.base) {
            return Err(CacheError::BadBase(
                self.base.min(u32::from(u16::MAX)) as u16
            ));
        }
        let id = self.constant_id.as_bytes();
        let id_len = u8::try_from(id.len()).map_err(|_| CacheError::BadIdentifier)?;
        if let Some((i, &d)) = self
            .digits
            .iter()
            .enumerate()
            .find(|(_, &d)| u32::from(d) >= self.base)
        {
            return Err(CacheError::DigitOutOfRange {
                position: 1 + i as u64,
                digit: d,
                base: self.base,
            });
        }
        let mut out = Vec::with_capacity(4 + 1 + 2 + 1 + id.len() + 8 + self.digits.len() + 4);
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&(self.base as u16).to_le_bytes());
        out.push(id_len);
        out.extend_from_slice(id);
        out.extend_from_slice(&(self.digits.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.digits);
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CacheError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(CacheError::BadMagic);
        }
        let version = r.take(1)?[0];
        if version != VERSION {
            return Err(CacheError::UnsupportedVersion(version));
        }
        let base = u16::from_le_bytes(r.take(2)?.try_into().expect("2 bytes"));
        if !(MIN_BASE..=MAX_BASE).contains(&u32::from(base)) {
            return Err(CacheError::BadBase(base));
        }
        let id_len = r.take(1)?[0] as usize;
        let constant_id = std::str::from_utf8(r.take(id_len)?)
            .map_err(|_| CacheError::BadIdentifier)?
            .to_string();
        let count = u64::from_le_bytes(r.take(8)?.try_into().expect("8 bytes"));
        let count = usize::try_from(count).map_err(|_| CacheError::Truncated)?;
        if bytes.len().saturating_sub(r.pos) < count.saturating_add(4) {
            return Err(CacheError::Truncated);
        }
        let digits = r.take(count)?.to_vec();
        let body_end = r.pos;
        let stored = u32::from_le_bytes(r.take(4)?.try_into().expect("4 bytes"));
        if r.pos != bytes.len() {
            return Err(CacheError::TrailingBytes(bytes.len() - r.pos));
        }
        if crc32fast::hash(&bytes[..body_end]) != stored {
            return Err(CacheError::CrcMismatch);
        }
        let base = u32::from(base);
        if let Some((i, &d)) = digits
            .iter()
            .enumerate()
            .find(|(_, &d)| u32::from(d) >= base)
        {
            return Err(CacheError::DigitOutOfRange {
                position: 1 + i as u64,
                digit: d,
                base,
            });
        }
        Ok(DigitCache {
            constant_id,
            base,
            digits,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CacheError> {
        let end = self.pos.checked_add(n).ok_or(CacheError::Truncated)?;
        let out = self.bytes.get(self.pos..end).ok_or(CacheError::Truncated)?;
        self.pos = end;
        Ok(out)
    }
}

pub fn read_cache(path: &Path) -> Result<DigitCache, CacheError> {
    DigitCache::decode(&fs::read(path)?)
}

/// Writes the whole file to a temporary sibling, then renames it into place.
pub fn write_cache(path: &Path, cache: &DigitCache) -> Result<(), CacheError> {
    let bytes = cache.encode()?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("cache"),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
