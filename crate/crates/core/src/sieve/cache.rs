//! Binary segment cache.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 4    | magic `b"LMSG"`                         |
//! | 4      | 1    | version (`1`)                           |
//! | 5      | 8    | `start`                                 |
//! | 13     | 8    | `len`                                   |
//! | 21     | 8    | `w`, or `0` when no truncated mask      |
//! | 29     | ..   | λ words, `ceil(len / 64)` × u64         |
//! | ..     | ..   | μ words, `ceil(len / 32)` × u64         |
//! | ..     | ..   | squarefree_w words, `ceil(len / 64)` × u64, only when `w != 0` |
//!
//! Padding bits past `len` in the final word of each array are zero.

use std::io::{Read, Write};

use super::{SieveSegment, SquarefreeMask};
use crate::error::{LabError, Result};

pub const CACHE_MAGIC: [u8; 4] = *b"LMSG";
pub const CACHE_VERSION: u8 = 1;

fn io_err(e: std::io::Error) -> LabError {
    LabError::Format(e.to_string())
}

pub fn write_segment<W: Write>(segment: &SieveSegment, mut out: W) -> Result<()> {
    out.write_all(&CACHE_MAGIC).map_err(io_err)?;
    out.write_all(&[CACHE_VERSION]).map_err(io_err)?;
    let w = segment.squarefree.as_ref().map_or(0, |s| s.w);
    for field in [segment.start, segment.len, w] {
        out.write_all(&field.to_le_bytes()).map_err(io_err)?;
    }
    let mut arrays: Vec<&[u64]> = vec![&segment.lambda, &segment.mu];
    if let Some(s) = &segment.squarefree {
        arrays.push(&s.bits);
    }
    for array in arrays {
        for word in array {
            out.write_all(&word.to_le_bytes()).map_err(io_err)?;
        }
    }
    Ok(())
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf).map_err(io_err)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_words<R: Read>(input: &mut R, count: u64) -> Result<Vec<u64>> {
    (0..count).map(|_| read_u64(input)).collect()
}

pub fn read_segment<R: Read>(mut input: R) -> Result<SieveSegment> {
    let mut header = [0u8; 5];
    input.read_exact(&mut header).map_err(io_err)?;
    if header[..4] != CACHE_MAGIC {
        return Err(LabError::Format("bad magic, expected LMSG".into()));
    }
    if header[4] != CACHE_VERSION {
        return Err(LabError::Format(format!(
            "unsupported cache version {}",
            header[4]
        )));
    }
    let start = read_u64(&mut input)?;
    let len = read_u64(&mut input)?;
    let w = read_u64(&mut input)?;
    if len == 0 || start == 0 || start.checked_add(len).is_none() {
        return Err(LabError::Format(format!("invalid range start={start} len={len}")));
    }
    let lambda = read_words(&mut input, len.div_ceil(64))?;
    let mu = read_words(&mut input, len.div_ceil(32))?;
    let squarefree = if w == 0 {
        None
    } else {
        Some(SquarefreeMask {
            w,
            bits: read_words(&mut input, len.div_ceil(64))?,
        })
    };
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing).map_err(io_err)? != 0 {
        return Err(LabError::Format("trailing bytes after segment".into()));
    }
    SieveSegment::from_parts(start, len, lambda, mu, squarefree)
}
