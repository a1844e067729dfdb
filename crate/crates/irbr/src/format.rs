//! Container file format.
//!
//! ```text
//! "IRBR"            magic, 4 bytes
//! version           u8 = 1
//! bit_depth         u8
//! block_size        u8 (4, 8, 16)
//! predictor_id      u8 (0 edge, 1 hd, 2 hvd, 3 med, 4 gap)
//! accounting        u8 (0 exact bits, 1 byte aligned)
//! width             u32 LE
//! height            u32 LE
//! chroma_format     u8 (0 mono, 1 4:2:0)
//! per plane, Y U V:
//!   slot_count      u32 LE
//!   used_bytes      u16 LE × slot_count
//!   slots           slot_count × (block_size² + 1) bytes
//! ```
//!
//! Slots are stored in full, so a block's file offset is a pure function of
//! its position. A file may hold several containers back to back, one per
//! frame.

use irbr_core::store::slot_bytes;
use irbr_core::{Accounting, BlockSize, ChromaFormat, CodecConfig, Container, FrameDescriptor, PredictorKind};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"IRBR";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 18;

pub fn write_container(c: &Container, out: &mut Vec<u8>) {
    let desc = c.descriptor();
    let cfg = c.config();
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(desc.bit_depth);
    out.push(cfg.block_size.get() as u8);
    out.push(cfg.predictor.id());
    out.push(cfg.accounting.id());
    out.extend_from_slice(&(desc.width as u32).to_le_bytes());
    out.extend_from_slice(&(desc.height as u32).to_le_bytes());
    out.push(desc.chroma.id());
    for p in c.planes() {
        out.extend_from_slice(&(p.slot_count() as u32).to_le_bytes());
        for &u in p.used_bytes() {
            out.extend_from_slice(&u.to_le_bytes());
        }
        out.extend_from_slice(p.data());
    }
}

pub fn container_to_bytes(c: &Container) -> Vec<u8> {
    let mut out = Vec::new();
    write_container(c, &mut out);
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(Error::Truncated)?;
        let s = self.bytes.get(self.pos..end).ok_or(Error::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

fn corrupt(e: irbr_core::Error) -> Error {
    match e {
        irbr_core::Error::TruncatedStream => Error::Truncated,
        other => Error::Corrupt(other.to_string()),
    }
}

/// Parses one container from the front of `bytes`, returning it with the
/// number of bytes consumed.
pub fn read_container(bytes: &[u8]) -> Result<(Container, usize)> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.take(4).map_err(|_| {
        if MAGIC.starts_with(bytes) && !bytes.is_empty() {
            Error::Truncated
        } else {
            Error::BadMagic
        }
    })?;
    if magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = cur.u8()?;
    if version != VERSION {
        return Err(Error::BadVersion(version));
    }
    let bit_depth = cur.u8()?;
    let block_size =
        BlockSize::new(cur.u8()? as usize).map_err(|e| Error::Corrupt(e.to_string()))?;
    let pid = cur.u8()?;
    let predictor =
        PredictorKind::from_id(pid).ok_or_else(|| Error::Corrupt(format!("unknown predictor id {pid}")))?;
    let aid = cur.u8()?;
    let accounting =
        Accounting::from_id(aid).ok_or_else(|| Error::Corrupt(format!("unknown accounting id {aid}")))?;
    let width = cur.u32()? as usize;
    let height = cur.u32()? as usize;
    let cid = cur.u8()?;
    let chroma =
        ChromaFormat::from_id(cid).ok_or_else(|| Error::Corrupt(format!("unknown chroma format {cid}")))?;
    let desc = FrameDescriptor { width, height, chroma, bit_depth };
    desc.validate().map_err(corrupt)?;
    let cfg = CodecConfig { block_size, predictor, accounting };

    let slot = slot_bytes(block_size);
    let mut slots = Vec::with_capacity(chroma.plane_count());
    for _ in 0..chroma.plane_count() {
        let count = cur.u32()? as usize;
        let mut used = Vec::with_capacity(count.min(bytes.len() / 2));
        for _ in 0..count {
            used.push(cur.u16()?);
        }
        let data = cur.take(count.checked_mul(slot).ok_or(Error::Truncated)?)?.to_vec();
        slots.push((used, data));
    }
    let container = Container::from_slots(desc, cfg, slots).map_err(corrupt)?;
    Ok((container, cur.pos))
}

/// Parses every container in a file.
pub fn read_containers(mut bytes: &[u8]) -> Result<Vec<Container>> {
    if bytes.is_empty() {
        return Err(Error::Truncated);
    }
    let mut out = Vec::new();
    while !bytes.is_empty() {
        let (c, n) = read_container(bytes)?;
        out.push(c);
        bytes = &bytes[n..];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use irbr_core::{encode_frame, load_raw_frame, store_frame};

    fn zero_container() -> Container {
        let desc = FrameDescriptor::new(16, 16, ChromaFormat::Monochrome).unwrap();
        let f = load_raw_frame(&[0; 256], &desc).unwrap();
        store_frame(&encode_frame(&f, &CodecConfig::default())).unwrap()
    }

    #[test]
    fn header_layout_is_fixed() {
        let bytes = container_to_bytes(&zero_container());
        assert_eq!(&bytes[..4], b"IRBR");
        assert_eq!(bytes[4..9], [1, 8, 8, 0, 1]);
        assert_eq!(bytes[9..13], 16u32.to_le_bytes());
        assert_eq!(bytes[13..17], 16u32.to_le_bytes());
        assert_eq!(bytes[17], 0);
        assert_eq!(bytes[18..22], 4u32.to_le_bytes());
        assert_eq!(bytes[22..30], [3, 0, 3, 0, 3, 0, 3, 0]);
        assert_eq!(bytes.len(), HEADER_LEN + 4 + 8 + 4 * 65);
        // slot 2 sits at a fixed offset
        let slots = HEADER_LEN + 4 + 8;
        assert_eq!(bytes[slots + 2 * 65..slots + 2 * 65 + 3], [0, 0, 0]);
    }

    #[test]
    fn read_back() {
        let c = zero_container();
        let bytes = container_to_bytes(&c);
        let (back, n) = read_container(&bytes).unwrap();
        assert_eq!(n, bytes.len());
        assert_eq!(back, c);
        let mut two = bytes.clone();
        two.extend_from_slice(&bytes);
        assert_eq!(read_containers(&two).unwrap().len(), 2);
    }

    #[test]
    fn rejects_damage() {
        let bytes = container_to_bytes(&zero_container());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(read_container(&bad), Err(Error::BadMagic)));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(read_container(&bad), Err(Error::BadVersion(2))));
        assert!(matches!(read_container(&bytes[..bytes.len() - 1]), Err(Error::Truncated)));
        assert!(matches!(read_container(&bytes[..10]), Err(Error::Truncated)));
        let mut bad = bytes.clone();
        bad[7] = 9;
        assert!(matches!(read_container(&bad), Err(Error::Corrupt(_))));
        // used-bytes entry claiming fewer bytes than the payload needs
        let mut bad = bytes.clone();
        bad[22] = 1;
        assert!(matches!(read_container(&bad), Err(Error::Truncated | Error::Corrupt(_))));
    }
}
