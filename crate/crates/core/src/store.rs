//! Fixed-address slot storage for compressed blocks.
//!
//! Each block owns a slot of `block_size² + 1` bytes at offset
//! `(by · blocks_x + bx) · slot_bytes` within its plane, so any block can be
//! located without an address table. The extra byte absorbs the escape flag
//! of incompressible blocks. How many bytes of each slot are actually used is
//! tracked in a side index; a reader transfers only those bytes.

use alloc::vec;
use alloc::vec::Vec;
use core::num::NonZeroUsize;

use crate::codec::{decode_block_bytes, Accounting, CodecConfig, CompressedFrame};
use crate::error::{Error, Result};
use crate::frame::{block_geometry, block_grid, Block, BlockGeometry, BlockSize, Frame, FrameDescriptor, Plane, SampleGrid};

/// Slot size in bytes for a block size.
pub fn slot_bytes(block_size: BlockSize) -> usize {
    block_size.raw_bytes() + 1
}

/// Slots of one plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotPlane {
    width: usize,
    height: usize,
    block_size: BlockSize,
    blocks_x: usize,
    blocks_y: usize,
    data: Vec<u8>,
    used: Vec<u16>,
    bits: Vec<u32>,
}

impl SlotPlane {
    fn empty(width: usize, height: usize, block_size: BlockSize) -> Self {
        let (blocks_x, blocks_y) = block_grid(width, height, block_size);
        let n = blocks_x * blocks_y;
        SlotPlane {
            width,
            height,
            block_size,
            blocks_x,
            blocks_y,
            data: vec![0; n * slot_bytes(block_size)],
            used: vec![0; n],
            bits: vec![0; n],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn block_grid(&self) -> (usize, usize) {
        (self.blocks_x, self.blocks_y)
    }

    pub fn slot_count(&self) -> usize {
        self.used.len()
    }

    /// All slots back to back, including unused tails.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// Used payload bytes per slot, raster order.
    pub fn used_bytes(&self) -> &[u16] {
        &self.used
    }

    /// Exact payload bits per slot, raster order.
    pub fn payload_bits(&self) -> &[u32] {
        &self.bits
    }

    /// Byte offset of slot (`bx`, `by`) within this plane.
    pub fn slot_offset(&self, bx: usize, by: usize) -> usize {
        (by * self.blocks_x + bx) * slot_bytes(self.block_size)
    }

    fn index(&self, bx: usize, by: usize) -> Result<usize> {
        if bx >= self.blocks_x || by >= self.blocks_y {
            return Err(Error::IndexOutOfRange);
        }
        Ok(by * self.blocks_x + bx)
    }

    /// The used bytes of one slot; nothing else is needed to decode the block.
    pub fn payload(&self, bx: usize, by: usize) -> Result<&[u8]> {
        let i = self.index(bx, by)?;
        let off = self.slot_offset(bx, by);
        Ok(&self.data[off..off + self.used[i] as usize])
    }

    pub fn geometry(&self, bx: usize, by: usize) -> BlockGeometry {
        block_geometry(self.width, self.height, self.block_size, bx, by)
    }

    fn raw_bytes(&self) -> usize {
        self.width * self.height
    }

    fn used_total(&self, accounting: Accounting) -> f64 {
        match accounting {
            Accounting::ByteAligned => self.used.iter().map(|&u| u as f64).sum(),
            Accounting::ExactBits => self.bits.iter().map(|&b| b as f64).sum::<f64>() / 8.0,
        }
    }
}

/// Bytes moved by a region read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AccessStats {
    /// What an uncompressed store would transfer for the touched blocks.
    pub raw_bytes: usize,
    /// Used payload bytes of the touched slots (rounded up to bursts if requested).
    pub compressed_bytes: usize,
    pub blocks_touched: usize,
}

impl core::ops::AddAssign for AccessStats {
    fn add_assign(&mut self, rhs: Self) {
        self.raw_bytes += rhs.raw_bytes;
        self.compressed_bytes += rhs.compressed_bytes;
        self.blocks_touched += rhs.blocks_touched;
    }
}

/// Rectangle in plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

/// Compressed frame laid out in fixed-address slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    desc: FrameDescriptor,
    cfg: CodecConfig,
    planes: Vec<SlotPlane>,
}

/// Copies every block of `cf` into its slot.
pub fn store_frame(cf: &CompressedFrame) -> Result<Container> {
    let dims = cf.desc.plane_dims();
    if dims.len() != cf.planes.len() {
        return Err(Error::ShapeMismatch { expected: dims.len(), actual: cf.planes.len() });
    }
    let slot = slot_bytes(cf.cfg.block_size);
    let mut planes = Vec::with_capacity(dims.len());
    for (&(w, h), blocks) in dims.iter().zip(&cf.planes) {
        let mut sp = SlotPlane::empty(w, h, cf.cfg.block_size);
        if blocks.len() != sp.slot_count() {
            return Err(Error::ShapeMismatch { expected: sp.slot_count(), actual: blocks.len() });
        }
        for (i, cb) in blocks.iter().enumerate() {
            let used = cb.payload.len();
            if used > slot {
                return Err(Error::SlotOverflow { used, slot });
            }
            let off = i * slot;
            sp.data[off..off + used].copy_from_slice(&cb.payload);
            sp.used[i] = used as u16;
            sp.bits[i] = cb.bit_length as u32;
        }
        planes.push(sp);
    }
    Ok(Container { desc: cf.desc, cfg: cf.cfg, planes })
}

impl Container {
    /// Rebuilds a container from slot images and used-byte tables (Y, U, V
    /// order). Every slot is decoded once to validate it and recover its exact
    /// bit length.
    pub fn from_slots(
        desc: FrameDescriptor,
        cfg: CodecConfig,
        slots: Vec<(Vec<u16>, Vec<u8>)>,
    ) -> Result<Self> {
        desc.validate()?;
        let dims = desc.plane_dims();
        if dims.len() != slots.len() {
            return Err(Error::ShapeMismatch { expected: dims.len(), actual: slots.len() });
        }
        let slot = slot_bytes(cfg.block_size);
        let mut planes = Vec::with_capacity(dims.len());
        for (&(w, h), (used, data)) in dims.iter().zip(slots) {
            let mut sp = SlotPlane::empty(w, h, cfg.block_size);
            if used.len() != sp.slot_count() {
                return Err(Error::ShapeMismatch { expected: sp.slot_count(), actual: used.len() });
            }
            if data.len() != sp.data.len() {
                return Err(Error::ShapeMismatch { expected: sp.data.len(), actual: data.len() });
            }
            sp.data = data;
            sp.used = used;
            for by in 0..sp.blocks_y {
                for bx in 0..sp.blocks_x {
                    let i = by * sp.blocks_x + bx;
                    let u = sp.used[i] as usize;
                    if u > slot {
                        return Err(Error::SlotOverflow { used: u, slot });
                    }
                    let g = sp.geometry(bx, by);
                    let (_, bits) = decode_block_bytes(sp.payload(bx, by)?, &cfg, g.width, g.height)?;
                    if bits.div_ceil(8) != u {
                        return Err(Error::ShapeMismatch { expected: u, actual: bits.div_ceil(8) });
                    }
                    sp.bits[i] = bits as u32;
                }
            }
            planes.push(sp);
        }
        Ok(Container { desc, cfg, planes })
    }

    pub fn descriptor(&self) -> &FrameDescriptor {
        &self.desc
    }

    pub fn config(&self) -> &CodecConfig {
        &self.cfg
    }

    pub fn planes(&self) -> &[SlotPlane] {
        &self.planes
    }

    pub fn block_count(&self) -> usize {
        self.planes.iter().map(|p| p.slot_count()).sum()
    }

    fn plane(&self, plane_id: usize) -> Result<&SlotPlane> {
        self.planes.get(plane_id).ok_or(Error::IndexOutOfRange)
    }

    /// Decodes a single block from its slot.
    pub fn fetch_block(&self, plane_id: usize, bx: usize, by: usize) -> Result<Block> {
        let p = self.plane(plane_id)?;
        let payload = p.payload(bx, by)?;
        let g = p.geometry(bx, by);
        decode_block_bytes(payload, &self.cfg, g.width, g.height).map(|(b, _)| b)
    }

    /// Transfer cost of one block, optionally rounding the payload up to whole bursts.
    pub fn block_stats(
        &self,
        plane_id: usize,
        bx: usize,
        by: usize,
        burst: Option<NonZeroUsize>,
    ) -> Result<AccessStats> {
        let p = self.plane(plane_id)?;
        let used = p.payload(bx, by)?.len();
        let compressed_bytes = match burst {
            Some(b) => used.div_ceil(b.get()) * b.get(),
            None => used,
        };
        Ok(AccessStats { raw_bytes: p.geometry(bx, by).area(), compressed_bytes, blocks_touched: 1 })
    }

    /// Reads `rect` by decoding every slot it intersects.
    pub fn fetch_region(&self, plane_id: usize, rect: Rect) -> Result<(Plane, AccessStats)> {
        self.fetch_region_with(plane_id, rect, None)
    }

    pub fn fetch_region_with(
        &self,
        plane_id: usize,
        rect: Rect,
        burst: Option<NonZeroUsize>,
    ) -> Result<(Plane, AccessStats)> {
        let p = self.plane(plane_id)?;
        if rect.width == 0
            || rect.height == 0
            || rect.x + rect.width > p.width
            || rect.y + rect.height > p.height
        {
            return Err(Error::RectOutOfBounds);
        }
        let n = self.cfg.block_size.get();
        let mut out = Plane::filled(rect.width, rect.height, 0);
        let mut stats = AccessStats::default();
        for by in rect.y / n..=(rect.y + rect.height - 1) / n {
            for bx in rect.x / n..=(rect.x + rect.width - 1) / n {
                let block = self.fetch_block(plane_id, bx, by)?;
                stats += self.block_stats(plane_id, bx, by, burst)?;
                let g = p.geometry(bx, by);
                let x0 = g.x.max(rect.x);
                let x1 = (g.x + g.width).min(rect.x + rect.width);
                let y0 = g.y.max(rect.y);
                let y1 = (g.y + g.height).min(rect.y + rect.height);
                for y in y0..y1 {
                    for x in x0..x1 {
                        out.set(x - rect.x, y - rect.y, block.at(x - g.x, y - g.y));
                    }
                }
            }
        }
        Ok((out, stats))
    }

    /// Decodes every slot back into a frame.
    pub fn to_frame(&self) -> Result<Frame> {
        let mut planes = Vec::with_capacity(self.planes.len());
        for (id, p) in self.planes.iter().enumerate() {
            let mut plane = Plane::filled(p.width, p.height, 0);
            for by in 0..p.blocks_y {
                for bx in 0..p.blocks_x {
                    plane.put_block(&p.geometry(bx, by), &self.fetch_block(id, bx, by)?);
                }
            }
            planes.push(plane);
        }
        Frame::from_planes(self.desc, planes)
    }

    /// Uncompressed size of all planes in bytes.
    pub fn original_bytes(&self) -> usize {
        self.planes.iter().map(|p| p.raw_bytes()).sum()
    }

    /// Stored payload size in bytes (fractional under exact-bit accounting).
    pub fn compressed_bytes(&self, accounting: Accounting) -> f64 {
        self.planes.iter().map(|p| p.used_total(accounting)).sum()
    }

    /// Data reduction rate `1 − compressed / original`. Negative when the
    /// escape overhead outweighs the savings.
    pub fn drr(&self, accounting: Accounting) -> Result<f64> {
        if self.block_count() == 0 {
            return Err(Error::EmptyContainer);
        }
        Ok(1.0 - self.compressed_bytes(accounting) / self.original_bytes() as f64)
    }

    /// Reduction rate of a single plane.
    pub fn plane_drr(&self, plane_id: usize, accounting: Accounting) -> Result<f64> {
        let p = self.plane(plane_id)?;
        if p.slot_count() == 0 {
            return Err(Error::EmptyContainer);
        }
        Ok(1.0 - p.used_total(accounting) / p.raw_bytes() as f64)
    }
}

/// [`Container::drr`] under the container's own accounting mode.
pub fn container_drr(container: &Container) -> Result<f64> {
    container.drr(container.cfg.accounting)
}
