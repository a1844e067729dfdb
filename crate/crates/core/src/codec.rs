//! Block and frame compression pipeline.
//!
//! Bit layout of a compressed block:
//!
//! ```text
//! [0][dir bit, HVD only][first sample: 8][unit 0][unit 1]...
//! ```
//!
//! If that would not be shorter than storing the samples, the block is
//! written in escape form instead, `[1][samples row-major, 8 bits each]`. The
//! payload is zero-padded to whole bytes, so a block never takes more than its
//! raw size plus one byte.

use alloc::vec::Vec;

use crate::entropy::units::{decode_block_units, encode_block_units};
use crate::entropy::{BitReader, BitWriter, Residual};
use crate::error::{Error, Result};
use crate::frame::{tile_dims, Block, BlockGeometry, BlockSize, Frame, FrameDescriptor, Plane, SampleGrid};
use crate::predict::{predict_block, reconstruct_block, Direction, PredictorKind, ResidualBlock};

/// How compressed size is counted when computing reduction rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Accounting {
    /// Exact payload bits, ignoring per-block padding.
    ExactBits,
    /// Whole payload bytes as stored.
    ByteAligned,
}

impl Accounting {
    pub fn id(self) -> u8 {
        match self {
            Accounting::ExactBits => 0,
            Accounting::ByteAligned => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(Accounting::ExactBits),
            1 => Some(Accounting::ByteAligned),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Accounting::ExactBits => "bits",
            Accounting::ByteAligned => "bytes",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodecConfig {
    pub block_size: BlockSize,
    pub predictor: PredictorKind,
    pub accounting: Accounting,
}

impl CodecConfig {
    pub fn new(block_size: BlockSize, predictor: PredictorKind) -> Self {
        CodecConfig { block_size, predictor, accounting: Accounting::ByteAligned }
    }
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig::new(BlockSize::B8, PredictorKind::Edge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockMode {
    Compressed,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedBlock {
    pub mode: BlockMode,
    pub payload: Vec<u8>,
    /// Payload length in bits before padding.
    pub bit_length: usize,
}

impl CompressedBlock {
    /// Size under the given accounting, in bits.
    pub fn size_bits(&self, accounting: Accounting) -> usize {
        match accounting {
            Accounting::ExactBits => self.bit_length,
            Accounting::ByteAligned => self.payload.len() * 8,
        }
    }
}

pub fn encode_block<G: SampleGrid + ?Sized>(block: &G, cfg: &CodecConfig) -> CompressedBlock {
    let (w, h) = (block.width(), block.height());
    debug_assert!(w <= cfg.block_size.get() && h <= cfg.block_size.get());
    let n = w * h;
    let raw_bits = 1 + 8 * n;

    let rb = predict_block(block, cfg.predictor);
    let mut out = BitWriter::with_capacity(n + 1);
    out.write_bit(false);
    if let Some(dir) = rb.side_info {
        out.write_bit(dir.bit());
    }
    out.write_bits(rb.first_sample as u32, 8);
    encode_block_units(w, h, &rb.residuals, &mut out).expect("residual count matches block");

    if out.bit_len() < raw_bits {
        let (payload, bit_length) = out.finish();
        return CompressedBlock { mode: BlockMode::Compressed, payload, bit_length };
    }

    let mut out = BitWriter::with_capacity(n + 1);
    out.write_bit(true);
    for y in 0..h {
        for x in 0..w {
            out.write_bits(block.at(x, y) as u32, 8);
        }
    }
    let (payload, bit_length) = out.finish();
    CompressedBlock { mode: BlockMode::Raw, payload, bit_length }
}

/// Decodes a `width`×`height` block from `payload`, returning the samples and
/// the number of payload bits consumed.
pub fn decode_block_bytes(
    payload: &[u8],
    cfg: &CodecConfig,
    width: usize,
    height: usize,
) -> Result<(Block, usize)> {
    if width == 0 || height == 0 || width > cfg.block_size.get() || height > cfg.block_size.get() {
        return Err(Error::ShapeMismatch {
            expected: cfg.block_size.raw_bytes(),
            actual: width * height,
        });
    }
    let mut input = BitReader::new(payload);
    if input.read_bit()? {
        let mut samples = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            samples.push(input.read_bits(8)? as u8);
        }
        return Ok((Block::new(width, height, samples)?, input.position()));
    }
    let side_info = if cfg.predictor == PredictorKind::Hvd {
        Some(Direction::from_bit(input.read_bit()?))
    } else {
        None
    };
    let first_sample = input.read_bits(8)? as u8;
    let mut residuals = alloc::vec![0 as Residual; width * height - 1];
    decode_block_units(width, height, &mut residuals, &mut input)?;
    let rb = ResidualBlock { first_sample, residuals, side_info };
    let block = reconstruct_block(&rb, cfg.predictor, width, height)?;
    Ok((block, input.position()))
}

pub fn decode_block(cb: &CompressedBlock, cfg: &CodecConfig, geom: &BlockGeometry) -> Result<Block> {
    decode_block_bytes(&cb.payload, cfg, geom.width, geom.height).map(|(b, _)| b)
}

pub fn encode_plane(plane: &Plane, cfg: &CodecConfig) -> Vec<CompressedBlock> {
    tile_dims(plane.width(), plane.height(), cfg.block_size)
        .iter()
        .map(|g| encode_block(&plane.block(g), cfg))
        .collect()
}

pub fn decode_plane(
    blocks: &[CompressedBlock],
    cfg: &CodecConfig,
    width: usize,
    height: usize,
) -> Result<Plane> {
    let tiles = tile_dims(width, height, cfg.block_size);
    if tiles.len() != blocks.len() {
        return Err(Error::ShapeMismatch { expected: tiles.len(), actual: blocks.len() });
    }
    let mut plane = Plane::filled(width, height, 0);
    for (g, cb) in tiles.iter().zip(blocks) {
        plane.put_block(g, &decode_block(cb, cfg, g)?);
    }
    Ok(plane)
}

/// All planes of one frame, compressed block by block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedFrame {
    pub desc: FrameDescriptor,
    pub cfg: CodecConfig,
    /// Blocks per plane in Y, U, V order, each in raster tile order.
    pub planes: Vec<Vec<CompressedBlock>>,
}

impl CompressedFrame {
    /// Compressed size of plane `index` in bits under `accounting`.
    pub fn plane_bits(&self, index: usize, accounting: Accounting) -> usize {
        self.planes[index].iter().map(|b| b.size_bits(accounting)).sum()
    }

    pub fn total_bits(&self, accounting: Accounting) -> usize {
        (0..self.planes.len()).map(|i| self.plane_bits(i, accounting)).sum()
    }
}

pub fn encode_frame(frame: &Frame, cfg: &CodecConfig) -> CompressedFrame {
    CompressedFrame {
        desc: *frame.descriptor(),
        cfg: *cfg,
        planes: frame.planes().iter().map(|p| encode_plane(p, cfg)).collect(),
    }
}

pub fn decode_frame(cf: &CompressedFrame) -> Result<Frame> {
    let dims = cf.desc.plane_dims();
    if dims.len() != cf.planes.len() {
        return Err(Error::ShapeMismatch { expected: dims.len(), actual: cf.planes.len() });
    }
    let planes = dims
        .iter()
        .zip(&cf.planes)
        .map(|(&(w, h), blocks)| decode_plane(blocks, &cf.cfg, w, h))
        .collect::<Result<Vec<_>>>()?;
    Frame::from_planes(cf.desc, planes)
}
