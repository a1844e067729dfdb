//! Frame, plane and block-tiling geometry.
//!
//! Planes are row-major grids of 8-bit samples. A frame is one luma plane,
//! optionally followed by two half-resolution chroma planes (I420 order).
//! Tiling partitions a plane into square blocks in raster order; blocks on
//! the right and bottom edges are clipped to the plane instead of padded.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Sample bit depth supported by this version of the codec.
pub const BIT_DEPTH: u8 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChromaFormat {
    Monochrome,
    Yuv420,
}

impl ChromaFormat {
    pub fn plane_count(self) -> usize {
        match self {
            ChromaFormat::Monochrome => 1,
            ChromaFormat::Yuv420 => 3,
        }
    }

    pub fn id(self) -> u8 {
        match self {
            ChromaFormat::Monochrome => 0,
            ChromaFormat::Yuv420 => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(ChromaFormat::Monochrome),
            1 => Some(ChromaFormat::Yuv420),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameDescriptor {
    pub width: usize,
    pub height: usize,
    pub chroma: ChromaFormat,
    pub bit_depth: u8,
}

impl FrameDescriptor {
    pub fn new(width: usize, height: usize, chroma: ChromaFormat) -> Result<Self> {
        let desc = FrameDescriptor { width, height, chroma, bit_depth: BIT_DEPTH };
        desc.validate()?;
        Ok(desc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidDescriptor("width and height must be at least 1"));
        }
        if self.bit_depth != BIT_DEPTH {
            return Err(Error::InvalidDescriptor("only 8-bit samples are supported"));
        }
        if self.chroma == ChromaFormat::Yuv420 && (self.width % 2 != 0 || self.height % 2 != 0) {
            return Err(Error::InvalidDescriptor("4:2:0 requires even width and height"));
        }
        Ok(())
    }

    /// Dimensions of each plane in I420 order.
    pub fn plane_dims(&self) -> Vec<(usize, usize)> {
        match self.chroma {
            ChromaFormat::Monochrome => vec![(self.width, self.height)],
            ChromaFormat::Yuv420 => {
                let c = (self.width / 2, self.height / 2);
                vec![(self.width, self.height), c, c]
            }
        }
    }

    /// Size of one frame in planar bytes.
    pub fn frame_bytes(&self) -> usize {
        self.plane_dims().iter().map(|(w, h)| w * h).sum()
    }
}

/// Row-major grid of 8-bit samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Plane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if samples.len() != width * height {
            return Err(Error::SizeMismatch { expected: width * height, actual: samples.len() });
        }
        Ok(Plane { width, height, samples })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Plane { width, height, samples: vec![value; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.samples[y * self.width + x] = v;
    }

    /// Copies the samples covered by `geom` into an owned block.
    pub fn block(&self, geom: &BlockGeometry) -> Block {
        let mut samples = Vec::with_capacity(geom.width * geom.height);
        for y in geom.y..geom.y + geom.height {
            let row = y * self.width;
            samples.extend_from_slice(&self.samples[row + geom.x..row + geom.x + geom.width]);
        }
        Block { width: geom.width, height: geom.height, samples }
    }

    /// Writes `block` back at the position described by `geom`.
    pub fn put_block(&mut self, geom: &BlockGeometry, block: &Block) {
        debug_assert_eq!((block.width, block.height), (geom.width, geom.height));
        for (dy, src) in block.samples.chunks_exact(block.width).enumerate() {
            let row = (geom.y + dy) * self.width + geom.x;
            self.samples[row..row + block.width].copy_from_slice(src);
        }
    }
}

/// A frame: planes in Y, U, V order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    desc: FrameDescriptor,
    planes: Vec<Plane>,
}

impl Frame {
    pub fn from_planes(desc: FrameDescriptor, planes: Vec<Plane>) -> Result<Self> {
        desc.validate()?;
        let dims = desc.plane_dims();
        if dims.len() != planes.len() {
            return Err(Error::InvalidDescriptor("plane count does not match chroma format"));
        }
        for (plane, (w, h)) in planes.iter().zip(dims) {
            if plane.width != w || plane.height != h {
                return Err(Error::InvalidDescriptor("plane dimensions do not match descriptor"));
            }
        }
        Ok(Frame { desc, planes })
    }

    pub fn descriptor(&self) -> &FrameDescriptor {
        &self.desc
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn into_planes(self) -> Vec<Plane> {
        self.planes
    }

    /// Serializes the planes back to planar bytes (I420 order for 4:2:0).
    pub fn to_planar_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.desc.frame_bytes());
        for p in &self.planes {
            out.extend_from_slice(&p.samples);
        }
        out
    }
}

/// Splits planar bytes into planes according to `desc`. No conversion is applied.
pub fn load_raw_frame(bytes: &[u8], desc: &FrameDescriptor) -> Result<Frame> {
    desc.validate()?;
    let expected = desc.frame_bytes();
    if bytes.len() != expected {
        return Err(Error::SizeMismatch { expected, actual: bytes.len() });
    }
    let mut planes = Vec::with_capacity(desc.chroma.plane_count());
    let mut rest = bytes;
    for (w, h) in desc.plane_dims() {
        let (head, tail) = rest.split_at(w * h);
        planes.push(Plane { width: w, height: h, samples: head.to_vec() });
        rest = tail;
    }
    Ok(Frame { desc: *desc, planes })
}

/// Square block edge length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSize(u8);

impl BlockSize {
    pub const B4: BlockSize = BlockSize(4);
    pub const B8: BlockSize = BlockSize(8);
    pub const B16: BlockSize = BlockSize(16);
    pub const ALL: [BlockSize; 3] = [Self::B4, Self::B8, Self::B16];

    pub fn new(n: usize) -> Result<Self> {
        match n {
            4 | 8 | 16 => Ok(BlockSize(n as u8)),
            _ => Err(Error::InvalidBlockSize(n)),
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Bytes of one uncompressed full block.
    pub fn raw_bytes(self) -> usize {
        self.get() * self.get()
    }
}

/// Position and clipped extent of one tile within a plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockGeometry {
    pub block_size: BlockSize,
    /// Origin in plane coordinates (multiples of the block size).
    pub x: usize,
    pub y: usize,
    /// Effective extent, smaller than the block size only at the right/bottom edges.
    pub width: usize,
    pub height: usize,
}

impl BlockGeometry {
    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.x + self.width && y >= self.y && y < self.y + self.height
    }
}

/// Number of blocks along each axis for a `width`×`height` plane.
pub fn block_grid(width: usize, height: usize, block_size: BlockSize) -> (usize, usize) {
    let n = block_size.get();
    (width.div_ceil(n), height.div_ceil(n))
}

/// Geometry of block (`bx`, `by`) for a plane of the given size.
pub fn block_geometry(
    width: usize,
    height: usize,
    block_size: BlockSize,
    bx: usize,
    by: usize,
) -> BlockGeometry {
    let n = block_size.get();
    let (x, y) = (bx * n, by * n);
    BlockGeometry { block_size, x, y, width: n.min(width - x), height: n.min(height - y) }
}

/// Partitions a `width`×`height` area into tiles in raster order.
pub fn tile_dims(width: usize, height: usize, block_size: BlockSize) -> Vec<BlockGeometry> {
    let (bw, bh) = block_grid(width, height, block_size);
    let mut tiles = Vec::with_capacity(bw * bh);
    for by in 0..bh {
        for bx in 0..bw {
            tiles.push(block_geometry(width, height, block_size, bx, by));
        }
    }
    tiles
}

/// Partitions `plane` into tiles of `block_size` (4, 8 or 16) in raster order.
pub fn tile_plane(plane: &Plane, block_size: usize) -> Result<Vec<BlockGeometry>> {
    let bs = BlockSize::new(block_size)?;
    Ok(tile_dims(plane.width, plane.height, bs))
}

/// Read access to a rectangular grid of samples, addressed relative to its origin.
pub trait SampleGrid {
    fn width(&self) -> usize;
    fn height(&self) -> usize;
    fn at(&self, x: usize, y: usize) -> u8;
}

/// Owned row-major block of samples with its effective dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Block {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDescriptor("block dimensions must be at least 1"));
        }
        if samples.len() != width * height {
            return Err(Error::ShapeMismatch { expected: width * height, actual: samples.len() });
        }
        Ok(Block { width, height, samples })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Block { width, height, samples: vec![value; width * height] }
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.samples[y * self.width + x] = v;
    }
}

impl SampleGrid for Block {
    #[inline]
    fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn height(&self) -> usize {
        self.height
    }

    #[inline]
    fn at(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }
}
