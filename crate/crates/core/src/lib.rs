//! Lossless block recompression for reference frame storage.
//!
//! Frames are split into independent square blocks. Each block is predicted
//! pixel by pixel from its own causal samples, the residuals are coded with
//! small-value optimized VLC tables in 4×4 units, and the result lands in a
//! fixed-size slot whose address depends only on the block position.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod entropy;
pub mod error;
pub mod frame;
pub mod predict;
pub mod codec;
pub mod store;

pub use error::{Error, Result};

pub use codec::{
    decode_block, decode_frame, decode_plane, encode_block, encode_frame, encode_plane, Accounting,
    BlockMode, CodecConfig, CompressedBlock, CompressedFrame,
};
pub use frame::{
    load_raw_frame, tile_plane, Block, BlockGeometry, BlockSize, ChromaFormat, Frame, FrameDescriptor,
    Plane, SampleGrid,
};
pub use predict::{predict_block, reconstruct_block, PredictorKind, ResidualBlock};
pub use store::{container_drr, store_frame, AccessStats, Container, Rect};
