//! Bit-level IO and the residual code tables.

pub mod bits;
pub mod golomb;
pub mod svo;
pub mod units;

pub use bits::{BitReader, BitWriter};
pub use golomb::{eg0_decode_signed, eg0_encode_signed};
pub use svo::{
    category_for, decode_residual, decode_unit, encode_residual, encode_unit, unit_len, Category,
    Residual,
};
pub use units::{block_units_len, decode_block_units, encode_block_units};
