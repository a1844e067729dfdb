//! Signed order-0 Exp-Golomb codes.
//!
//! Values map to code numbers positive-first (`v > 0 → 2v − 1`, `v ≤ 0 → −2v`)
//! and the code number `n` is written as `⌊log2(n+1)⌋` zeros followed by the
//! binary form of `n + 1`.

use super::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};

#[inline]
pub fn signed_to_code_num(v: i32) -> u32 {
    if v > 0 {
        (2 * v - 1) as u32
    } else {
        (-2 * v) as u32
    }
}

#[inline]
pub fn code_num_to_signed(n: u32) -> i32 {
    if n & 1 == 1 {
        n.div_ceil(2) as i32
    } else {
        -((n / 2) as i32)
    }
}

/// Length in bits of the order-0 Exp-Golomb code for `v`.
#[inline]
pub fn eg0_len(v: i32) -> usize {
    let n = signed_to_code_num(v) + 1;
    let lz = 31 - n.leading_zeros() as usize;
    2 * lz + 1
}

pub fn eg0_encode_signed(v: i32, out: &mut BitWriter) {
    let n = signed_to_code_num(v) + 1;
    let width = 32 - n.leading_zeros();
    out.write_bits(0, width - 1);
    out.write_bits(n, width);
}

pub fn eg0_decode_signed(input: &mut BitReader<'_>) -> Result<i32> {
    let mut zeros = 0u32;
    while !input.read_bit()? {
        zeros += 1;
        // residuals never need more than 8 leading zeros; anything past 31 cannot fit u32
        if zeros > 31 {
            return Err(Error::InvalidCode);
        }
    }
    let info = input.read_bits(zeros)?;
    let n = ((1u64 << zeros) | info as u64) - 1;
    if n > i32::MAX as u64 {
        return Err(Error::InvalidCode);
    }
    Ok(code_num_to_signed(n as u32))
}
