//! MSB-first bit writer and reader.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Append-only bit sequence. Bits fill each byte from the most significant end.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bits: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bytes: usize) -> Self {
        BitWriter { bytes: Vec::with_capacity(bytes), bits: 0 }
    }

    /// Number of bits written so far.
    pub fn bit_len(&self) -> usize {
        self.bits
    }

    #[inline]
    pub fn write_bit(&mut self, bit: bool) {
        let shift = 7 - (self.bits & 7);
        if shift == 7 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 1 << shift;
        }
        self.bits += 1;
    }

    /// Writes the low `n` bits of `value`, most significant first.
    #[inline]
    pub fn write_bits(&mut self, value: u32, n: u32) {
        debug_assert!(n <= 32);
        for i in (0..n).rev() {
            self.write_bit((value >> i) & 1 == 1);
        }
    }

    /// Pads with zero bits to a byte boundary and returns the bytes together
    /// with the exact (unpadded) bit length.
    pub fn finish(self) -> (Vec<u8>, usize) {
        (self.bytes, self.bits)
    }
}

/// Sequential reader over a byte slice. It never looks past the slice it was given.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    /// Bits consumed so far.
    pub fn position(&self) -> usize {
        self.pos
    }

    /// Bytes touched so far (partially consumed bytes included).
    pub fn bytes_touched(&self) -> usize {
        self.pos.div_ceil(8)
    }

    #[inline]
    pub fn read_bit(&mut self) -> Result<bool> {
        let byte = *self.bytes.get(self.pos >> 3).ok_or(Error::TruncatedStream)?;
        let bit = (byte >> (7 - (self.pos & 7))) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    #[inline]
    pub fn read_bits(&mut self, n: u32) -> Result<u32> {
        debug_assert!(n <= 32);
        let mut v = 0u32;
        for _ in 0..n {
            v = (v << 1) | self.read_bit()? as u32;
        }
        Ok(v)
    }
}
