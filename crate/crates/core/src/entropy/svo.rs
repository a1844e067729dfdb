//! Small-value optimized VLC tables.
//!
//! Residuals are coded in units of up to 16 values that share one table. The
//! table (category) is chosen from the unit's largest magnitude and announced
//! by a prefix-free header:
//!
//! | id | header   | magnitudes |
//! |----|----------|------------|
//! | 0  | `00`     | 0          |
//! | 1  | `01`     | ≤ 1        |
//! | 2  | `10`     | ≤ 2        |
//! | 3  | `110`    | ≤ 4        |
//! | 4  | `1110`   | ≤ 8        |
//! | 5  | `11110`  | ≤ 16       |
//! | 6  | `111110` | ≤ 32       |
//! | 7  | `111111` | > 32       |
//!
//! Categories 1..=5 with bound `2^k` code zero as `k` zeros and a one, a
//! magnitude below the bound as its `k`-bit binary form plus a sign bit, and
//! the bound itself as `k + 1` zeros plus a sign bit. Category 6 keeps the
//! category-5 codes for magnitudes up to 11 and spends the spare `11xxx`
//! prefixes on 12..=31; 32 is `0000000`. Category 0 writes nothing per
//! residual and category 7 falls back to signed order-0 Exp-Golomb.
//!
//! The sign bit is 0 for positive and 1 for negative values.

use super::bits::{BitReader, BitWriter};
use super::golomb::{eg0_decode_signed, eg0_encode_signed, eg0_len};
use crate::error::{Error, Result};

/// Residual values as produced by the predictors (|v| ≤ 255).
pub type Residual = i16;

/// Maximum residuals per 4×4 unit.
pub const UNIT_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Category(u8);

const HEADERS: [(u32, u32); 8] = [
    (0b00, 2),
    (0b01, 2),
    (0b10, 2),
    (0b110, 3),
    (0b1110, 4),
    (0b11110, 5),
    (0b111110, 6),
    (0b111111, 6),
];

impl Category {
    pub const ALL: [Category; 8] = [
        Category(0),
        Category(1),
        Category(2),
        Category(3),
        Category(4),
        Category(5),
        Category(6),
        Category(7),
    ];

    pub fn from_id(id: u8) -> Option<Self> {
        (id < 8).then_some(Category(id))
    }

    pub fn id(self) -> u8 {
        self.0
    }

    /// Header code as (bits, length).
    pub fn header(self) -> (u32, u32) {
        HEADERS[self.0 as usize]
    }

    /// Largest magnitude the table can code; `None` for the Exp-Golomb escape.
    pub fn bound(self) -> Option<u32> {
        match self.0 {
            0 => Some(0),
            7 => None,
            id => Some(1 << (id - 1)),
        }
    }

    pub fn covers(self, magnitude: u32) -> bool {
        self.bound().is_none_or(|b| magnitude <= b)
    }
}

/// Smallest category whose range contains `max_abs`.
pub fn category_for(max_abs: u32) -> Category {
    Category(match max_abs {
        0 => 0,
        1 => 1,
        2 => 2,
        3..=4 => 3,
        5..=8 => 4,
        9..=16 => 5,
        17..=32 => 6,
        _ => 7,
    })
}

pub fn write_header(c: Category, out: &mut BitWriter) {
    let (bits, len) = c.header();
    out.write_bits(bits, len);
}

pub fn read_header(input: &mut BitReader<'_>) -> Result<Category> {
    if !input.read_bit()? {
        return Ok(Category(input.read_bit()? as u8));
    }
    if !input.read_bit()? {
        return Ok(Category(2));
    }
    let mut ones = 2u8;
    while ones < 6 {
        if !input.read_bit()? {
            return Ok(Category(ones + 1));
        }
        ones += 1;
    }
    Ok(Category(7))
}

/// Length in bits of the code for `v` under category `c`.
pub fn residual_len(v: i32, c: Category) -> Result<usize> {
    let m = v.unsigned_abs();
    if !c.covers(m) {
        return Err(Error::OutOfRange { value: v, bound: c.bound().unwrap_or(u32::MAX) });
    }
    Ok(match c.0 {
        0 => 0,
        6 => match m {
            0..=11 => 5,
            12..=15 => 6,
            _ => 8,
        },
        7 => eg0_len(v),
        id => {
            let k = (id - 1) as usize;
            if m == 1 << k {
                k + 2
            } else {
                k + 1
            }
        }
    })
}

pub fn encode_residual(v: i32, c: Category, out: &mut BitWriter) -> Result<()> {
    let m = v.unsigned_abs();
    if !c.covers(m) {
        return Err(Error::OutOfRange { value: v, bound: c.bound().unwrap_or(u32::MAX) });
    }
    let sign = v < 0;
    match c.0 {
        0 => {}
        6 => match m {
            0 => out.write_bits(0b00001, 5),
            1..=11 => {
                out.write_bits(m, 4);
                out.write_bit(sign);
            }
            12..=15 => {
                out.write_bits(0b110_00 | (m - 12), 5);
                out.write_bit(sign);
            }
            16..=31 => {
                out.write_bits(0b111_0000 | (m - 16), 7);
                out.write_bit(sign);
            }
            _ => {
                out.write_bits(0, 7);
                out.write_bit(sign);
            }
        },
        7 => eg0_encode_signed(v, out),
        id => {
            let k = (id - 1) as u32;
            if m == 0 {
                out.write_bits(1, k + 1);
            } else if m == 1 << k {
                out.write_bits(0, k + 1);
                out.write_bit(sign);
            } else {
                out.write_bits(m, k);
                out.write_bit(sign);
            }
        }
    }
    Ok(())
}

#[inline]
fn signed(m: u32, input: &mut BitReader<'_>) -> Result<i32> {
    Ok(if input.read_bit()? { -(m as i32) } else { m as i32 })
}

pub fn decode_residual(c: Category, input: &mut BitReader<'_>) -> Result<i32> {
    match c.0 {
        0 => Ok(0),
        6 => {
            let b = input.read_bits(4)?;
            match b {
                0 => {
                    if input.read_bit()? {
                        Ok(0)
                    } else if input.read_bits(2)? == 0 {
                        signed(32, input)
                    } else {
                        Err(Error::InvalidCode)
                    }
                }
                1..=11 => signed(b, input),
                12 | 13 => {
                    let m = 12 + ((b & 1) << 1 | input.read_bit()? as u32);
                    signed(m, input)
                }
                _ => {
                    let m = 16 + ((b & 1) << 3 | input.read_bits(3)?);
                    signed(m, input)
                }
            }
        }
        7 => eg0_decode_signed(input),
        id => {
            let k = (id - 1) as u32;
            let v = input.read_bits(k)?;
            if v != 0 {
                signed(v, input)
            } else if input.read_bit()? {
                Ok(0)
            } else {
                signed(1 << k, input)
            }
        }
    }
}

fn max_magnitude(residuals: &[Residual]) -> u32 {
    residuals.iter().map(|v| v.unsigned_abs() as u32).max().unwrap_or(0)
}

/// Writes the category header for `residuals` followed by each residual code.
pub fn encode_unit(residuals: &[Residual], out: &mut BitWriter) {
    debug_assert!(!residuals.is_empty() && residuals.len() <= UNIT_LEN);
    let c = category_for(max_magnitude(residuals));
    write_header(c, out);
    for &v in residuals {
        encode_residual(v as i32, c, out).expect("category covers unit maximum");
    }
}

/// Bit cost of [`encode_unit`] without writing anything.
pub fn unit_len(residuals: &[Residual]) -> usize {
    let c = category_for(max_magnitude(residuals));
    let body: usize = residuals
        .iter()
        .map(|&v| residual_len(v as i32, c).expect("category covers unit maximum"))
        .sum();
    c.header().1 as usize + body
}

/// Reads one unit of `out.len()` residuals.
pub fn decode_unit(out: &mut [Residual], input: &mut BitReader<'_>) -> Result<()> {
    let c = read_header(input)?;
    for slot in out.iter_mut() {
        let v = decode_residual(c, input)?;
        *slot = Residual::try_from(v).map_err(|_| Error::InvalidCode)?;
    }
    Ok(())
}
