//! Partition of a block's residuals into 4×4 coding units.
//!
//! Units are visited in raster order inside the block and residuals in raster
//! order inside each unit. The first sample of the block is not a residual, so
//! the unit covering (0, 0) carries one value fewer. Units on clipped edge
//! blocks shrink with the block.

use super::bits::{BitReader, BitWriter};
use super::svo::{decode_unit, encode_unit, unit_len, Residual, UNIT_LEN};
use crate::error::{Error, Result};

const UNIT: usize = 4;

/// Index of sample (x, y) in a raster residual list that skips (0, 0).
#[inline]
fn residual_index(width: usize, x: usize, y: usize) -> usize {
    y * width + x - 1
}

/// Calls `f` once per unit with the residual indices of that unit.
fn for_each_unit(width: usize, height: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = [0usize; UNIT_LEN];
    for uy in (0..height).step_by(UNIT) {
        for ux in (0..width).step_by(UNIT) {
            let mut n = 0;
            for y in uy..(uy + UNIT).min(height) {
                for x in ux..(ux + UNIT).min(width) {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    idx[n] = residual_index(width, x, y);
                    n += 1;
                }
            }
            if n > 0 {
                f(&idx[..n]);
            }
        }
    }
}

fn check_len(width: usize, height: usize, residuals: usize) -> Result<()> {
    let expected = width * height - 1;
    if residuals != expected {
        return Err(Error::ShapeMismatch { expected, actual: residuals });
    }
    Ok(())
}

/// Writes all units of a `width`×`height` block.
pub fn encode_block_units(
    width: usize,
    height: usize,
    residuals: &[Residual],
    out: &mut BitWriter,
) -> Result<()> {
    check_len(width, height, residuals.len())?;
    let mut buf = [0 as Residual; UNIT_LEN];
    for_each_unit(width, height, |idx| {
        for (b, &i) in buf.iter_mut().zip(idx) {
            *b = residuals[i];
        }
        encode_unit(&buf[..idx.len()], out);
    });
    Ok(())
}

/// Exact bit cost of [`encode_block_units`].
pub fn block_units_len(width: usize, height: usize, residuals: &[Residual]) -> usize {
    let mut total = 0;
    let mut buf = [0 as Residual; UNIT_LEN];
    for_each_unit(width, height, |idx| {
        for (b, &i) in buf.iter_mut().zip(idx) {
            *b = residuals[i];
        }
        total += unit_len(&buf[..idx.len()]);
    });
    total
}

/// Reads all units of a `width`×`height` block into `residuals`.
pub fn decode_block_units(
    width: usize,
    height: usize,
    residuals: &mut [Residual],
    input: &mut BitReader<'_>,
) -> Result<()> {
    check_len(width, height, residuals.len())?;
    let mut buf = [0 as Residual; UNIT_LEN];
    let mut status = Ok(());
    for_each_unit(width, height, |idx| {
        if status.is_err() {
            return;
        }
        match decode_unit(&mut buf[..idx.len()], input) {
            Ok(()) => {
                for (&b, &i) in buf.iter().zip(idx) {
                    residuals[i] = b;
                }
            }
            Err(e) => status = Err(e),
        }
    });
    status
}
