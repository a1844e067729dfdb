//! In-block pixel predictors.
//!
//! Every predictor shares the same border rules: the first sample of a block
//! is stored raw, the rest of the first row is predicted from the left
//! neighbour and the rest of the first column from the neighbour above. Only
//! the interior differs between predictors. Neighbours that would fall outside
//! the block are replaced by the nearest in-block sample, so a block never
//! depends on anything but its own samples.
//!
//! The edge-based predictor estimates a local edge direction from the three
//! causal neighbours left (r1), above-left (r2) and above (r3):
//!
//! ```text
//!   r2 r3 r4
//!   r1 x
//! ```
//!
//! `Dy = r3 − r2`, `Dx = r1 − r2`. A steep edge (`|Dy| > 2|Dx|`) predicts from
//! above, a shallow one (`|Dy| ≤ |Dx|/2`) from the left, and diagonal edges
//! pick r4 or r2 depending on whether the components share a sign. r4 becomes
//! r3 on the block's last column.

use alloc::vec::Vec;

use crate::entropy::units::block_units_len;
use crate::entropy::Residual;
use crate::error::{Error, Result};
use crate::frame::{Block, SampleGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredictorKind {
    /// Edge-based adaptive selection among four causal neighbours.
    Edge,
    /// Horizontal DPCM.
    Hd,
    /// Horizontal or vertical DPCM, whichever codes smaller, with one signalling bit.
    Hvd,
    /// JPEG-LS median edge detector.
    Med,
    /// CALIC gradient-adjusted prediction.
    Gap,
}

impl PredictorKind {
    pub const ALL: [PredictorKind; 5] =
        [PredictorKind::Edge, PredictorKind::Hd, PredictorKind::Hvd, PredictorKind::Med, PredictorKind::Gap];

    pub fn id(self) -> u8 {
        match self {
            PredictorKind::Edge => 0,
            PredictorKind::Hd => 1,
            PredictorKind::Hvd => 2,
            PredictorKind::Med => 3,
            PredictorKind::Gap => 4,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get(id as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            PredictorKind::Edge => "edge",
            PredictorKind::Hd => "hd",
            PredictorKind::Hvd => "hvd",
            PredictorKind::Med => "med",
            PredictorKind::Gap => "gap",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(name))
    }
}

/// DPCM direction signalled per block by the HVD predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl Direction {
    pub fn bit(self) -> bool {
        self == Direction::Vertical
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Direction::Vertical
        } else {
            Direction::Horizontal
        }
    }
}

/// Causal neighbours of the sample being predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborSet {
    /// left
    pub r1: u8,
    /// above-left
    pub r2: u8,
    /// above
    pub r3: u8,
    /// above-right
    pub r4: u8,
}

/// Edge direction components; `dx` is the vertical gradient, `dy` the horizontal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeComponents {
    pub dx: i16,
    pub dy: i16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    R1,
    R2,
    R3,
    R4,
}

impl Reference {
    pub fn index(self) -> u8 {
        match self {
            Reference::R1 => 1,
            Reference::R2 => 2,
            Reference::R3 => 3,
            Reference::R4 => 4,
        }
    }
}

#[inline]
pub fn edge_components(n: &NeighborSet) -> EdgeComponents {
    EdgeComponents { dx: n.r1 as i16 - n.r2 as i16, dy: n.r3 as i16 - n.r2 as i16 }
}

#[inline]
pub fn select_reference(e: EdgeComponents) -> Reference {
    let adx = e.dx.unsigned_abs() as u32;
    let ady = e.dy.unsigned_abs() as u32;
    if ady > adx << 1 {
        Reference::R3
    } else if ady <= adx >> 1 {
        Reference::R1
    } else if (e.dx < 0) ^ (e.dy < 0) {
        Reference::R2
    } else {
        Reference::R4
    }
}

#[inline]
pub fn predict_edge(n: &NeighborSet) -> u8 {
    match select_reference(edge_components(n)) {
        Reference::R1 => n.r1,
        Reference::R2 => n.r2,
        Reference::R3 => n.r3,
        Reference::R4 => n.r4,
    }
}

#[inline]
pub fn predict_med(left: u8, above: u8, above_left: u8) -> u8 {
    let (lo, hi) = if left < above { (left, above) } else { (above, left) };
    if above_left >= hi {
        lo
    } else if above_left <= lo {
        hi
    } else {
        (left as i32 + above as i32 - above_left as i32).clamp(0, 255) as u8
    }
}

/// Seven-sample causal window used by gradient-adjusted prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapContext {
    pub w: u8,
    pub ww: u8,
    pub n: u8,
    pub nn: u8,
    pub nw: u8,
    pub ne: u8,
    pub nne: u8,
}

pub fn predict_gap(c: &GapContext) -> u8 {
    let [w, ww, n, nn, nw, ne, nne] = [c.w, c.ww, c.n, c.nn, c.nw, c.ne, c.nne].map(i32::from);
    let dh = (w - ww).abs() + (n - nw).abs() + (n - ne).abs();
    let dv = (w - nw).abs() + (n - nn).abs() + (ne - nne).abs();
    let d = dv - dh;
    let p = if d > 80 {
        w
    } else if d < -80 {
        n
    } else {
        let p = (w + n) / 2 + (ne - nw) / 4;
        if d > 32 {
            (p + w) / 2
        } else if d > 8 {
            (3 * p + w) / 4
        } else if d < -32 {
            (p + n) / 2
        } else if d < -8 {
            (3 * p + n) / 4
        } else {
            p
        }
    };
    p.clamp(0, 255) as u8
}

/// Prediction residuals of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualBlock {
    /// Sample at (0, 0), stored uncompressed.
    pub first_sample: u8,
    /// `x − prediction` for every other sample in raster order.
    pub residuals: Vec<Residual>,
    /// DPCM direction, present for HVD only.
    pub side_info: Option<Direction>,
}

#[derive(Clone, Copy)]
enum Rule {
    Edge,
    Horizontal,
    Vertical,
    Med,
    Gap,
}

impl Rule {
    fn for_kind(kind: PredictorKind, dir: Option<Direction>) -> Rule {
        match kind {
            PredictorKind::Edge => Rule::Edge,
            PredictorKind::Hd => Rule::Horizontal,
            PredictorKind::Hvd => match dir {
                Some(Direction::Vertical) => Rule::Vertical,
                _ => Rule::Horizontal,
            },
            PredictorKind::Med => Rule::Med,
            PredictorKind::Gap => Rule::Gap,
        }
    }
}

/// Prediction for (x, y) from causal samples of `g`; (x, y) ≠ (0, 0).
#[inline]
fn predict_at<G: SampleGrid + ?Sized>(g: &G, rule: Rule, x: usize, y: usize) -> u8 {
    if y == 0 {
        return g.at(x - 1, 0);
    }
    if x == 0 {
        return g.at(0, y - 1);
    }
    let last_col = g.width() - 1;
    match rule {
        Rule::Horizontal => g.at(x - 1, y),
        Rule::Vertical => g.at(x, y - 1),
        Rule::Edge => {
            let r3 = g.at(x, y - 1);
            let n = NeighborSet {
                r1: g.at(x - 1, y),
                r2: g.at(x - 1, y - 1),
                r3,
                r4: if x == last_col { r3 } else { g.at(x + 1, y - 1) },
            };
            predict_edge(&n)
        }
        Rule::Med => predict_med(g.at(x - 1, y), g.at(x, y - 1), g.at(x - 1, y - 1)),
        Rule::Gap => {
            let right = (x + 1).min(last_col);
            let ctx = GapContext {
                w: g.at(x - 1, y),
                ww: g.at(x.saturating_sub(2), y),
                n: g.at(x, y - 1),
                nn: g.at(x, y.saturating_sub(2)),
                nw: g.at(x - 1, y - 1),
                ne: g.at(right, y - 1),
                nne: g.at(right, y.saturating_sub(2)),
            };
            predict_gap(&ctx)
        }
    }
}

fn residuals_with<G: SampleGrid + ?Sized>(g: &G, rule: Rule) -> Vec<Residual> {
    let (w, h) = (g.width(), g.height());
    let mut out = Vec::with_capacity(w * h - 1);
    for y in 0..h {
        for x in 0..w {
            if x == 0 && y == 0 {
                continue;
            }
            out.push(g.at(x, y) as Residual - predict_at(g, rule, x, y) as Residual);
        }
    }
    out
}

/// Computes the prediction residuals of `block` with predictor `kind`.
///
/// For HVD both directions are tried and the one with the smaller coded size
/// is kept; ties go to horizontal.
pub fn predict_block<G: SampleGrid + ?Sized>(block: &G, kind: PredictorKind) -> ResidualBlock {
    let first_sample = block.at(0, 0);
    if kind != PredictorKind::Hvd {
        return ResidualBlock {
            first_sample,
            residuals: residuals_with(block, Rule::for_kind(kind, None)),
            side_info: None,
        };
    }
    let (w, h) = (block.width(), block.height());
    let horiz = residuals_with(block, Rule::Horizontal);
    let vert = residuals_with(block, Rule::Vertical);
    let (residuals, dir) = if block_units_len(w, h, &vert) < block_units_len(w, h, &horiz) {
        (vert, Direction::Vertical)
    } else {
        (horiz, Direction::Horizontal)
    };
    ResidualBlock { first_sample, residuals, side_info: Some(dir) }
}

/// Inverse of [`predict_block`] for a `width`×`height` block.
pub fn reconstruct_block(
    rb: &ResidualBlock,
    kind: PredictorKind,
    width: usize,
    height: usize,
) -> Result<Block> {
    let expected = (width * height).checked_sub(1).ok_or(Error::ShapeMismatch {
        expected: 1,
        actual: 0,
    })?;
    if rb.residuals.len() != expected {
        return Err(Error::ShapeMismatch { expected, actual: rb.residuals.len() });
    }
    let rule = Rule::for_kind(kind, rb.side_info);
    let mut block = Block::filled(width, height, 0);
    block.set(0, 0, rb.first_sample);
    let mut res = rb.residuals.iter();
    for y in 0..height {
        for x in 0..width {
            if x == 0 && y == 0 {
                continue;
            }
            let pred = predict_at(&block, rule, x, y) as i32;
            let v = pred + *res.next().unwrap() as i32;
            // out-of-range values only come from corrupt input; wrap like hardware would
            block.set(x, y, v as u8);
        }
    }
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::cell::Cell;
    use proptest::prelude::*;

    fn nb(r1: u8, r2: u8, r3: u8, r4: u8) -> NeighborSet {
        NeighborSet { r1, r2, r3, r4 }
    }

    #[test]
    fn edge_components_examples() {
        assert_eq!(edge_components(&nb(10, 10, 10, 0)), EdgeComponents { dx: 0, dy: 0 });
        assert_eq!(edge_components(&nb(10, 10, 20, 0)), EdgeComponents { dx: 0, dy: 10 });
        assert_eq!(edge_components(&nb(20, 10, 10, 0)), EdgeComponents { dx: 10, dy: 0 });
    }

    #[test]
    fn select_reference_examples() {
        let sel = |dx, dy| select_reference(EdgeComponents { dx, dy }).index();
        assert_eq!(sel(0, 0), 1);
        assert_eq!(sel(0, 10), 3);
        assert_eq!(sel(10, 0), 1);
        assert_eq!(sel(10, 10), 4);
        assert_eq!(sel(-10, 10), 2);
        // zero counts as non-negative for the sign test
        assert_eq!(sel(3, 0), 1);
        assert_eq!(sel(-2, 2), 2);
        assert_eq!(sel(-2, -2), 4);
    }

    #[test]
    fn predict_edge_examples() {
        assert_eq!(predict_edge(&nb(128, 128, 128, 128)), 128);
        assert_eq!(predict_edge(&nb(10, 10, 20, 30)), 20);
        assert_eq!(predict_edge(&nb(20, 10, 20, 30)), 30);
    }

    #[test]
    fn med_examples() {
        assert_eq!(predict_med(10, 10, 10), 10);
        assert_eq!(predict_med(10, 20, 5), 20);
        assert_eq!(predict_med(10, 20, 15), 15);
        assert_eq!(predict_med(10, 20, 25), 10);
    }

    fn gap(v: [u8; 7]) -> u8 {
        let [w, ww, n, nn, nw, ne, nne] = v;
        predict_gap(&GapContext { w, ww, n, nn, nw, ne, nne })
    }

    // Expected values computed with an independent scalar evaluation of the
    // CALIC cascade (truncating division, final clamp).
    #[test]
    fn gap_golden_values() {
        assert_eq!(gap([50; 7]), 50);
        // W=100, rest 0: d_h = d_v = 100, so the blend branch gives (100+0)/2
        assert_eq!(gap([100, 0, 0, 0, 0, 0, 0]), 50);
        assert_eq!(gap([10, 10, 20, 20, 10, 20, 20]), 17);
        assert_eq!(gap([0, 0, 200, 0, 0, 0, 0]), 200);
        assert_eq!(gap([0, 0, 0, 0, 255, 0, 0]), 0);
        assert_eq!(gap([255, 255, 255, 255, 0, 255, 255]), 255);
        assert_eq!(gap([60, 60, 20, 40, 40, 30, 30]), 43);
        assert_eq!(gap([100, 100, 20, 60, 40, 30, 30]), 79);
        assert_eq!(gap([100, 100, 20, 200, 40, 30, 30]), 100);
        assert_eq!(gap([30, 10, 20, 20, 25, 20, 20]), 23);
        assert_eq!(gap([30, 0, 20, 20, 25, 60, 20]), 29);
        assert_eq!(gap([7, 3, 90, 1, 50, 13, 200]), 7);
        assert_eq!(gap([40, 100, 10, 10, 30, 10, 10]), 15);
        assert_eq!(gap([41, 100, 11, 10, 30, 10, 10]), 16);
    }

    #[test]
    fn select_reference_is_total_and_exclusive() {
        // independent restatement of the four interval conditions
        for dx in -255i16..=255 {
            for dy in -255i16..=255 {
                let (ax, ay) = (dx.unsigned_abs() as u32, dy.unsigned_abs() as u32);
                let s = (dx < 0) != (dy < 0);
                let mid = (ax >> 1) < ay && ay <= (ax << 1);
                let hits = [
                    ay <= (ax >> 1),
                    mid && s,
                    ay > (ax << 1),
                    mid && !s,
                ];
                assert_eq!(hits.iter().filter(|&&h| h).count(), 1, "({dx},{dy})");
                let expected = hits.iter().position(|&h| h).unwrap() as u8 + 1;
                assert_eq!(select_reference(EdgeComponents { dx, dy }).index(), expected);
            }
        }
    }

    #[test]
    fn two_by_two_edge_trace() {
        let b = Block::new(2, 2, vec![10, 20, 30, 40]).unwrap();
        let rb = predict_block(&b, PredictorKind::Edge);
        assert_eq!(rb.first_sample, 10);
        assert_eq!(rb.residuals, [10, 20, 10]);
        assert_eq!(rb.side_info, None);
        assert_eq!(reconstruct_block(&rb, PredictorKind::Edge, 2, 2).unwrap(), b);
    }

    #[test]
    fn flat_blocks_have_zero_residuals() {
        let b = Block::filled(8, 8, 128);
        for kind in PredictorKind::ALL {
            let rb = predict_block(&b, kind);
            assert_eq!(rb.first_sample, 128);
            assert_eq!(rb.residuals.len(), 63);
            assert!(rb.residuals.iter().all(|&r| r == 0));
        }
    }

    #[test]
    fn single_row_is_horizontal_dpcm() {
        let b = Block::new(8, 1, vec![5, 7, 7, 1, 0, 255, 255, 3]).unwrap();
        for kind in PredictorKind::ALL {
            let rb = predict_block(&b, kind);
            assert_eq!(rb.residuals, [2, 0, -6, -1, 255, 0, -252]);
            assert_eq!(reconstruct_block(&rb, kind, 8, 1).unwrap(), b);
        }
    }

    #[test]
    fn zero_residuals_reconstruct_to_zero_block() {
        let rb = ResidualBlock { first_sample: 0, residuals: vec![0; 63], side_info: None };
        assert_eq!(reconstruct_block(&rb, PredictorKind::Gap, 8, 8).unwrap(), Block::filled(8, 8, 0));
    }

    #[test]
    fn reconstruct_shape_mismatch() {
        let rb = ResidualBlock { first_sample: 0, residuals: vec![0; 62], side_info: None };
        assert_eq!(
            reconstruct_block(&rb, PredictorKind::Edge, 8, 8),
            Err(Error::ShapeMismatch { expected: 63, actual: 62 })
        );
    }

    #[test]
    fn hvd_picks_vertical_for_column_stripes() {
        // columns constant, rows alternate: vertical DPCM is all zero after row 0
        let samples = (0..64).map(|i| if i % 2 == 0 { 0 } else { 200 }).collect();
        let b = Block::new(8, 8, samples).unwrap();
        let rb = predict_block(&b, PredictorKind::Hvd);
        assert_eq!(rb.side_info, Some(Direction::Vertical));
        assert_eq!(reconstruct_block(&rb, PredictorKind::Hvd, 8, 8).unwrap(), b);
        let flat = predict_block(&Block::filled(4, 4, 9), PredictorKind::Hvd);
        assert_eq!(flat.side_info, Some(Direction::Horizontal));
    }

    /// Grid that fails the test if a predictor reads outside the block.
    struct Guarded<'a> {
        inner: &'a Block,
        reads: Cell<usize>,
    }

    impl SampleGrid for Guarded<'_> {
        fn width(&self) -> usize {
            self.inner.width()
        }
        fn height(&self) -> usize {
            self.inner.height()
        }
        fn at(&self, x: usize, y: usize) -> u8 {
            assert!(x < self.inner.width() && y < self.inner.height(), "read ({x},{y}) outside block");
            self.reads.set(self.reads.get() + 1);
            self.inner.at(x, y)
        }
    }

    fn block_strategy() -> impl Strategy<Value = Block> {
        (1usize..=16, 1usize..=16, 0u8..4).prop_flat_map(|(w, h, style)| {
            proptest::collection::vec(any::<u8>(), w * h).prop_map(move |mut s| {
                match style {
                    // saturated
                    1 => s.iter_mut().for_each(|v| *v = if *v & 1 == 0 { 0 } else { 255 }),
                    // gradient
                    2 => s.iter_mut().enumerate().for_each(|(i, v)| {
                        *v = ((i % w) * 13 + (i / w) * 7) as u8 ^ (*v & 3)
                    }),
                    // text-like two-level
                    3 => s.iter_mut().for_each(|v| *v = if *v < 40 { 20 } else { 230 }),
                    _ => {}
                }
                Block::new(w, h, s).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn lossless_roundtrip(b in block_strategy()) {
            for kind in PredictorKind::ALL {
                let guarded = Guarded { inner: &b, reads: Cell::new(0) };
                let rb = predict_block(&guarded, kind);
                prop_assert!(guarded.reads.get() > 0);
                prop_assert_eq!(rb.residuals.len(), b.width() * b.height() - 1);
                prop_assert!(rb.residuals.iter().all(|r| r.unsigned_abs() <= 255));
                let back = reconstruct_block(&rb, kind, b.width(), b.height()).unwrap();
                prop_assert_eq!(&back, &b);
            }
        }

        #[test]
        fn edge_output_is_a_reference(r1: u8, r2: u8, r3: u8, r4: u8) {
            let p = predict_edge(&nb(r1, r2, r3, r4));
            prop_assert!([r1, r2, r3, r4].contains(&p));
        }

        #[test]
        fn med_within_bounds(w: u8, n: u8, nw: u8) {
            let p = predict_med(w, n, nw) as i32;
            let grad = (w as i32 + n as i32 - nw as i32).clamp(0, 255);
            let lo = (w as i32).min(n as i32).min(grad);
            let hi = (w as i32).max(n as i32).max(grad);
            prop_assert!(lo <= p && p <= hi);
        }
    }
}
