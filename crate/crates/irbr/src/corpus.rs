//! Deterministic synthetic test sequences.
//!
//! These stand in for decoded screen-content sequences when none are at hand.
//! Every generator is a pure function of its [`CorpusSpec`]; the same spec
//! always yields the same bytes.

use std::fs;
use std::path::{Path, PathBuf};

use irbr_core::{Frame, FrameDescriptor, Plane};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::PixelFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum CorpusKind {
    Flat,
    Ramp,
    TextLike,
    Noise,
    Mixed,
}

impl CorpusKind {
    pub const ALL: [CorpusKind; 5] =
        [CorpusKind::Flat, CorpusKind::Ramp, CorpusKind::TextLike, CorpusKind::Noise, CorpusKind::Mixed];

    pub fn name(self) -> &'static str {
        match self {
            CorpusKind::Flat => "flat",
            CorpusKind::Ramp => "ramp",
            CorpusKind::TextLike => "text_like",
            CorpusKind::Noise => "noise",
            CorpusKind::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub format: PixelFormat,
}

/// Gray levels used by text-like content.
const PALETTE: [u8; 8] = [16, 48, 96, 128, 160, 200, 224, 240];

fn plane_rng(seed: u64, frame: usize, plane: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (frame as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((plane as u64) << 56))
}

fn flat(w: usize, h: usize) -> Plane {
    Plane::filled(w, h, 128)
}

fn ramp(w: usize, h: usize, shift: usize) -> Plane {
    let samples = (0..w * h).map(|i| ((i % w + shift) % 256) as u8).collect();
    Plane::new(w, h, samples).unwrap()
}

fn noise(w: usize, h: usize, rng: &mut ChaCha8Rng) -> Plane {
    let mut samples = vec![0u8; w * h];
    rng.fill(&mut samples[..]);
    Plane::new(w, h, samples).unwrap()
}

fn fill_rect(p: &mut Plane, x: usize, y: usize, w: usize, h: usize, v: u8) {
    for yy in y..(y + h).min(p.height()) {
        for xx in x..(x + w).min(p.width()) {
            p.set(xx, yy, v);
        }
    }
}

/// Windows, rules and lines of glyph-like strokes on a flat background.
/// Draws only palette levels.
fn text_like(w: usize, h: usize, rng: &mut ChaCha8Rng, scroll: usize) -> Plane {
    if w == 0 || h == 0 {
        return Plane::filled(w, h, 0);
    }
    let bg = PALETTE[rng.random_range(5..8)];
    let mut p = Plane::filled(w, h, bg);

    // panels
    for _ in 0..rng.random_range(1..=3) {
        let pw = rng.random_range(w / 4..=w / 2 + 1).max(1);
        let ph = rng.random_range(h / 4..=h / 2 + 1).max(1);
        let px = rng.random_range(0..w);
        let py = rng.random_range(0..h);
        fill_rect(&mut p, px, py, pw, ph, PALETTE[rng.random_range(3..8)]);
        // one-pixel border
        let border = PALETTE[rng.random_range(0..3)];
        fill_rect(&mut p, px, py, pw, 1, border);
        fill_rect(&mut p, px, py, 1, ph, border);
    }

    // text lines
    let line_h = 12;
    let ink = PALETTE[rng.random_range(0..2)];
    let mut y = 2 + scroll % line_h;
    while y + 9 < h {
        let mut x = rng.random_range(1..6);
        while x + 6 < w {
            if rng.random_bool(0.15) {
                // word gap
                x += rng.random_range(3..7);
                continue;
            }
            let gw = rng.random_range(3..6);
            let gh = rng.random_range(6..10);
            let top = y + 9 - gh;
            // stem, bar and maybe a diagonal, like a crude glyph
            match rng.random_range(0..4) {
                0 => fill_rect(&mut p, x, top, 1, gh, ink),
                1 => fill_rect(&mut p, x + gw - 1, top, 1, gh, ink),
                2 => fill_rect(&mut p, x, top + gh / 2, gw, 1, ink),
                _ => {
                    for d in 0..gh.min(gw * 2) {
                        p.set((x + d / 2).min(w - 1), top + d, ink);
                    }
                }
            }
            if rng.random_bool(0.5) {
                fill_rect(&mut p, x, y + 8, gw, 1, ink);
            }
            if rng.random_bool(0.4) {
                fill_rect(&mut p, x, top, gw, 1, ink);
            }
            x += gw + 1;
        }
        y += line_h;
    }
    p
}

fn plane_of(kind: CorpusKind, w: usize, h: usize, rng: &mut ChaCha8Rng, frame: usize) -> Plane {
    match kind {
        CorpusKind::Flat => flat(w, h),
        CorpusKind::Ramp => ramp(w, h, frame),
        CorpusKind::TextLike => text_like(w, h, rng, frame),
        CorpusKind::Noise => noise(w, h, rng),
        CorpusKind::Mixed => {
            let (lw, th) = (w.div_ceil(2), h.div_ceil(2));
            let (rw, bh) = (w - lw, h - th);
            let quads = [
                (0, 0, flat(lw, th)),
                (lw, 0, ramp(rw, th, frame)),
                (0, th, text_like(lw, bh, rng, frame)),
                (lw, th, noise(rw, bh, rng)),
            ];
            let mut p = Plane::filled(w, h, 0);
            for (ox, oy, q) in quads {
                for y in 0..q.height() {
                    for x in 0..q.width() {
                        p.set(ox + x, oy + y, q.get(x, y));
                    }
                }
            }
            p
        }
    }
}

/// Frame `index` of the sequence described by `spec`.
pub fn generate_frame(spec: &CorpusSpec, index: usize) -> Result<Frame> {
    let desc = FrameDescriptor::new(spec.width, spec.height, spec.format.chroma())?;
    let planes = desc
        .plane_dims()
        .into_iter()
        .enumerate()
        .map(|(pid, (w, h))| {
            if pid > 0 && spec.kind != CorpusKind::Noise && spec.kind != CorpusKind::Ramp {
                // chroma of screen content is mostly neutral
                let mut rng = plane_rng(spec.seed, index, pid);
                let mut p = Plane::filled(w, h, 128);
                if spec.kind != CorpusKind::Flat {
                    for _ in 0..rng.random_range(0..3) {
                        let x = rng.random_range(0..w);
                        let y = rng.random_range(0..h);
                        let v = PALETTE[rng.random_range(0..8)];
                        fill_rect(&mut p, x, y, w / 3 + 1, h / 3 + 1, v);
                    }
                }
                return p;
            }
            let mut rng = plane_rng(spec.seed, index, pid);
            plane_of(spec.kind, w, h, &mut rng, index)
        })
        .collect();
    Ok(Frame::from_planes(desc, planes)?)
}

pub fn generate(spec: &CorpusSpec) -> Result<Vec<Frame>> {
    (0..spec.frames).map(|i| generate_frame(spec, i)).collect()
}

/// One sequence entry in a corpus manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub id: String,
    pub file: String,
    pub width: usize,
    pub height: usize,
    pub format: PixelFormat,
    /// Grouping label for averaged report rows, e.g. a content class or scene.
    #[serde(default)]
    pub class: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub sequences: Vec<SequenceEntry>,
}

pub const MANIFEST: &str = "corpus.json";

impl Manifest {
    pub fn load(dir: &Path) -> Result<Option<Manifest>> {
        let path = dir.join(MANIFEST);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(Error::io(&path))
    }

    /// Inserts `entry`, replacing any entry with the same id.
    pub fn upsert(&mut self, entry: SequenceEntry) {
        self.sequences.retain(|e| e.id != entry.id);
        self.sequences.push(entry);
        self.sequences.sort_by(|a, b| a.id.cmp(&b.id));
    }
}

/// Writes the sequence for `spec` into `dir` and records it in the manifest.
pub fn write_sequence(spec: &CorpusSpec, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let id = format!("{}_s{}", spec.kind.name(), spec.seed);
    let ext = match spec.format {
        PixelFormat::Gray => "gray",
        PixelFormat::Yuv420p => "yuv",
    };
    let file = format!("{id}_{}x{}.{ext}", spec.width, spec.height);
    let mut bytes = Vec::new();
    for f in generate(spec)? {
        bytes.extend_from_slice(&f.to_planar_bytes());
    }
    let path = dir.join(&file);
    fs::write(&path, bytes).map_err(Error::io(&path))?;

    let mut manifest = Manifest::load(dir)?.unwrap_or_default();
    manifest.upsert(SequenceEntry {
        id,
        file,
        width: spec.width,
        height: spec.height,
        format: spec.format,
        class: Some(spec.kind.name().to_string()),
    });
    manifest.save(dir)?;
    Ok(path)
}

/// Fixed seeded screen-content corpus used for regression checks on the
/// block-size and predictor trends.
pub fn bundled() -> Vec<CorpusSpec> {
    let mk = |kind, seed| CorpusSpec {
        kind,
        seed,
        width: 128,
        height: 96,
        frames: 2,
        format: PixelFormat::Yuv420p,
    };
    vec![
        mk(CorpusKind::TextLike, 11),
        mk(CorpusKind::TextLike, 12),
        mk(CorpusKind::TextLike, 13),
        mk(CorpusKind::Mixed, 21),
        mk(CorpusKind::Mixed, 22),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn spec(kind: CorpusKind, seed: u64) -> CorpusSpec {
        CorpusSpec { kind, seed, width: 64, height: 48, frames: 2, format: PixelFormat::Yuv420p }
    }

    #[test]
    fn flat_is_all_128() {
        let s = CorpusSpec { width: 16, height: 16, frames: 1, ..spec(CorpusKind::Flat, 0) };
        let f = generate_frame(&s, 0).unwrap();
        assert!(f.to_planar_bytes().iter().all(|&b| b == 128));
    }

    #[test]
    fn deterministic() {
        for kind in CorpusKind::ALL {
            assert_eq!(generate(&spec(kind, 5)).unwrap(), generate(&spec(kind, 5)).unwrap());
        }
        assert_ne!(
            generate(&spec(CorpusKind::Noise, 5)).unwrap(),
            generate(&spec(CorpusKind::Noise, 6)).unwrap()
        );
    }

    #[test]
    fn text_like_uses_few_levels() {
        for seed in 0..20 {
            for f in generate(&spec(CorpusKind::TextLike, seed)).unwrap() {
                let distinct: HashSet<u8> = f.to_planar_bytes().into_iter().collect();
                assert!(distinct.len() <= 8, "seed {seed}: {} levels", distinct.len());
            }
        }
    }

    #[test]
    fn ramp_is_horizontal_gradient() {
        let f = generate_frame(&CorpusSpec { width: 300, height: 2, ..spec(CorpusKind::Ramp, 0) }, 0).unwrap();
        let y = &f.planes()[0];
        assert_eq!(y.get(0, 1), 0);
        assert_eq!(y.get(255, 0), 255);
        assert_eq!(y.get(256, 1), 0);
    }

    #[test]
    fn odd_gray_sizes() {
        let s = CorpusSpec { width: 13, height: 7, format: PixelFormat::Gray, ..spec(CorpusKind::Mixed, 1) };
        let f = generate_frame(&s, 0).unwrap();
        assert_eq!(f.to_planar_bytes().len(), 91);
    }
}
