//! Data reduction rate benchmark over a corpus of sequences.
//!
//! Every (sequence, predictor, block size) cell compresses all frames of the
//! sequence and reports `1 − compressed / original`, jointly over all planes
//! and, for multi-plane video, per plane. Averages are plain means of the
//! per-sequence rates, grouped by the sequence class label and overall.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use irbr_core::{encode_frame, Accounting, BlockSize, CodecConfig, Frame, PredictorKind};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Manifest, SequenceEntry};
use crate::error::{Error, Result};
use crate::io::{is_pgm, parse_pgm, split_frames, PixelFormat};

/// A loaded test sequence.
#[derive(Debug, Clone)]
pub struct Sequence {
    pub id: String,
    pub class: String,
    pub frames: Vec<Frame>,
}

pub const UNCLASSIFIED: &str = "unclassified";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub sequence_id: String,
    pub plane_set: String,
    pub predictor: String,
    pub block_size: usize,
    pub accounting: String,
    pub frames: usize,
    pub original_bytes: u64,
    pub compressed_bytes: f64,
    pub drr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageRow {
    pub class: String,
    pub plane_set: String,
    pub predictor: String,
    pub block_size: usize,
    pub accounting: String,
    pub sequences: usize,
    pub mean_drr: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub averages: Vec<AverageRow>,
}

const PLANE_NAMES: [&str; 3] = ["y", "u", "v"];

fn plane_set_rank(s: &str) -> usize {
    match s {
        "all" => 0,
        "y" => 1,
        "u" => 2,
        _ => 3,
    }
}

fn predictor_rank(name: &str) -> u8 {
    PredictorKind::from_name(name).map_or(u8::MAX, PredictorKind::id)
}

/// Compresses every frame of `seq` with one configuration.
pub fn measure(seq: &Sequence, cfg: &CodecConfig) -> Vec<BenchRow> {
    let planes = seq.frames.first().map_or(0, |f| f.planes().len());
    let mut original = vec![0u64; planes];
    let mut bits = vec![0u64; planes];
    for f in &seq.frames {
        let cf = encode_frame(f, cfg);
        for (i, p) in f.planes().iter().enumerate() {
            original[i] += (p.width() * p.height()) as u64;
            bits[i] += cf.plane_bits(i, cfg.accounting) as u64;
        }
    }
    let row = |plane_set: &str, orig: u64, bits: u64| {
        let compressed_bytes = bits as f64 / 8.0;
        BenchRow {
            sequence_id: seq.id.clone(),
            plane_set: plane_set.to_string(),
            predictor: cfg.predictor.name().to_string(),
            block_size: cfg.block_size.get(),
            accounting: cfg.accounting.name().to_string(),
            frames: seq.frames.len(),
            original_bytes: orig,
            compressed_bytes,
            drr: 1.0 - compressed_bytes / orig as f64,
        }
    };
    let mut rows = vec![row("all", original.iter().sum(), bits.iter().sum())];
    if planes > 1 {
        for i in 0..planes {
            rows.push(row(PLANE_NAMES[i], original[i], bits[i]));
        }
    }
    rows
}

/// Evaluates the full predictor × block size matrix over `sequences`.
pub fn run_bench(
    sequences: &[Sequence],
    predictors: &[PredictorKind],
    block_sizes: &[BlockSize],
    accounting: Accounting,
) -> BenchReport {
    let mut cells = Vec::new();
    for seq in sequences {
        for &predictor in predictors {
            for &block_size in block_sizes {
                cells.push((seq, CodecConfig { block_size, predictor, accounting }));
            }
        }
    }
    let mut rows: Vec<BenchRow> = cells.par_iter().flat_map_iter(|(seq, cfg)| measure(seq, cfg)).collect();
    rows.sort_by(|a, b| {
        (&a.sequence_id, predictor_rank(&a.predictor), a.block_size, plane_set_rank(&a.plane_set)).cmp(&(
            &b.sequence_id,
            predictor_rank(&b.predictor),
            b.block_size,
            plane_set_rank(&b.plane_set),
        ))
    });

    let class_of: BTreeMap<&str, &str> =
        sequences.iter().map(|s| (s.id.as_str(), s.class.as_str())).collect();
    let mut groups: BTreeMap<(String, u8, usize, usize, String), Vec<f64>> = BTreeMap::new();
    for r in &rows {
        let class = class_of.get(r.sequence_id.as_str()).copied().unwrap_or(UNCLASSIFIED);
        let key = |c: &str| {
            (c.to_string(), predictor_rank(&r.predictor), r.block_size, plane_set_rank(&r.plane_set), r.plane_set.clone())
        };
        groups.entry(key(class)).or_default().push(r.drr);
        if class != "overall" {
            groups.entry(key("overall")).or_default().push(r.drr);
        }
    }
    let averages = groups
        .into_iter()
        .map(|((class, pred, block_size, _, plane_set), drrs)| AverageRow {
            class,
            plane_set,
            predictor: PredictorKind::from_id(pred).map_or("?", PredictorKind::name).to_string(),
            block_size,
            accounting: accounting.name().to_string(),
            sequences: drrs.len(),
            mean_drr: drrs.iter().sum::<f64>() / drrs.len() as f64,
        })
        .collect();
    BenchReport { rows, averages }
}

impl BenchReport {
    /// Rows table, a blank line, then the averages table.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).expect("in-memory csv");
        }
        let mut out = String::from_utf8(w.into_inner().expect("in-memory csv")).unwrap();
        if self.rows.is_empty() {
            out.push_str(
                "sequence_id,plane_set,predictor,block_size,accounting,frames,original_bytes,compressed_bytes,drr\n",
            );
        }
        out.push('\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        for a in &self.averages {
            w.serialize(a).expect("in-memory csv");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).unwrap());
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Joint ("all" planes) rows for one predictor and block size.
    pub fn joint_rows(&self, predictor: PredictorKind, block_size: BlockSize) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter(move |r| {
            r.plane_set == "all" && r.predictor == predictor.name() && r.block_size == block_size.get()
        })
    }

    /// Pooled joint rate over all sequences for one cell.
    pub fn pooled_drr(&self, predictor: PredictorKind, block_size: BlockSize) -> Option<f64> {
        let (orig, comp) = self
            .joint_rows(predictor, block_size)
            .fold((0u64, 0f64), |(o, c), r| (o + r.original_bytes, c + r.compressed_bytes));
        (orig > 0).then(|| 1.0 - comp / orig as f64)
    }
}

/// Parses `<name>_<W>x<H>` from a file stem.
fn dims_from_stem(stem: &str) -> Option<(usize, usize)> {
    let (_, dims) = stem.rsplit_once('_')?;
    let (w, h) = dims.split_once('x')?;
    Some((w.parse().ok()?, h.parse().ok()?))
}

fn load_entry(dir: &Path, e: &SequenceEntry) -> Result<Sequence> {
    let path = dir.join(&e.file);
    let bytes = fs::read(&path).map_err(Error::io(&path))?;
    let frames = if e.format == PixelFormat::Gray && is_pgm(&bytes) {
        let plane = parse_pgm(&bytes)?;
        let desc = irbr_core::FrameDescriptor::new(plane.width(), plane.height(), irbr_core::ChromaFormat::Monochrome)?;
        vec![Frame::from_planes(desc, vec![plane])?]
    } else {
        let desc = irbr_core::FrameDescriptor::new(e.width, e.height, e.format.chroma())?;
        split_frames(&bytes, &desc)?
    };
    Ok(Sequence { id: e.id.clone(), class: e.class.clone().unwrap_or_else(|| UNCLASSIFIED.into()), frames })
}

/// Corpus entries from `corpus.json`, or discovered from file names when
/// there is no manifest: `*.pgm`, `<name>_<W>x<H>.yuv` (4:2:0) and
/// `<name>_<W>x<H>.gray`.
pub fn discover(dir: &Path) -> Result<Vec<SequenceEntry>> {
    if let Some(m) = Manifest::load(dir)? {
        return Ok(m.sequences);
    }
    let mut entries = Vec::new();
    for item in fs::read_dir(dir).map_err(Error::io(dir))? {
        let path = item.map_err(Error::io(dir))?.path();
        let (Some(stem), Some(ext)) = (path.file_stem().and_then(|s| s.to_str()), path.extension().and_then(|s| s.to_str()))
        else {
            continue;
        };
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        let (format, dims) = match ext {
            "pgm" => (PixelFormat::Gray, Some((0, 0))),
            "yuv" => (PixelFormat::Yuv420p, dims_from_stem(stem)),
            "gray" => (PixelFormat::Gray, dims_from_stem(stem)),
            _ => continue,
        };
        let Some((width, height)) = dims else {
            eprintln!("warning: skipping {file}: no <W>x<H> in file name");
            continue;
        };
        entries.push(SequenceEntry { id: stem.to_string(), file, width, height, format, class: None });
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(entries)
}

/// Loads every readable sequence of a corpus directory, warning about the rest.
pub fn load_corpus(dir: &Path) -> Result<Vec<Sequence>> {
    let entries = discover(dir)?;
    let mut out = Vec::new();
    for e in &entries {
        match load_entry(dir, e) {
            Ok(s) => out.push(s),
            Err(err) => eprintln!("warning: skipping sequence {}: {err}", e.id),
        }
    }
    if out.is_empty() {
        return Err(Error::Usage(format!("no readable sequences in {}", dir.display())));
    }
    Ok(out)
}
