//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use irbr_core::{encode_frame, store_frame, Accounting, BlockSize, ChromaFormat, CodecConfig, PredictorKind};

use crate::bench::{load_corpus, run_bench};
use crate::corpus::{write_sequence, CorpusKind, CorpusSpec};
use crate::error::{Error, Result};
use crate::format::{read_containers, write_container};
use crate::io::{read_frames, write_pgm, PixelFormat};

#[derive(Debug, Parser)]
#[command(name = "irbr", version, about = "Lossless intra reference block recompression")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredictorArg {
    Edge,
    Hd,
    Hvd,
    Med,
    Gap,
}

impl From<PredictorArg> for PredictorKind {
    fn from(p: PredictorArg) -> Self {
        match p {
            PredictorArg::Edge => PredictorKind::Edge,
            PredictorArg::Hd => PredictorKind::Hd,
            PredictorArg::Hvd => PredictorKind::Hvd,
            PredictorArg::Med => PredictorKind::Med,
            PredictorArg::Gap => PredictorKind::Gap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AccountingArg {
    Bits,
    Bytes,
}

impl From<AccountingArg> for Accounting {
    fn from(a: AccountingArg) -> Self {
        match a {
            AccountingArg::Bits => Accounting::ExactBits,
            AccountingArg::Bytes => Accounting::ByteAligned,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

fn parse_block_size(s: &str) -> std::result::Result<BlockSize, String> {
    let n: usize = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    BlockSize::new(n).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress raw planar video or a PGM into a container file.
    Compress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        height: Option<usize>,
        #[arg(long, value_enum, default_value = "yuv420p")]
        format: PixelFormat,
        #[arg(long, default_value = "8", value_parser = parse_block_size)]
        block_size: BlockSize,
        #[arg(long, value_enum, default_value = "edge")]
        predictor: PredictorArg,
        #[arg(long, value_enum, default_value = "bytes")]
        accounting: AccountingArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Restore the original planar bytes from a container file.
    Decompress {
        #[arg(long)]
        input: PathBuf,
        /// Output path; a `.pgm` extension writes PGM for single-frame grayscale.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a deterministic synthetic sequence into a corpus directory.
    GenCorpus {
        #[arg(long, value_enum)]
        kind: CorpusKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long, default_value_t = 1)]
        frames: usize,
        #[arg(long, value_enum, default_value = "yuv420p")]
        format: PixelFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the predictor × block size reduction-rate matrix over a corpus.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "edge,hd,hvd,med,gap")]
        predictors: Vec<PredictorArg>,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16", value_parser = parse_block_size)]
        block_sizes: Vec<BlockSize>,
        #[arg(long, value_enum, default_value = "bytes")]
        accounting: AccountingArg,
        #[arg(long, value_enum, default_value = "csv")]
        report: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let print = |out: &mut dyn Write, s: &str| -> Result<()> {
        out.write_all(s.as_bytes()).map_err(Error::io("<stdout>"))
    };
    match cli.command {
        Command::Compress { input, width, height, format, block_size, predictor, accounting, out } => {
            let frames = read_frames(&input, format, width, height)?;
            let cfg = CodecConfig { block_size, predictor: predictor.into(), accounting: accounting.into() };
            let mut file = Vec::new();
            for (i, f) in frames.iter().enumerate() {
                let container = store_frame(&encode_frame(f, &cfg))?;
                write_container(&container, &mut file);
                let acc = cfg.accounting;
                print(
                    stdout,
                    &format!(
                        "frame {i}: drr {:.6} ({:.1} of {} bytes)\n",
                        container.drr(acc)?,
                        container.compressed_bytes(acc),
                        container.original_bytes()
                    ),
                )?;
            }
            fs::write(&out, file).map_err(Error::io(&out))
        }
        Command::Decompress { input, out } => {
            let bytes = fs::read(&input).map_err(Error::io(&input))?;
            let containers = read_containers(&bytes)?;
            let mut frames = Vec::with_capacity(containers.len());
            for c in &containers {
                frames.push(c.to_frame().map_err(|e| Error::Corrupt(e.to_string()))?);
            }
            let as_pgm = out.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
                && frames.len() == 1
                && frames[0].descriptor().chroma == ChromaFormat::Monochrome;
            let data = if as_pgm {
                write_pgm(&frames[0].planes()[0])
            } else {
                frames.iter().flat_map(|f| f.to_planar_bytes()).collect()
            };
            fs::write(&out, data).map_err(Error::io(&out))
        }
        Command::GenCorpus { kind, seed, width, height, frames, format, out } => {
            let spec = CorpusSpec { kind, seed, width, height, frames, format };
            let path = write_sequence(&spec, &out)?;
            print(stdout, &format!("wrote {}\n", path.display()))
        }
        Command::Bench { corpus, predictors, block_sizes, accounting, report, out } => {
            let sequences = load_corpus(&corpus)?;
            let mut preds: Vec<PredictorKind> = predictors.into_iter().map(Into::into).collect();
            preds.sort();
            preds.dedup();
            let mut sizes = block_sizes;
            sizes.sort();
            sizes.dedup();
            let r = run_bench(&sequences, &preds, &sizes, accounting.into());
            let text = match report {
                ReportFormat::Csv => r.to_csv(),
                ReportFormat::Json => r.to_json(),
            };
            match out {
                Some(path) => fs::write(&path, text).map_err(Error::io(&path)),
                None => print(stdout, &text),
            }
        }
    }
}
