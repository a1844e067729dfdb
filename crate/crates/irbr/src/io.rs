//! Raw planar video and binary PGM input/output.

use std::fs;
use std::path::Path;

use irbr_core::{load_raw_frame, ChromaFormat, Frame, FrameDescriptor, Plane};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PixelFormat {
    /// Single 8-bit plane.
    Gray,
    /// I420: full Y plane, then quarter-size U and V.
    Yuv420p,
}

impl PixelFormat {
    pub fn chroma(self) -> ChromaFormat {
        match self {
            PixelFormat::Gray => ChromaFormat::Monochrome,
            PixelFormat::Yuv420p => ChromaFormat::Yuv420,
        }
    }
}

/// Splits a headerless planar stream into frames. The length must be a
/// non-zero multiple of the frame size.
pub fn split_frames(bytes: &[u8], desc: &FrameDescriptor) -> Result<Vec<Frame>> {
    desc.validate()?;
    let size = desc.frame_bytes();
    if bytes.is_empty() || bytes.len() % size != 0 {
        let expected = size * (bytes.len() / size).max(1);
        return Err(irbr_core::Error::SizeMismatch { expected, actual: bytes.len() }.into());
    }
    Ok(bytes.chunks_exact(size).map(|c| load_raw_frame(c, desc)).collect::<std::result::Result<_, _>>()?)
}

fn pgm_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Pgm("unexpected end of header"));
    }
    Ok(&bytes[start..*pos])
}

fn pgm_number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    std::str::from_utf8(pgm_token(bytes, pos)?)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or(Error::Pgm("malformed number in header"))
}

pub fn is_pgm(bytes: &[u8]) -> bool {
    bytes.starts_with(b"P5")
}

/// Parses a binary PGM (`P5`, maxval 255).
pub fn parse_pgm(bytes: &[u8]) -> Result<Plane> {
    let mut pos = 0;
    if pgm_token(bytes, &mut pos)? != b"P5" {
        return Err(Error::Pgm("missing P5 magic"));
    }
    let width = pgm_number(bytes, &mut pos)?;
    let height = pgm_number(bytes, &mut pos)?;
    if pgm_number(bytes, &mut pos)? != 255 {
        return Err(Error::Pgm("only maxval 255 is supported"));
    }
    if width == 0 || height == 0 {
        return Err(Error::Pgm("zero dimension"));
    }
    // exactly one whitespace byte separates the header from the raster
    let data = bytes.get(pos + 1..).ok_or(Error::Pgm("missing raster"))?;
    if data.len() < width * height {
        return Err(Error::Pgm("raster shorter than width × height"));
    }
    Ok(Plane::new(width, height, data[..width * height].to_vec())?)
}

pub fn write_pgm(plane: &Plane) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", plane.width(), plane.height()).into_bytes();
    out.extend_from_slice(plane.samples());
    out
}

/// Reads all frames of `path`. A `.pgm` file, or gray input carrying a PGM
/// header, takes its dimensions from the header.
pub fn read_frames(
    path: &Path,
    format: PixelFormat,
    width: Option<usize>,
    height: Option<usize>,
) -> Result<Vec<Frame>> {
    let bytes = fs::read(path).map_err(Error::io(path))?;
    let pgm_ext = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    if (pgm_ext || format == PixelFormat::Gray) && is_pgm(&bytes) {
        let plane = parse_pgm(&bytes)?;
        if width.is_some_and(|w| w != plane.width()) || height.is_some_and(|h| h != plane.height()) {
            return Err(Error::Usage(format!(
                "PGM is {}x{}, which disagrees with --width/--height",
                plane.width(),
                plane.height()
            )));
        }
        let desc = FrameDescriptor::new(plane.width(), plane.height(), ChromaFormat::Monochrome)?;
        return Ok(vec![Frame::from_planes(desc, vec![plane])?]);
    }
    let (Some(w), Some(h)) = (width, height) else {
        return Err(Error::Usage("raw input needs --width and --height".into()));
    };
    let desc = FrameDescriptor::new(w, h, format.chroma())?;
    split_frames(&bytes, &desc)
}
