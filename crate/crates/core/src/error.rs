use core::fmt;

/// Errors produced by the codec core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Raw input length does not match the planar size implied by the descriptor.
    SizeMismatch { expected: usize, actual: usize },
    /// Frame descriptor violates a geometry constraint.
    InvalidDescriptor(&'static str),
    /// Block size outside {4, 8, 16}.
    InvalidBlockSize(usize),
    /// Residual count or sample grid does not match the block geometry.
    ShapeMismatch { expected: usize, actual: usize },
    /// Residual magnitude exceeds the range of the selected code table.
    OutOfRange { value: i32, bound: u32 },
    /// Bit reader ran out of data in the middle of a code.
    TruncatedStream,
    /// Bit pattern that is not a codeword of the active table.
    InvalidCode,
    /// Block index outside the plane's block grid.
    IndexOutOfRange,
    /// Requested region extends past the plane bounds.
    RectOutOfBounds,
    /// No slots to compute a reduction rate over.
    EmptyContainer,
    /// Encoded block does not fit into its fixed-size slot.
    SlotOverflow { used: usize, slot: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SizeMismatch { expected, actual } => {
                write!(f, "size mismatch: expected {expected} bytes, got {actual}")
            }
            Error::InvalidDescriptor(why) => write!(f, "invalid frame descriptor: {why}"),
            Error::InvalidBlockSize(n) => write!(f, "invalid block size {n} (expected 4, 8 or 16)"),
            Error::ShapeMismatch { expected, actual } => {
                write!(f, "shape mismatch: expected {expected} values, got {actual}")
            }
            Error::OutOfRange { value, bound } => {
                write!(f, "residual {value} outside table range ±{bound}")
            }
            Error::TruncatedStream => f.write_str("truncated bit stream"),
            Error::InvalidCode => f.write_str("invalid codeword"),
            Error::IndexOutOfRange => f.write_str("block index out of range"),
            Error::RectOutOfBounds => f.write_str("region out of plane bounds"),
            Error::EmptyContainer => f.write_str("container holds no blocks"),
            Error::SlotOverflow { used, slot } => {
                write!(f, "payload of {used} bytes overflows {slot}-byte slot")
            }
        }
    }
}

impl core::error::Error for Error {}
