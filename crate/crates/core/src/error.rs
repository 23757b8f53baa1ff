use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A sample buffer does not match the declared plane dimensions.
    PlaneSize { expected: usize, actual: usize },
    ZeroDimension,
    /// 4:2:0 subsampling needs even luma dimensions.
    OddDimensions { width: usize, height: usize },
    /// The two chroma planes are not half the luma size.
    ChromaSize,
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    ColorModeMismatch,
    CropTooLarge {
        current: (usize, usize),
        requested: (usize, usize),
    },
    /// Frame dimensions are not a multiple of the block size.
    Unaligned { width: usize, height: usize, block: usize },
    EmptyCandidates,
    InvalidConfig(&'static str),
    TooFewFrames { needed: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PlaneSize { expected, actual } => {
                write!(f, "plane holds {actual} samples, expected {expected}")
            }
            Error::ZeroDimension => f.write_str("frame dimensions must be at least 1x1"),
            Error::OddDimensions { width, height } => {
                write!(f, "4:2:0 frames need even dimensions, got {width}x{height}")
            }
            Error::ChromaSize => f.write_str("chroma planes must be half the luma size"),
            Error::DimensionMismatch { expected, actual } => write!(
                f,
                "frame is {}x{}, expected {}x{}",
                actual.0, actual.1, expected.0, expected.1
            ),
            Error::ColorModeMismatch => f.write_str("frames have different color modes"),
            Error::CropTooLarge { current, requested } => write!(
                f,
                "cannot crop {}x{} frame to {}x{}",
                current.0, current.1, requested.0, requested.1
            ),
            Error::Unaligned { width, height, block } => write!(
                f,
                "{width}x{height} frame is not padded to a multiple of {block}"
            ),
            Error::EmptyCandidates => f.write_str("vector median of an empty candidate list"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::TooFewFrames { needed, got } => {
                write!(f, "need at least {needed} frames, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}
