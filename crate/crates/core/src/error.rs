use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Two rasters that must be aligned pixel-for-pixel have different shapes.
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// A raster buffer does not hold `width * height` elements.
    BufferLength {
        expected: usize,
        found: usize,
    },
    /// A valid depth pixel holds a negative or non-finite value.
    InvalidDepth {
        index: usize,
        value: f64,
    },
    /// A segmentation label has no entry in the class-name table.
    UnknownLabel(u16),
    EmptyGroundTruth,
    EmptyDomain,
    NoLabeledPixels,
    UnmappedClass(String),
    UnknownSuperClass(String),
    InvalidWeights(String),
    InvalidParams(&'static str),
    DegenerateImage {
        width: usize,
        height: usize,
        window: usize,
    },
    TooSparse {
        valid: usize,
        required: usize,
    },
    DegenerateFit,
    EmptyCatalog,
    EmptyClassSet(String),
    ZeroTotal,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::BufferLength { expected, found } => {
                write!(f, "raster buffer holds {found} elements, expected {expected}")
            }
            Error::InvalidDepth { index, value } => {
                write!(f, "valid depth pixel {index} holds invalid value {value}")
            }
            Error::UnknownLabel(id) => write!(f, "label {id} is missing from the class-name table"),
            Error::EmptyGroundTruth => f.write_str("ground truth has no valid pixel"),
            Error::EmptyDomain => f.write_str("comparison domain is empty"),
            Error::NoLabeledPixels => f.write_str("no labeled pixel with valid ground truth"),
            Error::UnmappedClass(name) => {
                write!(f, "class `{name}` is not mapped to any super-class")
            }
            Error::UnknownSuperClass(name) => write!(f, "unknown super-class `{name}`"),
            Error::InvalidWeights(msg) => write!(f, "invalid weight table: {msg}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::DegenerateImage { width, height, window } => write!(
                f,
                "image {width}x{height} is smaller than the {window}px analysis window"
            ),
            Error::TooSparse { valid, required } => write!(
                f,
                "{valid} valid pixels, at least {required} required for densification"
            ),
            Error::DegenerateFit => f.write_str("scale/shift fit is degenerate (constant predictor)"),
            Error::EmptyCatalog => f.write_str("dataset catalog is empty"),
            Error::EmptyClassSet(name) => write!(f, "dataset `{name}` has no class"),
            Error::ZeroTotal => f.write_str("total frame count is zero"),
        }
    }
}

impl core::error::Error for Error {}
