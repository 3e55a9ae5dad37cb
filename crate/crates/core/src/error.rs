use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A signal with no samples was handed to an analysis.
    EmptySignal,
    InvalidSampleRate(u32),
    /// A parameter failed validation. `field` names the offending parameter.
    InvalidParameter {
        field: &'static str,
        reason: String,
    },
    /// The analysis frame cannot hold two periods of the lowest frequency.
    FrameTooShort {
        frame_len: usize,
        needed: usize,
    },
    /// Not even one analysis frame fits into the signal.
    SignalTooShort,
    NoVoicedFrames,
    /// Fewer points than polynomial coefficients.
    SegmentTooShort {
        points: usize,
        order: usize,
    },
    /// Correlation of a constant vector is undefined.
    DegenerateInput,
    LengthMismatch {
        left: usize,
        right: usize,
    },
    UnknownEstimator(String),
    NotEnoughTracks(usize),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// The parameter name a validation error refers to, if any.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Error::InvalidParameter { field, .. } => Some(field),
            Error::FrameTooShort { .. } => Some("frame_ms"),
            _ => None,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySignal => f.write_str("empty signal"),
            Error::InvalidSampleRate(rate) => write!(f, "invalid sample rate {rate} Hz"),
            Error::InvalidParameter { field, reason } => write!(f, "invalid {field}: {reason}"),
            Error::FrameTooShort { frame_len, needed } => write!(
                f,
                "frame too short for f_min: {frame_len} samples, need at least {needed}"
            ),
            Error::SignalTooShort => f.write_str("signal too short"),
            Error::NoVoicedFrames => f.write_str("no voiced frames"),
            Error::SegmentTooShort { points, order } => write!(
                f,
                "segment too short for order: {points} points cannot determine a degree {order} polynomial"
            ),
            Error::DegenerateInput => f.write_str("degenerate input (constant vector)"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::UnknownEstimator(label) => write!(f, "unknown estimator \"{label}\""),
            Error::NotEnoughTracks(n) => write!(f, "need at least two tracks, got {n}"),
        }
    }
}

impl core::error::Error for Error {}
