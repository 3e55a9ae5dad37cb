use std::fmt;
use std::path::PathBuf;

/// Where in a track file a problem was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// 1-based line of a CSV file.
    Line(usize),
    /// 1-based element of the JSON arrays.
    Entry(usize),
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Line(n) => write!(f, "line {n}"),
            Position::Entry(n) => write!(f, "entry {n}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WavError {
    #[error("unreadable file: {0}")]
    Unreadable(String),
    #[error("unsupported audio: {0}")]
    Unsupported(String),
    #[error("zero-length audio")]
    Empty,
}

#[derive(Debug, thiserror::Error)]
pub enum TrackError {
    #[error("malformed row at {at}: {detail}")]
    Malformed { at: Position, detail: String },
    #[error("times not ascending at {at}")]
    NotAscending { at: Position },
    #[error("negative f0 at {at}")]
    NegativeF0 { at: Position },
    #[error("malformed JSON track: {0}")]
    Json(String),
    #[error("invalid track: {0}")]
    Invalid(String),
}

impl TrackError {
    pub fn position(&self) -> Option<Position> {
        match self {
            TrackError::Malformed { at, .. } | TrackError::NotAscending { at } | TrackError::NegativeF0 { at } => {
                Some(*at)
            }
            TrackError::Json(_) | TrackError::Invalid(_) => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Analysis(#[from] craft_core::Error),
    #[error(transparent)]
    Wav(#[from] WavError),
    #[error("{path}: {source}")]
    Track { path: PathBuf, source: TrackError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Errors caused by how the tool was invoked rather than by the data.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Usage(_)
                | Error::Analysis(
                    craft_core::Error::InvalidParameter { .. }
                        | craft_core::Error::UnknownEstimator(_)
                        | craft_core::Error::FrameTooShort { .. }
                )
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
