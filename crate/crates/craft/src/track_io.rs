//! Track files shared with external estimators.
//!
//! CSV: optional `# source=<label>` line, header `time_s,f0_hz`, one row per
//! frame with six decimals, LF endings. JSON: a single object with `source`,
//! `times_s` and `f0_hz`.

use std::fmt::Write as _;
use std::path::Path;

use craft_core::f0::F0Track;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Position, Result, TrackError};

pub const CSV_HEADER: &str = "time_s,f0_hz";
const SOURCE_PREFIX: &str = "# source=";
/// Label for tracks whose file names none.
pub const DEFAULT_SOURCE: &str = "imported";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackFormat {
    Csv,
    Json,
}

impl TrackFormat {
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "csv" => Some(TrackFormat::Csv),
            "json" => Some(TrackFormat::Json),
            _ => None,
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension().and_then(|e| e.to_str()).and_then(Self::from_name)
    }

    pub fn extension(self) -> &'static str {
        match self {
            TrackFormat::Csv => "csv",
            TrackFormat::Json => "json",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTrack {
    source: String,
    times_s: Vec<f64>,
    f0_hz: Vec<f64>,
}

/// Six-decimal fixed point, with negative zero printed as zero.
pub fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn round6(v: f64) -> f64 {
    fixed6(v).parse().expect("fixed-point text parses")
}

pub fn format_track(track: &F0Track, format: TrackFormat) -> String {
    match format {
        TrackFormat::Csv => {
            let mut out = String::new();
            // an empty track is written as the bare header
            if !track.source.is_empty() && !track.is_empty() {
                writeln!(out, "{SOURCE_PREFIX}{}", track.source).unwrap();
            }
            out.push_str(CSV_HEADER);
            out.push('\n');
            for (t, f) in track.times.iter().zip(&track.f0) {
                writeln!(out, "{},{}", fixed6(*t), fixed6(*f)).unwrap();
            }
            out
        }
        TrackFormat::Json => {
            let doc = JsonTrack {
                source: track.source.clone(),
                times_s: track.times.iter().map(|v| round6(*v)).collect(),
                f0_hz: track.f0.iter().map(|v| round6(*v)).collect(),
            };
            let mut s = serde_json::to_string(&doc).expect("finite track serialises");
            s.push('\n');
            s
        }
    }
}

pub fn parse_track(text: &str, format: TrackFormat) -> Result<F0Track, TrackError> {
    match format {
        TrackFormat::Csv => parse_csv(text),
        TrackFormat::Json => parse_json(text),
    }
}

fn parse_csv(text: &str) -> Result<F0Track, TrackError> {
    let mut source = None;
    let mut header_seen = false;
    let mut times = Vec::new();
    let mut f0 = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let at = Position::Line(idx + 1);
        let line = raw.trim_end_matches('\r').trim();
        if !header_seen {
            if let Some(label) = line.strip_prefix(SOURCE_PREFIX) {
                if source.is_some() {
                    return Err(TrackError::Malformed {
                        at,
                        detail: "repeated source line".into(),
                    });
                }
                source = Some(label.trim().to_string());
                continue;
            }
            if line.is_empty() {
                continue;
            }
            if line != CSV_HEADER {
                return Err(TrackError::Malformed {
                    at,
                    detail: format!("expected header `{CSV_HEADER}`"),
                });
            }
            header_seen = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (Some(t), Some(f), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(TrackError::Malformed {
                at,
                detail: "expected two fields".into(),
            });
        };
        let t = parse_number(t, at)?;
        let f = parse_number(f, at)?;
        push_row(&mut times, &mut f0, t, f, at)?;
    }
    if !header_seen {
        return Err(TrackError::Malformed {
            at: Position::Line(text.lines().count().max(1)),
            detail: format!("missing header `{CSV_HEADER}`"),
        });
    }
    build(times, f0, source)
}

fn parse_number(field: &str, at: Position) -> Result<f64, TrackError> {
    match field.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(TrackError::Malformed {
            at,
            detail: format!("not a finite number: {:?}", field.trim()),
        }),
    }
}

fn push_row(times: &mut Vec<f64>, f0: &mut Vec<f64>, t: f64, f: f64, at: Position) -> Result<(), TrackError> {
    if times.last().is_some_and(|prev| t <= *prev) {
        return Err(TrackError::NotAscending { at });
    }
    if f < 0.0 {
        return Err(TrackError::NegativeF0 { at });
    }
    times.push(t);
    f0.push(f);
    Ok(())
}

fn parse_json(text: &str) -> Result<F0Track, TrackError> {
    let doc: JsonTrack = serde_json::from_str(text).map_err(|e| TrackError::Json(e.to_string()))?;
    if doc.times_s.len() != doc.f0_hz.len() {
        return Err(TrackError::Json(format!(
            "times_s has {} entries but f0_hz has {}",
            doc.times_s.len(),
            doc.f0_hz.len()
        )));
    }
    let mut times = Vec::with_capacity(doc.times_s.len());
    let mut f0 = Vec::with_capacity(doc.f0_hz.len());
    for (i, (t, f)) in doc.times_s.iter().zip(&doc.f0_hz).enumerate() {
        push_row(&mut times, &mut f0, *t, *f, Position::Entry(i + 1))?;
    }
    build(times, f0, Some(doc.source))
}

fn build(times: Vec<f64>, f0: Vec<f64>, source: Option<String>) -> Result<F0Track, TrackError> {
    let source = source
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| DEFAULT_SOURCE.into());
    F0Track::new(times, f0, source).map_err(|e| TrackError::Invalid(e.to_string()))
}

/// Reads a track; the format comes from the extension unless given.
pub fn import_track(path: impl AsRef<Path>, format: Option<TrackFormat>) -> Result<F0Track> {
    let path = path.as_ref();
    let format = resolve_format(path, format)?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_track(&text, format).map_err(|source| Error::Track {
        path: path.to_path_buf(),
        source,
    })
}

pub fn export_track(track: &F0Track, path: impl AsRef<Path>, format: Option<TrackFormat>) -> Result<()> {
    let path = path.as_ref();
    let format = resolve_format(path, format)?;
    std::fs::write(path, format_track(track, format)).map_err(|e| Error::io(path, e))
}

fn resolve_format(path: &Path, format: Option<TrackFormat>) -> Result<TrackFormat> {
    format.or_else(|| TrackFormat::from_path(path)).ok_or_else(|| {
        Error::Usage(format!(
            "{}: cannot tell track format, use .csv or .json",
            path.display()
        ))
    })
}
