use std::fmt::Write as _;

use craft_core::contour::{ContourModels, PolyModel, VoicedSegment};
use craft_core::dsp::Spectrum;
use craft_core::eval::Correlation;
use craft_core::rhythm::{Envelope, RhythmReport, RhythmZoneSet};
use serde::Serialize;

use crate::track_io::fixed6;

pub const ENVELOPE_HEADER: &str = "time_s,value";
pub const SPECTRUM_HEADER: &str = "freq_hz,magnitude";

pub fn envelope_csv(env: &Envelope) -> String {
    let mut out = format!("{ENVELOPE_HEADER}\n");
    for (t, v) in env.times().iter().zip(&env.values) {
        writeln!(out, "{},{}", fixed6(*t), fixed6(*v)).unwrap();
    }
    out
}

pub fn spectrum_csv(spec: &Spectrum) -> String {
    let mut out = format!("{SPECTRUM_HEADER}\n");
    for (f, m) in spec.freqs.iter().zip(&spec.mags) {
        writeln!(out, "{},{}", fixed6(*f), fixed6(*m)).unwrap();
    }
    out
}

#[derive(Debug, Serialize)]
pub struct ZonesDoc<'a> {
    pub source: &'a str,
    pub am: &'a RhythmZoneSet,
    pub fm: &'a RhythmZoneSet,
    pub am_fm_r: Option<&'a Correlation>,
}

pub fn zones_json(report: &RhythmReport, source: &str) -> String {
    let doc = ZonesDoc {
        source,
        am: &report.am_zones,
        fm: &report.fm_zones,
        am_fm_r: report.am_fm_r.as_ref(),
    };
    to_json_line(&doc)
}

#[derive(Debug, Serialize)]
pub struct ModelDoc<'a> {
    pub source: &'a str,
    pub local: &'a [PolyModel],
    pub global: &'a PolyModel,
    pub skipped: &'a [VoicedSegment],
}

pub fn models_json(models: &ContourModels, source: &str) -> String {
    to_json_line(&ModelDoc {
        source,
        local: &models.local,
        global: &models.global,
        skipped: &models.skipped,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}
