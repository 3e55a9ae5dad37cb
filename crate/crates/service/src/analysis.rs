//! Request bodies and the analyses behind `/api/analyze` and `/api/compare`.
//! Nothing here touches HTTP; handlers resolve the audio and call in.

use craft::track_io::{parse_track, TrackFormat};
use craft_core::contour::{self, model_track, ContourModels, PolyModel, VoicedSegment};
use craft_core::dsp::{self, SpectrogramGrid, Spectrum};
use craft_core::eval::{self, comparison_matrix, ComparisonReport, Correlation};
use craft_core::f0::{estimator, EstimatorInfo, F0Track, ParamSet};
use craft_core::rhythm::{rhythm_report, Envelope, RhythmParams, RhythmZoneSet};
use craft_core::{FrameSpec, Signal, WindowFn};
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, ApiResult};

pub const MAX_BENCH_K: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    F0,
    Envelope,
    Spectrum,
    Zones,
    Poly,
    Spectrogram,
}

impl Analysis {
    pub const ALL: [Analysis; 6] = [
        Analysis::F0,
        Analysis::Envelope,
        Analysis::Spectrum,
        Analysis::Zones,
        Analysis::Poly,
        Analysis::Spectrogram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::F0 => "f0",
            Analysis::Envelope => "envelope",
            Analysis::Spectrum => "spectrum",
            Analysis::Zones => "zones",
            Analysis::Poly => "poly",
            Analysis::Spectrogram => "spectrogram",
        }
    }
}

fn default_estimator() -> String {
    "soft".into()
}

/// Settings for the analyses that follow the F0 track.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Upper edge of the envelope spectra and of the last rhythm zone, Hz.
    pub display_max: f64,
    pub local_order: usize,
    pub global_order: usize,
    pub min_seg_frames: usize,
    pub spectrogram_frame_ms: f64,
    pub spectrogram_hop_ms: f64,
    pub floor_db: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            display_max: RhythmParams::default().display_max,
            local_order: contour::DEFAULT_LOCAL_ORDER,
            global_order: contour::DEFAULT_GLOBAL_ORDER,
            min_seg_frames: contour::DEFAULT_MIN_SEG_FRAMES,
            spectrogram_frame_ms: 25.0,
            spectrogram_hop_ms: 10.0,
            floor_db: dsp::DEFAULT_FLOOR_DB,
        }
    }
}

const MAX_ORDER: usize = 12;

impl Options {
    /// Rejects anything the analyses would reject, before any of them run.
    pub fn validate(&self) -> ApiResult<()> {
        let envelope_nyquist = RhythmParams::default().am.out_rate as f64 / 2.0;
        if !(self.display_max > 0.0 && self.display_max <= envelope_nyquist) {
            return Err(ApiError::invalid(
                "display_max",
                format!("display_max must lie in (0, {envelope_nyquist}] Hz"),
            ));
        }
        if self.local_order > MAX_ORDER {
            return Err(ApiError::invalid(
                "local_order",
                format!("local_order must be at most {MAX_ORDER}"),
            ));
        }
        if self.global_order > MAX_ORDER {
            return Err(ApiError::invalid(
                "global_order",
                format!("global_order must be at most {MAX_ORDER}"),
            ));
        }
        if self.min_seg_frames == 0 {
            return Err(ApiError::invalid("min_seg_frames", "min_seg_frames must be positive"));
        }
        if !(self.spectrogram_frame_ms >= 1.0 && self.spectrogram_frame_ms <= 1000.0) {
            return Err(ApiError::invalid(
                "spectrogram_frame_ms",
                "spectrogram_frame_ms must lie in [1, 1000]",
            ));
        }
        if !(self.spectrogram_hop_ms > 0.0 && self.spectrogram_hop_ms <= self.spectrogram_frame_ms) {
            return Err(ApiError::invalid(
                "spectrogram_hop_ms",
                "spectrogram_hop_ms must be positive and at most the frame length",
            ));
        }
        if !(self.floor_db < 0.0 && self.floor_db >= -300.0) {
            return Err(ApiError::invalid("floor_db", "floor_db must lie in [-300, 0)"));
        }
        Ok(())
    }

    fn rhythm(&self) -> RhythmParams {
        RhythmParams {
            display_max: self.display_max,
            ..RhythmParams::default()
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeRequest {
    #[serde(default)]
    pub clip: Option<String>,
    #[serde(default)]
    pub token: Option<String>,
    #[serde(default = "default_estimator")]
    pub estimator: String,
    #[serde(default)]
    pub params: ParamSet,
    pub analyses: Vec<Analysis>,
    #[serde(default)]
    pub options: Options,
}

/// Everything the analyses actually used, defaults filled in.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub estimator: String,
    pub params: ParamSet,
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackDoc {
    pub source: String,
    pub times_s: Vec<f64>,
    pub f0_hz: Vec<f64>,
}

impl From<&F0Track> for TrackDoc {
    fn from(t: &F0Track) -> Self {
        TrackDoc {
            source: t.source.clone(),
            times_s: t.times.clone(),
            f0_hz: t.f0.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopePair {
    pub am: Envelope,
    pub fm: Envelope,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumPair {
    pub aes: Spectrum,
    pub fes: Spectrum,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZonesDoc {
    pub am: RhythmZoneSet,
    pub fm: RhythmZoneSet,
    pub am_fm_r: Option<Correlation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyDoc {
    pub local: Vec<PolyModel>,
    pub global: PolyModel,
    pub skipped: Vec<VoicedSegment>,
}

impl From<ContourModels> for PolyDoc {
    fn from(m: ContourModels) -> Self {
        PolyDoc {
            local: m.local,
            global: m.global,
            skipped: m.skipped,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisBundle {
    pub source: String,
    pub sample_rate: u32,
    pub duration_s: f64,
    pub resolved: Resolved,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f0: Option<TrackDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope: Option<EnvelopePair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zones: Option<ZonesDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<PolyDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrogram: Option<SpectrogramGrid>,
}

/// A validated analysis request, ready to run on any signal.
#[derive(Debug, Clone)]
pub struct AnalysisPlan {
    info: EstimatorInfo,
    analyses: Vec<Analysis>,
    pub resolved: Resolved,
}

impl AnalyzeRequest {
    pub fn plan(&self) -> ApiResult<AnalysisPlan> {
        if self.analyses.is_empty() {
            return Err(ApiError::invalid("analyses", "no analyses requested"));
        }
        let info = estimator(&self.estimator)?;
        let params = info.resolve(&self.params)?;
        self.options.validate()?;
        let mut analyses = self.analyses.clone();
        analyses.sort();
        analyses.dedup();
        Ok(AnalysisPlan {
            info,
            analyses,
            resolved: Resolved {
                estimator: self.estimator.clone(),
                params,
                options: self.options,
            },
        })
    }
}

impl AnalysisPlan {
    fn wants(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }

    pub fn run(&self, signal: &Signal, source: &str) -> ApiResult<AnalysisBundle> {
        let opts = &self.resolved.options;
        let needs_track = [
            Analysis::F0,
            Analysis::Envelope,
            Analysis::Spectrum,
            Analysis::Zones,
            Analysis::Poly,
        ]
        .iter()
        .any(|a| self.wants(*a));
        let track = if needs_track {
            Some(self.info.run(signal, &self.resolved.params)?)
        } else {
            None
        };
        let report = if [Analysis::Envelope, Analysis::Spectrum, Analysis::Zones]
            .iter()
            .any(|a| self.wants(*a))
        {
            let track = track.as_ref().expect("track computed");
            Some(rhythm_report(signal, track, &opts.rhythm())?)
        } else {
            None
        };
        let poly = if self.wants(Analysis::Poly) {
            let track = track.as_ref().expect("track computed");
            Some(model_track(track, opts.local_order, opts.global_order, opts.min_seg_frames)?.into())
        } else {
            None
        };
        let spectrogram = if self.wants(Analysis::Spectrogram) {
            let rate = signal.rate();
            let frame_len = ((opts.spectrogram_frame_ms * rate / 1000.0).round() as usize).max(1);
            let hop = ((opts.spectrogram_hop_ms * rate / 1000.0).round() as usize).clamp(1, frame_len);
            let spec = FrameSpec::new(frame_len, hop, WindowFn::Hann)?;
            Some(dsp::spectrogram(signal, &spec, None, true, opts.floor_db)?)
        } else {
            None
        };
        let bundle = AnalysisBundle {
            source: source.to_string(),
            sample_rate: signal.sample_rate(),
            duration_s: signal.duration(),
            resolved: self.resolved.clone(),
            f0: track.as_ref().filter(|_| self.wants(Analysis::F0)).map(TrackDoc::from),
            envelope: report
                .as_ref()
                .filter(|_| self.wants(Analysis::Envelope))
                .map(|r| EnvelopePair {
                    am: r.am.clone(),
                    fm: r.fm.clone(),
                }),
            spectrum: report
                .as_ref()
                .filter(|_| self.wants(Analysis::Spectrum))
                .map(|r| SpectrumPair {
                    aes: r.aes.clone(),
                    fes: r.fes.clone(),
                }),
            zones: report
                .as_ref()
                .filter(|_| self.wants(Analysis::Zones))
                .map(|r| ZonesDoc {
                    am: r.am_zones.clone(),
                    fm: r.fm_zones.clone(),
                    am_fm_r: r.am_fm_r,
                }),
            poly,
            spectrogram,
        };
        bundle.check_finite()?;
        Ok(bundle)
    }
}

fn finite(name: &str, values: &[f64]) -> ApiResult<()> {
    match values.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(i) => Err(ApiError::new(
            axum::http::StatusCode::INTERNAL_SERVER_ERROR,
            format!("non-finite value in {name} at index {i}"),
        )),
    }
}

fn finite_zones(name: &str, z: &RhythmZoneSet) -> ApiResult<()> {
    finite(name, &z.boundaries)?;
    finite(name, &[z.display_max])?;
    for zone in &z.zones {
        finite(name, &[zone.f_low, zone.f_high, zone.peak_freq, zone.peak_mag])?;
    }
    Ok(())
}

fn finite_poly(name: &str, m: &PolyModel) -> ApiResult<()> {
    finite(name, &m.coeffs)?;
    finite(name, &[m.span.0, m.span.1, m.rmse])
}

fn finite_report(r: &ComparisonReport) -> ApiResult<()> {
    for row in r.r_matrix.iter().chain(&r.p_matrix) {
        finite("r_matrix", row)?;
    }
    for t in &r.timings {
        finite("timings", &t.samples)?;
        finite("timings", &[t.median])?;
    }
    Ok(())
}

impl AnalysisBundle {
    /// JSON has no NaN or infinity; refuse to emit a body that would need them.
    pub fn check_finite(&self) -> ApiResult<()> {
        finite("duration_s", &[self.duration_s])?;
        if let Some(t) = &self.f0 {
            finite("f0", &t.times_s)?;
            finite("f0", &t.f0_hz)?;
        }
        if let Some(e) = &self.envelope {
            finite("envelope", &e.am.values)?;
            finite("envelope", &e.fm.values)?;
        }
        if let Some(s) = &self.spectrum {
            for spec in [&s.aes, &s.fes] {
                finite("spectrum", &spec.freqs)?;
                finite("spectrum", &spec.mags)?;
            }
        }
        if let Some(z) = &self.zones {
            finite_zones("zones", &z.am)?;
            finite_zones("zones", &z.fm)?;
            if let Some(c) = &z.am_fm_r {
                finite("zones", &[c.r, c.p])?;
            }
        }
        if let Some(p) = &self.poly {
            finite_poly("poly", &p.global)?;
            for m in &p.local {
                finite_poly("poly", m)?;
            }
        }
        if let Some(g) = &self.spectrogram {
            finite("spectrogram", &g.times)?;
            finite("spectrogram", &g.freqs)?;
            for row in &g.mags {
                finite("spectrogram", row)?;
            }
        }
        Ok(())
    }
}

fn default_n() -> usize {
    eval::DEFAULT_NORMALIZED_LEN
}

fn default_k() -> usize {
    100
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub estimator: String,
    #[serde(default)]
    pub params: ParamSet,
    /// Row label in the report; the estimator label by default.
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareRequest {
    #[serde(default)]
    pub clip: Option<String>,
    #[serde(default)]
    pub token: Option<String>,
    #[serde(default)]
    pub configs: Vec<EstimatorConfig>,
    /// Imported tracks, each `{"source", "times_s", "f0_hz"}`.
    #[serde(default)]
    pub tracks: Vec<serde_json::Value>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub benchmark: bool,
    #[serde(default = "default_k")]
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub label: String,
    pub estimator: String,
    pub params: ParamSet,
}

#[derive(Debug, Clone)]
pub struct ComparePlan {
    pub configs: Vec<(EstimatorInfo, ResolvedConfig)>,
    pub tracks: Vec<F0Track>,
    pub n: usize,
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareResponse {
    #[serde(flatten)]
    pub report: ComparisonReport,
    pub resolved: Vec<ResolvedConfig>,
}

impl CompareRequest {
    pub fn plan(&self) -> ApiResult<ComparePlan> {
        if self.configs.len() + self.tracks.len() < 2 {
            return Err(ApiError::invalid(
                "configs",
                "need at least two estimator configs or tracks to compare",
            ));
        }
        if self.n < 2 {
            return Err(ApiError::invalid("n", "n must be at least 2"));
        }
        if self.benchmark {
            if self.configs.is_empty() {
                return Err(ApiError::invalid("benchmark", "benchmarking needs estimator configs"));
            }
            if !(craft::bench::MIN_ITERATIONS..=MAX_BENCH_K).contains(&self.k) {
                return Err(ApiError::invalid(
                    "k",
                    format!("k must lie in [{}, {MAX_BENCH_K}]", craft::bench::MIN_ITERATIONS),
                ));
            }
        }
        let mut configs = Vec::with_capacity(self.configs.len());
        for c in &self.configs {
            let info = estimator(&c.estimator)?;
            let params = info.resolve(&c.params)?;
            let label = c.label.clone().unwrap_or_else(|| c.estimator.clone());
            configs.push((
                info,
                ResolvedConfig {
                    label,
                    estimator: c.estimator.clone(),
                    params,
                },
            ));
        }
        let mut tracks = Vec::with_capacity(self.tracks.len());
        for (i, value) in self.tracks.iter().enumerate() {
            let text = value.to_string();
            let track = parse_track(&text, TrackFormat::Json)
                .map_err(|e| ApiError::invalid("tracks", format!("track {}: {e}", i + 1)))?;
            tracks.push(track);
        }
        Ok(ComparePlan {
            configs,
            tracks,
            n: self.n,
            k: self.benchmark.then_some(self.k),
        })
    }
}

impl ComparePlan {
    pub fn needs_audio(&self) -> bool {
        !self.configs.is_empty()
    }

    /// Correlations only; timings are added by the caller.
    pub fn run(&self, signal: Option<&Signal>) -> ApiResult<CompareResponse> {
        let mut tracks = Vec::with_capacity(self.configs.len() + self.tracks.len());
        for (info, cfg) in &self.configs {
            let signal = signal.ok_or_else(|| ApiError::invalid("clip", "estimator configs need a clip or token"))?;
            let mut t = info.run(signal, &cfg.params)?;
            t.source = cfg.label.clone();
            tracks.push(t);
        }
        tracks.extend(self.tracks.iter().cloned());
        let report = comparison_matrix(&tracks, self.n)?;
        finite_report(&report)?;
        Ok(CompareResponse {
            report,
            resolved: self.configs.iter().map(|(_, c)| c.clone()).collect(),
        })
    }
}

/// Checks timings before they are attached to a response.
pub fn check_report(report: &ComparisonReport) -> ApiResult<()> {
    finite_report(report)
}
