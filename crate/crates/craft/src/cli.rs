//! The `craft` command line. Each subcommand reads its inputs, calls one
//! library operation and writes the result.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use craft_core::contour::{self, model_track};
use craft_core::eval::{self, comparison_matrix};
use craft_core::f0::{estimator, F0Track, ParamSet, ParamValue};
use craft_core::rhythm::{rhythm_report, RhythmParams};

use crate::bench::{benchmark, MIN_ITERATIONS};
use crate::error::{Error, Result};
use crate::tables::{envelope_csv, models_json, spectrum_csv, to_json_line, zones_json};
use crate::track_io::{export_track, import_track, TrackFormat};
use crate::{svg, wav};

pub const EXIT_PROCESSING: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "craft",
    version,
    about = "Speech prosody analysis: F0 tracks, envelopes, rhythm zones, contour models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate an F0 track from a WAV file
    Analyze(AnalyzeArgs),
    /// AM/FM envelopes, their spectra and rhythm zones
    Rhythm(RhythmArgs),
    /// Correlate tracks, optionally timing the built-in estimators
    Compare(CompareArgs),
    /// Fit local and global polynomial models to a track
    Model(ModelArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in", value_name = "WAV")]
    pub input: PathBuf,
    #[arg(long, default_value = "soft")]
    pub estimator: String,
    /// Estimator parameter, repeatable
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// csv or json; must agree with the --out extension when both are given
    #[arg(long)]
    pub format: Option<String>,
    /// Also plot the track with its contour models
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RhythmArgs {
    #[arg(long = "in", value_name = "WAV")]
    pub input: PathBuf,
    /// Use this track instead of running SOFT on the input
    #[arg(long, value_name = "CSV")]
    pub f0_track: Option<PathBuf>,
    #[arg(long, value_name = "PREFIX")]
    pub out_prefix: PathBuf,
    /// Write <prefix>.svg with the AES and its zone boundaries
    #[arg(long)]
    pub svg: bool,
    #[arg(long, default_value_t = RhythmParams::default().display_max)]
    pub display_max: f64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, num_args = 1.., value_name = "TRACK")]
    pub tracks: Vec<PathBuf>,
    /// Run the built-in estimators on this file and include their tracks
    #[arg(long = "in", value_name = "WAV")]
    pub input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "soft,amdf")]
    pub estimators: Vec<String>,
    /// Time each estimator on --in
    #[arg(long, requires = "input")]
    pub bench: bool,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    /// Length every track is normalised to before correlating
    #[arg(long, default_value_t = eval::DEFAULT_NORMALIZED_LEN)]
    pub n: usize,
    #[arg(long, value_name = "JSON")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long = "in", value_name = "TRACK")]
    pub input: PathBuf,
    #[arg(long, default_value_t = contour::DEFAULT_LOCAL_ORDER)]
    pub local_order: usize,
    #[arg(long, default_value_t = contour::DEFAULT_GLOBAL_ORDER)]
    pub global_order: usize,
    #[arg(long, default_value_t = contour::DEFAULT_MIN_SEG_FRAMES)]
    pub min_seg_frames: usize,
    #[arg(long, value_name = "JSON")]
    pub out: PathBuf,
}

/// Parses `KEY=VALUE` pairs; numeric text becomes a number.
pub fn parse_params(pairs: &[String]) -> Result<ParamSet> {
    let mut set = ParamSet::new();
    for pair in pairs {
        let Some((key, value)) = pair.split_once('=') else {
            return Err(Error::Usage(format!("parameter `{pair}` is not KEY=VALUE")));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::Usage(format!("parameter `{pair}` has no name")));
        }
        let value = match value.parse::<f64>() {
            Ok(v) => ParamValue::Number(v),
            Err(_) => ParamValue::Text(value.to_string()),
        };
        if set.insert(key.to_string(), value).is_some() {
            return Err(Error::Usage(format!("parameter `{key}` given twice")));
        }
    }
    Ok(set)
}

/// Output format from `--format` and the path extension; they must agree.
pub fn output_format(path: &Path, flag: Option<&str>) -> Result<TrackFormat> {
    let from_flag = match flag {
        Some(name) => {
            Some(TrackFormat::from_name(name).ok_or_else(|| Error::Usage(format!("unknown format `{name}`")))?)
        }
        None => None,
    };
    match (from_flag, TrackFormat::from_path(path)) {
        (Some(a), Some(b)) if a != b => Err(Error::Usage(format!(
            "--format {} conflicts with output file {}",
            a.extension(),
            path.display()
        ))),
        (Some(f), _) | (None, Some(f)) => Ok(f),
        (None, None) => Err(Error::Usage(format!(
            "cannot tell output format of {}; use a .csv/.json name or --format",
            path.display()
        ))),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<F0Track> {
    let format = output_format(&args.out, args.format.as_deref())?;
    let overrides = parse_params(&args.params)?;
    let info = estimator(&args.estimator)?;
    info.resolve(&overrides)?;
    let signal = wav::load_wav(&args.input)?;
    let track = info.run(&signal, &overrides)?;
    export_track(&track, &args.out, Some(format))?;
    if let Some(path) = &args.svg {
        let models = model_track(
            &track,
            contour::DEFAULT_LOCAL_ORDER,
            contour::DEFAULT_GLOBAL_ORDER,
            contour::DEFAULT_MIN_SEG_FRAMES,
        )
        .ok();
        write(path, &svg::track_svg(&track, models.as_ref(), &track.source))?;
    }
    Ok(track)
}

pub fn rhythm(args: &RhythmArgs) -> Result<()> {
    let signal = wav::load_wav(&args.input)?;
    let track = match &args.f0_track {
        Some(path) => import_track(path, None)?,
        None => estimator("soft")?.run(&signal, &ParamSet::new())?,
    };
    let params = RhythmParams {
        display_max: args.display_max,
        ..RhythmParams::default()
    };
    let report = rhythm_report(&signal, &track, &params)?;
    let p = &args.out_prefix;
    write(&with_suffix(p, ".am.csv"), &envelope_csv(&report.am))?;
    write(&with_suffix(p, ".fm.csv"), &envelope_csv(&report.fm))?;
    write(&with_suffix(p, ".aes.csv"), &spectrum_csv(&report.aes))?;
    write(&with_suffix(p, ".fes.csv"), &spectrum_csv(&report.fes))?;
    write(&with_suffix(p, ".zones.json"), &zones_json(&report, &track.source))?;
    if args.svg {
        write(
            &with_suffix(p, ".svg"),
            &svg::spectrum_svg(&report.aes, Some(&report.am_zones), &track.source),
        )?;
    }
    Ok(())
}

pub fn compare(args: &CompareArgs) -> Result<eval::ComparisonReport> {
    if args.bench && args.k < MIN_ITERATIONS {
        return Err(Error::Usage(format!("--k must be at least {MIN_ITERATIONS}")));
    }
    let mut tracks = args
        .tracks
        .iter()
        .map(|p| import_track(p, None))
        .collect::<Result<Vec<_>>>()?;
    let mut timings = Vec::new();
    if let Some(input) = &args.input {
        let infos = args
            .estimators
            .iter()
            .map(|l| estimator(l.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        let signal = wav::load_wav(input)?;
        for info in &infos {
            tracks.push(info.run(&signal, &ParamSet::new())?);
            if args.bench {
                timings.push(benchmark(info, &ParamSet::new(), &signal, args.k)?);
            }
        }
    }
    if tracks.len() < 2 {
        return Err(Error::Usage(
            "need at least two tracks (use --tracks and/or --in)".into(),
        ));
    }
    let mut report = comparison_matrix(&tracks, args.n)?;
    if args.bench {
        report.timings = timings;
        report.k = Some(args.k);
    }
    write(&args.out, &to_json_line(&report))?;
    Ok(report)
}

pub fn model(args: &ModelArgs) -> Result<()> {
    let track = import_track(&args.input, None)?;
    let models = model_track(&track, args.local_order, args.global_order, args.min_seg_frames)?;
    write(&args.out, &models_json(&models, &track.source))
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Analyze(a) => analyze(a).map(drop),
        Command::Rhythm(a) => rhythm(a),
        Command::Compare(a) => compare(a).map(drop),
        Command::Model(a) => model(a),
    }
}

/// Parses arguments, runs, reports errors on stderr and maps them to the
/// exit-code convention: 0 ok, 1 processing error, 2 usage error.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { EXIT_USAGE } else { EXIT_PROCESSING })
        }
    }
}
