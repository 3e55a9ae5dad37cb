//! The clip catalog: synthetic fixtures plus any WAV files from a directory.

use std::path::Path;
use std::sync::Arc;

use craft_core::{fixtures, Signal};
use serde::Serialize;

const RATE: u32 = 16000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClipEntry {
    pub id: String,
    pub name: String,
    pub duration_s: f64,
    pub sample_rate: u32,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct Clip {
    pub entry: ClipEntry,
    pub signal: Arc<Signal>,
}

impl Clip {
    fn new(id: &str, name: &str, description: &str, signal: Signal) -> Self {
        Clip {
            entry: ClipEntry {
                id: id.into(),
                name: name.into(),
                duration_s: signal.duration(),
                sample_rate: signal.sample_rate(),
                description: description.into(),
            },
            signal: Arc::new(signal),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    clips: Vec<Clip>,
}

impl Catalog {
    pub fn builtin() -> Self {
        let clips = vec![
            Clip::new(
                "sine200",
                "200 Hz sine",
                "pure tone, 1 s",
                fixtures::sine(200.0, 0.5, RATE, 1.0),
            ),
            Clip::new(
                "sawtooth120",
                "120 Hz sawtooth",
                "harmonic-rich tone, 1 s",
                fixtures::sawtooth(120.0, 0.5, RATE, 1.0),
            ),
            Clip::new(
                "meander",
                "sawtooth with F0 meander",
                "F0 wanders between 100 and 200 Hz, 5 s",
                fixtures::meander(RATE, 5.0),
            ),
            Clip::new(
                "am_noise",
                "AM noise",
                "white noise amplitude-modulated at 4 Hz, 5 s",
                fixtures::am_noise(4.0, 1.0, RATE, 5.0, 11),
            ),
            Clip::new(
                "fm_carrier",
                "FM sawtooth",
                "F0 = 150 + 30 sin(2 pi 2 t), 5 s",
                fixtures::fm_sawtooth(150.0, 30.0, 2.0, RATE, 5.0),
            ),
            Clip::new(
                "comodulated",
                "co-modulated carrier",
                "amplitude and F0 share a 3 Hz modulator (depth 0.5), 5 s",
                fixtures::comodulated(150.0, 30.0, 3.0, 0.5, RATE, 5.0),
            ),
        ];
        Catalog { clips }
    }

    /// Built-in clips followed by every `*.wav` in `dir`, sorted by file
    /// name. The file stem is the clip id. Files are decoded up front so a
    /// broken clip stops the server at startup.
    pub fn with_dir(dir: &Path) -> craft::Result<Self> {
        let mut catalog = Catalog::builtin();
        let read = std::fs::read_dir(dir).map_err(|e| craft::Error::Usage(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = read
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("wav")))
            .collect();
        paths.sort();
        for path in paths {
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            if id.is_empty() || catalog.get(&id).is_some() {
                return Err(craft::Error::Usage(format!(
                    "{}: duplicate or empty clip id",
                    path.display()
                )));
            }
            let signal = craft::wav::load_wav(&path)?;
            let description = format!("file {}", path.file_name().unwrap_or_default().to_string_lossy());
            catalog.clips.push(Clip::new(&id, &id, &description, signal));
        }
        Ok(catalog)
    }

    pub fn entries(&self) -> Vec<&ClipEntry> {
        self.clips.iter().map(|c| &c.entry).collect()
    }

    pub fn get(&self, id: &str) -> Option<&Clip> {
        self.clips.iter().find(|c| c.entry.id == id)
    }
}
