use std::io::{Cursor, Read, Seek};
use std::path::Path;

use craft_core::Signal;
use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result, WavError};

pub const MIN_RATE: u32 = 8000;
pub const MAX_RATE: u32 = 48000;

/// Reads a PCM16 or float32 WAV file, mono or stereo, 8 to 48 kHz.
pub fn load_wav(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| WavError::Unreadable(format!("{}: {e}", path.display())))?;
    decode_wav(&bytes)
}

/// As [`load_wav`] for an in-memory file.
pub fn decode_wav(bytes: &[u8]) -> Result<Signal> {
    let reader = WavReader::new(Cursor::new(bytes)).map_err(|e| match e {
        hound::Error::Unsupported => WavError::Unsupported("unsupported WAV encoding".into()),
        other => WavError::Unreadable(other.to_string()),
    })?;
    read_samples(reader)
}

fn read_samples<R: Read + Seek>(reader: WavReader<R>) -> Result<Signal> {
    let spec = reader.spec();
    if !(1..=2).contains(&spec.channels) {
        return Err(WavError::Unsupported(format!("{} channels", spec.channels)).into());
    }
    if !(MIN_RATE..=MAX_RATE).contains(&spec.sample_rate) {
        return Err(WavError::Unsupported(format!("sample rate {} Hz", spec.sample_rate)).into());
    }
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<Result<_, _>>(),
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<Result<_, _>>(),
        (format, bits) => {
            return Err(WavError::Unsupported(format!("{bits}-bit {format:?} samples")).into());
        }
    }
    .map_err(|e| WavError::Unreadable(e.to_string()))?;

    let samples: Vec<f64> = if spec.channels == 2 {
        interleaved.chunks_exact(2).map(|lr| (lr[0] + lr[1]) / 2.0).collect()
    } else {
        interleaved
    };
    if samples.is_empty() {
        return Err(WavError::Empty.into());
    }
    Ok(Signal::new(samples, spec.sample_rate)?)
}

/// Encodes a signal as mono 16-bit PCM. Samples are clamped to [-1, 1).
pub fn encode_wav(signal: &Signal) -> Vec<u8> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate(),
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut out = Cursor::new(Vec::new());
    {
        let mut writer = WavWriter::new(&mut out, spec).expect("in-memory writer");
        for s in signal.samples() {
            let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
            writer.write_sample(v).expect("in-memory writer");
        }
        writer.finalize().expect("in-memory writer");
    }
    out.into_inner()
}

pub fn save_wav(signal: &Signal, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_wav(signal)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pcm16(channels: u16, rate: u32, frames: &[&[i16]]) -> Vec<u8> {
        let spec = WavSpec {
            channels,
            sample_rate: rate,
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        };
        let mut out = Cursor::new(Vec::new());
        let mut w = WavWriter::new(&mut out, spec).unwrap();
        for frame in frames {
            for s in *frame {
                w.write_sample(*s).unwrap();
            }
        }
        w.finalize().unwrap();
        out.into_inner()
    }

    #[test]
    fn scales_by_32768() {
        let sig = decode_wav(&pcm16(1, 16000, &[&[16384i16][..]; 10])).unwrap();
        assert!(sig.samples().iter().all(|s| *s == 0.5));
        let sig = decode_wav(&pcm16(1, 16000, &[&[-32768]])).unwrap();
        assert_eq!(sig.samples(), &[-1.0]);
    }

    #[test]
    fn stereo_is_averaged() {
        let sig = decode_wav(&pcm16(2, 16000, &[&[16384i16, -16384][..]; 8])).unwrap();
        assert_eq!(sig.len(), 8);
        assert!(sig.samples().iter().all(|s| *s == 0.0));
    }

    #[test]
    fn float_samples_pass_through() {
        let spec = WavSpec {
            channels: 1,
            sample_rate: 8000,
            bits_per_sample: 32,
            sample_format: SampleFormat::Float,
        };
        let mut out = Cursor::new(Vec::new());
        let mut w = WavWriter::new(&mut out, spec).unwrap();
        for v in [0.25f32, -0.75] {
            w.write_sample(v).unwrap();
        }
        w.finalize().unwrap();
        let sig = decode_wav(&out.into_inner()).unwrap();
        assert_eq!(sig.samples(), &[0.25, -0.75]);
    }

    #[test]
    fn failures_are_distinct() {
        assert!(matches!(decode_wav(&[]), Err(Error::Wav(WavError::Unreadable(_)))));
        assert!(matches!(
            decode_wav(b"not a wav file at all"),
            Err(Error::Wav(WavError::Unreadable(_)))
        ));
        assert!(matches!(
            decode_wav(&pcm16(1, 16000, &[])),
            Err(Error::Wav(WavError::Empty))
        ));
        assert!(matches!(
            decode_wav(&pcm16(1, 96000, &[&[1]])),
            Err(Error::Wav(WavError::Unsupported(_)))
        ));
        let spec = WavSpec {
            channels: 1,
            sample_rate: 16000,
            bits_per_sample: 24,
            sample_format: SampleFormat::Int,
        };
        let mut out = Cursor::new(Vec::new());
        let mut w = WavWriter::new(&mut out, spec).unwrap();
        w.write_sample(5i32).unwrap();
        w.finalize().unwrap();
        assert!(matches!(
            decode_wav(&out.into_inner()),
            Err(Error::Wav(WavError::Unsupported(_)))
        ));
    }

    #[test]
    fn round_trip_within_quantisation() {
        let sig = craft_core::fixtures::sine(200.0, 0.5, 16000, 0.1);
        let back = decode_wav(&encode_wav(&sig)).unwrap();
        assert_eq!(back.sample_rate(), 16000);
        for (a, b) in sig.samples().iter().zip(back.samples()) {
            assert!((a - b).abs() <= 0.5 / 32768.0 + 1e-12);
        }
    }
}
