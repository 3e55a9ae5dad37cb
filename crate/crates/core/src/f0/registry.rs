//! Built-in estimators with machine-readable parameter schemas.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::signal::Signal;

use super::{amdf_estimate, soft_estimate, AmdfParams, F0Track, SoftMethod, SoftParams};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl ParamValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ParamValue::Number(v) => Some(*v),
            ParamValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            ParamValue::Number(_) => None,
        }
    }
}

/// Parameter name to value.
pub type ParamSet = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum ParamKind {
    /// Real number in `[min, max]`.
    Float {
        min: f64,
        max: f64,
    },
    Integer {
        min: i64,
        max: i64,
        odd: bool,
    },
    Choice {
        options: &'static [&'static str],
    },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ParamSpec {
    pub name: &'static str,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: ParamKind,
    pub default: ParamValue,
    pub unit: &'static str,
    pub description: &'static str,
}

impl ParamSpec {
    fn check(&self, value: &ParamValue) -> Result<()> {
        match (&self.kind, value) {
            (ParamKind::Float { min, max }, ParamValue::Number(v)) => {
                if v.is_finite() && *v >= *min && *v <= *max {
                    Ok(())
                } else {
                    Err(Error::param(self.name, format!("must lie in [{min}, {max}]")))
                }
            }
            (ParamKind::Integer { min, max, odd }, ParamValue::Number(v)) => {
                if libm::trunc(*v) != *v || *v < *min as f64 || *v > *max as f64 {
                    Err(Error::param(self.name, format!("must be an integer in [{min}, {max}]")))
                } else if *odd && (*v as i64) % 2 == 0 {
                    Err(Error::param(self.name, "must be odd"))
                } else {
                    Ok(())
                }
            }
            (ParamKind::Choice { options }, ParamValue::Text(s)) => {
                if options.contains(&s.as_str()) {
                    Ok(())
                } else {
                    Err(Error::param(self.name, format!("must be one of {options:?}")))
                }
            }
            (ParamKind::Choice { .. }, ParamValue::Number(_)) => Err(Error::param(self.name, "expected a string")),
            (_, ParamValue::Text(_)) => Err(Error::param(self.name, "expected a number")),
        }
    }
}

/// One registered estimator.
#[derive(Debug, Clone)]
pub struct EstimatorInfo {
    pub label: &'static str,
    pub description: &'static str,
    pub params: Vec<ParamSpec>,
    run: fn(&Signal, &ParamSet) -> Result<F0Track>,
}

impl EstimatorInfo {
    /// Fills defaults and validates every override against the schema.
    pub fn resolve(&self, overrides: &ParamSet) -> Result<ParamSet> {
        if let Some(unknown) = overrides
            .keys()
            .find(|k| !self.params.iter().any(|p| p.name == k.as_str()))
        {
            return Err(Error::param(
                "params",
                format!("unknown parameter \"{unknown}\" for {}", self.label),
            ));
        }
        let mut resolved = ParamSet::new();
        for spec in &self.params {
            let value = overrides.get(spec.name).unwrap_or(&spec.default);
            spec.check(value)?;
            resolved.insert(spec.name.to_string(), value.clone());
        }
        Ok(resolved)
    }

    /// Resolves the parameters and runs the estimator.
    pub fn run(&self, signal: &Signal, overrides: &ParamSet) -> Result<F0Track> {
        let resolved = self.resolve(overrides)?;
        (self.run)(signal, &resolved)
    }
}

fn number(set: &ParamSet, name: &'static str) -> Result<f64> {
    set.get(name)
        .and_then(ParamValue::as_number)
        .ok_or_else(|| Error::param(name, "missing numeric value"))
}

fn count(set: &ParamSet, name: &'static str) -> Result<usize> {
    let v = number(set, name)?;
    if v < 0.0 || libm::trunc(v) != v {
        return Err(Error::param(name, "must be a non-negative integer"));
    }
    Ok(v as usize)
}

impl SoftParams {
    /// Builds parameters from a resolved set (see [`EstimatorInfo::resolve`]).
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        let method_name = set
            .get("method")
            .and_then(ParamValue::as_text)
            .ok_or_else(|| Error::param("method", "missing"))?;
        Ok(SoftParams {
            clip_ratio: number(set, "clip_ratio")?,
            lp_cutoff: number(set, "lp_cutoff")?,
            hp_cutoff: number(set, "hp_cutoff")?,
            frame_ms: number(set, "frame_ms")?,
            hop_ms: number(set, "hop_ms")?,
            method: SoftMethod::from_name(method_name).ok_or_else(|| Error::param("method", "unknown method"))?,
            f_min: number(set, "f_min")?,
            f_max: number(set, "f_max")?,
            median_win: count(set, "median_win")?,
            voicing_rms: number(set, "voicing_rms")?,
        })
    }

    pub fn to_set(&self) -> ParamSet {
        let mut set = ParamSet::new();
        let mut put = |k: &str, v: f64| {
            set.insert(k.to_string(), ParamValue::Number(v));
        };
        put("clip_ratio", self.clip_ratio);
        put("lp_cutoff", self.lp_cutoff);
        put("hp_cutoff", self.hp_cutoff);
        put("frame_ms", self.frame_ms);
        put("hop_ms", self.hop_ms);
        put("f_min", self.f_min);
        put("f_max", self.f_max);
        put("median_win", self.median_win as f64);
        put("voicing_rms", self.voicing_rms);
        set.insert("method".to_string(), ParamValue::Text(self.method.name().to_string()));
        set
    }
}

impl AmdfParams {
    pub fn from_set(set: &ParamSet) -> Result<Self> {
        Ok(AmdfParams {
            frame_ms: number(set, "frame_ms")?,
            hop_ms: number(set, "hop_ms")?,
            f_min: number(set, "f_min")?,
            f_max: number(set, "f_max")?,
            dip_ratio: number(set, "dip_ratio")?,
            median_win: count(set, "median_win")?,
        })
    }

    pub fn to_set(&self) -> ParamSet {
        let mut set = ParamSet::new();
        for (k, v) in [
            ("frame_ms", self.frame_ms),
            ("hop_ms", self.hop_ms),
            ("f_min", self.f_min),
            ("f_max", self.f_max),
            ("dip_ratio", self.dip_ratio),
            ("median_win", self.median_win as f64),
        ] {
            set.insert(k.to_string(), ParamValue::Number(v));
        }
        set
    }
}

fn float(
    name: &'static str,
    min: f64,
    max: f64,
    default: f64,
    unit: &'static str,
    description: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        kind: ParamKind::Float { min, max },
        default: ParamValue::Number(default),
        unit,
        description,
    }
}

fn median_spec(default: usize) -> ParamSpec {
    ParamSpec {
        name: "median_win",
        kind: ParamKind::Integer {
            min: 1,
            max: 101,
            odd: true,
        },
        default: ParamValue::Number(default as f64),
        unit: "frames",
        description: "median smoothing window over the track",
    }
}

fn soft_schema() -> Vec<ParamSpec> {
    let d = SoftParams::default();
    alloc::vec![
        float(
            "clip_ratio",
            0.0,
            0.99,
            d.clip_ratio,
            "",
            "center-clipping threshold relative to the peak"
        ),
        float("lp_cutoff", 1.0, 24000.0, d.lp_cutoff, "Hz", "low-pass cutoff"),
        float("hp_cutoff", 1.0, 24000.0, d.hp_cutoff, "Hz", "high-pass cutoff"),
        float("frame_ms", 1.0, 1000.0, d.frame_ms, "ms", "analysis frame length"),
        float("hop_ms", 0.1, 1000.0, d.hop_ms, "ms", "frame hop"),
        ParamSpec {
            name: "method",
            kind: ParamKind::Choice {
                options: &["fft_harmonic", "zero_crossing", "peak_picking"],
            },
            default: ParamValue::Text(d.method.name().to_string()),
            unit: "",
            description: "per-frame frequency measurement",
        },
        float("f_min", 1.0, 24000.0, d.f_min, "Hz", "lowest accepted F0"),
        float("f_max", 1.0, 24000.0, d.f_max, "Hz", "highest accepted F0"),
        median_spec(d.median_win),
        float(
            "voicing_rms",
            0.0,
            10.0,
            d.voicing_rms,
            "",
            "frame RMS gate relative to the global RMS"
        ),
    ]
}

fn amdf_schema() -> Vec<ParamSpec> {
    let d = AmdfParams::default();
    alloc::vec![
        float("frame_ms", 1.0, 1000.0, d.frame_ms, "ms", "analysis frame length"),
        float("hop_ms", 0.1, 1000.0, d.hop_ms, "ms", "frame hop"),
        float("f_min", 1.0, 24000.0, d.f_min, "Hz", "lowest accepted F0"),
        float("f_max", 1.0, 24000.0, d.f_max, "Hz", "highest accepted F0"),
        float(
            "dip_ratio",
            0.001,
            0.999,
            d.dip_ratio,
            "",
            "required relative AMDF dip for voicing"
        ),
        median_spec(d.median_win),
    ]
}

fn run_soft(signal: &Signal, set: &ParamSet) -> Result<F0Track> {
    soft_estimate(signal, &SoftParams::from_set(set)?)
}

fn run_amdf(signal: &Signal, set: &ParamSet) -> Result<F0Track> {
    amdf_estimate(signal, &AmdfParams::from_set(set)?)
}

/// The built-in estimators. Tracks from external tools are imported rather
/// than registered here.
pub fn estimator_registry() -> Vec<EstimatorInfo> {
    alloc::vec![
        EstimatorInfo {
            label: "soft",
            description: "clip, band-limit, per-frame candidate, gate, range clip, median smoothing",
            params: soft_schema(),
            run: run_soft,
        },
        EstimatorInfo {
            label: "amdf",
            description: "average magnitude difference function",
            params: amdf_schema(),
            run: run_amdf,
        },
    ]
}

pub fn estimator(label: &str) -> Result<EstimatorInfo> {
    estimator_registry()
        .into_iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::UnknownEstimator(label.to_string()))
}
