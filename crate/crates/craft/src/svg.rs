//! Static SVG plots: fixed 960x320 viewport, 1-2-5 axis ticks, no
//! text beyond axis labels and the source label.

use std::fmt::Write as _;

use craft_core::contour::{voiced_segments, ContourModels, PolyModel};
use craft_core::dsp::Spectrum;
use craft_core::f0::F0Track;
use craft_core::rhythm::RhythmZoneSet;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 320.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 44.0;
const TARGET_TICKS: f64 = 6.0;
const POLY_SAMPLES: usize = 64;

/// Tick spacing from {1, 2, 5} x 10^k giving about `TARGET_TICKS` ticks.
pub fn tick_step(span: f64) -> f64 {
    if !(span > 0.0) || !span.is_finite() {
        return 1.0;
    }
    let raw = span / TARGET_TICKS;
    let mag = 10f64.powf(raw.log10().floor());
    let unit = raw / mag;
    let nice = if unit <= 1.0 {
        1.0
    } else if unit <= 2.0 {
        2.0
    } else if unit <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

pub fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_text(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s.trim_start_matches(['-', '0', '.']).is_empty() {
        s[1..].to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Canvas {
    out: String,
    x: (f64, f64),
    y: (f64, f64),
}

impl Canvas {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        )
        .unwrap();
        Canvas {
            out,
            x: widen(x),
            y: widen(y),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&mut self, x_label: &str, y_label: &str, source: &str) {
        let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        writeln!(
            self.out,
            r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            x1 - x0,
            y1 - y0
        )
        .unwrap();
        let step = tick_step(self.x.1 - self.x.0);
        for t in ticks(self.x.0, self.x.1) {
            let p = self.px(t);
            writeln!(
                self.out,
                r#"<line x1="{p:.2}" y1="{y1}" x2="{p:.2}" y2="{:.2}" stroke="black"/>"#,
                y1 + 4.0
            )
            .unwrap();
            writeln!(
                self.out,
                r#"<text x="{p:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
                y1 + 16.0,
                tick_text(t, step)
            )
            .unwrap();
        }
        let step = tick_step(self.y.1 - self.y.0);
        for t in ticks(self.y.0, self.y.1) {
            let p = self.py(t);
            writeln!(
                self.out,
                r#"<line x1="{:.2}" y1="{p:.2}" x2="{x0}" y2="{p:.2}" stroke="black"/>"#,
                x0 - 4.0
            )
            .unwrap();
            writeln!(
                self.out,
                r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
                x0 - 6.0,
                p + 4.0,
                tick_text(t, step)
            )
            .unwrap();
        }
        writeln!(
            self.out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 8.0,
            escape(x_label)
        )
        .unwrap();
        writeln!(
            self.out,
            r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(y_label)
        )
        .unwrap();
        writeln!(
            self.out,
            r#"<text x="{x0}" y="16" font-size="12">{}</text>"#,
            escape(source)
        )
        .unwrap();
    }

    fn polyline(&mut self, points: impl Iterator<Item = (f64, f64)>, stroke: &str, dashed: bool) {
        let coords: Vec<String> = points
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        if coords.is_empty() {
            return;
        }
        let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
        writeln!(
            self.out,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"{dash}/>"#,
            coords.join(" ")
        )
        .unwrap();
    }

    fn vline(&mut self, x: f64, stroke: &str) {
        let p = self.px(x);
        writeln!(
            self.out,
            r#"<line x1="{p:.2}" y1="{TOP}" x2="{p:.2}" y2="{}" stroke="{stroke}" stroke-width="1" stroke-dasharray="2 2"/>"#,
            HEIGHT - BOTTOM
        )
        .unwrap();
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Envelope spectrum with rhythm-zone boundaries as vertical lines.
pub fn spectrum_svg(spec: &Spectrum, zones: Option<&RhythmZoneSet>, source: &str) -> String {
    let x_max = zones.map_or_else(|| spec.freqs.last().copied().unwrap_or(1.0), |z| z.display_max);
    let (_, y_max) = range(spec.mags.iter().copied());
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let mut c = Canvas::new((0.0, x_max), (0.0, y_max));
    c.axes("frequency (Hz)", "magnitude", source);
    c.polyline(
        spec.freqs.iter().copied().zip(spec.mags.iter().copied()),
        "black",
        false,
    );
    if let Some(z) = zones {
        for b in &z.boundaries {
            c.vline(*b, "red");
        }
    }
    c.finish()
}

fn sampled(model: &PolyModel) -> impl Iterator<Item = (f64, f64)> + '_ {
    let (a, b) = model.span;
    (0..=POLY_SAMPLES)
        .map(move |i| a + (b - a) * i as f64 / POLY_SAMPLES as f64)
        .map(move |t| (t, model.eval(t)))
}

/// F0 track per voiced segment, with local models solid and the global
/// model dashed.
pub fn track_svg(track: &F0Track, models: Option<&ContourModels>, source: &str) -> String {
    let (t0, t1) = match (track.times.first(), track.times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => (0.0, 1.0),
    };
    let (lo, hi) = range(track.f0.iter().copied().filter(|f| *f > 0.0));
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (0.0, 1.0) };
    let pad = ((hi - lo) * 0.1).max(5.0);
    let mut c = Canvas::new((t0, t1), ((lo - pad).max(0.0), hi + pad));
    c.axes("time (s)", "F0 (Hz)", source);
    for seg in voiced_segments(track) {
        let pts = (seg.start..seg.end).map(|i| (track.times[i], track.f0[i]));
        c.polyline(pts, "black", false);
    }
    if let Some(m) = models {
        c.polyline(sampled(&m.global), "red", true);
        for local in &m.local {
            c.polyline(sampled(local), "orange", false);
        }
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_are_one_two_five() {
        assert_eq!(tick_step(20.0), 5.0);
        assert_eq!(tick_step(10.0), 2.0);
        assert_eq!(tick_step(0.6), 0.1);
        assert_eq!(tick_step(300.0), 50.0);
        assert_eq!(ticks(0.0, 20.0), vec![0.0, 5.0, 10.0, 15.0, 20.0]);
    }

    #[test]
    fn tick_text_drops_noise() {
        assert_eq!(tick_text(0.30000000000000004, 0.1), "0.3");
        assert_eq!(tick_text(-0.0, 1.0), "0");
        assert_eq!(tick_text(150.0, 50.0), "150");
    }

    #[test]
    fn spectrum_plot_is_deterministic() {
        let spec = Spectrum {
            freqs: (0..41).map(|i| i as f64 * 0.5).collect(),
            mags: (0..41).map(|i| ((i as f64) * 0.3).sin().abs()).collect(),
            resolution: 0.5,
        };
        let a = spectrum_svg(&spec, None, "aes <test>");
        assert_eq!(a, spectrum_svg(&spec, None, "aes <test>"));
        assert!(a.starts_with("<svg"));
        assert!(a.contains(r#"width="960" height="320""#));
        assert!(a.contains("aes &lt;test&gt;"));
        assert!(a.trim_end().ends_with("</svg>"));
    }
}
