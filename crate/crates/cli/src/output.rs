//! Serialization of run artifacts: CSV, canonical JSON and SVG.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use quenchlab_core::TimeSeries;
use serde_json::Value;

pub const CSV_HEADER: &str = "time,value,label,units";

/// `x` rounded to 12 significant digits, fixed notation for moderate
/// exponents and `1.5e-7` style otherwise. Trailing zeros are dropped.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let digits = mant.replace('.', "");
        let body = if exp >= 0 {
            let (int, frac) = digits.split_at(exp as usize + 1);
            format!("{int}.{frac}")
        } else {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        };
        format!("{sign}{}", trim(body))
    } else {
        format!("{sign}{}e{exp}", trim(mant.to_string()))
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Long-format table, series after series.
pub fn series_csv(series: &[TimeSeries]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in series {
        let (label, units) = (csv_field(&s.label), csv_field(&s.units));
        for (t, v) in s.iter() {
            let _ = writeln!(out, "{},{},{label},{units}", format_significant(t), format_significant(v));
        }
    }
    out
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line chart with one `<polyline>` per series on shared axes.
pub fn series_svg(title: &str, series: &[TimeSeries]) -> String {
    let (w, h, margin) = (800.0, 500.0, 60.0);
    let finite = |v: &f64| v.is_finite();
    let ts = series.iter().flat_map(|s| s.times().iter().copied());
    let vs = series.iter().flat_map(|s| s.values().iter().copied()).filter(finite);
    let (t0, t1) = ts.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), t| (a.min(t), b.max(t)));
    let (mut v0, mut v1) = vs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !v0.is_finite() {
        (v0, v1) = (0.0, 1.0);
    }
    if v1 - v0 < 1e-12 {
        (v0, v1) = (v0 - 1.0, v1 + 1.0);
    }
    let t_span = if t1 > t0 { t1 - t0 } else { 1.0 };
    let px = |t: f64| margin + (t - t0) / t_span * (w - 2.0 * margin);
    let py = |v: f64| h - margin - (v - v0) / (v1 - v0) * (h - 2.0 * margin);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<rect x=\"{margin}\" y=\"{margin}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        w - 2.0 * margin,
        h - 2.0 * margin
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        w / 2.0,
        xml_escape(title)
    );
    for (text, x, y, anchor) in [
        (format_significant(t0), margin, h - margin + 20.0, "start"),
        (format_significant(t1), w - margin, h - margin + 20.0, "end"),
        (format_significant(v0), margin - 6.0, h - margin, "end"),
        (format_significant(v1), margin - 6.0, margin + 10.0, "end"),
    ] {
        let _ = writeln!(
            out,
            "<text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"11\">{text}</text>"
        );
    }
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = s
            .iter()
            .filter(|(_, v)| v.is_finite())
            .map(|(t, v)| format!("{:.3},{:.3}", px(t), py(v)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            points.join(" ")
        );
        let ly = margin + 16.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{ly}\" fill=\"{color}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            w - margin - 8.0,
            xml_escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Writes `files` into `dir`. If any write fails, files already written by
/// this call are removed again, as is `dir` when it did not exist before.
pub fn write_all(dir: &Path, files: &[(&str, String)]) -> std::io::Result<Vec<PathBuf>> {
    let created_dir = !dir.exists();
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        if let Err(e) = std::fs::write(&path, contents) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            let _ = std::fs::remove_file(&path);
            if created_dir {
                let _ = std::fs::remove_dir(dir);
            }
            return Err(e);
        }
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(-0.0), "0");
        assert_eq!(format_significant(1.0), "1");
        assert_eq!(format_significant(0.1), "0.1");
        assert_eq!(format_significant(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_significant(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(format_significant(123456.7890123456), "123456.789012");
        assert_eq!(format_significant(9.9999999999995), "10");
        assert_eq!(format_significant(1.5e-7), "1.5e-7");
        assert_eq!(format_significant(6.02214076e23), "6.02214076e23");
        assert_eq!(format_significant(0.000012345), "0.000012345");
    }

    #[test]
    fn csv_layout() {
        let s = TimeSeries::new(vec![0.0, 0.5], vec![1.0, 2.0], "a,b", "nats").unwrap();
        assert_eq!(
            series_csv(&[s]),
            "time,value,label,units\n0,1,\"a,b\",nats\n0.5,2,\"a,b\",nats\n"
        );
    }

    #[test]
    fn svg_has_one_polyline_per_series() {
        let a = TimeSeries::new(vec![0.0, 1.0], vec![0.0, 1.0], "a", "").unwrap();
        let b = TimeSeries::new(vec![0.0, 1.0], vec![2.0, 2.0], "<b>", "").unwrap();
        let svg = series_svg("t & v", &[a, b]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("&lt;b&gt;"));
        assert!(svg.contains("t &amp; v"));
    }

    #[test]
    fn json_keys_sorted() {
        let v = serde_json::json!({"zeta": 1, "alpha": {"b": 2, "a": 1}});
        let s = canonical_json(&v);
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
    }
}
