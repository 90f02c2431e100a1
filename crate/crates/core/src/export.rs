//! Deterministic serialization of slice results.

use std::fmt::Write as _;

use crate::contour::{Bitmap, Contour};
use crate::engine::SliceResult;

/// Nine significant digits: positional for exponents in `[-5, 9)`,
/// scientific otherwise. Negative zero prints as zero.
pub fn format_number(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    if !v.is_finite() {
        return "null".into();
    }
    let sci = format!("{v:.8e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..9).contains(&exp) {
        format!("{:.*}", (8 - exp) as usize, v)
    } else {
        sci
    }
}

fn contour_record(out: &mut String, z: f64, c: &Contour) {
    let _ = write!(out, "{{\"z\":{},\"source\":\"final\",\"points\":[", format_number(z));
    for (i, p) in c.points().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", format_number(p.x), format_number(p.y));
    }
    let _ = write!(out, "],\"area\":{}}}", format_number(c.area()));
}

/// One JSON object per contour, in canonical order.
pub fn jsonl_records(slice: &SliceResult) -> Vec<String> {
    slice
        .contours
        .contours
        .iter()
        .map(|c| {
            let mut s = String::new();
            contour_record(&mut s, slice.z, c);
            s
        })
        .collect()
}

/// JSON Lines: each record followed by a newline; empty slices give no bytes.
pub fn write_jsonl(slice: &SliceResult) -> Vec<u8> {
    let mut out = String::new();
    for r in jsonl_records(slice) {
        out.push_str(&r);
        out.push('\n');
    }
    out.into_bytes()
}

/// One closed path per contour in millimeter coordinates (y up).
pub fn write_svg(slice: &SliceResult) -> Vec<u8> {
    let contours = &slice.contours.contours;
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in contours.iter().flat_map(|c| c.points()) {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    if contours.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let f = |v: f64| format!("{:.6}", if v == 0.0 { 0.0 } else { v });
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" data-z=\"{}\">",
        f(x0),
        f(-y1),
        f(x1 - x0),
        f(y1 - y0),
        f(slice.z)
    );
    let _ = writeln!(out, "<g transform=\"scale(1,-1)\" fill=\"black\" fill-rule=\"nonzero\" stroke=\"none\">");
    for c in contours {
        out.push_str("<path d=\"");
        for (i, p) in c.points().iter().enumerate() {
            let _ = write!(out, "{}{} {} ", if i == 0 { "M" } else { "L" }, f(p.x), f(p.y));
        }
        out.push_str("Z\"/>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out.into_bytes()
}

/// 8-bit grayscale PNG, solid pixels white, top row first.
pub fn write_png(bitmap: &Bitmap) -> Result<Vec<u8>, png::EncodingError> {
    let mut buf = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut buf, bitmap.width() as u32, bitmap.height() as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header()?;
        let data: Vec<u8> = bitmap.to_gray_rows().concat();
        w.write_image_data(&data)?;
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{ContourKind, ContourSet};
    use crate::geom::Point2;

    fn slice(contours: Vec<Contour>) -> SliceResult {
        SliceResult { index: 0, z: 0.5, contours: ContourSet::new(contours, 0.5), error: None }
    }

    fn tri(ccw: bool) -> Contour {
        let mut p = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        if !ccw {
            p.reverse();
        }
        Contour::new(p, -1, ContourKind::Final).unwrap()
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.5), "0.500000000");
        assert_eq!(format_number(-0.0), "0.00000000");
        assert_eq!(format_number(12.25), "12.2500000");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333");
        assert_eq!(format_number(1e-7), "1.00000000e-7");
        assert_eq!(format_number(123456789.0), "123456789");
        assert_eq!(format_number(-2.5e-5), "-0.0000250000000");
    }

    #[test]
    fn jsonl_lines() {
        assert!(write_jsonl(&slice(vec![])).is_empty());
        let s = String::from_utf8(write_jsonl(&slice(vec![tri(true)]))).unwrap();
        assert_eq!(s.lines().count(), 1);
        assert!(s.contains("\"area\":0.500000000"));
        let s = String::from_utf8(write_jsonl(&slice(vec![tri(false)]))).unwrap();
        assert!(s.contains("\"area\":-0.500000000"));
    }

    #[test]
    fn svg_paths() {
        let s = String::from_utf8(write_svg(&slice(vec![]))).unwrap();
        assert!(s.contains("<svg") && !s.contains("<path"));
        let s = String::from_utf8(write_svg(&slice(vec![tri(true), tri(false)]))).unwrap();
        assert_eq!(s.matches("<path").count(), 2);
        assert!(s.contains("M0.000000 0.000000 L1.000000 0.000000 L0.000000 1.000000 Z"));
    }
}
