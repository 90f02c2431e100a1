//! Binary and ASCII STL reading. File normals are ignored; orientation comes
//! from vertex order.

use super::IndexedMesh;
use crate::error::MeshError;
use crate::geom::Point3;

const HEADER_LEN: usize = 80;
const RECORD_LEN: usize = 50;

/// Loads an STL from memory, auto-detecting binary vs ASCII.
pub fn load_stl(bytes: &[u8]) -> Result<IndexedMesh, MeshError> {
    let soup = if looks_binary(bytes) { parse_binary(bytes)? } else { parse_ascii(bytes)? };
    IndexedMesh::from_soup(&soup)
}

fn looks_binary(bytes: &[u8]) -> bool {
    if bytes.len() >= HEADER_LEN + 4 {
        let n = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
        if bytes.len() == HEADER_LEN + 4 + n * RECORD_LEN {
            return true;
        }
    }
    let head = String::from_utf8_lossy(&bytes[..bytes.len().min(512)]);
    !head.trim_start().to_ascii_lowercase().starts_with("solid")
}

fn parse_binary(bytes: &[u8]) -> Result<Vec<[Point3; 3]>, MeshError> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(MeshError::TruncatedBody { declared: 0, found: 0 });
    }
    let declared = u32::from_le_bytes(bytes[80..84].try_into().unwrap());
    let body = &bytes[84..];
    let found = body.len() / RECORD_LEN;
    if found < declared as usize {
        return Err(MeshError::TruncatedBody { declared, found });
    }
    if declared == 0 {
        return Err(MeshError::NoTriangles);
    }
    let read = |off: usize| f32::from_le_bytes(body[off..off + 4].try_into().unwrap()) as f64;
    let soup = (0..declared as usize)
        .map(|i| {
            let rec = i * RECORD_LEN + 12;
            let p = |k: usize| {
                let o = rec + 12 * k;
                Point3::new(read(o), read(o + 4), read(o + 8))
            };
            [p(0), p(1), p(2)]
        })
        .collect();
    Ok(soup)
}

fn parse_ascii(bytes: &[u8]) -> Result<Vec<[Point3; 3]>, MeshError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| MeshError::AsciiParse { line: 0, message: format!("not utf-8: {e}") })?;
    let mut soup = Vec::new();
    let mut pending: Vec<Point3> = Vec::with_capacity(3);
    let mut in_facet = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let err = |message: &str| MeshError::AsciiParse { line, message: message.to_string() };
        let mut words = raw.split_whitespace();
        let Some(kw) = words.next() else { continue };
        match kw.to_ascii_lowercase().as_str() {
            "solid" | "endsolid" | "outer" | "endloop" => {}
            "facet" => {
                if in_facet {
                    return Err(err("nested facet"));
                }
                in_facet = true;
                pending.clear();
            }
            "vertex" => {
                if !in_facet {
                    return Err(err("vertex outside facet"));
                }
                let coords: Result<Vec<f64>, _> = words.by_ref().take(3).map(str::parse::<f64>).collect();
                let coords = coords.map_err(|e| err(&format!("bad coordinate: {e}")))?;
                if coords.len() != 3 || words.next().is_some() {
                    return Err(err("vertex needs exactly three coordinates"));
                }
                if pending.len() == 3 {
                    return Err(err("more than three vertices in facet"));
                }
                pending.push(Point3::new(coords[0], coords[1], coords[2]));
            }
            "endfacet" => {
                if !in_facet || pending.len() != 3 {
                    return Err(err("facet does not have three vertices"));
                }
                soup.push([pending[0], pending[1], pending[2]]);
                in_facet = false;
            }
            other => return Err(err(&format!("unexpected keyword `{other}`"))),
        }
    }
    if in_facet {
        return Err(MeshError::AsciiParse { line: text.lines().count(), message: "unterminated facet".into() });
    }
    if soup.is_empty() {
        return Err(MeshError::NoTriangles);
    }
    Ok(soup)
}

/// Writes a binary STL; normals are computed from vertex order.
pub fn write_stl_binary(soup: &[[Point3; 3]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + soup.len() * RECORD_LEN);
    let mut header = [0u8; HEADER_LEN];
    header[..8].copy_from_slice(b"offslice");
    out.extend_from_slice(&header);
    out.extend_from_slice(&(soup.len() as u32).to_le_bytes());
    for tri in soup {
        let n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
        let len = n.norm();
        let n = if len > 0.0 { n * (1.0 / len) } else { n };
        for p in std::iter::once(n).chain(tri.iter().copied()) {
            for c in [p.x, p.y, p.z] {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&[0, 0]);
    }
    out
}
