use std::path::Path;

use genshift_core::TriangleMesh;

use super::{format_sig, parse_f64, read_bytes, write_atomic, IoError, IoResult};

struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

enum Property {
    Scalar(String),
    List(String),
}

/// Parses ASCII PLY with a `vertex` element carrying `x y z` and a `face`
/// element carrying a `vertex_indices` (or `vertex_index`) list. Other
/// scalar properties are skipped; polygons are fan-triangulated.
pub fn parse_ply(bytes: &[u8]) -> IoResult<TriangleMesh> {
    let end = find_header_end(bytes)?;
    let header = std::str::from_utf8(&bytes[..end]).map_err(|_| IoError::Format("PLY header is not text".into()))?;
    let mut lines = header.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == "ply" => {}
        _ => return Err(IoError::parse(1, "missing `ply` magic")),
    }
    let mut elements: Vec<Element> = Vec::new();
    let mut format_seen = false;
    for (k, line) in lines {
        let ln = k + 1;
        let t: Vec<&str> = line.split_whitespace().collect();
        match t.first().copied() {
            None | Some("comment") | Some("obj_info") => {}
            Some("format") => {
                match t.get(1).copied() {
                    Some("ascii") => {}
                    Some("binary_little_endian") | Some("binary_big_endian") => {
                        return Err(IoError::Format("binary PLY is not supported; convert to ascii".into()))
                    }
                    _ => return Err(IoError::parse(ln, "unknown PLY format")),
                }
                format_seen = true;
            }
            Some("element") => {
                if t.len() != 3 {
                    return Err(IoError::parse(ln, "element needs a name and a count"));
                }
                let count = t[2].parse().map_err(|_| IoError::parse(ln, "invalid element count"))?;
                elements.push(Element { name: t[1].to_string(), count, properties: Vec::new() });
            }
            Some("property") => {
                let el = elements.last_mut().ok_or_else(|| IoError::parse(ln, "property before any element"))?;
                let prop = if t.get(1) == Some(&"list") {
                    if t.len() != 5 {
                        return Err(IoError::parse(ln, "list property needs count type, item type and name"));
                    }
                    Property::List(t[4].to_string())
                } else {
                    if t.len() != 3 {
                        return Err(IoError::parse(ln, "property needs a type and a name"));
                    }
                    Property::Scalar(t[2].to_string())
                };
                el.properties.push(prop);
            }
            Some("end_header") => break,
            Some(other) => return Err(IoError::parse(ln, format!("unknown header keyword `{other}`"))),
        }
    }
    if !format_seen {
        return Err(IoError::Format("PLY header has no format line".into()));
    }
    let header_lines = header.lines().count();
    let body = std::str::from_utf8(&bytes[end..]).map_err(|_| IoError::Format("PLY body is not text".into()))?;
    let mut rows = body.lines().enumerate().map(|(k, l)| (k + header_lines + 1, l)).filter(|(_, l)| !l.trim().is_empty());

    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for el in &elements {
        for _ in 0..el.count {
            let (ln, line) = rows
                .next()
                .ok_or_else(|| IoError::Format(format!("PLY body ends before {} {} records", el.count, el.name)))?;
            let mut t = line.split_whitespace();
            let mut xyz = [None; 3];
            for prop in &el.properties {
                match prop {
                    Property::Scalar(name) => {
                        let tok = t.next().ok_or_else(|| IoError::parse(ln, "too few values"))?;
                        let v = parse_f64(tok, ln)?;
                        match name.as_str() {
                            "x" => xyz[0] = Some(v),
                            "y" => xyz[1] = Some(v),
                            "z" => xyz[2] = Some(v),
                            _ => {}
                        }
                    }
                    Property::List(name) => {
                        let n: usize = t
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| IoError::parse(ln, "invalid list length"))?;
                        let mut items = Vec::with_capacity(n);
                        for _ in 0..n {
                            let tok = t.next().ok_or_else(|| IoError::parse(ln, "too few list items"))?;
                            items.push(tok.parse::<usize>().map_err(|_| IoError::parse(ln, format!("invalid index `{tok}`")))?);
                        }
                        if el.name == "face" && (name == "vertex_indices" || name == "vertex_index") {
                            if n < 3 {
                                return Err(IoError::parse(ln, "face needs at least 3 vertices"));
                            }
                            for j in 1..n - 1 {
                                faces.push([items[0], items[j], items[j + 1]]);
                            }
                        }
                    }
                }
            }
            if t.next().is_some() {
                return Err(IoError::parse(ln, "too many values"));
            }
            if el.name == "vertex" {
                match xyz {
                    [Some(x), Some(y), Some(z)] => positions.push([x, y, z]),
                    _ => return Err(IoError::Format("vertex element lacks x, y, z".into())),
                }
            }
        }
    }
    if let Some((ln, _)) = rows.next() {
        return Err(IoError::parse(ln, "more records than the header declares"));
    }
    Ok(TriangleMesh::new(positions, faces)?)
}

fn find_header_end(bytes: &[u8]) -> IoResult<usize> {
    let marker = b"end_header";
    let pos = bytes
        .windows(marker.len())
        .position(|w| w == marker)
        .ok_or_else(|| IoError::Format("PLY header has no end_header".into()))?;
    let nl = bytes[pos..].iter().position(|&b| b == b'\n').map_or(bytes.len(), |p| pos + p + 1);
    Ok(nl)
}

pub fn read_ply(path: &Path) -> IoResult<TriangleMesh> {
    parse_ply(&read_bytes(path)?)
}

pub fn ply_to_string(mesh: &TriangleMesh) -> String {
    let mut out = format!(
        "ply\nformat ascii 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\nelement face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.vertex_count(),
        mesh.face_count()
    );
    for p in mesh.positions() {
        out.push_str(&format!("{} {} {}\n", format_sig(p[0], 9), format_sig(p[1], 9), format_sig(p[2], 9)));
    }
    for f in mesh.faces() {
        out.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
    }
    out
}

pub fn write_ply(path: &Path, mesh: &TriangleMesh) -> IoResult<()> {
    write_atomic(path, ply_to_string(mesh).as_bytes())
}
