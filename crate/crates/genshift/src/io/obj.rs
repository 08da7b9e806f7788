use std::path::Path;

use genshift_core::TriangleMesh;

use super::{format_sig, parse_f64, read_text, tokens, write_atomic, IoError, IoResult};

/// Statements that carry data this reader does not use.
const IGNORED: &[&str] = &["vn", "vt", "vp", "o", "g", "s", "l", "usemtl", "mtllib"];

/// Parses `v x y z` and `f i j k ...` records; indices are 1-based and
/// polygons are fan-triangulated as `(1,2,3), (1,3,4), ...`.
pub fn parse_obj(text: &str) -> IoResult<TriangleMesh> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        let mut t = tokens(line);
        let Some(keyword) = t.next() else { continue };
        match keyword {
            "v" => {
                let coords: Vec<&str> = t.collect();
                if coords.len() != 3 && coords.len() != 4 {
                    return Err(IoError::parse(ln, "vertex needs 3 coordinates"));
                }
                positions.push([parse_f64(coords[0], ln)?, parse_f64(coords[1], ln)?, parse_f64(coords[2], ln)?]);
            }
            "f" => {
                let mut corners = Vec::new();
                for tok in t {
                    let index = tok.split('/').next().unwrap_or("");
                    let i: usize = index.parse().map_err(|_| IoError::parse(ln, format!("invalid face index `{tok}`")))?;
                    if i == 0 {
                        return Err(IoError::parse(ln, "face indices are 1-based"));
                    }
                    corners.push(i - 1);
                }
                if corners.len() < 3 {
                    return Err(IoError::parse(ln, "face needs at least 3 vertices"));
                }
                for j in 1..corners.len() - 1 {
                    faces.push([corners[0], corners[j], corners[j + 1]]);
                }
            }
            kw if IGNORED.contains(&kw) => {}
            other => return Err(IoError::parse(ln, format!("unknown statement `{other}`"))),
        }
    }
    Ok(TriangleMesh::new(positions, faces)?)
}

pub fn read_obj(path: &Path) -> IoResult<TriangleMesh> {
    parse_obj(&read_text(path)?)
}

/// Positions with 9 significant digits, then 1-based faces.
pub fn obj_to_string(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for p in mesh.positions() {
        out.push_str(&format!("v {} {} {}\n", format_sig(p[0], 9), format_sig(p[1], 9), format_sig(p[2], 9)));
    }
    for f in mesh.faces() {
        out.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    out
}

pub fn write_obj(path: &Path, mesh: &TriangleMesh) -> IoResult<()> {
    write_atomic(path, obj_to_string(mesh).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_is_fanned() {
        let mesh = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n").unwrap();
        assert_eq!(mesh.faces(), &[[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn slash_forms_and_comments() {
        let mesh = parse_obj("# tri\nv 0 0 0\nv 1 0 0\nvn 0 0 1\nv 0 1 0 # third\nf 1//1 2//1 3//1\n").unwrap();
        assert_eq!(mesh.faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = parse_obj("v 0 0 0\nv 1 0\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
        let err = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 4, .. }));
        let err = parse_obj("bogus 1\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 1, .. }));
    }
}
