use std::path::Path;

use genshift_core::math::{norm, scale};
use genshift_core::OrientedPointCloud;

use super::{format_sig, parse_f64, read_text, tokens, write_atomic, IoError, IoResult};

/// Normals further than this from unit length are rejected.
const MAX_NORM_DEVIATION: f64 = 0.1;
/// Deviations above this are reported as renormalized.
const REPORT_DEVIATION: f64 = 1e-6;

/// A parsed cloud with the number of normals that were noticeably rescaled.
#[derive(Debug, Clone)]
pub struct XyznCloud {
    pub cloud: OrientedPointCloud,
    pub renormalized: usize,
}

/// Parses `x y z nx ny nz` lines. Normals within 10% of unit length are
/// renormalized; others are an error. An empty file is an error.
pub fn parse_xyzn(text: &str) -> IoResult<XyznCloud> {
    let mut points = Vec::new();
    let mut normals = Vec::new();
    let mut renormalized = 0;
    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        let t: Vec<&str> = tokens(line).collect();
        if t.is_empty() {
            continue;
        }
        if t.len() != 6 {
            return Err(IoError::parse(ln, format!("expected 6 values, found {}", t.len())));
        }
        let mut v = [0.0; 6];
        for (slot, tok) in v.iter_mut().zip(&t) {
            *slot = parse_f64(tok, ln)?;
        }
        let n = [v[3], v[4], v[5]];
        let len = norm(n);
        let deviation = (len - 1.0).abs();
        if deviation > MAX_NORM_DEVIATION {
            return Err(IoError::parse(ln, format!("normal length {len} is not close to 1")));
        }
        if deviation > REPORT_DEVIATION {
            renormalized += 1;
        }
        points.push([v[0], v[1], v[2]]);
        normals.push(scale(n, 1.0 / len));
    }
    if points.is_empty() {
        return Err(IoError::Format("point cloud is empty".into()));
    }
    Ok(XyznCloud { cloud: OrientedPointCloud::new(points, normals)?, renormalized })
}

pub fn read_xyzn(path: &Path) -> IoResult<XyznCloud> {
    parse_xyzn(&read_text(path)?)
}

pub fn xyzn_to_string(cloud: &OrientedPointCloud) -> String {
    let mut out = String::new();
    for (p, n) in cloud.points().iter().zip(cloud.normals()) {
        let vals: Vec<String> = p.iter().chain(n.iter()).map(|&v| format_sig(v, 9)).collect();
        out.push_str(&vals.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_xyzn(path: &Path, cloud: &OrientedPointCloud) -> IoResult<()> {
    write_atomic(path, xyzn_to_string(cloud).as_bytes())
}
