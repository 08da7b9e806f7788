//! One module per subcommand. Each reads its inputs, runs a pipeline from
//! the core crate, writes outputs atomically and reports `key=value` lines.

pub mod bench;
pub mod cloud;
pub mod denoise;
pub mod enhance;
pub mod generate;
pub mod histogram;
pub mod image;
pub mod scalar;

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use genshift_core::TriangleMesh;

use crate::io::{format_sig, read_obj, read_ply, write_obj, write_ply};

#[derive(Clone, Copy, PartialEq, Eq)]
enum MeshFormat {
    Obj,
    Ply,
}

fn mesh_format(path: &Path) -> Result<MeshFormat> {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("obj") => Ok(MeshFormat::Obj),
        Some("ply") => Ok(MeshFormat::Ply),
        _ => bail!("{}: mesh files must end in .obj or .ply", path.display()),
    }
}

pub(crate) fn read_mesh(path: &Path) -> Result<TriangleMesh> {
    let mesh = match mesh_format(path)? {
        MeshFormat::Obj => read_obj(path),
        MeshFormat::Ply => read_ply(path),
    };
    mesh.with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn write_mesh(path: &Path, mesh: &TriangleMesh) -> Result<()> {
    let written = match mesh_format(path)? {
        MeshFormat::Obj => write_obj(path, mesh),
        MeshFormat::Ply => write_ply(path, mesh),
    };
    written.with_context(|| format!("writing {}", path.display()))
}

/// Machine-readable `key=value` output. Floats use 9 significant digits.
pub(crate) struct Report<'a> {
    out: &'a mut dyn Write,
    enabled: bool,
}

impl<'a> Report<'a> {
    pub fn new(out: &'a mut dyn Write, enabled: bool) -> Self {
        Self { out, enabled }
    }

    pub fn int(&mut self, key: &str, value: usize) -> Result<()> {
        self.line(key, &value.to_string())
    }

    pub fn float(&mut self, key: &str, value: f64) -> Result<()> {
        self.line(key, &format_sig(value, 9))
    }

    pub fn flag(&mut self, key: &str, value: bool) -> Result<()> {
        self.line(key, if value { "true" } else { "false" })
    }

    pub fn line(&mut self, key: &str, value: &str) -> Result<()> {
        if self.enabled {
            writeln!(self.out, "{key}={value}").context("writing report")?;
        }
        Ok(())
    }

    /// Writes regardless of whether `--report` was given.
    pub fn always(&mut self, key: &str, value: f64) -> Result<()> {
        writeln!(self.out, "{key}={}", format_sig(value, 9)).context("writing report")?;
        Ok(())
    }
}

/// The largest per-iteration change of the final iteration, if any.
pub(crate) fn last_change(changes: &[f64]) -> f64 {
    changes.last().copied().unwrap_or(0.0)
}
