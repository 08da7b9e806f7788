//! Text-first readers and writers. Every writer is deterministic and goes
//! through a temporary file that is renamed into place on success.

mod csv;
mod number;
mod obj;
mod ply;
mod pnm;
mod xyzn;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub use self::csv::{histograms_to_string, parse_signal_csv, read_signal_csv, signal_to_csv, write_histograms_csv, write_signal_csv};
pub use number::format_sig;
pub use obj::{obj_to_string, parse_obj, read_obj, write_obj};
pub use ply::{parse_ply, ply_to_string, read_ply, write_ply};
pub use pnm::{parse_pnm, pnm_to_bytes, read_pnm, write_pnm, Image, PnmEncoding};
pub use xyzn::{parse_xyzn, read_xyzn, write_xyzn, xyzn_to_string, XyznCloud};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {error}")]
    File { path: PathBuf, error: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Geometry(#[from] genshift_core::Error),
}

impl IoError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        IoError::Parse { line, message: message.into() }
    }
}

pub type IoResult<T> = Result<T, IoError>;

pub(crate) fn read_bytes(path: &Path) -> IoResult<Vec<u8>> {
    fs::read(path).map_err(|error| IoError::File { path: path.to_path_buf(), error })
}

pub(crate) fn read_text(path: &Path) -> IoResult<String> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes).map_err(|_| IoError::Format(format!("{}: not valid UTF-8 text", path.display())))
}

/// Writes `bytes` to a temporary sibling of `path` and renames it over
/// `path`, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> IoResult<()> {
    let file_err = |error| IoError::File { path: path.to_path_buf(), error };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| IoError::Format(format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(file_err(e));
    }
    Ok(())
}

/// Splits a line into whitespace-separated tokens after dropping a `#` comment.
pub(crate) fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split('#').next().unwrap_or("").split_whitespace()
}

pub(crate) fn parse_f64(token: &str, line: usize) -> IoResult<f64> {
    let v: f64 = token.parse().map_err(|_| IoError::parse(line, format!("invalid number `{token}`")))?;
    if !v.is_finite() {
        return Err(IoError::parse(line, format!("non-finite number `{token}`")));
    }
    Ok(v)
}
