use std::path::Path;

use genshift_core::filters::HistogramField;
use genshift_core::{ElementKind, Signal};

use super::{format_sig, parse_f64, read_text, write_atomic, IoError, IoResult};

/// Header `element,bin_0,...,bin_{m-1}` and one row per element, 6 significant digits.
pub fn histograms_to_string(field: &HistogramField) -> String {
    let m = field.sample_count();
    let mut out = String::from("element");
    for i in 0..m {
        out.push_str(&format!(",bin_{i}"));
    }
    out.push('\n');
    for x in 0..field.len() {
        out.push_str(&x.to_string());
        for &v in field.row(x) {
            out.push(',');
            out.push_str(&format_sig(v, 6));
        }
        out.push('\n');
    }
    out
}

pub fn write_histograms_csv(path: &Path, field: &HistogramField) -> IoResult<()> {
    write_atomic(path, histograms_to_string(field).as_bytes())
}

/// One row per element: a `value` header (`value_0,...` for several
/// channels) then comma-separated values with 9 significant digits.
pub fn signal_to_csv(signal: &Signal) -> String {
    let ch = signal.channels();
    let mut out = if ch == 1 {
        "value".to_string()
    } else {
        (0..ch).map(|c| format!("value_{c}")).collect::<Vec<_>>().join(",")
    };
    out.push('\n');
    for x in 0..signal.len() {
        let row: Vec<String> = signal.get(x).iter().map(|&v| format_sig(v, 9)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_signal_csv(path: &Path, signal: &Signal) -> IoResult<()> {
    write_atomic(path, signal_to_csv(signal).as_bytes())
}

/// Reads a per-element signal; a first line containing letters is a header.
/// Every row must have the same number of columns.
pub fn parse_signal_csv(text: &str, kind: ElementKind) -> IoResult<Signal> {
    let mut values = Vec::new();
    let mut channels = None;
    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if k == 0 && line.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
            continue;
        }
        let row: Vec<&str> = line.split(',').map(str::trim).collect();
        match channels {
            None => channels = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(IoError::parse(ln, format!("expected {c} columns, found {}", row.len())))
            }
            _ => {}
        }
        for tok in row {
            values.push(parse_f64(tok, ln)?);
        }
    }
    let channels = channels.ok_or_else(|| IoError::Format("signal file has no rows".into()))?;
    Ok(Signal::new(kind, channels, values)?)
}

pub fn read_signal_csv(path: &Path, kind: ElementKind) -> IoResult<Signal> {
    parse_signal_csv(&read_text(path)?, kind)
}
