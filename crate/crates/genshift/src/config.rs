//! Run configuration files: flat `key = value` lines whose keys are the long
//! flag names of the subcommand being run (`sigma-s = 2.0`). Values are
//! merged into the argument list before parsing, so a configuration file is
//! checked by exactly the same rules as the command line. Flags given on the
//! command line win over the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use crate::io::{read_text, IoError, IoResult};

/// Parsed `key = value` pairs, in key order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

impl RunConfig {
    /// Parses a configuration. Blank lines and `#` comments are skipped;
    /// keys may not repeat and may not start with `-`.
    pub fn parse(text: &str) -> IoResult<Self> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let ln = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| IoError::parse(ln, format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || key.starts_with('-') || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
                return Err(IoError::parse(ln, format!("invalid key `{key}`")));
            }
            if value.is_empty() {
                return Err(IoError::parse(ln, format!("key `{key}` has no value")));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(IoError::parse(ln, format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> IoResult<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends every entry not already present in `args` as `--key value`.
    /// `true` and `false` stand for a bare switch and its absence.
    pub fn merge_into(&self, args: &mut Vec<OsString>) {
        let given = |key: &str| {
            let flag = format!("--{key}");
            let with_value = format!("--{key}=");
            args.iter().any(|a| a.to_str().is_some_and(|s| s == flag || s.starts_with(&with_value)))
        };
        let mut extra = Vec::new();
        for (key, value) in &self.entries {
            if given(key) {
                continue;
            }
            match value.as_str() {
                "true" => extra.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => {
                    extra.push(OsString::from(format!("--{key}")));
                    extra.push(OsString::from(value));
                }
            }
        }
        args.extend(extra);
    }
}

/// Removes `--config PATH` (or `--config=PATH`) from `args`, returning the path.
/// Only arguments before a bare `--` are inspected.
pub fn take_config_flag(args: &mut Vec<OsString>) -> Result<Option<OsString>, String> {
    let mut found = None;
    let mut i = 1;
    while i < args.len() {
        let Some(s) = args[i].to_str() else {
            i += 1;
            continue;
        };
        if s == "--" {
            break;
        }
        if s == "--config" {
            if i + 1 >= args.len() {
                return Err("--config needs a path".into());
            }
            if found.is_some() {
                return Err("--config given more than once".into());
            }
            found = Some(args.remove(i + 1));
            args.remove(i);
            continue;
        }
        if let Some(path) = s.strip_prefix("--config=") {
            if found.is_some() {
                return Err("--config given more than once".into());
            }
            found = Some(OsString::from(path));
            args.remove(i);
            continue;
        }
        i += 1;
    }
    Ok(found)
}
