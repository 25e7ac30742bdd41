//! `--config` files: `key = value` lines whose keys are long flag names.
//! Values from the file are used only for flags absent from the command line.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// The `--config` value on a raw command line.
pub fn path_in(args: &[String]) -> Option<PathBuf> {
    args.iter().enumerate().find_map(|(i, a)| match a.strip_prefix("--config") {
        Some("") => args.get(i + 1).map(PathBuf::from),
        Some(rest) => rest.strip_prefix('=').map(PathBuf::from),
        None => None,
    })
}

pub fn read(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    let mut saw_schema = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if k == "schema" {
            if v != "1" {
                return Err(Error::Parse(format!("{}: schema {v} not supported", path.display())));
            }
            saw_schema = true;
            continue;
        }
        if k == "config" {
            return Err(Error::Parse("config files cannot include other config files".into()));
        }
        out.push((k, v));
    }
    if !saw_schema {
        return Err(Error::Parse(format!("{}: missing `schema = 1`", path.display())));
    }
    Ok(out)
}

/// Appends file values for flags the command line does not set. `true` and
/// `false` switch boolean flags.
pub fn merge(args: &[String], file: &[(String, String)]) -> Vec<String> {
    let mut out = args.to_vec();
    for (k, v) in file {
        let flag = format!("--{k}");
        let present = args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if present {
            continue;
        }
        match v.as_str() {
            "true" => out.push(flag),
            "false" => {}
            _ => out.push(format!("{flag}={v}")),
        }
    }
    out
}
