//! Plain-text drum files.
//!
//! ```text
//! schema = 1
//! # middle-thirds Cantor complement
//! dim = 1
//! r_1 = 1/3
//! translate_1 = 0
//! r_2 = 1/3
//! translate_2 = 2/3
//! generator = interval 1/3 2/3
//! ```
//!
//! Keys:
//!
//! * `schema = 1` (required, first non-comment line)
//! * `name = <text>` (optional, defaults to the file stem)
//! * `dim = <integer>`
//! * `r_j = <number>`, `translate_j = <numbers>`, `rotate_j = <row-major numbers>`
//!   for `j = 1..N`; `rotate_j` defaults to the identity
//! * `generator = interval a b`
//!   `| triangle x1 y1 x2 y2 x3 y3 [radius eps]`
//!   `| disk c1 .. cd r`
//!   `| union <generator> ; <generator> ; ...` (intervals only)
//!
//! Numbers are decimals or fractions `p/q`; fields are separated by spaces or
//! commas. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use super::similitude::{identity_matrix, Similitude};
use super::triangle::Triangle;
use super::{Domain, DrumSpec};
use crate::error::{Error, Result};

pub fn load(path: impl AsRef<Path>) -> Result<DrumSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "drum".into());
    parse(&text, &stem)
}

pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            Ok(p / q)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|p| !p.is_empty())
        .map(parse_number)
        .collect()
}

fn parse_generator(s: &str, dim: usize) -> Result<Domain> {
    let s = s.trim();
    let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    match kind {
        "interval" => match numbers(rest)?.as_slice() {
            [a, b] if dim == 1 => Domain::interval(*a, *b),
            _ => Err(Error::Parse(format!("`interval a b` in dimension 1 expected: {s:?}"))),
        },
        "triangle" => {
            if dim != 2 {
                return Err(Error::Parse("triangle generator needs dim = 2".into()));
            }
            let (coords, radius) = match rest.split_once("radius") {
                Some((c, r)) => (c, parse_number(r)?),
                None => (rest, 0.0),
            };
            let v = numbers(coords)?;
            if v.len() != 6 {
                return Err(Error::Parse(format!("triangle needs 6 coordinates: {s:?}")));
            }
            Ok(Domain::Triangle(Triangle::new(
                [[v[0], v[1]], [v[2], v[3]], [v[4], v[5]]],
                radius,
            )?))
        }
        "disk" => {
            let v = numbers(rest)?;
            if v.len() != dim + 1 {
                return Err(Error::Parse(format!("disk needs {dim} center coordinates and a radius")));
            }
            Domain::disk(v[..dim].to_vec(), v[dim])
        }
        "union" => {
            let mut list = Vec::new();
            for part in rest.split(';') {
                match parse_generator(part, dim)? {
                    Domain::Interval { a, b } => list.push((a, b)),
                    other => {
                        return Err(Error::Parse(format!(
                            "union generators must be intervals, got {other}"
                        )))
                    }
                }
            }
            Domain::union(list)
        }
        _ => Err(Error::Parse(format!("unknown generator {kind:?}"))),
    }
}

/// Parses drum-file text; `default_name` is used when no `name` key is given.
pub fn parse(text: &str, default_name: &str) -> Result<DrumSpec> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut saw_schema = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected key = value", lineno + 1))
        })?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if !saw_schema {
            if key != "schema" {
                return Err(Error::Parse("first entry must be `schema = 1`".into()));
            }
            if value != "1" {
                return Err(Error::Parse(format!("unsupported schema {value}")));
            }
            saw_schema = true;
            continue;
        }
        if entries.insert(key.clone(), (lineno + 1, value)).is_some() {
            return Err(Error::Parse(format!("line {}: duplicate key {key}", lineno + 1)));
        }
    }
    if !saw_schema {
        return Err(Error::Parse("missing `schema = 1`".into()));
    }
    let mut take = |k: &str| entries.remove(k).map(|(_, v)| v);
    let name = take("name").unwrap_or_else(|| default_name.to_string());
    let dim: usize = take("dim")
        .ok_or_else(|| Error::Parse("missing `dim`".into()))?
        .parse()
        .map_err(|_| Error::Parse("`dim` must be a positive integer".into()))?;
    let generator = parse_generator(
        &take("generator").ok_or_else(|| Error::Parse("missing `generator`".into()))?,
        dim,
    )?;
    let mut maps = Vec::new();
    for j in 1.. {
        let Some(r) = take(&format!("r_{j}")) else { break };
        let ratio = parse_number(&r)?;
        let translation = match take(&format!("translate_{j}")) {
            Some(t) => numbers(&t)?,
            None => vec![0.0; dim],
        };
        if translation.len() != dim {
            return Err(Error::Parse(format!("translate_{j} needs {dim} entries")));
        }
        let rotation = match take(&format!("rotate_{j}")) {
            Some(m) => numbers(&m)?,
            None => identity_matrix(dim),
        };
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::ConstraintViolated(format!("r_{j} = {ratio} outside (0,1)")));
        }
        maps.push(Similitude::new(ratio, rotation, translation)?);
    }
    if let Some((k, (line, _))) = entries.iter().next() {
        return Err(Error::Parse(format!("line {line}: unknown or out-of-sequence key {k}")));
    }
    DrumSpec::new(name, dim, maps, generator)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANTOR: &str = "schema = 1\n# middle thirds\ndim = 1\nr_1 = 1/3\ntranslate_1 = 0\nr_2 = 1/3\ntranslate_2 = 2/3\ngenerator = interval 1/3 2/3\n";

    #[test]
    fn cantor_file_matches_builtin() {
        let spec = parse(CANTOR, "cantor").unwrap();
        let builtin = DrumSpec::cantor();
        assert_eq!(spec.maps(), builtin.maps());
        assert_eq!(spec.generator(), builtin.generator());
        assert_eq!(spec.dimension(), builtin.dimension());
    }

    #[test]
    fn gasket_file_with_rounding() {
        let text = "schema = 1\nname = rounded\ndim = 2\n\
            r_1 = 0.5\ntranslate_1 = 0 0\n\
            r_2 = 0.5\ntranslate_2 = 0.5 0\n\
            r_3 = 0.5\ntranslate_3 = 0.25 0.4330127018922193\n\
            generator = triangle 0.25 0.4330127018922193 0.5 0 0.75 0.4330127018922193 radius 0.02\n";
        let spec = parse(text, "x").unwrap();
        assert_eq!(spec.name(), "rounded");
        let builtin = DrumSpec::gasket(0.02).unwrap();
        assert!((spec.volume().unwrap() - builtin.volume().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse("dim = 1\n", "x").is_err());
        assert!(parse("schema = 2\n", "x").is_err());
        assert!(parse(&CANTOR.replace("r_2 = 1/3", "r_2 = 0.9"), "x").is_err());
        assert!(parse(&format!("{CANTOR}colour = red\n"), "x").is_err());
        assert!(parse(&CANTOR.replace("interval 1/3 2/3", "hexagon 1"), "x").is_err());
        // Σ r^d = 1 violates the standing inequality.
        let half = CANTOR.replace("1/3\ntrans", "1/2\ntrans");
        assert!(matches!(parse(&half, "x"), Err(Error::ConstraintViolated(_))));
    }

    #[test]
    fn rotation_rows_are_validated() {
        let text = "schema = 1\ndim = 1\nr_1 = 1/3\ntranslate_1 = 1/3\nrotate_1 = -1\nr_2 = 1/3\ntranslate_2 = 2/3\ngenerator = interval 1/3 2/3\n";
        let spec = parse(text, "flip").unwrap();
        assert_eq!(spec.maps()[0].rotation(), &[-1.0]);
        assert!(spec.contains(&[0.15], 3));
        let bad = text.replace("rotate_1 = -1", "rotate_1 = 2");
        assert!(parse(&bad, "x").is_err());
    }
}
