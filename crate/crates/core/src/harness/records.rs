//! Run records and their JSONL / CSV files.
//!
//! A JSONL record file opens with `{"schema":1,"kind":"fracdrum-records"}`
//! and holds one [`RunRecord`] per line. Wall-clock times go to a sidecar
//! `<name>.timing.jsonl` so reruns of a plan give byte-identical records.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::plan::Estimator;
use crate::error::{Error, Result};
use crate::simulate::Estimate;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    schema: u32,
    kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub cell: String,
    pub domain: String,
    pub alpha: f64,
    pub t: f64,
    pub estimator: Estimator,
    /// Exact `|D|`.
    pub volume: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<Estimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunRecord {
    /// A record built from a known value, for fits of synthetic or external data.
    pub fn synthetic(estimator: Estimator, alpha: f64, t: f64, value: f64, stderr: f64, volume: f64) -> Self {
        RunRecord {
            cell: String::new(),
            domain: "synthetic".into(),
            alpha,
            t,
            estimator,
            volume,
            seed: 0,
            estimate: Some(Estimate {
                value,
                stderr,
                n_samples: 0,
                master_seed: 0,
                config_digest: String::new(),
                levels: Vec::new(),
                order: None,
                noise_dominates: false,
                depth: 0,
                unresolved: 0,
            }),
            error: None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.estimate.as_ref().map(|e| e.value)
    }

    pub fn stderr(&self) -> Option<f64> {
        self.estimate.as_ref().map(|e| e.stderr)
    }

    /// `|D| − value` for heat contents, the value itself for the defect.
    pub fn deficit(&self) -> Option<f64> {
        let v = self.value()?;
        Some(if self.estimator.is_heat_content() { self.volume - v } else { v })
    }
}

fn header_line() -> String {
    serde_json::to_string(&Header {
        schema: SCHEMA,
        kind: "fracdrum-records".into(),
    })
    .unwrap()
}

/// Reads a record file. A torn last line (an interrupted write) is ignored.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    Ok(scan(path.as_ref())?.0)
}

/// Records plus the byte length of the intact prefix.
fn scan(path: &Path) -> Result<(Vec<RunRecord>, u64)> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut line = String::new();
    let mut good = 0u64;
    let mut records = Vec::new();
    let mut first = true;
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            break;
        }
        if !line.ends_with('\n') {
            break;
        }
        if first {
            let h: Header = serde_json::from_str(line.trim_end())
                .map_err(|e| Error::Parse(format!("{}: bad header: {e}", path.display())))?;
            if h.schema != SCHEMA {
                return Err(Error::Parse(format!("{}: schema {} not supported", path.display(), h.schema)));
            }
            first = false;
        } else {
            records.push(serde_json::from_str(line.trim_end())?);
        }
        good += n as u64;
    }
    Ok((records, good))
}

/// Appends records to a JSONL file, one flushed line at a time.
pub struct RecordWriter {
    file: File,
    timing: File,
}

impl RecordWriter {
    /// Opens `path` for appending and returns the records already in it.
    /// A missing or empty file gets a header; a torn last line is cut off.
    pub fn open(path: impl AsRef<Path>) -> Result<(Self, Vec<RunRecord>)> {
        let path = path.as_ref();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let exists = path.metadata().map(|m| m.len() > 0).unwrap_or(false);
        let (records, good) = if exists { scan(path)? } else { (Vec::new(), 0) };
        let mut file = OpenOptions::new().create(true).read(true).write(true).truncate(false).open(path)?;
        file.set_len(good)?;
        file.seek(SeekFrom::End(0))?;
        if good == 0 {
            writeln!(file, "{}", header_line())?;
        }
        let timing = OpenOptions::new().create(true).append(true).open(timing_path(path))?;
        Ok((RecordWriter { file, timing }, records))
    }

    pub fn append(&mut self, record: &RunRecord, wall_seconds: f64) -> Result<()> {
        writeln!(self.file, "{}", serde_json::to_string(record)?)?;
        self.file.flush()?;
        writeln!(
            self.timing,
            "{}",
            serde_json::json!({ "cell": record.cell, "wall_seconds": wall_seconds })
        )?;
        Ok(())
    }
}

pub fn timing_path(records: &Path) -> PathBuf {
    let stem = records.file_stem().and_then(|s| s.to_str()).unwrap_or("records");
    records.with_file_name(format!("{stem}.timing.jsonl"))
}

/// Flat CSV projection of a record set, opened by a `# schema=1` line.
pub fn write_csv(records: &[RunRecord], out: impl Write) -> Result<()> {
    let mut out = out;
    writeln!(out, "# schema={SCHEMA}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["domain", "alpha", "t", "estimator", "value", "stderr", "deficit", "n", "seed", "error"])?;
    for r in records {
        let (value, stderr, n) = match &r.estimate {
            Some(e) => (e.value.to_string(), e.stderr.to_string(), e.n_samples.to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            r.domain.clone(),
            r.alpha.to_string(),
            r.t.to_string(),
            r.estimator.to_string(),
            value,
            stderr,
            r.deficit().map(|d| d.to_string()).unwrap_or_default(),
            n,
            r.seed.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Records of one `(estimator, α)` series with a value, sorted by `t`.
pub fn select(records: &[RunRecord], estimator: Estimator, alpha: f64) -> Vec<RunRecord> {
    let mut out: Vec<RunRecord> = records
        .iter()
        .filter(|r| r.estimator == estimator && r.alpha == alpha && r.estimate.is_some())
        .cloned()
        .collect();
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torn_lines_are_dropped_on_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        let rec = RunRecord::synthetic(Estimator::Shc, 1.5, 0.01, 0.9, 0.001, 1.0);
        {
            let (mut w, old) = RecordWriter::open(&path).unwrap();
            assert!(old.is_empty());
            w.append(&rec, 0.1).unwrap();
        }
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        write!(f, "{{\"cell\":\"tor").unwrap();
        drop(f);
        assert_eq!(read_records(&path).unwrap(), vec![rec.clone()]);
        let (mut w, old) = RecordWriter::open(&path).unwrap();
        assert_eq!(old.len(), 1);
        w.append(&rec, 0.1).unwrap();
        assert_eq!(read_records(&path).unwrap().len(), 2);
        assert!(timing_path(&path).ends_with("r.timing.jsonl"));
    }

    #[test]
    fn csv_projection() {
        let mut buf = Vec::new();
        write_csv(&[RunRecord::synthetic(Estimator::Rhc, 1.0, 0.1, 0.75, 0.01, 1.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# schema=1\ndomain,alpha,t,estimator"));
        assert!(text.contains("synthetic,1,0.1,rhc,0.75,0.01,0.25,0,0,"));
    }

    #[test]
    fn wrong_schema_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        std::fs::write(&path, "{\"schema\":2,\"kind\":\"fracdrum-records\"}\n").unwrap();
        assert!(read_records(&path).is_err());
    }
}
