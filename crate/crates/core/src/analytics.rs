//! Anonymous request log and frequency reports over it.
//!
//! The log is a directory of append-only JSON-lines segments named
//! `requests-NNNNNN.jsonl`. A new segment starts once the current one grows
//! past the rotation size; rows are never rewritten.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::catalog::RequestInput;
use crate::request::{logged_label, ContextMode, GenerationRequest};

pub const SEGMENT_PREFIX: &str = "requests-";
pub const SEGMENT_SUFFIX: &str = ".jsonl";
pub const DEFAULT_ROTATE_BYTES: u64 = 8 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Generated,
    Exhausted,
    GatewayFailed,
    /// The request failed validation before generation started.
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestLogRecord {
    pub timestamp: DateTime<Utc>,
    /// Absent only for rejected requests that named no mode.
    pub context_mode: Option<ContextMode>,
    pub context_label_as_logged: String,
    #[serde(default)]
    pub resolved_context: Option<String>,
    pub concepts: Vec<String>,
    pub outcome: Outcome,
}

/// Label used for rejected requests whose mode was missing.
pub const UNSPECIFIED_LABEL: &str = "Unspecified";

impl RequestLogRecord {
    pub fn for_request(req: &GenerationRequest, resolved_context: Option<String>, outcome: Outcome) -> Self {
        Self {
            timestamp: Utc::now(),
            context_mode: Some(req.context_mode),
            context_label_as_logged: req.logged_label(),
            resolved_context,
            concepts: req.concepts.clone(),
            outcome,
        }
    }

    pub fn rejected(input: &RequestInput) -> Self {
        let label = match input.context_mode {
            Some(mode) => logged_label(mode, input.context_text.as_deref()),
            None => UNSPECIFIED_LABEL.to_string(),
        };
        Self {
            timestamp: Utc::now(),
            context_mode: input.context_mode,
            context_label_as_logged: label,
            resolved_context: None,
            concepts: input.concepts.clone(),
            outcome: Outcome::Rejected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Contexts,
    Concepts,
}

impl std::str::FromStr for Dimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "contexts" => Ok(Dimension::Contexts),
            "concepts" => Ok(Dimension::Concepts),
            other => Err(format!("unknown dimension {other:?} (expected contexts or concepts)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub label: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub dimension: Dimension,
    pub rows: Vec<FrequencyRow>,
}

/// Counts per context label or per concept, sorted by descending count and
/// then label. Rejected requests are not counted; a record with two concepts
/// contributes two concept tallies.
pub fn tally(records: &[RequestLogRecord], dimension: Dimension) -> FrequencyTable {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for rec in records.iter().filter(|r| r.outcome != Outcome::Rejected) {
        match dimension {
            Dimension::Contexts => *counts.entry(&rec.context_label_as_logged).or_default() += 1,
            Dimension::Concepts => {
                for c in &rec.concepts {
                    *counts.entry(c).or_default() += 1;
                }
            }
        }
    }
    let mut rows: Vec<FrequencyRow> = counts
        .into_iter()
        .map(|(label, count)| FrequencyRow { label: label.to_string(), count })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    FrequencyTable { dimension, rows }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogContents {
    pub records: Vec<RequestLogRecord>,
    pub malformed: usize,
}

fn segment_number(path: &Path) -> Option<u64> {
    let name = path.file_name()?.to_str()?;
    name.strip_prefix(SEGMENT_PREFIX)?
        .strip_suffix(SEGMENT_SUFFIX)?
        .parse()
        .ok()
}

fn segments(dir: &Path) -> io::Result<Vec<(u64, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if let Some(n) = segment_number(&path) {
            out.push((n, path));
        }
    }
    out.sort();
    Ok(out)
}

/// Reads a single log file, or every segment of a log directory in order.
/// Lines that do not parse are counted and skipped.
pub fn read_log(path: &Path) -> io::Result<LogContents> {
    let files = if path.is_dir() {
        segments(path)?.into_iter().map(|(_, p)| p).collect()
    } else {
        vec![path.to_path_buf()]
    };
    let mut contents = LogContents::default();
    for file in files {
        for line in BufReader::new(File::open(&file)?).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<RequestLogRecord>(&line) {
                Ok(rec) => contents.records.push(rec),
                Err(_) => contents.malformed += 1,
            }
        }
    }
    Ok(contents)
}

/// Single-writer appender over a log directory.
#[derive(Debug)]
pub struct LogWriter {
    dir: PathBuf,
    rotate_bytes: u64,
    segment: u64,
    file: File,
    len: u64,
}

impl LogWriter {
    pub fn open(dir: &Path, rotate_bytes: u64) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let segment = segments(dir)?.last().map_or(1, |(n, _)| *n);
        let (file, len) = Self::open_segment(dir, segment)?;
        Ok(Self { dir: dir.to_path_buf(), rotate_bytes: rotate_bytes.max(1), segment, file, len })
    }

    pub fn segment_path(dir: &Path, n: u64) -> PathBuf {
        dir.join(format!("{SEGMENT_PREFIX}{n:06}{SEGMENT_SUFFIX}"))
    }

    fn open_segment(dir: &Path, n: u64) -> io::Result<(File, u64)> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(Self::segment_path(dir, n))?;
        let len = file.metadata()?.len();
        Ok((file, len))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn append(&mut self, record: &RequestLogRecord) -> io::Result<()> {
        if self.len >= self.rotate_bytes {
            self.segment += 1;
            let (file, len) = Self::open_segment(&self.dir, self.segment)?;
            self.file = file;
            self.len = len;
        }
        let mut line = serde_json::to_vec(record).map_err(io::Error::other)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.flush()?;
        self.len += line.len() as u64;
        Ok(())
    }
}
