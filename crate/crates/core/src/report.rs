//! Verification records and the sinks they stream into.
//!
//! JSON lines are the authoritative log; a CSV file with the same columns can
//! mirror it. Every record is flushed as soon as it is written.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Params = BTreeMap<String, u64>;

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub suite: String,
    pub params: Params,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
    pub elapsed_us: u64,
    pub worker: u32,
}

impl VerificationRecord {
    /// Identity of the check, used to skip completed work on resume.
    pub fn key(&self) -> String {
        record_key(&self.suite, &self.params)
    }
}

pub fn record_key(suite: &str, params: &Params) -> String {
    let rendered: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{suite}|{}", rendered.join(","))
}

/// Builds a parameter map from `(name, value)` pairs.
pub fn params<const N: usize>(pairs: [(&str, u64); N]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// What a suite claims about one parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// The check must hold.
    Pass,
    /// A boundary case where the check is known to fail, and must.
    Fail,
    /// Outside the claimed range: either result conforms.
    Either,
}

impl Expectation {
    pub fn conforms(self, pass: bool) -> bool {
        match self {
            Expectation::Pass => pass,
            Expectation::Fail => !pass,
            Expectation::Either => true,
        }
    }
}

pub trait RecordSink {
    fn emit(&mut self, record: &VerificationRecord) -> Result<()>;
}

/// Writes one record to a sink.
pub fn emit(record: &VerificationRecord, sink: &mut dyn RecordSink) -> Result<()> {
    sink.emit(record)
}

pub struct JsonlSink<W: Write> {
    out: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(out: W) -> Self {
        JsonlSink { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl JsonlSink<File> {
    /// Opens `path` for appending, first dropping a torn final line left by
    /// an interrupted run.
    pub fn append(path: &Path) -> Result<Self> {
        let mut file = OpenOptions::new().create(true).read(true).append(true).open(path)?;
        truncate_partial_tail(&mut file)?;
        Ok(JsonlSink { out: file })
    }
}

impl<W: Write> RecordSink for JsonlSink<W> {
    fn emit(&mut self, record: &VerificationRecord) -> Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        self.out.flush()?;
        Ok(())
    }
}

fn truncate_partial_tail(file: &mut File) -> Result<()> {
    let len = file.metadata()?.len();
    if len == 0 {
        return Ok(());
    }
    let mut reader = BufReader::new(&*file);
    reader.seek(SeekFrom::Start(0))?;
    let mut keep = 0u64;
    let mut line = Vec::new();
    loop {
        line.clear();
        let read = reader.read_until(b'\n', &mut line)?;
        if read == 0 {
            break;
        }
        if line.ends_with(b"\n") {
            keep += read as u64;
        }
    }
    if keep < len {
        file.set_len(keep)?;
    }
    Ok(())
}

pub const CSV_COLUMNS: [&str; 7] =
    ["suite", "params", "computed", "expected", "pass", "elapsed_us", "worker"];

/// CSV mirror of the JSONL log, same column order; `params` holds the JSON map.
pub struct CsvMirror {
    writer: csv::Writer<File>,
}

impl CsvMirror {
    pub fn append(path: &Path) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let fresh = file.metadata()?.len() == 0;
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        if fresh {
            writer.write_record(CSV_COLUMNS)?;
            writer.flush()?;
        }
        Ok(CsvMirror { writer })
    }
}

impl RecordSink for CsvMirror {
    fn emit(&mut self, r: &VerificationRecord) -> Result<()> {
        self.writer.write_record([
            r.suite.clone(),
            serde_json::to_string(&r.params)?,
            r.computed.clone(),
            r.expected.clone(),
            r.pass.to_string(),
            r.elapsed_us.to_string(),
            r.worker.to_string(),
        ])?;
        self.writer.flush()?;
        Ok(())
    }
}

/// Collects records in memory.
#[derive(Default)]
pub struct MemorySink {
    pub records: Vec<VerificationRecord>,
}

impl RecordSink for MemorySink {
    fn emit(&mut self, record: &VerificationRecord) -> Result<()> {
        self.records.push(record.clone());
        Ok(())
    }
}

/// Fans one record out to several sinks, in order.
#[derive(Default)]
pub struct Tee {
    sinks: Vec<Box<dyn RecordSink>>,
}

impl Tee {
    pub fn push(&mut self, sink: Box<dyn RecordSink>) {
        self.sinks.push(sink);
    }
}

impl RecordSink for Tee {
    fn emit(&mut self, record: &VerificationRecord) -> Result<()> {
        self.sinks.iter_mut().try_for_each(|s| s.emit(record))
    }
}

/// Reads every complete record of a JSONL log. A torn final line is ignored;
/// a malformed complete line is an error.
pub fn load_log(path: &Path) -> Result<Vec<VerificationRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    let mut line = String::new();
    let mut lineno = 0usize;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        lineno += 1;
        if !line.ends_with('\n') {
            break;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let record = serde_json::from_str(trimmed)
            .map_err(|e| Error::Config(format!("{}:{lineno}: {e}", path.display())))?;
        out.push(record);
    }
    Ok(out)
}

pub fn completed_keys(records: &[VerificationRecord]) -> HashSet<String> {
    records.iter().map(VerificationRecord::key).collect()
}
