//! Append-only result cache: one JSON record per line.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::search::ExtremalRecord;
use crate::VERSION;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub k: usize,
    pub n: usize,
    pub pattern: String,
    pub value: usize,
    pub certified: bool,
    #[serde(default)]
    pub enumerated: bool,
    pub witnesses: Vec<Vec<Vec<usize>>>,
    pub nodes: u64,
    pub seconds: f64,
    pub version: String,
}

impl CacheRecord {
    pub fn from_record(rec: &ExtremalRecord) -> Self {
        CacheRecord {
            k: rec.k,
            n: rec.n,
            pattern: rec.pattern.clone(),
            value: rec.value,
            certified: rec.certified,
            enumerated: rec.enumerated,
            witnesses: rec.witnesses.iter().map(|w| w.edge_tuples().collect()).collect(),
            nodes: rec.search_nodes,
            seconds: rec.wall_time.as_secs_f64(),
            version: rec.version.clone(),
        }
    }

    pub fn to_record(&self) -> Result<ExtremalRecord> {
        let witnesses = self
            .witnesses
            .iter()
            .map(|edges| Hypergraph::new(self.k, self.n, edges))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtremalRecord {
            n: self.n,
            k: self.k,
            pattern: self.pattern.clone(),
            value: self.value,
            unique: self.enumerated && witnesses.len() == 1,
            witnesses,
            enumerated: self.enumerated,
            certified: self.certified,
            search_nodes: self.nodes,
            wall_time: Duration::from_secs_f64(self.seconds),
            version: self.version.clone(),
        })
    }
}

#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    records: Vec<CacheRecord>,
}

impl ResultCache {
    /// Loads `path` if it exists; a missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = Vec::new();
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("cache record: {e}"),
                })?;
                records.push(rec);
            }
        }
        Ok(ResultCache { path, records })
    }

    pub fn records(&self) -> &[CacheRecord] {
        &self.records
    }

    /// A certified record from the current solver version, enumerated if required.
    pub fn lookup(&self, k: usize, n: usize, pattern: &str, need_enumeration: bool) -> Option<&CacheRecord> {
        self.records.iter().rev().find(|r| {
            r.k == k
                && r.n == n
                && r.pattern == pattern
                && r.certified
                && r.version == VERSION
                && (r.enumerated || !need_enumeration)
        })
    }

    pub fn append(&mut self, rec: &ExtremalRecord) -> Result<()> {
        let record = CacheRecord::from_record(rec);
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{}", serde_json::to_string(&record)?)?;
        self.records.push(record);
        Ok(())
    }
}
