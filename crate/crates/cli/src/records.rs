//! Append-only JSONL run records, mergeable by params fingerprint.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use percolog::estimators::{Accumulator, EstimateReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub command: String,
    /// Campaign parameters (domain, n, eps, truncation, trials, seed, ...).
    pub params: serde_json::Value,
    /// Hash of the seed-independent parameters; equal fingerprints merge.
    pub fingerprint: u64,
    pub accumulators: Vec<Accumulator>,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub source: String,
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunRecord {
    pub fn new(
        command: &str,
        params: serde_json::Value,
        fingerprint: u64,
        started_unix: u64,
        accumulators: Vec<Accumulator>,
    ) -> Self {
        RunRecord {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            params,
            fingerprint,
            accumulators,
            started_unix,
            finished_unix: now_unix(),
            source: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }

    pub fn started() -> u64 {
        now_unix()
    }
}

/// Rebuild an accumulator from a report so records stay mergeable. The
/// moments are recovered exactly (up to rounding) from mean and stderr.
pub fn accumulator_of(report: &EstimateReport, fingerprint: u64) -> Accumulator {
    let n = report.trials as f64;
    let sum = report.mean * n;
    let sum_sq = report.stderr * report.stderr * n * (n - 1.0) + sum * sum / n;
    Accumulator {
        observable: report.observable.clone(),
        fingerprint,
        trials: report.trials,
        sum,
        sum_sq,
    }
}

/// Retag an accumulator with the record-level fingerprint (the estimator
/// fingerprints include the seed, which would block cross-run merges).
pub fn retag(mut acc: Accumulator, fingerprint: u64) -> Accumulator {
    acc.fingerprint = fingerprint;
    acc
}

pub fn append(path: &Path, record: &RunRecord) -> Result<()> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let line = serde_json::to_string(record)?;
    writeln!(file, "{line}")?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Vec<RunRecord>> {
    let file =
        std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RunRecord =
            serde_json::from_str(&line).with_context(|| format!("record on line {}", i + 1))?;
        out.push(rec);
    }
    Ok(out)
}

/// Merge records with equal fingerprints; accumulators pair up by observable
/// name. Later records extend earlier ones.
pub fn merge(records: Vec<RunRecord>) -> Vec<RunRecord> {
    let mut merged: Vec<RunRecord> = Vec::new();
    'next: for rec in records {
        for m in merged.iter_mut() {
            if m.fingerprint == rec.fingerprint && m.command == rec.command {
                for acc in &rec.accumulators {
                    match m.accumulators.iter_mut().find(|a| a.observable == acc.observable) {
                        Some(a) => {
                            // same fingerprint by construction
                            a.merge(acc).expect("observable fingerprints agree");
                        }
                        None => m.accumulators.push(acc.clone()),
                    }
                }
                m.finished_unix = m.finished_unix.max(rec.finished_unix);
                m.started_unix = m.started_unix.min(rec.started_unix);
                continue 'next;
            }
        }
        merged.push(rec);
    }
    merged
}
