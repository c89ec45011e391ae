//! Result files: a BER CSV tagged with the config hash, and a JSON manifest.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::SystemConfig;
use crate::analysis::DiversityReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["snr_db", "frames", "info_bits", "bit_errors", "ber"];
const HASH_PREFIX: &str = "# config_hash: ";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointResult {
    pub snr_db: f64,
    pub frames: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub resamples: u64,
    pub ber: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerCurve {
    pub config_hash: String,
    pub diversity: DiversityReport,
    pub points: Vec<PointResult>,
}

impl BerCurve {
    pub fn snr_ber_pairs(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.snr_db, p.ber)).collect()
    }
}

/// One CSV row as read back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub snr_db: f64,
    pub frames: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub config_hash: Option<String>,
    pub rows: Vec<CsvRow>,
}

impl CsvTable {
    pub fn snr_ber_pairs(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.snr_db, r.ber)).collect()
    }
}

pub fn write_csv(curve: &BerCurve, path: &Path) -> Result<()> {
    let mut file = File::create(path)?;
    writeln!(file, "{HASH_PREFIX}{}", curve.config_hash)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(CSV_HEADER)?;
    for p in &curve.points {
        w.write_record([
            p.snr_db.to_string(),
            p.frames.to_string(),
            p.info_bits.to_string(),
            p.bit_errors.to_string(),
            format!("{:.6e}", p.ber),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`]. The hash line is optional.
pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let (config_hash, body) = match first.strip_prefix(HASH_PREFIX) {
        Some(h) => (Some(h.trim().to_string()), String::new()),
        None => (None, first),
    };
    let chained = std::io::Cursor::new(body).chain(reader);
    let mut r = csv::Reader::from_reader(chained);
    let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header != CSV_HEADER {
        return Err(Error::Analysis(format!(
            "unexpected CSV header {header:?}, want {CSV_HEADER:?}"
        )));
    }
    let rows = r.deserialize().collect::<std::result::Result<Vec<CsvRow>, _>>()?;
    Ok(CsvTable { config_hash, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointTiming {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub resamples: u64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub code_version: String,
    pub config_hash: String,
    pub config: SystemConfig,
    pub diversity: DiversityReport,
    pub workers: usize,
    pub points: Vec<PointTiming>,
}

impl Manifest {
    pub fn new(config: &SystemConfig, curve: &BerCurve, workers: usize) -> Self {
        Self {
            code_version: env!("CARGO_PKG_VERSION").into(),
            config_hash: curve.config_hash.clone(),
            config: config.clone(),
            diversity: curve.diversity,
            workers,
            points: curve
                .points
                .iter()
                .map(|p| PointTiming {
                    snr_db: p.snr_db,
                    frames: p.frames,
                    frame_errors: p.frame_errors,
                    resamples: p.resamples,
                    wall_time_s: p.wall_time_s,
                })
                .collect(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = File::create(path)?;
        serde_json::to_writer_pretty(&mut f, self)?;
        writeln!(f)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }
}
