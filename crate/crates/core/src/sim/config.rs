//! Scenario configuration and its text format.
//!
//! One `key = value` per line, `#` starts a comment. Grid values list rows
//! separated by `;` with entries separated by spaces or commas, e.g.
//! `paths = 6 2; 3 1`. A single number fills the whole grid. The SNR grid is a
//! list (`0, 2, 4`) or an inclusive range `start:step:stop`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fec::Modulation;
use crate::pstbc::SUPPORTED_DIMS;

/// The only supported code, in octal generator notation.
pub const CODE_133_171: &str = "133,171";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub m_t: usize,
    pub m_r: usize,
    pub n_t: usize,
    pub n_r: usize,
    /// Stream count `D`; equals the RAU counts.
    pub d: usize,
    /// RF chains, recorded only; the simulated beamformer is the SVD optimum.
    pub n_rf_t: usize,
    pub n_rf_r: usize,
    /// `M_r × M_t` large-scale gains in dB.
    pub beta_db: Vec<Vec<f64>>,
    /// `M_r × M_t` path counts.
    pub paths: Vec<Vec<usize>>,
    /// Antenna spacing in wavelengths.
    pub spacing: f64,
    pub modulation: Modulation,
    pub code: String,
    /// Information bits per frame, before the tail.
    pub frame_bits: usize,
    pub master_seed: u64,
    pub snr_grid_db: Vec<f64>,
    pub stop_min_bit_errors: u64,
    pub stop_max_frames: u64,
    /// Extra stopping requirement on erroneous frames; 0 disables it.
    pub stop_min_frame_errors: u64,
    /// Test hook: transmit without noise.
    pub noiseless: bool,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            m_t: 2,
            m_r: 2,
            n_t: 32,
            n_r: 16,
            d: 2,
            n_rf_t: 4,
            n_rf_r: 4,
            beta_db: vec![vec![-20.0; 2]; 2],
            paths: vec![vec![2; 2]; 2],
            spacing: 0.5,
            modulation: Modulation::Qam16,
            code: CODE_133_171.into(),
            frame_bits: 1024,
            master_seed: 1,
            snr_grid_db: (0..=10).map(|i| 2.0 * i as f64).collect(),
            stop_min_bit_errors: 200,
            stop_max_frames: 20_000,
            stop_min_frame_errors: 0,
            noiseless: false,
        }
    }
}

fn line_err(line: usize, message: impl Into<String>) -> Error {
    Error::ConfigLine {
        line,
        message: message.into(),
    }
}

fn field_err(field: &str, message: impl Into<String>) -> Error {
    Error::ConfigField {
        field: field.into(),
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, key: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| line_err(line, format!("`{key}`: cannot parse `{tok}`")))
}

fn tokens(row: &str) -> impl Iterator<Item = &str> {
    row.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
}

fn parse_grid<T: std::str::FromStr + Copy>(value: &str, line: usize, key: &str) -> Result<Vec<Vec<T>>> {
    let body = value.trim().trim_start_matches('[').trim_end_matches(']');
    let rows = body
        .split(';')
        .map(|row| tokens(row).map(|t| parse_num(t, line, key)).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.is_empty()) {
        return Err(line_err(line, format!("`{key}`: empty grid row")));
    }
    Ok(rows)
}

fn parse_snr_grid(value: &str, line: usize) -> Result<Vec<f64>> {
    let v = value.trim().trim_start_matches('[').trim_end_matches(']');
    if v.contains(':') {
        let parts: Vec<&str> = v.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(line_err(line, "`snr_grid_db` range must be start:step:stop"));
        }
        let start: f64 = parse_num(parts[0], line, "snr_grid_db")?;
        let step: f64 = parse_num(parts[1], line, "snr_grid_db")?;
        let stop: f64 = parse_num(parts[2], line, "snr_grid_db")?;
        return snr_range(start, step, stop).map_err(|m| line_err(line, m));
    }
    tokens(v).map(|t| parse_num(t, line, "snr_grid_db")).collect()
}

/// Inclusive `start, start + step, …, ≤ stop`.
pub fn snr_range(start: f64, step: f64, stop: f64) -> std::result::Result<Vec<f64>, String> {
    if !(step > 0.0) || !(stop >= start) {
        return Err("SNR range needs step > 0 and stop >= start".into());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    // Round away binary noise so grid values print cleanly.
    Ok((0..n)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

fn parse_bool(tok: &str, line: usize, key: &str) -> Result<bool> {
    match tok.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(line_err(line, format!("`{key}`: expected a boolean, got `{other}`"))),
    }
}

fn expand<T: Copy>(grid: Vec<Vec<T>>, m_r: usize, m_t: usize) -> Vec<Vec<T>> {
    if grid.len() == 1 && grid[0].len() == 1 {
        vec![vec![grid[0][0]; m_t]; m_r]
    } else {
        grid
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

impl SystemConfig {
    /// Parses the key/value format and validates the result. Keys that are
    /// absent keep their default values.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut beta: Option<Vec<Vec<f64>>> = None;
        let mut paths: Option<Vec<Vec<usize>>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| line_err(line, format!("expected `key = value`, got `{content}`")))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            if value.is_empty() {
                return Err(line_err(line, format!("`{key}` has no value")));
            }
            if let Some(prev) = seen.insert(key.clone(), line) {
                return Err(line_err(line, format!("`{key}` already set on line {prev}")));
            }
            match key.as_str() {
                "m_t" => cfg.m_t = parse_num(value, line, &key)?,
                "m_r" => cfg.m_r = parse_num(value, line, &key)?,
                "n_t" => cfg.n_t = parse_num(value, line, &key)?,
                "n_r" => cfg.n_r = parse_num(value, line, &key)?,
                "d" => cfg.d = parse_num(value, line, &key)?,
                "n_rf_t" => cfg.n_rf_t = parse_num(value, line, &key)?,
                "n_rf_r" => cfg.n_rf_r = parse_num(value, line, &key)?,
                "beta_db" => beta = Some(parse_grid(value, line, &key)?),
                "paths" => paths = Some(parse_grid(value, line, &key)?),
                "spacing" => cfg.spacing = parse_num(value, line, &key)?,
                "modulation" => {
                    cfg.modulation = Modulation::parse(value)
                        .ok_or_else(|| line_err(line, format!("unknown modulation `{value}`")))?
                }
                "code" => cfg.code = tokens(value).collect::<Vec<_>>().join(","),
                "frame_bits" => cfg.frame_bits = parse_num(value, line, &key)?,
                "master_seed" => cfg.master_seed = parse_num(value, line, &key)?,
                "snr_grid_db" => cfg.snr_grid_db = parse_snr_grid(value, line)?,
                "stop_min_bit_errors" => cfg.stop_min_bit_errors = parse_num(value, line, &key)?,
                "stop_max_frames" => cfg.stop_max_frames = parse_num(value, line, &key)?,
                "stop_min_frame_errors" => cfg.stop_min_frame_errors = parse_num(value, line, &key)?,
                "noiseless" => cfg.noiseless = parse_bool(value, line, &key)?,
                other => return Err(line_err(line, format!("unknown key `{other}`"))),
            }
        }
        if !seen.contains_key("n_rf_t") {
            cfg.n_rf_t = 2 * cfg.d;
        }
        if !seen.contains_key("n_rf_r") {
            cfg.n_rf_r = 2 * cfg.d;
        }
        cfg.beta_db = expand(beta.unwrap_or_else(|| vec![vec![-20.0]]), cfg.m_r, cfg.m_t);
        cfg.paths = expand(paths.unwrap_or_else(|| vec![vec![2]]), cfg.m_r, cfg.m_t);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    /// Canonical text form; parsing it gives back an equal config.
    pub fn to_text(&self) -> String {
        let grid = |rows: Vec<String>| rows.join("; ");
        let mut s = String::new();
        let _ = writeln!(s, "m_t = {}", self.m_t);
        let _ = writeln!(s, "m_r = {}", self.m_r);
        let _ = writeln!(s, "n_t = {}", self.n_t);
        let _ = writeln!(s, "n_r = {}", self.n_r);
        let _ = writeln!(s, "d = {}", self.d);
        let _ = writeln!(s, "n_rf_t = {}", self.n_rf_t);
        let _ = writeln!(s, "n_rf_r = {}", self.n_rf_r);
        let _ = writeln!(
            s,
            "beta_db = {}",
            grid(self.beta_db.iter().map(|r| r.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(" ")).collect())
        );
        let _ = writeln!(
            s,
            "paths = {}",
            grid(self.paths.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect())
        );
        let _ = writeln!(s, "spacing = {}", fmt_f64(self.spacing));
        let _ = writeln!(s, "modulation = {}", self.modulation.name());
        let _ = writeln!(s, "code = {}", self.code);
        let _ = writeln!(s, "frame_bits = {}", self.frame_bits);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(
            s,
            "snr_grid_db = {}",
            self.snr_grid_db.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(", ")
        );
        let _ = writeln!(s, "stop_min_bit_errors = {}", self.stop_min_bit_errors);
        let _ = writeln!(s, "stop_max_frames = {}", self.stop_max_frames);
        let _ = writeln!(s, "stop_min_frame_errors = {}", self.stop_min_frame_errors);
        let _ = writeln!(s, "noiseless = {}", self.noiseless);
        s
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        if !SUPPORTED_DIMS.contains(&self.d) {
            return Err(field_err("d", format!("{} not in {{2, 3, 4, 6}}", self.d)));
        }
        if self.m_t != self.d || self.m_r != self.d {
            return Err(field_err(
                "m_t",
                format!("RAU counts must equal D (m_t = {}, m_r = {}, d = {})", self.m_t, self.m_r, self.d),
            ));
        }
        if self.n_t == 0 || self.n_r == 0 {
            return Err(field_err("n_t", "antenna counts must be positive"));
        }
        if self.beta_db.len() != self.m_r || self.beta_db.iter().any(|r| r.len() != self.m_t) {
            return Err(field_err("beta_db", format!("grid must be {}x{}", self.m_r, self.m_t)));
        }
        if self.beta_db.iter().flatten().any(|b| !b.is_finite()) {
            return Err(field_err("beta_db", "gains must be finite"));
        }
        if self.paths.len() != self.m_r || self.paths.iter().any(|r| r.len() != self.m_t) {
            return Err(field_err("paths", format!("grid must be {}x{}", self.m_r, self.m_t)));
        }
        if self.paths.iter().flatten().any(|&l| l == 0) {
            return Err(field_err("paths", "every subchannel needs at least one path"));
        }
        if !(self.spacing > 0.0) {
            return Err(field_err("spacing", "must be positive"));
        }
        if self.code != CODE_133_171 {
            return Err(field_err("code", format!("only `{CODE_133_171}` is supported, got `{}`", self.code)));
        }
        if self.frame_bits == 0 {
            return Err(field_err("frame_bits", "must be positive"));
        }
        if self.snr_grid_db.is_empty() {
            return Err(field_err("snr_grid_db", "needs at least one point"));
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite())
            || self.snr_grid_db.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(field_err("snr_grid_db", "must be finite and strictly increasing"));
        }
        if self.stop_max_frames == 0 {
            return Err(field_err("stop_max_frames", "must be positive"));
        }
        Ok(())
    }

    pub fn beta_linear(&self) -> Vec<Vec<f64>> {
        self.beta_db
            .iter()
            .map(|r| r.iter().map(|&b| 10f64.powf(b / 10.0)).collect())
            .collect()
    }

    /// Uniform-gain, uniform-path scenario with `d` RAUs on each side.
    pub fn uniform(d: usize, n_t: usize, n_r: usize, beta_db: f64, paths: usize) -> Self {
        Self {
            m_t: d,
            m_r: d,
            n_t,
            n_r,
            d,
            n_rf_t: 2 * d,
            n_rf_r: 2 * d,
            beta_db: vec![vec![beta_db; d]; d],
            paths: vec![vec![paths; d]; d],
            ..Self::default()
        }
    }
}
