//! Browser front end: a diversity-gain calculator, a `Θ` histogram against
//! its Gamma approximation, and a quick single-point BER run.
//!
//! The plain functions return Rust values and are tested natively; the
//! `*_json` exports wrap them for JavaScript.

use bicmb::analysis::welch_satterthwaite;
use bicmb::channel::{draw_channel, theta_samples};
use bicmb::sim::{frame_rng, LinkContext, SystemConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{Continuous, Gamma};
use wasm_bindgen::prelude::*;

const MAX_SAMPLES: usize = 20_000;
const MAX_FRAMES: u64 = 400;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Diversity {
    pub kappa: f64,
    pub theta: f64,
    pub l_total: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub centers: Vec<f64>,
    /// Normalized so the bars integrate to one.
    pub density: Vec<f64>,
    pub gamma_pdf: Vec<f64>,
    pub kappa: f64,
    pub theta: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuickBer {
    pub snr_db: f64,
    pub frames: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub kappa: f64,
    /// Leading singular values of one channel draw, largest first.
    pub singular_values: Vec<f64>,
}

/// Parses `a b; c d` into rows.
fn parse_grid<T: std::str::FromStr>(text: &str) -> Result<Vec<Vec<T>>, String> {
    text.split(';')
        .map(|row| {
            row.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| format!("cannot parse `{t}`")))
                .collect::<Result<Vec<T>, String>>()
        })
        .collect()
}

/// `κ`, `θ` and `L_t` for a gain grid in dB and a path grid.
pub fn diversity(beta_db: &str, paths: &str) -> Result<Diversity, String> {
    let beta: Vec<Vec<f64>> = parse_grid(beta_db)?;
    let paths: Vec<Vec<usize>> = parse_grid(paths)?;
    let linear: Vec<Vec<f64>> = if beta.len() == 1 && beta[0].len() == 1 {
        paths.iter().map(|r| vec![10f64.powf(beta[0][0] / 10.0); r.len()]).collect()
    } else {
        beta.iter().map(|r| r.iter().map(|b| 10f64.powf(b / 10.0)).collect()).collect()
    };
    let r = welch_satterthwaite(&linear, &paths).map_err(|e| e.to_string())?;
    Ok(Diversity {
        kappa: r.kappa,
        theta: r.theta_scale,
        l_total: r.l_total,
    })
}

fn scenario(d: usize, n_t: usize, n_r: usize, beta_db: f64, paths: usize) -> Result<SystemConfig, String> {
    let cfg = SystemConfig::uniform(d, n_t, n_r, beta_db, paths);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Histogram of `Θ / (N_r N_t)` for a uniform scenario.
#[allow(clippy::too_many_arguments)]
pub fn theta_histogram(
    d: usize,
    n_t: usize,
    n_r: usize,
    beta_db: f64,
    paths: usize,
    samples: usize,
    bins: usize,
    seed: u64,
) -> Result<Histogram, String> {
    if bins == 0 {
        return Err("need at least one bin".into());
    }
    let cfg = scenario(d, n_t, n_r, beta_db, paths)?;
    let report = bicmb::analysis::diversity_report(&cfg).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = theta_samples(&cfg, samples.clamp(1, MAX_SAMPLES), &mut rng).map_err(|e| e.to_string())?;
    let hi = x.iter().copied().fold(0.0, f64::max) * 1.0001;
    let width = hi / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in &x {
        counts[((v / width) as usize).min(bins - 1)] += 1;
    }
    let gamma = Gamma::new(report.kappa, 1.0 / report.theta_scale).map_err(|e| e.to_string())?;
    let centers: Vec<f64> = (0..bins).map(|i| (i as f64 + 0.5) * width).collect();
    Ok(Histogram {
        density: counts.iter().map(|&c| c as f64 / (x.len() as f64 * width)).collect(),
        gamma_pdf: centers.iter().map(|&c| gamma.pdf(c)).collect(),
        centers,
        kappa: report.kappa,
        theta: report.theta_scale,
        mean: x.iter().sum::<f64>() / x.len() as f64,
    })
}

/// Simulates `frames` coded frames at one SNR.
#[allow(clippy::too_many_arguments)]
pub fn quick_ber(
    d: usize,
    n_t: usize,
    n_r: usize,
    beta_db: f64,
    paths: usize,
    snr_db: f64,
    frames: u64,
    seed: u64,
) -> Result<QuickBer, String> {
    let mut cfg = scenario(d, n_t, n_r, beta_db, paths)?;
    cfg.frame_bits = 256;
    cfg.master_seed = seed;
    let ctx = LinkContext::new(&cfg).map_err(|e| e.to_string())?;
    let noise = ctx.noise(snr_db).map_err(|e| e.to_string())?;
    let frames = frames.clamp(1, MAX_FRAMES);
    let (mut bits, mut errors) = (0, 0);
    for f in 0..frames {
        let out = ctx
            .simulate_frame(noise, &mut frame_rng(seed, 0, f))
            .map_err(|e| e.to_string())?;
        bits += out.info_bits;
        errors += out.bit_errors;
    }
    let chan = draw_channel(&cfg, &mut frame_rng(seed, 1, 0), seed).map_err(|e| e.to_string())?;
    Ok(QuickBer {
        snr_db,
        frames,
        info_bits: bits,
        bit_errors: errors,
        ber: errors as f64 / bits as f64,
        kappa: bicmb::analysis::diversity_gain(&cfg).map_err(|e| e.to_string())?,
        singular_values: chan.sigma.iter().take(2 * d).copied().collect(),
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn diversity_json(beta_db: &str, paths: &str) -> Result<String, JsError> {
    to_json(diversity(beta_db, paths))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn theta_histogram_json(
    d: usize,
    n_t: usize,
    n_r: usize,
    beta_db: f64,
    paths: usize,
    samples: usize,
    bins: usize,
    seed: u32,
) -> Result<String, JsError> {
    to_json(theta_histogram(d, n_t, n_r, beta_db, paths, samples, bins, seed.into()))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn quick_ber_json(
    d: usize,
    n_t: usize,
    n_r: usize,
    beta_db: f64,
    paths: usize,
    snr_db: f64,
    frames: u32,
    seed: u32,
) -> Result<String, JsError> {
    to_json(quick_ber(d, n_t, n_r, beta_db, paths, snr_db, frames.into(), seed.into()))
}
