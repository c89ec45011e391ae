//! Diversity analysis.
//!
//! `Θ = ‖H‖_F²` is a weighted sum of independent Gamma variables, one per
//! subchannel with shape `L_ij` and scale `β_ij / L_ij` (after normalizing by
//! `N_r N_t`). Moment matching that sum to a single Gamma gives the shape
//! `κ = (Σβ)² / Σ(β²/L)` and scale `θ = Σ(β²/L) / Σβ`; `κ` is the predicted
//! diversity order and does not depend on `D`, `N_t` or `N_r`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Gamma};

use crate::error::{arg, Error, Result};
use crate::fec::Constellation;
use crate::pstbc::PerfectCodeParams;
use crate::sim::{BerCurve, SystemConfig};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityReport {
    /// Gamma shape, the predicted diversity gain.
    pub kappa: f64,
    /// Gamma scale.
    pub theta_scale: f64,
    /// Total path count `Σ L_ij`.
    pub l_total: usize,
}

fn check_grids<T>(betas: &[Vec<T>], paths: &[Vec<usize>]) -> Result<()> {
    if betas.is_empty() || betas.len() != paths.len() {
        return arg("β and L grids must have the same nonzero row count");
    }
    for (b, l) in betas.iter().zip(paths) {
        if b.len() != l.len() || b.is_empty() {
            return arg("β and L grids must have matching row lengths");
        }
        if l.contains(&0) {
            return arg("every subchannel needs at least one path");
        }
    }
    Ok(())
}

/// Welch–Satterthwaite shape and scale for linear gains `betas`.
pub fn welch_satterthwaite(betas: &[Vec<f64>], paths: &[Vec<usize>]) -> Result<DiversityReport> {
    check_grids(betas, paths)?;
    let (mut s1, mut s2, mut lt) = (0.0, 0.0, 0usize);
    for (brow, lrow) in betas.iter().zip(paths) {
        for (&b, &l) in brow.iter().zip(lrow) {
            if !(b > 0.0) || !b.is_finite() {
                return arg(format!("large-scale gains must be positive, got {b}"));
            }
            s1 += b;
            s2 += b * b / l as f64;
            lt += l;
        }
    }
    Ok(DiversityReport {
        kappa: s1 * s1 / s2,
        theta_scale: s2 / s1,
        l_total: lt,
    })
}

/// Rational shape and scale, for exact checks.
pub fn welch_satterthwaite_exact(
    betas: &[Vec<Ratio<i128>>],
    paths: &[Vec<usize>],
) -> Result<(Ratio<i128>, Ratio<i128>)> {
    check_grids(betas, paths)?;
    let zero = Ratio::from_integer(0);
    let (mut s1, mut s2) = (zero, zero);
    for (brow, lrow) in betas.iter().zip(paths) {
        for (&b, &l) in brow.iter().zip(lrow) {
            if b <= zero {
                return arg("large-scale gains must be positive");
            }
            s1 += b;
            s2 += b * b / Ratio::from_integer(l as i128);
        }
    }
    Ok((s1 * s1 / s2, s2 / s1))
}

pub fn diversity_report(config: &SystemConfig) -> Result<DiversityReport> {
    welch_satterthwaite(&config.beta_linear(), &config.paths)
}

/// Predicted diversity gain `G_d = κ`.
pub fn diversity_gain(config: &SystemConfig) -> Result<f64> {
    Ok(diversity_report(config)?.kappa)
}

/// Minimum of `|g_uᵀ e|²` over rows `u` and nonzero differences `e` of
/// constellation vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSpectrum {
    pub zeta_min: f64,
    pub per_row: Vec<f64>,
    /// False when the minimum comes from a randomized search and is only an
    /// upper estimate of the true minimum.
    pub exact: bool,
}

/// Enumeration budget for the exhaustive difference search.
const EXHAUSTIVE_LIMIT: usize = 10_000_000;
const SAMPLED_DRAWS: usize = 2_000_000;

fn difference_set(c: &Constellation) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for a in c.points() {
        for b in c.points() {
            let e = a - b;
            if !out.iter().any(|z| (z - e).norm() < 1e-12) {
                out.push(e);
            }
        }
    }
    out
}

/// `ζ_min` for the generator of `params` over `constellation`.
///
/// A difference vector with one nonzero entry per group already realizes the
/// minimum of `ρ`, so the search runs over single difference vectors in
/// `Δχ^D`. Exhaustive when the enumeration fits the budget, otherwise a
/// seeded random search reported with `exact = false`.
pub fn zeta_min(params: &PerfectCodeParams, constellation: &Constellation) -> DistanceSpectrum {
    let d = params.dim();
    let g = params.generator();
    let diffs = difference_set(constellation);
    let n = diffs.len();
    let row_value = |u: usize, e: &[C64]| -> f64 {
        (0..d).map(|k| g[(u, k)] * e[k]).sum::<C64>().norm_sqr()
    };
    let mut per_row = vec![f64::INFINITY; d];
    let mut e = vec![C64::new(0.0, 0.0); d];
    let total = n.checked_pow(d as u32).filter(|&t| t <= EXHAUSTIVE_LIMIT);
    let exact = total.is_some();
    let visit = |e: &[C64], per_row: &mut [f64]| {
        if e.iter().all(|z| z.norm() < 1e-12) {
            return;
        }
        for (u, slot) in per_row.iter_mut().enumerate() {
            let v = row_value(u, e);
            if v < *slot {
                *slot = v;
            }
        }
    };
    if let Some(total) = total {
        for idx in 0..total {
            let mut t = idx;
            for slot in e.iter_mut() {
                *slot = diffs[t % n];
                t /= n;
            }
            visit(&e, &mut per_row);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7a657461);
        for _ in 0..SAMPLED_DRAWS {
            // Sparse differences dominate the minimum; bias draws toward them.
            let active = rng.random_range(1..=d);
            e.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            for _ in 0..active {
                let k = rng.random_range(0..d);
                e[k] = diffs[rng.random_range(0..n)];
            }
            visit(&e, &mut per_row);
        }
    }
    let zeta = per_row.iter().copied().fold(f64::INFINITY, f64::min);
    DistanceSpectrum {
        zeta_min: zeta,
        per_row,
        exact,
    }
}

/// High-SNR PEP bound `½ (θ ζ_min D N_t / (4 L_t) · SNR)^(−κ)`.
pub fn pep_bound(report: &DiversityReport, zeta_min: f64, d: usize, n_t: usize, snr: f64) -> Result<f64> {
    if !(snr > 0.0) {
        return arg("SNR must be positive");
    }
    let base =
        report.theta_scale * zeta_min * (d * n_t) as f64 / (4.0 * report.l_total as f64) * snr;
    Ok(0.5 * base.powf(-report.kappa))
}

/// Closed interval of SNR values in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrWindow {
    pub min_db: f64,
    pub max_db: f64,
}

/// The top 10 dB of the points whose BER lies in `(0, 1e-2)`.
pub fn default_window(points: &[(f64, f64)]) -> Option<SnrWindow> {
    let top = points
        .iter()
        .filter(|(_, ber)| *ber > 0.0 && *ber < 1e-2)
        .map(|(s, _)| *s)
        .fold(f64::NEG_INFINITY, f64::max);
    top.is_finite().then_some(SnrWindow {
        min_db: top - 10.0,
        max_db: top,
    })
}

/// Negated least-squares slope of `log10 BER` against `log10 SNR`.
///
/// `points` are `(snr_db, ber)`; zero-BER points are ignored.
pub fn slope_of_points(points: &[(f64, f64)], window: Option<SnrWindow>) -> Result<f64> {
    let window = match window {
        Some(w) => w,
        None => default_window(points)
            .ok_or_else(|| Error::Analysis("no points with 0 < BER < 1e-2".into()))?,
    };
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(s, ber)| *ber > 0.0 && *s >= window.min_db - 1e-9 && *s <= window.max_db + 1e-9)
        .map(|(s, ber)| (s / 10.0, ber.log10()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Analysis(format!(
            "slope needs two nonzero-BER points in [{}, {}] dB, found {}",
            window.min_db,
            window.max_db,
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Analysis("all window points share one SNR".into()));
    }
    Ok(-sxy / sxx)
}

pub fn empirical_slope(curve: &BerCurve, window: Option<SnrWindow>) -> Result<f64> {
    slope_of_points(&curve.snr_ber_pairs(), window)
}

/// SNR (dB) where the curve crosses `target`, interpolating `log10 BER`
/// linearly in dB between the bracketing points.
pub fn snr_at_ber(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (s0, b0) = w[0];
        let (s1, b1) = w[1];
        if b0 >= target && b1 <= target && b1 > 0.0 && b0 > b1 {
            let t = (b0.log10() - target.log10()) / (b0.log10() - b1.log10());
            Some(s0 + t * (s1 - s0))
        } else {
            None
        }
    })
}

/// Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of a KS statistic `stat` over `n` samples.
pub fn ks_p_value(stat: f64, n: usize) -> f64 {
    let x = stat * (n as f64).sqrt();
    if x < 0.2 {
        return 1.0;
    }
    let mut p = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * x * x).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// Asymptotic critical value of the KS statistic at significance `alpha`.
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

/// KS statistic of samples against `Gamma(shape, scale)`.
pub fn gamma_ks(samples: &[f64], shape: f64, scale: f64) -> Result<f64> {
    let g = Gamma::new(shape, 1.0 / scale).map_err(|e| Error::Analysis(e.to_string()))?;
    Ok(ks_statistic(samples, |x| g.cdf(x)))
}
