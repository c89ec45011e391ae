//! Distributed-subarray mm-wave channel.
//!
//! Every (receive RAU, transmit RAU) pair gets an independent narrowband
//! Saleh-Valenzuela subchannel built from `L_ij` single-ray clusters between
//! two uniform linear arrays. The block channel scales each subchannel by the
//! square root of its large-scale gain `β_ij`.

use std::f64::consts::PI;

use nalgebra::SVD;
use rand::Rng;

use crate::error::{arg, Error, Result};
use crate::sim::SystemConfig;
use crate::{complex_gaussian, CMatrix, CVector, C64};

/// Uniform linear array: element count and spacing in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub n_antennas: usize,
    pub spacing: f64,
}

impl ArrayGeometry {
    pub fn new(n_antennas: usize, spacing: f64) -> Result<Self> {
        if n_antennas == 0 {
            return arg("array needs at least one antenna");
        }
        if !(spacing > 0.0) {
            return arg(format!("antenna spacing must be positive, got {spacing}"));
        }
        Ok(Self { n_antennas, spacing })
    }
}

/// Path count and linear large-scale power gain of one subchannel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubchannelSpec {
    pub n_paths: usize,
    pub large_scale_gain: f64,
}

impl SubchannelSpec {
    pub fn new(n_paths: usize, large_scale_gain: f64) -> Result<Self> {
        if n_paths == 0 {
            return arg("subchannel needs at least one path");
        }
        if !(large_scale_gain >= 0.0) || !large_scale_gain.is_finite() {
            return arg(format!(
                "large-scale gain must be finite and nonnegative, got {large_scale_gain}"
            ));
        }
        Ok(Self {
            n_paths,
            large_scale_gain,
        })
    }
}

/// One drawn subchannel together with the ray parameters it was built from.
#[derive(Debug, Clone)]
pub struct SubchannelRealization {
    /// `N_r × N_t` matrix.
    pub matrix: CMatrix,
    pub path_gains: Vec<C64>,
    /// Angles of arrival, radians.
    pub aoa: Vec<f64>,
    /// Angles of departure, radians.
    pub aod: Vec<f64>,
}

impl SubchannelRealization {
    /// Rebuilds the matrix from the stored ray parameters.
    pub fn reconstruct(&self, rx: ArrayGeometry, tx: ArrayGeometry) -> CMatrix {
        ray_sum(&self.path_gains, &self.aoa, &self.aod, rx, tx)
    }
}

/// Block channel with its thin SVD.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// `(M_r N_r) × (M_t N_t)` block matrix.
    pub h: CMatrix,
    /// `M_r × M_t` grid of unscaled subchannels.
    pub blocks: Vec<Vec<SubchannelRealization>>,
    /// Left singular vectors, one column per singular value.
    pub u: CMatrix,
    /// Right singular vectors, one column per singular value.
    pub v: CMatrix,
    /// Singular values, nonincreasing.
    pub sigma: Vec<f64>,
    /// `‖H‖_F²`.
    pub theta: f64,
}

/// Normalized ULA response; element `k` is `exp(j 2π d k sin(angle)) / √N`.
pub fn array_response(angle: f64, geom: ArrayGeometry) -> CVector {
    let n = geom.n_antennas;
    let norm = 1.0 / (n as f64).sqrt();
    let step = 2.0 * PI * geom.spacing * angle.sin();
    CVector::from_fn(n, |k, _| C64::from_polar(norm, step * k as f64))
}

fn ray_sum(
    gains: &[C64],
    aoa: &[f64],
    aod: &[f64],
    rx: ArrayGeometry,
    tx: ArrayGeometry,
) -> CMatrix {
    let n_paths = gains.len();
    let scale = ((rx.n_antennas * tx.n_antennas) as f64 / n_paths as f64).sqrt();
    let mut m = CMatrix::zeros(rx.n_antennas, tx.n_antennas);
    for l in 0..n_paths {
        let ar = array_response(aoa[l], rx) * (gains[l] * scale);
        let at = array_response(aod[l], tx);
        m.ger(C64::new(1.0, 0.0), &ar, &at.map(|z| z.conj()), C64::new(1.0, 0.0));
    }
    m
}

/// Draws one subchannel: `CN(0,1)` ray gains, angles uniform on `[0, 2π)`.
pub fn gen_subchannel<R: Rng + ?Sized>(
    spec: SubchannelSpec,
    rx: ArrayGeometry,
    tx: ArrayGeometry,
    rng: &mut R,
) -> SubchannelRealization {
    let l = spec.n_paths;
    let mut path_gains = Vec::with_capacity(l);
    let mut aoa = Vec::with_capacity(l);
    let mut aod = Vec::with_capacity(l);
    for _ in 0..l {
        path_gains.push(complex_gaussian(rng, 1.0));
        aoa.push(rng.random_range(0.0..2.0 * PI));
        aod.push(rng.random_range(0.0..2.0 * PI));
    }
    let matrix = ray_sum(&path_gains, &aoa, &aod, rx, tx);
    SubchannelRealization {
        matrix,
        path_gains,
        aoa,
        aod,
    }
}

/// Places `√β_ij · H_ij` into the block matrix and decomposes it.
///
/// `seed` only labels a numeric failure so the offending draw can be replayed.
pub fn assemble_channel(
    blocks: Vec<Vec<SubchannelRealization>>,
    specs: &[Vec<SubchannelSpec>],
    seed: u64,
) -> Result<ChannelRealization> {
    let m_r = blocks.len();
    if m_r == 0 || specs.len() != m_r {
        return arg("block grid and spec grid must have the same nonzero row count");
    }
    let m_t = blocks[0].len();
    let (n_r, n_t) = blocks[0][0].matrix.shape();
    for (row, spec_row) in blocks.iter().zip(specs) {
        if row.len() != m_t || spec_row.len() != m_t {
            return arg("block grid rows must all have M_t entries");
        }
        if row.iter().any(|b| b.matrix.shape() != (n_r, n_t)) {
            return arg("all subchannels must share the same array geometries");
        }
    }

    let mut h = CMatrix::zeros(m_r * n_r, m_t * n_t);
    for i in 0..m_r {
        for j in 0..m_t {
            let g = specs[i][j].large_scale_gain.sqrt();
            h.view_mut((i * n_r, j * n_t), (n_r, n_t))
                .copy_from(&(&blocks[i][j].matrix * C64::new(g, 0.0)));
        }
    }
    let theta = h.norm_squared();
    let (u, v, sigma) = sorted_svd(&h).ok_or_else(|| Error::Numeric {
        what: "channel SVD did not converge".into(),
        seed,
    })?;
    Ok(ChannelRealization {
        h,
        blocks,
        u,
        v,
        sigma,
        theta,
    })
}

/// Thin SVD with nonincreasing singular values. Each right singular vector is
/// rotated so its first non-negligible entry is real positive, and the left
/// vector gets the same phase so `u·diag(σ)·vᴴ` is unchanged.
pub fn sorted_svd(h: &CMatrix) -> Option<(CMatrix, CMatrix, Vec<f64>)> {
    let svd = SVD::try_new(h.clone(), true, true, f64::EPSILON, 0)?;
    let mut u = svd.u?;
    let mut v = svd.v_t?.adjoint();
    let sigma = svd.singular_values.as_slice().to_vec();
    let k = sigma.len();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let u_sorted = CMatrix::from_fn(u.nrows(), k, |r, c| u[(r, order[c])]);
    let v_sorted = CMatrix::from_fn(v.nrows(), k, |r, c| v[(r, order[c])]);
    let sigma: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    u = u_sorted;
    v = v_sorted;

    for c in 0..k {
        let col = v.column(c);
        let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(first) = col.iter().find(|z| z.norm() > 1e-9 * peak.max(f64::MIN_POSITIVE)) {
            let rot = C64::from_polar(1.0, -first.arg());
            for z in v.column_mut(c).iter_mut() {
                *z *= rot;
            }
            for z in u.column_mut(c).iter_mut() {
                *z *= rot;
            }
        }
    }
    Some((u, v, sigma))
}

/// Array geometries and spec grid implied by a configuration.
pub fn config_geometry(
    config: &SystemConfig,
) -> Result<(ArrayGeometry, ArrayGeometry, Vec<Vec<SubchannelSpec>>)> {
    let rx = ArrayGeometry::new(config.n_r, config.spacing)?;
    let tx = ArrayGeometry::new(config.n_t, config.spacing)?;
    let specs = config
        .beta_linear()
        .iter()
        .zip(&config.paths)
        .map(|(brow, lrow)| {
            brow.iter()
                .zip(lrow)
                .map(|(&b, &l)| SubchannelSpec::new(l, b))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rx, tx, specs))
}

/// Draws every subchannel of the configured grid in row-major order.
pub fn draw_blocks<R: Rng + ?Sized>(
    rx: ArrayGeometry,
    tx: ArrayGeometry,
    specs: &[Vec<SubchannelSpec>],
    rng: &mut R,
) -> Vec<Vec<SubchannelRealization>> {
    specs
        .iter()
        .map(|row| row.iter().map(|&s| gen_subchannel(s, rx, tx, rng)).collect())
        .collect()
}

/// Draws and decomposes one block channel for `config`.
pub fn draw_channel<R: Rng + ?Sized>(
    config: &SystemConfig,
    rng: &mut R,
    seed: u64,
) -> Result<ChannelRealization> {
    let (rx, tx, specs) = config_geometry(config)?;
    let blocks = draw_blocks(rx, tx, &specs, rng);
    assemble_channel(blocks, &specs, seed)
}

/// `n` independent samples of `‖H‖_F² / (N_r N_t)`.
pub fn theta_samples<R: Rng + ?Sized>(
    config: &SystemConfig,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if n == 0 {
        return arg("theta_samples needs n >= 1");
    }
    let (rx, tx, specs) = config_geometry(config)?;
    let norm = (config.n_r * config.n_t) as f64;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut theta = 0.0;
        for row in &specs {
            for &s in row {
                let sub = gen_subchannel(s, rx, tx, rng);
                theta += s.large_scale_gain * sub.matrix.norm_squared();
            }
        }
        out.push(theta / norm);
    }
    Ok(out)
}
