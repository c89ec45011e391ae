//! SVD precoding and combining.
//!
//! With `F = V_(1:D)` and `W = U_(1:D)` the combined signal is
//! `Y = Λ Z + Uᴴ_(1:D) n`. The combiner has orthonormal columns, so the
//! combined noise is again i.i.d. `CN(0, N0)` and can be drawn directly in the
//! `D`-dimensional domain. [`transmit_full`] keeps the antenna-domain path for
//! verification.

use rand::Rng;

use crate::channel::ChannelRealization;
use crate::error::{arg, Result};
use crate::pstbc::PstbcCodeword;
use crate::{complex_gaussian, CMatrix, C64};

#[derive(Debug, Clone)]
pub struct Beamformers {
    /// `(M_t N_t) × D`.
    pub precoder: CMatrix,
    /// `(M_r N_r) × D`.
    pub combiner: CMatrix,
    pub lambda_d: Vec<f64>,
}

/// Noise level `N0 = N_t / SNR`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub n0: f64,
    pub snr: f64,
}

impl NoiseModel {
    pub fn from_snr(snr: f64, n_t: usize) -> Result<Self> {
        if !(snr > 0.0) {
            return arg(format!("SNR must be positive, got {snr}"));
        }
        Ok(Self {
            n0: n_t as f64 / snr,
            snr,
        })
    }

    pub fn from_snr_db(snr_db: f64, n_t: usize) -> Result<Self> {
        Self::from_snr(10f64.powf(snr_db / 10.0), n_t)
    }

    /// Silent channel for loopback tests.
    pub fn noiseless() -> Self {
        Self {
            n0: 0.0,
            snr: f64::INFINITY,
        }
    }
}

/// Top-`d` singular vectors as precoder and combiner.
pub fn svd_beamformers(chan: &ChannelRealization, d: usize) -> Result<Beamformers> {
    if d == 0 || d > chan.sigma.len() {
        return arg(format!(
            "{d} streams requested but only {} singular vectors exist",
            chan.sigma.len()
        ));
    }
    Ok(Beamformers {
        precoder: chan.v.columns(0, d).into_owned(),
        combiner: chan.u.columns(0, d).into_owned(),
        lambda_d: chan.sigma[..d].to_vec(),
    })
}

fn noise_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, n0: f64, rng: &mut R) -> CMatrix {
    if n0 == 0.0 {
        return CMatrix::zeros(rows, cols);
    }
    let mut m = CMatrix::zeros(rows, cols);
    // Column-major fill keeps the draw order stable.
    for z in m.iter_mut() {
        *z = complex_gaussian(rng, n0);
    }
    m
}

/// `Y = diag(λ) Z + Ñ` in the combined domain.
pub fn transmit<R: Rng + ?Sized>(
    bf: &Beamformers,
    z: &PstbcCodeword,
    noise: NoiseModel,
    rng: &mut R,
) -> CMatrix {
    let d = bf.lambda_d.len();
    assert_eq!(z.z.shape(), (d, d), "codeword and beamformer dimensions differ");
    let mut y = z.z.clone();
    for (r, &l) in bf.lambda_d.iter().enumerate() {
        y.row_mut(r).scale_mut(l);
    }
    y + noise_matrix(d, d, noise.n0, rng)
}

/// `Y = Wᴴ (H F Z + N)` with antenna-domain noise `N`.
pub fn transmit_full<R: Rng + ?Sized>(
    chan: &ChannelRealization,
    bf: &Beamformers,
    z: &PstbcCodeword,
    noise: NoiseModel,
    rng: &mut R,
) -> CMatrix {
    let n = noise_matrix(chan.h.nrows(), z.z.ncols(), noise.n0, rng);
    bf.combiner.adjoint() * (&chan.h * &bf.precoder * &z.z + n)
}

/// `max |Wᴴ H F − diag(λ)|` entrywise.
pub fn diagonalization_error(chan: &ChannelRealization, bf: &Beamformers) -> f64 {
    let eff = bf.combiner.adjoint() * &chan.h * &bf.precoder;
    let mut worst: f64 = 0.0;
    for r in 0..eff.nrows() {
        for c in 0..eff.ncols() {
            let target = if r == c { C64::new(bf.lambda_d[r], 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((eff[(r, c)] - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{assemble_channel, draw_blocks, ArrayGeometry, SubchannelSpec};
    use crate::pstbc::PerfectCodeParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn channel(m: usize, n_r: usize, n_t: usize, l: usize, rng: &mut ChaCha8Rng) -> ChannelRealization {
        let specs = vec![vec![SubchannelSpec::new(l, 0.01).unwrap(); m]; m];
        let rx = ArrayGeometry::new(n_r, 0.5).unwrap();
        let tx = ArrayGeometry::new(n_t, 0.5).unwrap();
        assemble_channel(draw_blocks(rx, tx, &specs, rng), &specs, 0).unwrap()
    }

    fn codeword(d: usize, rng: &mut ChaCha8Rng) -> PstbcCodeword {
        let c = crate::fec::Constellation::qam16();
        let p = PerfectCodeParams::build(d).unwrap();
        let inputs: Vec<Vec<C64>> = (0..d)
            .map(|_| (0..d).map(|_| c.point(rng.random_range(0..16))).collect())
            .collect();
        p.encode(&inputs).unwrap()
    }

    #[test]
    fn beamformers_diagonalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let ch = channel(2, 16, 32, 2, &mut rng);
            let bf = svd_beamformers(&ch, 2).unwrap();
            assert!(diagonalization_error(&ch, &bf) < 1e-8 * bf.lambda_d[0]);
            assert!(bf.lambda_d.windows(2).all(|w| w[0] >= w[1]));
            let ff = bf.precoder.adjoint() * &bf.precoder;
            let ww = bf.combiner.adjoint() * &bf.combiner;
            assert!((ff - CMatrix::identity(2, 2)).norm() < 1e-10);
            assert!((ww - CMatrix::identity(2, 2)).norm() < 1e-10);
        }
    }

    #[test]
    fn full_rank_single_block_captures_all_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ch = channel(1, 4, 4, 3, &mut rng);
        let bf = svd_beamformers(&ch, 4).unwrap();
        let sum: f64 = bf.lambda_d.iter().map(|l| l * l).sum();
        assert!((sum - ch.theta).abs() < 1e-10 * ch.theta);
    }

    #[test]
    fn too_many_streams_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ch = channel(1, 2, 2, 1, &mut rng);
        assert!(svd_beamformers(&ch, 3).is_err());
        assert!(svd_beamformers(&ch, 0).is_err());
    }

    #[test]
    fn noiseless_is_exact_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ch = channel(2, 8, 8, 2, &mut rng);
        let bf = svd_beamformers(&ch, 2).unwrap();
        let z = codeword(2, &mut rng);
        let y = transmit(&bf, &z, NoiseModel::noiseless(), &mut rng);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(y[(r, c)], z.z[(r, c)] * bf.lambda_d[r]);
            }
        }
    }

    #[test]
    fn combined_noise_has_n0_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let bf = Beamformers {
            precoder: CMatrix::identity(2, 2),
            combiner: CMatrix::identity(2, 2),
            lambda_d: vec![1.0, 1.0],
        };
        let zero = PstbcCodeword {
            z: CMatrix::zeros(2, 2),
            inputs: vec![],
        };
        let noise = NoiseModel::from_snr(4.0, 2).unwrap();
        let n = 25_000;
        let (mut sum, mut sq) = (C64::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let y = transmit(&bf, &zero, noise, &mut rng);
            for z in y.iter() {
                sum += z;
                sq += z.norm_sqr();
            }
        }
        let count = (4 * n) as f64;
        assert!((sq / count - noise.n0).abs() < 0.02 * noise.n0);
        assert!((sum / count).norm() < 0.01);
    }

    #[test]
    fn reduced_model_matches_antenna_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for d in [2, 3] {
            let ch = channel(d, 8, 16, 2, &mut rng);
            let bf = svd_beamformers(&ch, d).unwrap();
            let z = codeword(d, &mut rng);
            let noiseless_full = transmit_full(&ch, &bf, &z, NoiseModel::noiseless(), &mut rng);
            let noiseless = transmit(&bf, &z, NoiseModel::noiseless(), &mut rng);
            assert!((&noiseless_full - &noiseless).norm() < 1e-8 * noiseless.norm());

            // Same antenna-domain noise through both routes.
            let noise = NoiseModel::from_snr(10.0, 16).unwrap();
            let n = noise_matrix(ch.h.nrows(), d, noise.n0, &mut ChaCha8Rng::seed_from_u64(99));
            let full = bf.combiner.adjoint() * (&ch.h * &bf.precoder * &z.z + &n);
            let reduced = noiseless + bf.combiner.adjoint() * &n;
            assert!((&full - &reduced).norm() < 1e-8 * full.norm());
            let via_fn = transmit_full(&ch, &bf, &z, noise, &mut ChaCha8Rng::seed_from_u64(99));
            assert!((&via_fn - &full).norm() < 1e-12 * full.norm());
        }
    }
}
