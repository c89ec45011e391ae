//! Monte Carlo BER engine.
//!
//! Every frame owns a ChaCha8 stream derived from the master seed, the SNR
//! index and the frame index, and frames run in fixed batches with the stop
//! rule checked between batches. Results are therefore identical for any
//! worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::SystemConfig;
use super::output::{BerCurve, PointResult};
use crate::analysis::diversity_report;
use crate::beamforming::{svd_beamformers, transmit, Beamformers, NoiseModel};
use crate::channel::{assemble_channel, config_geometry, draw_blocks, ArrayGeometry, SubchannelSpec};
use crate::detector::{scalar_metrics, Detector, SearchStrategy, DEGENERATE_RATIO};
use crate::error::{arg, Error, Result};
use crate::fec::{CodedFrame, Constellation, ConvCode, Interleaver};
use crate::pstbc::PerfectCodeParams;
use crate::{complex_gaussian, C64};

/// Frames per scheduling batch.
pub const BATCH_FRAMES: u64 = 32;
/// Channel redraws allowed per frame before giving up.
pub const MAX_RESAMPLES: usize = 64;

const INTERLEAVER_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// RNG for frame `frame` at SNR index `snr_index`.
pub fn frame_rng(master_seed: u64, snr_index: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((snr_index as u64) << 40) | frame);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameOutcome {
    pub info_bits: u64,
    pub bit_errors: u64,
    pub resamples: u64,
}

/// Everything about a link that stays fixed across frames.
#[derive(Debug, Clone)]
pub struct LinkContext {
    config: SystemConfig,
    params: PerfectCodeParams,
    constellation: Constellation,
    code: ConvCode,
    interleaver: Interleaver,
    rx: ArrayGeometry,
    tx: ArrayGeometry,
    specs: Vec<Vec<SubchannelSpec>>,
    strategy: SearchStrategy,
}

impl LinkContext {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        Self::with_params(config, PerfectCodeParams::build(config.d)?)
    }

    /// Uses `params` in place of the standard perfect code.
    pub fn with_params(config: &SystemConfig, params: PerfectCodeParams) -> Result<Self> {
        if params.dim() != config.d {
            return arg("code dimension does not match the configuration");
        }
        let (rx, tx, specs) = config_geometry(config)?;
        if config.d > (config.m_r * config.n_r).min(config.m_t * config.n_t) {
            return arg("D exceeds the rank of the block channel");
        }
        let code = ConvCode::new();
        let coded = 2 * (config.frame_bits + crate::fec::TAIL_BITS);
        Ok(Self {
            config: config.clone(),
            params,
            constellation: config.modulation.constellation(),
            code,
            interleaver: Interleaver::random(coded, config.master_seed ^ INTERLEAVER_SALT),
            rx,
            tx,
            specs,
            strategy: SearchStrategy::Auto,
        })
    }

    pub fn with_strategy(mut self, strategy: SearchStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn params(&self) -> &PerfectCodeParams {
        &self.params
    }

    pub fn noise(&self, snr_db: f64) -> Result<NoiseModel> {
        if self.config.noiseless {
            Ok(NoiseModel::noiseless())
        } else {
            NoiseModel::from_snr_db(snr_db, self.config.n_t)
        }
    }

    /// Draws channels until the `D`-th singular value is usable.
    fn draw_beamformers<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Beamformers, u64)> {
        for attempt in 0..MAX_RESAMPLES {
            let blocks = draw_blocks(self.rx, self.tx, &self.specs, rng);
            let chan = assemble_channel(blocks, &self.specs, self.config.master_seed)?;
            let bf = svd_beamformers(&chan, self.config.d)?;
            let l = &bf.lambda_d;
            if l[l.len() - 1] > DEGENERATE_RATIO * l[0] {
                return Ok((bf, attempt as u64));
            }
        }
        Err(Error::Run(format!(
            "{MAX_RESAMPLES} consecutive channel draws were rank deficient"
        )))
    }

    /// One coded frame through a fresh channel realization.
    pub fn simulate_frame<R: Rng + ?Sized>(&self, noise: NoiseModel, rng: &mut R) -> Result<FrameOutcome> {
        let info: Vec<u8> = (0..self.config.frame_bits).map(|_| rng.random_range(0..2u8)).collect();
        let frame = CodedFrame::build(&info, &self.code, &self.interleaver, &self.constellation, self.config.d)?;
        let (bf, resamples) = self.draw_beamformers(rng)?;
        let det = Detector::new(&self.params, &bf.lambda_d, &self.constellation, self.strategy)?;

        let sets = (0..frame.layout.codewords())
            .map(|k| {
                let z = self.params.encode(&frame.codeword_inputs(k))?;
                let y = transmit(&bf, &z, noise, rng);
                det.metrics(&y)
            })
            .collect::<Result<Vec<_>>>()?;
        let metrics: Vec<[f64; 2]> = frame
            .index_map
            .iter()
            .map(|loc| sets[loc.codeword].codeword_metric(loc.group, loc.position, loc.bit))
            .collect();
        let decoded = self.code.viterbi_decode(&metrics);
        let bit_errors = decoded.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameOutcome {
            info_bits: info.len() as u64,
            bit_errors,
            resamples,
        })
    }
}

/// Runs sweeps for one link, optionally on a thread pool.
pub struct Simulator {
    ctx: LinkContext,
    pool: Option<rayon::ThreadPool>,
}

impl Simulator {
    pub fn new(config: &SystemConfig, workers: usize) -> Result<Self> {
        Self::from_context(LinkContext::new(config)?, workers)
    }

    /// `workers == 1` runs on the calling thread; `0` uses every core.
    pub fn from_context(ctx: LinkContext, workers: usize) -> Result<Self> {
        let pool = if workers == 1 {
            None
        } else {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| Error::Run(format!("thread pool: {e}")))?,
            )
        };
        Ok(Self { ctx, pool })
    }

    pub fn context(&self) -> &LinkContext {
        &self.ctx
    }

    fn batch(&self, snr_index: usize, noise: NoiseModel, frames: std::ops::Range<u64>) -> Result<Vec<FrameOutcome>> {
        let seed = self.ctx.config.master_seed;
        let one = |f: u64| self.ctx.simulate_frame(noise, &mut frame_rng(seed, snr_index, f));
        match &self.pool {
            None => frames.map(one).collect(),
            Some(pool) => pool.install(|| frames.into_par_iter().map(one).collect()),
        }
    }

    /// Simulates one SNR point until the stop rule fires.
    pub fn run_point(&self, snr_index: usize, snr_db: f64) -> Result<PointResult> {
        let cfg = &self.ctx.config;
        let noise = self.ctx.noise(snr_db)?;
        let timer = Timer::start();
        let mut acc = PointResult {
            snr_db,
            ..PointResult::default()
        };
        while acc.frames < cfg.stop_max_frames {
            let end = (acc.frames + BATCH_FRAMES).min(cfg.stop_max_frames);
            for out in self.batch(snr_index, noise, acc.frames..end)? {
                acc.frames += 1;
                acc.info_bits += out.info_bits;
                acc.bit_errors += out.bit_errors;
                acc.frame_errors += u64::from(out.bit_errors > 0);
                acc.resamples += out.resamples;
            }
            if acc.bit_errors >= cfg.stop_min_bit_errors && acc.frame_errors >= cfg.stop_min_frame_errors {
                break;
            }
        }
        acc.ber = acc.bit_errors as f64 / acc.info_bits as f64;
        acc.wall_time_s = timer.elapsed();
        Ok(acc)
    }

    /// Runs the whole grid, reporting each point to `progress` as it finishes.
    pub fn run_sweep_with(&self, mut progress: impl FnMut(&PointResult)) -> Result<BerCurve> {
        let cfg = &self.ctx.config;
        let mut points = Vec::with_capacity(cfg.snr_grid_db.len());
        for (i, &snr) in cfg.snr_grid_db.iter().enumerate() {
            let p = self.run_point(i, snr)?;
            progress(&p);
            points.push(p);
        }
        Ok(BerCurve {
            config_hash: cfg.hash(),
            diversity: diversity_report(cfg)?,
            points,
        })
    }

    pub fn run_sweep(&self) -> Result<BerCurve> {
        self.run_sweep_with(|_| {})
    }
}

pub fn run_sweep(config: &SystemConfig, workers: usize) -> Result<BerCurve> {
    Simulator::new(config, workers)?.run_sweep()
}

/// Uncoded Gray 16-QAM over AWGN with `E_s/N_0 = 10^(snr_db/10)`, detected
/// through the same bit-metric path as the full link. Returns
/// `(bits, bit_errors)`.
pub fn awgn_calibration(snr_db: f64, symbols: usize, seed: u64) -> Result<(u64, u64)> {
    if symbols == 0 {
        return arg("calibration needs at least one symbol");
    }
    let c = Constellation::qam16();
    let n0 = 10f64.powf(-snr_db / 10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = C64::new(1.0, 0.0);
    let mut errors = 0u64;
    for _ in 0..symbols {
        let idx = rng.random_range(0..c.len());
        let y = c.point(idx) + complex_gaussian(&mut rng, n0);
        for (j, m) in scalar_metrics(y, one, &c).iter().enumerate() {
            let hard = u8::from(m[1] < m[0]);
            errors += u64::from(hard != c.bit_label(idx, j));
        }
    }
    Ok(((symbols * c.bits_per_symbol()) as u64, errors))
}

struct Timer {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Timer {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed().as_secs_f64();
        #[cfg(target_arch = "wasm32")]
        return 0.0;
    }
}
