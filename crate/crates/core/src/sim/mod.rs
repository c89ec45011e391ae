//! Configuration, Monte Carlo engine and result files.

mod config;
mod engine;
mod output;

pub use config::{snr_range, SystemConfig, CODE_133_171};
pub use engine::{
    awgn_calibration, frame_rng, run_sweep, FrameOutcome, LinkContext, Simulator, BATCH_FRAMES,
    MAX_RESAMPLES,
};
pub use output::{
    read_csv, write_csv, BerCurve, CsvRow, CsvTable, Manifest, PointResult, PointTiming, CSV_HEADER,
};
