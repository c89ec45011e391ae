//! Bit-interleaved coded multiple beamforming with perfect space-time block
//! codes (BICMB-PC) over distributed-subarray mm-wave massive MIMO channels.
//!
//! The transmit chain is convolutional code → random bit interleaver →
//! Gray 16-QAM → perfect code → SVD precoder. The receiver combines with the
//! left singular vectors, splits each codeword into `D` independent groups
//! and computes exact ML bit metrics for a soft-input Viterbi decoder.
//!
//! Module map:
//!
//! * [`channel`]: Saleh-Valenzuela subchannels assembled into the block
//!   channel, with SVD and Frobenius statistics.
//! * [`fec`]: (133,171) convolutional code, interleaver, QAM, Viterbi.
//! * [`pstbc`]: perfect code generators and codeword assembly.
//! * [`beamforming`]: SVD precoder/combiner and the effective channel.
//! * [`detector`]: group decomposition, QR reduction and bit metrics.
//! * [`analysis`]: diversity gain, PEP bound, empirical slopes.
//! * [`sim`]: configuration, Monte Carlo engine and result files.

pub mod analysis;
pub mod beamforming;
pub mod channel;
pub mod detector;
pub mod error;
pub mod fec;
pub mod pstbc;
pub mod selftest;
pub mod sim;

pub use error::{Error, Result};

/// Complex sample type used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Draws one circularly symmetric complex Gaussian sample with the given variance.
pub fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    use rand_distr::{Distribution, StandardNormal};
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}
