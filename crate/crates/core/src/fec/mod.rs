//! Bit-level transmit chain and the soft-input decoder.

mod conv;
mod frame;
mod interleaver;
mod qam;

pub use conv::{ConvCode, TAIL_BITS};
pub use frame::{BitLocation, CodedFrame, FrameLayout};
pub use interleaver::Interleaver;
pub use qam::{qam16_awgn_ber, Constellation, Modulation};
