use super::{Constellation, ConvCode, Interleaver, TAIL_BITS};
use crate::error::{arg, Result};
use crate::C64;

/// Where one interleaved coded bit lands inside the codeword stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitLocation {
    /// Codeword index `k`.
    pub codeword: usize,
    /// Group `n`: which input vector `x_n` (0-based) carries the symbol.
    pub group: usize,
    /// Position `m` of the symbol inside `x_n` (0-based).
    pub position: usize,
    /// Label bit `j`.
    pub bit: usize,
}

/// Sizes of one coded frame for a given code dimension and alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameLayout {
    pub info_bits: usize,
    pub dim: usize,
    pub bits_per_symbol: usize,
}

impl FrameLayout {
    pub fn new(info_bits: usize, dim: usize, bits_per_symbol: usize) -> Result<Self> {
        if info_bits == 0 || dim == 0 || bits_per_symbol == 0 {
            return arg("frame layout sizes must be positive");
        }
        Ok(Self {
            info_bits,
            dim,
            bits_per_symbol,
        })
    }

    /// Coded bits including the tail.
    pub fn coded_bits(&self) -> usize {
        2 * (self.info_bits + TAIL_BITS)
    }

    pub fn bits_per_codeword(&self) -> usize {
        self.dim * self.dim * self.bits_per_symbol
    }

    pub fn codewords(&self) -> usize {
        self.coded_bits().div_ceil(self.bits_per_codeword())
    }

    /// Interleaved length after zero filler completes the last codeword.
    pub fn padded_bits(&self) -> usize {
        self.codewords() * self.bits_per_codeword()
    }

    /// Location of the bit at interleaved position `i`.
    pub fn locate(&self, i: usize) -> BitLocation {
        let bpc = self.bits_per_codeword();
        let within = i % bpc;
        let symbol = within / self.bits_per_symbol;
        BitLocation {
            codeword: i / bpc,
            group: symbol / self.dim,
            position: symbol % self.dim,
            bit: within % self.bits_per_symbol,
        }
    }

    /// Interleaved position of the bit at `loc`.
    pub fn position_of(&self, loc: BitLocation) -> usize {
        loc.codeword * self.bits_per_codeword()
            + (loc.group * self.dim + loc.position) * self.bits_per_symbol
            + loc.bit
    }
}

/// Everything the transmitter produced for one frame.
#[derive(Debug, Clone)]
pub struct CodedFrame {
    pub layout: FrameLayout,
    pub info_bits: Vec<u8>,
    /// Encoder output `c`, including the tail.
    pub coded_bits: Vec<u8>,
    /// Interleaved bits followed by zero filler.
    pub interleaved_bits: Vec<u8>,
    /// Symbol indices; `symbols[(k·D + n)·D + m]` is entry `m` of `x_n` in codeword `k`.
    pub symbol_indices: Vec<usize>,
    pub symbols: Vec<C64>,
    /// `index_map[k']` locates coded bit `c_k'`.
    pub index_map: Vec<BitLocation>,
}

impl CodedFrame {
    pub fn build(
        info_bits: &[u8],
        code: &ConvCode,
        interleaver: &Interleaver,
        constellation: &Constellation,
        dim: usize,
    ) -> Result<Self> {
        let layout = FrameLayout::new(info_bits.len(), dim, constellation.bits_per_symbol())?;
        let coded_bits = code.encode_terminated(info_bits);
        let mut interleaved_bits = interleaver.interleave(&coded_bits)?;
        interleaved_bits.resize(layout.padded_bits(), 0);

        let bps = constellation.bits_per_symbol();
        let symbol_indices: Vec<usize> = interleaved_bits
            .chunks(bps)
            .map(|c| constellation.index_of_bits(c))
            .collect();
        let symbols = symbol_indices.iter().map(|&i| constellation.point(i)).collect();
        let index_map = interleaver
            .inverse()
            .into_iter()
            .map(|pos| layout.locate(pos))
            .collect();
        Ok(Self {
            layout,
            info_bits: info_bits.to_vec(),
            coded_bits,
            interleaved_bits,
            symbol_indices,
            symbols,
            index_map,
        })
    }

    /// The `D` input vectors of codeword `k`.
    pub fn codeword_inputs(&self, k: usize) -> Vec<Vec<C64>> {
        let d = self.layout.dim;
        let base = k * d * d;
        (0..d)
            .map(|n| self.symbols[base + n * d..base + (n + 1) * d].to_vec())
            .collect()
    }
}
