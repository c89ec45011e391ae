use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::C64;

/// Supported symbol alphabets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Qpsk,
    #[serde(rename = "16qam")]
    Qam16,
}

impl Modulation {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "").as_str() {
            "qpsk" | "4qam" => Some(Self::Qpsk),
            "16qam" | "qam16" => Some(Self::Qam16),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Qpsk => "qpsk",
            Self::Qam16 => "16qam",
        }
    }

    pub fn constellation(self) -> Constellation {
        match self {
            Self::Qpsk => Constellation::qpsk(),
            Self::Qam16 => Constellation::qam16(),
        }
    }
}

/// Gray amplitude for two bits per real dimension: 00, 01, 11, 10 map to
/// −3, −1, +1, +3.
const GRAY_PAM4: [f64; 4] = [-3.0, -1.0, 3.0, 1.0];

/// Square Gray-labeled constellation with unit average energy.
///
/// Point index `i` has label bits `(i >> (k-1-j)) & 1` for `j = 0..k`, so
/// label bit 0 is the most significant. For 16-QAM the first two bits pick
/// the in-phase level and the last two the quadrature level, each through
/// the table 00→−3, 01→−1, 11→+1, 10→+3, all scaled by 1/√10.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<C64>,
    bits_per_symbol: usize,
}

impl Constellation {
    pub fn qam16() -> Self {
        let s = 1.0 / 10f64.sqrt();
        let points = (0..16)
            .map(|i| C64::new(GRAY_PAM4[i >> 2] * s, GRAY_PAM4[i & 3] * s))
            .collect();
        Self {
            points,
            bits_per_symbol: 4,
        }
    }

    pub fn qpsk() -> Self {
        let s = 1.0 / 2f64.sqrt();
        let lvl = |b: usize| if b == 0 { -s } else { s };
        let points = (0..4).map(|i| C64::new(lvl(i >> 1), lvl(i & 1))).collect();
        Self {
            points,
            bits_per_symbol: 2,
        }
    }

    /// Arbitrary alphabet; `points.len()` must equal `2^bits_per_symbol`.
    pub fn from_points(points: Vec<C64>, bits_per_symbol: usize) -> Result<Self> {
        if points.len() != 1 << bits_per_symbol {
            return arg("constellation size must be a power of two matching the label width");
        }
        Ok(Self {
            points,
            bits_per_symbol,
        })
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn point(&self, index: usize) -> C64 {
        self.points[index]
    }

    /// Index of the point labeled by `bits` (most significant first).
    pub fn index_of_bits(&self, bits: &[u8]) -> usize {
        debug_assert_eq!(bits.len(), self.bits_per_symbol);
        bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as usize)
    }

    pub fn map(&self, bits: &[u8]) -> C64 {
        self.points[self.index_of_bits(bits)]
    }

    /// Label bit `j` of point `index`.
    pub fn bit_label(&self, index: usize, j: usize) -> u8 {
        ((index >> (self.bits_per_symbol - 1 - j)) & 1) as u8
    }

    /// Indices of the points whose label has value `b` in position `j`.
    pub fn subset(&self, j: usize, b: u8) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.bit_label(i, j) == b).collect()
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    /// Scaled copy, used to check homogeneity of distance quantities.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p * c).collect(),
            bits_per_symbol: self.bits_per_symbol,
        }
    }

    /// Nearest point by Euclidean distance.
    pub fn slice(&self, y: C64) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }
}

/// Closed-form bit error rate of Gray 16-QAM on AWGN at `Es/N0 = snr` (linear).
pub fn qam16_awgn_ber(snr: f64) -> f64 {
    let q = |x: f64| 0.5 * statrs::function::erf::erfc(x / 2f64.sqrt());
    let a = (snr / 5.0).sqrt();
    (3.0 * q(a) + 2.0 * q(3.0 * a) - q(5.0 * a)) / 4.0
}
