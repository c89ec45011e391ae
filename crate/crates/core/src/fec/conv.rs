use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Zero bits appended to flush the encoder back to state 0.
pub const TAIL_BITS: usize = 6;

const STATES: usize = 64;

/// The 64-state rate-1/2 feedforward code with octal generators (133, 171).
///
/// The shift register holds the six previous inputs with the most recent one
/// in bit 5. Generator MSBs tap the current input.
#[derive(Debug, Clone)]
pub struct ConvCode {
    generators: [u32; 2],
    /// `outputs[state][input]`, first output bit in bit 1, second in bit 0.
    outputs: [[u8; 2]; STATES],
}

impl Default for ConvCode {
    fn default() -> Self {
        Self::new()
    }
}

fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

impl ConvCode {
    pub const CONSTRAINT_LENGTH: usize = 7;

    pub fn new() -> Self {
        let generators = [0o133, 0o171];
        let mut outputs = [[0u8; 2]; STATES];
        for (s, row) in outputs.iter_mut().enumerate() {
            for b in 0..2u32 {
                let reg = (b << 6) | s as u32;
                row[b as usize] = (parity(reg & generators[0]) << 1) | parity(reg & generators[1]);
            }
        }
        Self { generators, outputs }
    }

    pub fn generators(&self) -> [u32; 2] {
        self.generators
    }

    /// Code rate `R_c`.
    pub fn rate(&self) -> f64 {
        0.5
    }

    fn next_state(state: usize, bit: u8) -> usize {
        ((bit as usize) << 5) | (state >> 1)
    }

    /// Encodes from the all-zero state without appending a tail.
    pub fn encode(&self, bits: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 * bits.len());
        let mut state = 0usize;
        for &b in bits {
            let o = self.outputs[state][(b & 1) as usize];
            out.push(o >> 1);
            out.push(o & 1);
            state = Self::next_state(state, b & 1);
        }
        out
    }

    /// Encodes `info` followed by [`TAIL_BITS`] zeros.
    pub fn encode_terminated(&self, info: &[u8]) -> Vec<u8> {
        let mut bits = info.to_vec();
        bits.extend(std::iter::repeat_n(0, TAIL_BITS));
        self.encode(&bits)
    }

    /// Minimum-metric path through the terminated trellis.
    ///
    /// `metrics[k][b]` is the cost of coded bit `k` taking value `b`; the
    /// length must be even and cover the tail. Returns the info bits without
    /// the tail. On equal path metrics the predecessor with the lower state
    /// index survives.
    pub fn viterbi_decode(&self, metrics: &[[f64; 2]]) -> Vec<u8> {
        assert!(metrics.len().is_multiple_of(2), "metric count must be even");
        let steps = metrics.len() / 2;
        assert!(steps >= TAIL_BITS, "frame shorter than the tail");

        let mut pm = [f64::INFINITY; STATES];
        pm[0] = 0.0;
        let mut next = [0.0f64; STATES];
        let mut decisions = vec![0u64; steps];

        for t in 0..steps {
            let m0 = metrics[2 * t];
            let m1 = metrics[2 * t + 1];
            let branch = |o: u8| m0[(o >> 1) as usize] + m1[(o & 1) as usize];
            let mut dec = 0u64;
            for ns in 0..STATES {
                let b = ns >> 5;
                let p0 = (ns & 31) << 1;
                let p1 = p0 | 1;
                let c0 = pm[p0] + branch(self.outputs[p0][b]);
                let c1 = pm[p1] + branch(self.outputs[p1][b]);
                if c0 <= c1 || c1.is_nan() {
                    next[ns] = c0;
                } else {
                    next[ns] = c1;
                    dec |= 1 << ns;
                }
            }
            decisions[t] = dec;
            pm = next;
        }

        let mut bits = vec![0u8; steps];
        let mut state = 0usize;
        for t in (0..steps).rev() {
            bits[t] = (state >> 5) as u8;
            let x = ((decisions[t] >> state) & 1) as usize;
            state = ((state & 31) << 1) | x;
        }
        bits.truncate(steps - TAIL_BITS);
        bits
    }

    /// Free distance by a shortest-path search over the trellis: leave state 0
    /// with a 1 and return to state 0 at minimum output weight.
    pub fn free_distance(&self) -> u32 {
        let mut dist = [u32::MAX; STATES];
        let mut heap = BinaryHeap::new();
        let first = self.outputs[0][1].count_ones();
        let s1 = Self::next_state(0, 1);
        dist[s1] = first;
        heap.push(Reverse((first, s1)));
        let mut best = u32::MAX;
        while let Some(Reverse((d, s))) = heap.pop() {
            if d > dist[s] || d >= best {
                continue;
            }
            for b in 0..2u8 {
                let ns = Self::next_state(s, b);
                let nd = d + self.outputs[s][b as usize].count_ones();
                if ns == 0 {
                    best = best.min(nd);
                } else if nd < dist[ns] {
                    dist[ns] = nd;
                    heap.push(Reverse((nd, ns)));
                }
            }
        }
        best
    }
}
