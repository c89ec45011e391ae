use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{arg, Result};

/// Random bit permutation. Output position `i` carries input bit `permutation[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    permutation: Vec<usize>,
    seed: u64,
}

impl Interleaver {
    /// Uniformly random permutation of `len` positions, fixed by `seed`.
    pub fn random(len: usize, seed: u64) -> Self {
        let mut permutation: Vec<usize> = (0..len).collect();
        permutation.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self { permutation, seed }
    }

    pub fn identity(len: usize) -> Self {
        Self {
            permutation: (0..len).collect(),
            seed: 0,
        }
    }

    pub fn from_permutation(permutation: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; permutation.len()];
        for &p in &permutation {
            if p >= seen.len() || std::mem::replace(&mut seen[p], true) {
                return arg("not a permutation");
            }
        }
        Ok(Self { permutation, seed: 0 })
    }

    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Output positions of each input bit.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len()];
        for (i, &p) in self.permutation.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return arg(format!("interleaver spans {} bits, got {n}", self.len()));
        }
        Ok(())
    }

    pub fn interleave<T: Copy>(&self, bits: &[T]) -> Result<Vec<T>> {
        self.check(bits.len())?;
        Ok(self.permutation.iter().map(|&p| bits[p]).collect())
    }

    pub fn deinterleave<T: Copy + Default>(&self, bits: &[T]) -> Result<Vec<T>> {
        self.check(bits.len())?;
        let mut out = vec![T::default(); bits.len()];
        for (i, &p) in self.permutation.iter().enumerate() {
            out[p] = bits[i];
        }
        Ok(out)
    }
}
