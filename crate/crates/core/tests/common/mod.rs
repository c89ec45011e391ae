#![allow(dead_code)]

use bicmb::detector::{Detector, SearchStrategy};
use bicmb::fec::Constellation;
use bicmb::pstbc::PerfectCodeParams;
use bicmb::{complex_gaussian, CMatrix, C64};
use rand::Rng;

/// Every codeword of a `D`-dimensional perfect code over `c`, built with the
/// encoder. Entry `i` holds the symbol indices (base `|c|` digits of `i`,
/// least significant first) and `Z`.
pub struct Codebook {
    pub dim: usize,
    pub indices: Vec<Vec<usize>>,
    pub words: Vec<CMatrix>,
}

impl Codebook {
    pub fn build(params: &PerfectCodeParams, c: &Constellation) -> Self {
        let d = params.dim();
        let total = c.len().pow((d * d) as u32);
        let mut indices = Vec::with_capacity(total);
        let mut words = Vec::with_capacity(total);
        for i in 0..total {
            let mut t = i;
            let idx: Vec<usize> = (0..d * d)
                .map(|_| {
                    let s = t % c.len();
                    t /= c.len();
                    s
                })
                .collect();
            let inputs: Vec<Vec<C64>> = idx
                .chunks(d)
                .map(|g| g.iter().map(|&s| c.point(s)).collect())
                .collect();
            words.push(params.encode(&inputs).unwrap().z);
            indices.push(idx);
        }
        Self { dim: d, indices, words }
    }

    /// Full-codeword bit metrics `min ‖Y − Λ Z‖²_F` for each symbol, bit and
    /// value, by enumeration. Indexed `[symbol][bit][value]`.
    pub fn brute_force(&self, y: &CMatrix, lambda: &[f64], c: &Constellation) -> Vec<Vec<[f64; 2]>> {
        let d = self.dim;
        let bps = c.bits_per_symbol();
        let mut out = vec![vec![[f64::INFINITY; 2]; bps]; d * d];
        for (idx, z) in self.indices.iter().zip(&self.words) {
            let mut dist = 0.0;
            for r in 0..d {
                for col in 0..d {
                    dist += (y[(r, col)] - z[(r, col)] * lambda[r]).norm_sqr();
                }
            }
            for (s, &sym) in idx.iter().enumerate() {
                for (j, slot) in out[s].iter_mut().enumerate() {
                    let b = c.bit_label(sym, j) as usize;
                    if dist < slot[b] {
                        slot[b] = dist;
                    }
                }
            }
        }
        out
    }
}

/// A random noisy observation: sorted gains in `[0.2, 3)`, a random codeword
/// from `book`, and `CN(0, n0)` noise.
pub fn noisy_instance<R: Rng>(book: &Codebook, n0: f64, rng: &mut R) -> (Vec<f64>, CMatrix) {
    let d = book.dim;
    let mut lambda: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..3.0)).collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    let z = &book.words[rng.random_range(0..book.words.len())];
    let mut y = z.clone();
    for r in 0..d {
        y.row_mut(r).scale_mut(lambda[r]);
    }
    for e in y.iter_mut() {
        *e += complex_gaussian(rng, n0);
    }
    (lambda, y)
}

/// Largest gap between the detector's codeword metrics and the brute force.
pub fn detector_deviation(
    params: &PerfectCodeParams,
    book: &Codebook,
    c: &Constellation,
    lambda: &[f64],
    y: &CMatrix,
    strategy: SearchStrategy,
) -> f64 {
    let d = params.dim();
    let det = Detector::new(params, lambda, c, strategy).unwrap();
    let set = det.metrics(y).unwrap();
    let brute = book.brute_force(y, lambda, c);
    let mut worst: f64 = 0.0;
    for v in 0..d {
        for m in 0..d {
            for j in 0..c.bits_per_symbol() {
                let got = set.codeword_metric(v, m, j);
                let want = brute[v * d + m][j];
                for b in 0..2 {
                    worst = worst.max((got[b] - want[b]).abs());
                }
            }
        }
    }
    worst
}
