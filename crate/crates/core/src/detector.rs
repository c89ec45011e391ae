//! Maximum-likelihood bit metrics for perfect-coded beamforming.
//!
//! Each entry of `Λ Z` depends on exactly one input vector, so the `D × D`
//! observation splits into `D` independent groups
//! `y_v = Ω_v Λ G x_v + ñ_v`. With `Λ G = Q R` and `Ω_v` unitary, the group
//! distance becomes `‖Qᴴ Ω_vᴴ y_v − R x‖²`, which a tree search over the
//! upper-triangular `R` evaluates level by level.
//!
//! The codeword metric for bit `(m, n, j)` is the group metric of group `n`
//! plus the unconstrained minima of the other groups. Those floors are the
//! same for both hypotheses of a bit, so the Viterbi decoder only needs the
//! group metrics; [`BitMetricSet::codeword_metric`] restores the full value.

use nalgebra::DVector;

use crate::error::{arg, Result};
use crate::fec::Constellation;
use crate::pstbc::PerfectCodeParams;
use crate::{CMatrix, C64};

/// Relative threshold below which the weakest stream counts as lost.
pub const DEGENERATE_RATIO: f64 = 1e-12;

/// Observation of one group together with its effective matrix `Ω_v Λ G`.
#[derive(Debug, Clone)]
pub struct GroupObservation {
    pub y: Vec<C64>,
    pub effective: CMatrix,
}

/// Splits `Y` into its `D` groups: row `u` of group `v` is `Y[u, (u + v) mod D]`.
pub fn group_decompose(
    y: &CMatrix,
    params: &PerfectCodeParams,
    lambda_d: &[f64],
) -> Result<Vec<GroupObservation>> {
    let d = params.dim();
    if y.shape() != (d, d) || lambda_d.len() != d {
        return arg(format!(
            "observation is {:?} with {} gains, expected {d}x{d} with {d}",
            y.shape(),
            lambda_d.len()
        ));
    }
    let lg = scaled_generator(params, lambda_d);
    (0..d)
        .map(|v| {
            let obs = (0..d).map(|u| y[(u, params.column_of(v, u))]).collect();
            let omega = params.omega_matrix(v)?;
            Ok(GroupObservation {
                y: obs,
                effective: omega * &lg,
            })
        })
        .collect()
}

/// `Λ G`.
pub fn scaled_generator(params: &PerfectCodeParams, lambda_d: &[f64]) -> CMatrix {
    let mut lg = params.generator().clone();
    for (r, &l) in lambda_d.iter().enumerate() {
        lg.row_mut(r).scale_mut(l);
    }
    lg
}

/// `Λ G = Q R` with a real positive diagonal on `R`.
#[derive(Debug, Clone)]
pub struct QrReduction {
    pub q: CMatrix,
    pub r: CMatrix,
    /// Set when `λ_D` is negligible relative to `λ_1`.
    pub degenerate: bool,
}

pub fn qr_reduce(params: &PerfectCodeParams, lambda_d: &[f64]) -> Result<QrReduction> {
    if lambda_d.len() != params.dim() {
        return arg("need one gain per stream");
    }
    if lambda_d.iter().any(|&l| !(l >= 0.0)) {
        return arg("stream gains must be nonnegative");
    }
    let lg = scaled_generator(params, lambda_d);
    let qr = lg.qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for k in 0..r.nrows() {
        let dkk = r[(k, k)];
        if dkk.norm() > 0.0 {
            let rot = C64::from_polar(1.0, -dkk.arg());
            r.row_mut(k).iter_mut().for_each(|z| *z *= rot);
            q.column_mut(k).iter_mut().for_each(|z| *z *= rot.conj());
            r[(k, k)] = C64::new(r[(k, k)].re, 0.0);
        }
    }
    let lmax = lambda_d.iter().copied().fold(0.0, f64::max);
    let lmin = lambda_d.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(QrReduction {
        q,
        r,
        degenerate: !(lmin > DEGENERATE_RATIO * lmax),
    })
}

/// How the per-group minimizations are carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Full enumeration of `χ^D` over the triangular factor.
    Exhaustive,
    /// Depth-first Schnorr–Euchner search, one constrained search per
    /// counter-hypothesis bit. Exact: nothing below the best metric is pruned.
    Sphere,
    /// Enumeration of `‖y − Ω_v Λ G x‖²` without the QR reduction.
    Direct,
    /// Exhaustive up to `D = 3`, sphere search beyond.
    Auto,
}

/// Group-level metrics: `metrics[v][m][j][b]` for group `v`, position `m`,
/// label bit `j` and hypothesis `b`, plus each group's unconstrained minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct BitMetricSet {
    pub dim: usize,
    pub bits_per_symbol: usize,
    pub metrics: Vec<Vec<Vec<[f64; 2]>>>,
    pub floors: Vec<f64>,
}

impl BitMetricSet {
    pub fn group_metric(&self, group: usize, position: usize, bit: usize) -> [f64; 2] {
        self.metrics[group][position][bit]
    }

    /// Full-codeword metric of the bit: minimum of `‖Y − Λ M{X}‖²` over every
    /// `X` whose symbol `(m, n)` carries `b` in label position `j`.
    pub fn codeword_metric(&self, group: usize, position: usize, bit: usize) -> [f64; 2] {
        let rest: f64 = self
            .floors
            .iter()
            .enumerate()
            .filter(|(v, _)| *v != group)
            .map(|(_, f)| f)
            .sum();
        let g = self.metrics[group][position][bit];
        [g[0] + rest, g[1] + rest]
    }

    /// Metric pairs in the codeword's bit order (group, position, label bit).
    pub fn ordered_pairs(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.metrics.iter().flatten().flatten().copied()
    }

    /// Hard decision per bit.
    pub fn hard_bits(&self) -> Vec<u8> {
        self.ordered_pairs().map(|m| (m[1] < m[0]) as u8).collect()
    }
}

/// Per-bit minima accumulated over candidate vectors.
struct Accumulator {
    floor: f64,
    mins: Vec<Vec<[f64; 2]>>,
}

impl Accumulator {
    fn new(d: usize, bps: usize) -> Self {
        Self {
            floor: f64::INFINITY,
            mins: vec![vec![[f64::INFINITY; 2]; bps]; d],
        }
    }

    #[inline]
    fn update(&mut self, dist: f64, idx: &[usize], c: &Constellation) {
        if dist < self.floor {
            self.floor = dist;
        }
        for (m, &s) in idx.iter().enumerate() {
            for (j, slot) in self.mins[m].iter_mut().enumerate() {
                let b = c.bit_label(s, j) as usize;
                if dist < slot[b] {
                    slot[b] = dist;
                }
            }
        }
    }
}

/// Residual of row `level` given the symbols already fixed below it.
#[inline]
fn row_residual(r: &CMatrix, rv: &[C64], x: &[C64], level: usize, d: usize) -> C64 {
    let mut e = rv[level];
    for k in level + 1..d {
        e -= r[(level, k)] * x[k];
    }
    e
}

#[allow(clippy::too_many_arguments)]
fn exhaustive_tree(
    level: usize,
    partial: f64,
    rv: &[C64],
    r: &CMatrix,
    c: &Constellation,
    idx: &mut [usize],
    x: &mut [C64],
    acc: &mut Accumulator,
) {
    let d = rv.len();
    let e = row_residual(r, rv, x, level, d);
    let rll = r[(level, level)];
    for (s, &p) in c.points().iter().enumerate() {
        let dist = partial + (e - rll * p).norm_sqr();
        idx[level] = s;
        x[level] = p;
        if level == 0 {
            acc.update(dist, idx, c);
        } else {
            exhaustive_tree(level - 1, dist, rv, r, c, idx, x, acc);
        }
    }
}

/// Schnorr–Euchner depth-first minimum of `‖rv − R x‖²`, optionally with the
/// symbol at `constraint.0` restricted to the allowed set `constraint.1`.
/// Starts from `best` (an upper bound attained by some admissible vector, or
/// infinity) and returns the minimum with its symbol indices.
struct SphereSearch<'a> {
    rv: &'a [C64],
    r: &'a CMatrix,
    c: &'a Constellation,
    constraint: Option<(usize, &'a [bool])>,
    best: f64,
    best_idx: Vec<usize>,
    idx: Vec<usize>,
    x: Vec<C64>,
}

impl<'a> SphereSearch<'a> {
    fn run(
        rv: &'a [C64],
        r: &'a CMatrix,
        c: &'a Constellation,
        constraint: Option<(usize, &'a [bool])>,
        best: f64,
    ) -> (f64, Vec<usize>) {
        let d = rv.len();
        let mut s = Self {
            rv,
            r,
            c,
            constraint,
            best,
            best_idx: Vec::new(),
            idx: vec![0; d],
            x: vec![C64::new(0.0, 0.0); d],
        };
        s.descend(d - 1, 0.0);
        (s.best, s.best_idx)
    }

    fn descend(&mut self, level: usize, partial: f64) {
        let d = self.rv.len();
        let e = row_residual(self.r, self.rv, &self.x, level, d);
        let rll = self.r[(level, level)];
        let mut order: Vec<(f64, usize)> = self
            .c
            .points()
            .iter()
            .enumerate()
            .filter(|(s, _)| match self.constraint {
                Some((m, allowed)) if m == level => allowed[*s],
                _ => true,
            })
            .map(|(s, &p)| ((e - rll * p).norm_sqr(), s))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (inc, s) in order {
            let dist = partial + inc;
            if dist >= self.best {
                break;
            }
            self.idx[level] = s;
            self.x[level] = self.c.point(s);
            if level == 0 {
                self.best = dist;
                self.best_idx = self.idx.clone();
            } else {
                self.descend(level - 1, dist);
            }
        }
    }
}

fn distance(rv: &[C64], r: &CMatrix, c: &Constellation, idx: &[usize]) -> f64 {
    let d = rv.len();
    (0..d)
        .map(|row| {
            let mut e = rv[row];
            for k in row..d {
                e -= r[(row, k)] * c.point(idx[k]);
            }
            e.norm_sqr()
        })
        .sum()
}

fn sphere_group(rv: &[C64], r: &CMatrix, c: &Constellation) -> Accumulator {
    let d = rv.len();
    let bps = c.bits_per_symbol();
    let (floor, ml) = SphereSearch::run(rv, r, c, None, f64::INFINITY);
    let mut acc = Accumulator::new(d, bps);
    acc.floor = floor;
    let masks: Vec<[Vec<bool>; 2]> = (0..bps)
        .map(|j| {
            let mask = |b: u8| (0..c.len()).map(|s| c.bit_label(s, j) == b).collect();
            [mask(0), mask(1)]
        })
        .collect();
    for m in 0..d {
        for j in 0..bps {
            let own = c.bit_label(ml[m], j) as usize;
            let other = 1 - own;
            // Swapping only symbol m gives an admissible starting radius.
            let mut start = f64::INFINITY;
            let mut cand = ml.clone();
            for s in (0..c.len()).filter(|&s| masks[j][other][s]) {
                cand[m] = s;
                start = start.min(distance(rv, r, c, &cand));
            }
            let (best, _) =
                SphereSearch::run(rv, r, c, Some((m, &masks[j][other])), start * (1.0 + 1e-12) + 1e-300);
            acc.mins[m][j][own] = floor;
            acc.mins[m][j][other] = best.min(start);
        }
    }
    acc
}

fn direct_group(y: &[C64], a: &CMatrix, c: &Constellation) -> Accumulator {
    let d = y.len();
    let mut acc = Accumulator::new(d, c.bits_per_symbol());
    let total = c.len().pow(d as u32);
    let mut idx = vec![0usize; d];
    let yv = DVector::from_column_slice(y);
    for n in 0..total {
        let mut t = n;
        for slot in idx.iter_mut() {
            *slot = t % c.len();
            t /= c.len();
        }
        let x = DVector::from_iterator(d, idx.iter().map(|&s| c.point(s)));
        let dist = (&yv - a * x).norm_squared();
        acc.update(dist, &idx, c);
    }
    acc
}

/// Per-channel detector state: the QR factors and the rotations `(Ω_v Q)ᴴ`.
#[derive(Debug, Clone)]
pub struct Detector {
    params: PerfectCodeParams,
    lambda_d: Vec<f64>,
    constellation: Constellation,
    qr: QrReduction,
    rotations: Vec<CMatrix>,
    strategy: SearchStrategy,
}

impl Detector {
    pub fn new(
        params: &PerfectCodeParams,
        lambda_d: &[f64],
        constellation: &Constellation,
        strategy: SearchStrategy,
    ) -> Result<Self> {
        let qr = qr_reduce(params, lambda_d)?;
        let rotations = (0..params.dim())
            .map(|v| Ok((params.omega_matrix(v)? * &qr.q).adjoint()))
            .collect::<Result<Vec<_>>>()?;
        let strategy = match (strategy, qr.degenerate) {
            (_, true) => SearchStrategy::Direct,
            (SearchStrategy::Auto, _) if params.dim() <= 3 => SearchStrategy::Exhaustive,
            (SearchStrategy::Auto, _) => SearchStrategy::Sphere,
            (s, _) => s,
        };
        Ok(Self {
            params: params.clone(),
            lambda_d: lambda_d.to_vec(),
            constellation: constellation.clone(),
            qr,
            rotations,
            strategy,
        })
    }

    pub fn strategy(&self) -> SearchStrategy {
        self.strategy
    }

    pub fn qr(&self) -> &QrReduction {
        &self.qr
    }

    /// Rotated observation `Qᴴ Ω_vᴴ y_v`.
    pub fn rotate(&self, group: usize, y: &[C64]) -> Vec<C64> {
        (&self.rotations[group] * DVector::from_column_slice(y))
            .iter()
            .copied()
            .collect()
    }

    /// Metrics for every bit of the codeword observed as `Y`.
    pub fn metrics(&self, y: &CMatrix) -> Result<BitMetricSet> {
        let groups = group_decompose(y, &self.params, &self.lambda_d)?;
        Ok(self.metrics_from_groups(&groups))
    }

    pub fn metrics_from_groups(&self, groups: &[GroupObservation]) -> BitMetricSet {
        let d = self.params.dim();
        let c = &self.constellation;
        let mut metrics = Vec::with_capacity(d);
        let mut floors = Vec::with_capacity(d);
        for (v, g) in groups.iter().enumerate() {
            let acc = match self.strategy {
                SearchStrategy::Direct => direct_group(&g.y, &g.effective, c),
                SearchStrategy::Sphere => sphere_group(&self.rotate(v, &g.y), &self.qr.r, c),
                _ => {
                    let rv = self.rotate(v, &g.y);
                    let mut acc = Accumulator::new(d, c.bits_per_symbol());
                    let mut idx = vec![0; d];
                    let mut x = vec![C64::new(0.0, 0.0); d];
                    exhaustive_tree(d - 1, 0.0, &rv, &self.qr.r, c, &mut idx, &mut x, &mut acc);
                    acc
                }
            };
            floors.push(acc.floor);
            metrics.push(acc.mins);
        }
        BitMetricSet {
            dim: d,
            bits_per_symbol: c.bits_per_symbol(),
            metrics,
            floors,
        }
    }
}

/// Bit metrics of one observation with the default search.
pub fn bit_metrics(
    groups: &[GroupObservation],
    params: &PerfectCodeParams,
    lambda_d: &[f64],
    constellation: &Constellation,
) -> Result<BitMetricSet> {
    let det = Detector::new(params, lambda_d, constellation, SearchStrategy::Auto)?;
    Ok(det.metrics_from_groups(groups))
}

/// Metrics for a single-stream link `y = h x + n` (used by calibration).
pub fn scalar_metrics(y: C64, h: C64, constellation: &Constellation) -> Vec<[f64; 2]> {
    let a = CMatrix::from_element(1, 1, h);
    direct_group(&[y], &a, constellation).mins.remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fec::Constellation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_case(
        d: usize,
        c: &Constellation,
        noise: f64,
        rng: &mut ChaCha8Rng,
    ) -> (PerfectCodeParams, Vec<f64>, Vec<Vec<usize>>, CMatrix) {
        let p = PerfectCodeParams::build(d).unwrap();
        let mut lambda: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..3.0)).collect();
        lambda.sort_by(|a, b| b.total_cmp(a));
        let idx: Vec<Vec<usize>> = (0..d)
            .map(|_| (0..d).map(|_| rng.random_range(0..c.len())).collect())
            .collect();
        let inputs: Vec<Vec<C64>> = idx.iter().map(|v| v.iter().map(|&s| c.point(s)).collect()).collect();
        let z = p.encode(&inputs).unwrap().z;
        let mut y = z.clone();
        for r in 0..d {
            y.row_mut(r).scale_mut(lambda[r]);
        }
        for e in y.iter_mut() {
            *e += crate::complex_gaussian(rng, noise);
        }
        (p, lambda, idx, y)
    }

    #[test]
    fn groups_match_encoder_noiselessly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = Constellation::qam16();
        for d in crate::pstbc::SUPPORTED_DIMS {
            let (p, lambda, idx, y) = random_case(d, &c, 0.0, &mut rng);
            let groups = group_decompose(&y, &p, &lambda).unwrap();
            for (v, g) in groups.iter().enumerate() {
                let x = DVector::from_iterator(d, idx[v].iter().map(|&s| c.point(s)));
                let pred = &g.effective * x;
                for u in 0..d {
                    assert!((pred[u] - g.y[u]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn identity_observation_splits_by_diagonals() {
        let p = PerfectCodeParams::build(2).unwrap();
        let y = CMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0), C64::new(4.0, 0.0)]);
        let groups = group_decompose(&y, &p, &[1.0, 1.0]).unwrap();
        assert_eq!(groups[0].y, vec![C64::new(1.0, 0.0), C64::new(4.0, 0.0)]);
        assert_eq!(groups[1].y, vec![C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        let expected = p.omega_matrix(1).unwrap() * p.generator();
        assert!((&groups[1].effective - expected).norm() < 1e-15);
        assert!(group_decompose(&CMatrix::zeros(3, 3), &p, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn energy_follows_the_active_vector() {
        let p = PerfectCodeParams::build(3).unwrap();
        let c = Constellation::qam16();
        for active in 0..3 {
            let mut inputs = vec![vec![C64::new(0.0, 0.0); 3]; 3];
            inputs[active] = vec![c.point(3), c.point(9), c.point(14)];
            let z = p.encode(&inputs).unwrap().z;
            let groups = group_decompose(&z, &p, &[1.0, 1.0, 1.0]).unwrap();
            for (v, g) in groups.iter().enumerate() {
                let e: f64 = g.y.iter().map(|z| z.norm_sqr()).sum();
                if v == active {
                    assert!(e > 0.1);
                } else {
                    assert!(e < 1e-24);
                }
            }
        }
    }

    #[test]
    fn qr_shape_and_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in crate::pstbc::SUPPORTED_DIMS {
            let p = PerfectCodeParams::build(d).unwrap();
            let lambda: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..2.0)).collect();
            let qr = qr_reduce(&p, &lambda).unwrap();
            assert!(!qr.degenerate);
            for r in 0..d {
                assert!(qr.r[(r, r)].re > 0.0 && qr.r[(r, r)].im == 0.0);
                for c in 0..r {
                    assert!(qr.r[(r, c)].norm() < 1e-14);
                }
            }
            let back = &qr.q * &qr.r;
            assert!((back - scaled_generator(&p, &lambda)).norm() < 1e-12);
            assert!((qr.q.adjoint() * &qr.q - CMatrix::identity(d, d)).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_gain_flagged_and_falls_back() {
        let p = PerfectCodeParams::build(2).unwrap();
        let qr = qr_reduce(&p, &[1.0, 0.0]).unwrap();
        assert!(qr.degenerate);
        let det = Detector::new(&p, &[1.0, 0.0], &Constellation::qpsk(), SearchStrategy::Auto).unwrap();
        assert_eq!(det.strategy(), SearchStrategy::Direct);
        let m = det.metrics(&CMatrix::zeros(2, 2)).unwrap();
        assert!(m.ordered_pairs().all(|p| p[0].is_finite() && p[1].is_finite()));
    }

    #[test]
    fn omega_rotation_preserves_norm() {
        let p = PerfectCodeParams::build(3).unwrap();
        for v in 0..3 {
            let w = p.omega_matrix(v).unwrap();
            assert!((w.adjoint() * &w - CMatrix::identity(3, 3)).norm() < 1e-15);
        }
    }

    #[test]
    fn noiseless_sent_bits_cost_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Constellation::qam16();
        for d in [2, 3, 4] {
            let (p, lambda, idx, y) = random_case(d, &c, 0.0, &mut rng);
            let det = Detector::new(&p, &lambda, &c, SearchStrategy::Auto).unwrap();
            let m = det.metrics(&y).unwrap();
            for v in 0..d {
                for pos in 0..d {
                    for j in 0..4 {
                        let b = c.bit_label(idx[v][pos], j) as usize;
                        assert!(m.group_metric(v, pos, j)[b] < 1e-20);
                        assert!(m.group_metric(v, pos, j)[1 - b] > 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn searches_agree_with_direct_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = Constellation::qam16();
        for d in [2, 3] {
            for _ in 0..15 {
                let (p, lambda, _, y) = random_case(d, &c, 0.3, &mut rng);
                let direct = Detector::new(&p, &lambda, &c, SearchStrategy::Direct).unwrap().metrics(&y).unwrap();
                for s in [SearchStrategy::Exhaustive, SearchStrategy::Sphere] {
                    let other = Detector::new(&p, &lambda, &c, s).unwrap().metrics(&y).unwrap();
                    for (a, b) in direct.ordered_pairs().zip(other.ordered_pairs()) {
                        assert!((a[0] - b[0]).abs() < 1e-10 && (a[1] - b[1]).abs() < 1e-10, "{s:?}: {a:?} vs {b:?}");
                    }
                    for (a, b) in direct.floors.iter().zip(&other.floors) {
                        assert!((a - b).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn metric_pair_minimum_is_group_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = Constellation::qam16();
        let (p, lambda, _, y) = random_case(2, &c, 0.5, &mut rng);
        let m = Detector::new(&p, &lambda, &c, SearchStrategy::Auto).unwrap().metrics(&y).unwrap();
        for v in 0..2 {
            for pos in 0..2 {
                for j in 0..4 {
                    let g = m.group_metric(v, pos, j);
                    assert!(g[0] >= 0.0 && g[1] >= 0.0);
                    assert!((g[0].min(g[1]) - m.floors[v]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn perturbing_a_group_only_moves_its_metrics() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c = Constellation::qam16();
        let (p, lambda, _, y) = random_case(3, &c, 0.2, &mut rng);
        let det = Detector::new(&p, &lambda, &c, SearchStrategy::Auto).unwrap();
        let base = det.metrics(&y).unwrap();
        let mut y2 = y.clone();
        // Group 1 lives at (u, (u + 1) mod 3).
        for u in 0..3 {
            y2[(u, (u + 1) % 3)] += C64::new(0.4, -0.3);
        }
        let moved = det.metrics(&y2).unwrap();
        for v in 0..3 {
            let same = base.metrics[v] == moved.metrics[v];
            assert_eq!(same, v != 1, "group {v}");
        }
    }

    #[test]
    fn scalar_metrics_split_by_nearest_point() {
        let c = Constellation::qam16();
        let y = c.point(6) + C64::new(0.05, -0.02);
        let m = scalar_metrics(y, C64::new(1.0, 0.0), &c);
        for j in 0..4 {
            let b = c.bit_label(6, j) as usize;
            assert!(m[j][b] < m[j][1 - b]);
        }
    }
}
