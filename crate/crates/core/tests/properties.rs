use bicmb::analysis::{diversity_gain, welch_satterthwaite};
use bicmb::beamforming::{svd_beamformers, transmit, transmit_full, NoiseModel};
use bicmb::channel::{array_response, draw_channel, sorted_svd, ArrayGeometry};
use bicmb::detector::{group_decompose, Detector, SearchStrategy};
use bicmb::fec::{Constellation, ConvCode, Modulation};
use bicmb::pstbc::{PerfectCodeParams, SUPPORTED_DIMS};
use bicmb::sim::SystemConfig;
use bicmb::{complex_gaussian, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn symbols(d: usize, c: &Constellation, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<Vec<C64>>) {
    let idx: Vec<usize> = (0..d * d).map(|_| rng.random_range(0..c.len())).collect();
    let x = idx.chunks(d).map(|g| g.iter().map(|&s| c.point(s)).collect()).collect();
    (idx, x)
}

fn small_config(d: usize, l: usize) -> SystemConfig {
    SystemConfig::uniform(d, 8, 4, -20.0, l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn steering_vectors_are_unit_norm(angle in 0.0..std::f64::consts::TAU, n in 1usize..200, spacing in 0.1..2.0f64) {
        let a = array_response(angle, ArrayGeometry::new(n, spacing).unwrap());
        prop_assert!((a.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frobenius_energy_three_ways(seed: u64, d in 2usize..4, l in 1usize..4) {
        let cfg = small_config(d, l);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = draw_channel(&cfg, &mut rng, seed).unwrap();
        let via_sigma: f64 = ch.sigma.iter().map(|s| s * s).sum();
        let beta = cfg.beta_linear();
        let via_blocks: f64 = ch.blocks.iter().enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, b)| (i, j, b)))
            .map(|(i, j, b)| beta[i][j] * b.matrix.norm_squared())
            .sum();
        prop_assert!((via_sigma - ch.theta).abs() < 1e-10 * ch.theta);
        prop_assert!((via_blocks - ch.theta).abs() < 1e-10 * ch.theta);
    }

    #[test]
    fn single_path_blocks_are_rank_one(seed: u64) {
        let cfg = small_config(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = draw_channel(&cfg, &mut rng, seed).unwrap();
        for row in &ch.blocks {
            for b in row {
                let (_, _, s) = sorted_svd(&b.matrix).unwrap();
                prop_assert!(s[0] > 1e-6);
                prop_assert!(s[1..].iter().all(|&x| x < 1e-9 * s[0]));
            }
        }
    }

    #[test]
    fn codeword_energy_and_cycle(seed: u64, di in 0usize..4) {
        let d = SUPPORTED_DIMS[di];
        let p = PerfectCodeParams::build(d).unwrap();
        prop_assert!(p.shift_cycle_error() < 1e-12);
        let c = Constellation::qam16();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, x) = symbols(d, &c, &mut rng);
        let cw = p.encode(&x).unwrap();
        let e = cw.input_energy();
        prop_assert!((cw.z.norm_squared() - e).abs() < 1e-10 * e);
    }

    #[test]
    fn each_vector_reaches_d_entries(seed: u64, di in 0usize..4, v in 0usize..6) {
        let d = SUPPORTED_DIMS[di];
        let v = v % d;
        let p = PerfectCodeParams::build(d).unwrap();
        let c = Constellation::qam16();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, x) = symbols(d, &c, &mut rng);
        let before = p.encode(&x).unwrap().z;
        let mut y = x.clone();
        for s in y[v].iter_mut() {
            *s += complex_gaussian(&mut rng, 1.0);
        }
        let after = p.encode(&y).unwrap().z;
        let mut changed = 0;
        for u in 0..d {
            for col in 0..d {
                let moved = (after[(u, col)] - before[(u, col)]).norm() > 1e-12;
                prop_assert_eq!(moved, p.group_of(u, col) == v);
                changed += usize::from(moved);
            }
        }
        prop_assert_eq!(changed, d);
    }

    #[test]
    fn reduced_and_full_links_agree(seed: u64, d in 2usize..4) {
        let cfg = small_config(d, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = draw_channel(&cfg, &mut rng, seed).unwrap();
        let bf = svd_beamformers(&ch, d).unwrap();
        let p = PerfectCodeParams::build(d).unwrap();
        let (_, x) = symbols(d, &Constellation::qam16(), &mut rng);
        let z = p.encode(&x).unwrap();
        let full = transmit_full(&ch, &bf, &z, NoiseModel::noiseless(), &mut rng);
        let reduced = transmit(&bf, &z, NoiseModel::noiseless(), &mut rng);
        prop_assert!((&full - &reduced).norm() < 1e-8 * reduced.norm());
    }

    #[test]
    fn sent_bits_cost_at_least_the_floor(seed: u64, n0 in 0.0..1.0f64) {
        let d = 2;
        let p = PerfectCodeParams::build(d).unwrap();
        let c = Constellation::qam16();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = vec![2.0, 0.7];
        let (idx, x) = symbols(d, &c, &mut rng);
        let mut y = p.encode(&x).unwrap().z;
        for r in 0..d {
            y.row_mut(r).scale_mut(lambda[r]);
        }
        if n0 > 0.5 {
            for e in y.iter_mut() {
                *e += complex_gaussian(&mut rng, n0 - 0.5);
            }
        }
        let det = Detector::new(&p, &lambda, &c, SearchStrategy::Auto).unwrap();
        let set = det.metrics(&y).unwrap();
        let floor: f64 = set.floors.iter().sum();
        for v in 0..d {
            for m in 0..d {
                for j in 0..4 {
                    let sent = c.bit_label(idx[v * d + m], j) as usize;
                    let got = set.codeword_metric(v, m, j)[sent];
                    prop_assert!(got >= floor - 1e-12);
                    if n0 <= 0.5 {
                        prop_assert!(got < 1e-20);
                    }
                }
            }
        }
    }

    #[test]
    fn perturbing_one_group_leaves_others(seed: u64, target in 0usize..3) {
        let d = 3;
        let p = PerfectCodeParams::build(d).unwrap();
        let c = Constellation::qpsk();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = vec![1.5, 1.0, 0.5];
        let (_, x) = symbols(d, &c, &mut rng);
        let mut y = p.encode(&x).unwrap().z;
        for e in y.iter_mut() {
            *e += complex_gaussian(&mut rng, 0.2);
        }
        let det = Detector::new(&p, &lambda, &c, SearchStrategy::Auto).unwrap();
        let a = det.metrics(&y).unwrap();
        for u in 0..d {
            y[(u, p.column_of(target, u))] += complex_gaussian(&mut rng, 1.0);
        }
        let b = det.metrics(&y).unwrap();
        let groups = group_decompose(&y, &p, &lambda).unwrap();
        prop_assert_eq!(groups.len(), d);
        for v in (0..d).filter(|&v| v != target) {
            prop_assert_eq!(a.floors[v], b.floors[v]);
            for m in 0..d {
                for j in 0..2 {
                    prop_assert_eq!(a.group_metric(v, m, j), b.group_metric(v, m, j));
                }
            }
        }
    }

    #[test]
    fn viterbi_returns_valid_terminated_words(seed: u64, len in 1usize..60) {
        let code = ConvCode::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let metrics: Vec<[f64; 2]> = (0..2 * (len + 6)).map(|_| [rng.random(), rng.random()]).collect();
        let info = code.viterbi_decode(&metrics);
        prop_assert_eq!(info.len(), len);
        prop_assert!(info.iter().all(|&b| b <= 1));
        prop_assert_eq!(code.encode_terminated(&info).len(), metrics.len());
    }

    #[test]
    fn diversity_ignores_array_size_dimension_and_global_scale(
        l in 1usize..8, beta_db in -40.0..0.0f64, n_t in 1usize..128, n_r in 1usize..64, scale_db in -20.0..20.0f64,
    ) {
        let base = SystemConfig::uniform(2, 32, 16, beta_db, l);
        let g = diversity_gain(&base).unwrap();
        let mut other = SystemConfig::uniform(2, n_t, n_r, beta_db + scale_db, l);
        other.master_seed = 99;
        prop_assert!((diversity_gain(&other).unwrap() - g).abs() < 1e-9 * g);
        let d3 = SystemConfig::uniform(3, n_t, n_r, beta_db, l);
        // Uniform grids always reach the full path count.
        prop_assert!((diversity_gain(&d3).unwrap() - (9 * l) as f64).abs() < 1e-9);
        prop_assert!((g - (4 * l) as f64).abs() < 1e-9);
    }

    #[test]
    fn kappa_times_theta_is_total_gain(grid in proptest::collection::vec((0.001..1.0f64, 1usize..9), 4)) {
        let betas = vec![vec![grid[0].0, grid[1].0], vec![grid[2].0, grid[3].0]];
        let paths = vec![vec![grid[0].1, grid[1].1], vec![grid[2].1, grid[3].1]];
        let r = welch_satterthwaite(&betas, &paths).unwrap();
        let total: f64 = betas.iter().flatten().sum();
        prop_assert!((r.kappa * r.theta_scale - total).abs() < 1e-12 * total);
        prop_assert!(r.kappa <= r.l_total as f64 + 1e-9);
    }

    #[test]
    fn config_text_round_trips(
        seed: u64, l in proptest::collection::vec(1usize..9, 4), b in proptest::collection::vec(-40.0..0.0f64, 4),
        qpsk: bool, start in -5.0..10.0f64, n in 1usize..12,
    ) {
        let cfg = SystemConfig {
            master_seed: seed,
            paths: vec![l[..2].to_vec(), l[2..].to_vec()],
            beta_db: vec![b[..2].to_vec(), b[2..].to_vec()],
            modulation: if qpsk { Modulation::Qpsk } else { Modulation::Qam16 },
            snr_grid_db: (0..n).map(|i| start + 1.5 * i as f64).collect(),
            ..SystemConfig::default()
        };
        let back = SystemConfig::from_text(&cfg.to_text()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.hash(), cfg.hash());
    }
}
