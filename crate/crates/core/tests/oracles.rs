//! Cross-checks against independent implementations.

mod common;

use bicmb::analysis::{pep_bound, welch_satterthwaite, zeta_min};
use bicmb::beamforming::{svd_beamformers, transmit_full, NoiseModel};
use bicmb::channel::{draw_channel, gen_subchannel, ArrayGeometry, SubchannelSpec};
use bicmb::detector::SearchStrategy;
use bicmb::fec::{qam16_awgn_ber, Constellation, Modulation};
use bicmb::pstbc::{PerfectCodeParams, PstbcCodeword};
use bicmb::sim::{awgn_calibration, SystemConfig};
use bicmb::{CMatrix, C64};
use common::{detector_deviation, noisy_instance, Codebook};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn detector_matches_enumeration_qpsk_d2() {
    let c = Constellation::qpsk();
    let p = PerfectCodeParams::build(2).unwrap();
    let book = Codebook::build(&p, &c);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..50 {
        let (lambda, y) = noisy_instance(&book, 0.05 + 0.02 * i as f64, &mut rng);
        for s in [SearchStrategy::Exhaustive, SearchStrategy::Sphere, SearchStrategy::Direct] {
            let dev = detector_deviation(&p, &book, &c, &lambda, &y, s);
            assert!(dev < 1e-10, "{s:?} instance {i}: {dev:e}");
        }
    }
}

#[test]
fn detector_matches_enumeration_qpsk_d3() {
    let c = Constellation::qpsk();
    let p = PerfectCodeParams::build(3).unwrap();
    let book = Codebook::build(&p, &c);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2 {
        let (lambda, y) = noisy_instance(&book, 0.3, &mut rng);
        for s in [SearchStrategy::Exhaustive, SearchStrategy::Sphere] {
            let dev = detector_deviation(&p, &book, &c, &lambda, &y, s);
            assert!(dev < 1e-10, "{s:?}: {dev:e}");
        }
    }
}

#[test]
fn detector_matches_enumeration_16qam_d2_sample() {
    let c = Constellation::qam16();
    let p = PerfectCodeParams::build(2).unwrap();
    let book = Codebook::build(&p, &c);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5 {
        let (lambda, y) = noisy_instance(&book, 0.1, &mut rng);
        let dev = detector_deviation(&p, &book, &c, &lambda, &y, SearchStrategy::Sphere);
        assert!(dev < 1e-10, "{dev:e}");
    }
}

#[test]
fn pep_matches_independent_golden_values() {
    let text = include_str!("data/pep_golden.json");
    let cases: serde_json::Value = serde_json::from_str(text).unwrap();
    let p = PerfectCodeParams::build(2).unwrap();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    for case in cases.as_array().unwrap() {
        let modulation = Modulation::parse(case["modulation"].as_str().unwrap()).unwrap();
        let spectrum = zeta_min(&p, &modulation.constellation());
        assert!(spectrum.exact);
        let want_zeta = case["zeta_min"].as_f64().unwrap();
        assert!(rel(spectrum.zeta_min, want_zeta) < 1e-9, "{} vs {want_zeta}", spectrum.zeta_min);

        let beta = 10f64.powf(case["beta_db"].as_f64().unwrap() / 10.0);
        let paths: Vec<Vec<usize>> = serde_json::from_value(case["paths"].clone()).unwrap();
        let report = welch_satterthwaite(&vec![vec![beta; 2]; 2], &paths).unwrap();
        assert!(rel(report.kappa, case["kappa"].as_f64().unwrap()) < 1e-12);
        assert!(rel(report.theta_scale, case["theta"].as_f64().unwrap()) < 1e-12);

        let snr = 10f64.powf(case["snr_db"].as_f64().unwrap() / 10.0);
        let n_t = case["n_t"].as_u64().unwrap() as usize;
        let got = pep_bound(&report, spectrum.zeta_min, 2, n_t, snr).unwrap();
        let want = case["pep"].as_f64().unwrap();
        assert!(rel(got, want) < 1e-8, "{got:e} vs {want:e}");
    }
}

#[test]
fn subchannel_power_averages_to_array_size() {
    let rx = ArrayGeometry::new(16, 0.5).unwrap();
    let tx = ArrayGeometry::new(32, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for l in [1, 3] {
        let spec = SubchannelSpec::new(l, 1.0).unwrap();
        let n = 4000;
        let samples: Vec<f64> = (0..n)
            .map(|_| gen_subchannel(spec, rx, tx, &mut rng).matrix.norm_squared() / 512.0)
            .collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        // Normalized power is close to Gamma(L, 1/L): variance 1/L.
        let sigma = (1.0 / (l as f64 * n as f64)).sqrt();
        assert!((mean - 1.0).abs() < 4.0 * sigma, "L={l}: mean {mean}");
    }
}

#[test]
fn combined_noise_is_white_with_variance_n0() {
    let cfg = SystemConfig::uniform(2, 8, 4, -20.0, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let chan = draw_channel(&cfg, &mut rng, 0).unwrap();
    let bf = svd_beamformers(&chan, 2).unwrap();
    let zero = PstbcCodeword {
        z: CMatrix::zeros(2, 2),
        inputs: vec![],
    };
    let noise = NoiseModel::from_snr_db(3.0, 8).unwrap();
    let n = 20_000;
    let mut cov = [[C64::new(0.0, 0.0); 2]; 2];
    for _ in 0..n {
        let y = transmit_full(&chan, &bf, &zero, noise, &mut rng);
        for col in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    cov[a][b] += y[(a, col)] * y[(b, col)].conj();
                }
            }
        }
    }
    let count = (2 * n) as f64;
    for a in 0..2 {
        for b in 0..2 {
            let est = cov[a][b] / count;
            let want = if a == b { noise.n0 } else { 0.0 };
            assert!((est - want).norm() < 0.03 * noise.n0, "cov[{a}][{b}] = {est}");
        }
    }
}

#[test]
fn uncoded_calibration_matches_closed_form() {
    // Bisect for the SNR where the closed form gives 1e-3.
    let (mut lo, mut hi) = (5.0, 25.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if qam16_awgn_ber(10f64.powf(mid / 10.0)) > 1e-3 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let snr_db = 0.5 * (lo + hi);
    let (bits, errors) = awgn_calibration(snr_db, 1_500_000, 15).unwrap();
    let ber = errors as f64 / bits as f64;
    assert!((ber / 1e-3 - 1.0).abs() < 0.03, "BER {ber:e} at {snr_db:.3} dB");
}
